#include "gtgd/parser.hpp"

#include <algorithm>
#include <cctype>
#include <optional>

namespace gtgd {

std::string to_string(const Diagnostic& d)
{
    return std::to_string(d.line) + ":" + std::to_string(d.col) + ": " + d.message;
}

namespace {

std::string join_messages(const std::vector<Diagnostic>& ds)
{
    std::string s;
    for (const auto& d : ds) {
        if (!s.empty())
            s += "\n";
        s += to_string(d);
    }
    return s;
}

} // namespace

ParseFailure::ParseFailure(std::vector<Diagnostic> ds) : std::runtime_error(join_messages(ds)), diagnostics(std::move(ds))
{
}

namespace {

enum class Tok { Ident, LParen, RParen, Comma, Dot, Arrow, End, Bad };

struct Token {
    Tok kind = Tok::End;
    std::string text;
    std::size_t line = 1;
    std::size_t col = 1;
};

class Lexer {
public:
    explicit Lexer(std::string_view s) : s_(s) {}

    Token next()
    {
        skip();
        Token t;
        t.line = line_;
        t.col = col_;
        if (pos_ >= s_.size())
            return t;
        char c = s_[pos_];
        if (std::isalnum(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t start = pos_;
            while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
                advance();
            t.kind = Tok::Ident;
            t.text = std::string(s_.substr(start, pos_ - start));
            return t;
        }
        if (c == '-' && pos_ + 1 < s_.size() && s_[pos_ + 1] == '>') {
            advance();
            advance();
            t.kind = Tok::Arrow;
            return t;
        }
        advance();
        t.text = std::string(1, c);
        switch (c) {
        case '(': t.kind = Tok::LParen; break;
        case ')': t.kind = Tok::RParen; break;
        case ',': t.kind = Tok::Comma; break;
        case '.': t.kind = Tok::Dot; break;
        default: t.kind = Tok::Bad; break;
        }
        return t;
    }

private:
    void advance()
    {
        if (s_[pos_] == '\n') {
            ++line_;
            col_ = 1;
        } else if ((static_cast<unsigned char>(s_[pos_]) & 0xC0) != 0x80) {
            ++col_;
        }
        ++pos_;
    }

    void skip()
    {
        while (pos_ < s_.size()) {
            char c = s_[pos_];
            if (c == '%') {
                while (pos_ < s_.size() && s_[pos_] != '\n')
                    advance();
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                advance();
            } else {
                break;
            }
        }
    }

    std::string_view s_;
    std::size_t pos_ = 0;
    std::size_t line_ = 1;
    std::size_t col_ = 1;
};

bool is_variable_name(const std::string& s)
{
    return std::isupper(static_cast<unsigned char>(s[0])) || s[0] == '_';
}

struct SyntaxError {
    Diagnostic d;
};

// Raw atom: argument names are kept until the statement is complete.
struct RawAtom {
    std::string relation;
    std::vector<std::string> args;
    std::size_t line = 0;
    std::size_t col = 0;
};

class Parser {
public:
    explicit Parser(std::string_view text) : lex_(text) { cur_ = lex_.next(); }

    bool at_end() const { return cur_.kind == Tok::End; }
    const Token& peek() const { return cur_; }

    [[noreturn]] void fail(const Token& t, const std::string& what)
    {
        std::string found = t.kind == Tok::End ? "end of input" : "'" + t.text + "'";
        if (t.kind == Tok::Arrow)
            found = "'->'";
        throw SyntaxError{{t.line, t.col, "syntax error: expected " + what + ", found " + found}};
    }

    Token expect(Tok k, const std::string& what)
    {
        if (cur_.kind != k)
            fail(cur_, what);
        Token t = cur_;
        cur_ = lex_.next();
        return t;
    }

    bool accept(Tok k)
    {
        if (cur_.kind != k)
            return false;
        cur_ = lex_.next();
        return true;
    }

    RawAtom atom()
    {
        Token name = expect(Tok::Ident, "relation name");
        if (is_variable_name(name.text))
            throw SyntaxError{{name.line, name.col, "syntax error: relation name '" + name.text +
                                                        "' must not start with an uppercase letter"}};
        RawAtom a{name.text, {}, name.line, name.col};
        if (accept(Tok::LParen)) {
            if (!accept(Tok::RParen)) {
                do
                    a.args.push_back(expect(Tok::Ident, "term").text);
                while (accept(Tok::Comma));
                expect(Tok::RParen, "',' or ')'");
            }
        }
        return a;
    }

    std::vector<RawAtom> conjunction()
    {
        std::vector<RawAtom> out{atom()};
        while (accept(Tok::Comma))
            out.push_back(atom());
        return out;
    }

    // Skips past the next dot after an error.
    void recover()
    {
        while (cur_.kind != Tok::End && cur_.kind != Tok::Dot)
            cur_ = lex_.next();
        accept(Tok::Dot);
    }

private:
    Lexer lex_;
    Token cur_;
};

class ArityTable {
public:
    explicit ArityTable(std::map<Symbol, std::size_t>& table) : table_(table) {}

    std::optional<Diagnostic> check(const RawAtom& a)
    {
        Symbol r = Symbol::intern(a.relation);
        auto [it, fresh] = table_.emplace(r, a.args.size());
        if (fresh || it->second == a.args.size())
            return std::nullopt;
        return Diagnostic{a.line, a.col,
                          "arity conflict: relation '" + a.relation + "' used with " + std::to_string(a.args.size()) +
                              " arguments, previously with " + std::to_string(it->second)};
    }

private:
    std::map<Symbol, std::size_t>& table_;
};

} // namespace

SourceProgram parse_program(std::string_view text, const ParseOptions& opts)
{
    SourceProgram out;
    std::vector<Diagnostic> errors;
    ArityTable arities(out.arity);
    Parser p(text);
    while (!p.at_end()) {
        Token start = p.peek();
        std::vector<RawAtom> body;
        std::vector<RawAtom> head;
        try {
            if (p.peek().kind == Tok::Arrow)
                throw SyntaxError{{start.line, start.col, "empty body: a dependency needs at least one body atom"}};
            body = p.conjunction();
            p.expect(Tok::Arrow, "',' or '->'");
            head = p.conjunction();
            p.expect(Tok::Dot, "',' or '.'");
        } catch (const SyntaxError& e) {
            errors.push_back(e.d);
            p.recover();
            continue;
        }

        bool bad = false;
        for (const auto* part : {&body, &head})
            for (const auto& a : *part)
                if (auto d = arities.check(a)) {
                    errors.push_back(*d);
                    bad = true;
                }
        if (bad)
            continue;

        // Body variables first, in order of appearance, then head-only ones.
        std::map<std::string, VarId> vars;
        std::vector<std::string> names;
        VarId next_universal = 0;
        VarId next_existential = kExistentialBase;
        auto convert = [&](const RawAtom& a, bool in_body) {
            Atom r(a.relation, {});
            for (const auto& s : a.args) {
                if (!is_variable_name(s)) {
                    r.args.push_back(Term::constant(s));
                    continue;
                }
                auto it = vars.find(s);
                if (it == vars.end()) {
                    VarId v = in_body ? next_universal++ : next_existential++;
                    it = vars.emplace(s, v).first;
                }
                r.args.push_back(Term::variable(it->second));
            }
            return r;
        };
        Tgd t;
        for (const auto& a : body)
            t.body.push_back(convert(a, true));
        for (const auto& a : head)
            t.head.push_back(convert(a, false));

        if (opts.require_guarded && !is_guarded(t)) {
            // Report what the best-covering body atom misses.
            VarSet all = universal_vars(t);
            VarSet best_missing = all;
            for (const auto& a : t.body) {
                VarSet have = vars_of(a);
                VarSet missing;
                std::set_difference(all.begin(), all.end(), have.begin(), have.end(), std::back_inserter(missing));
                if (missing.size() < best_missing.size())
                    best_missing = missing;
            }
            std::string uncovered;
            for (const auto& [name, v] : vars)
                if (contains(best_missing, v))
                    uncovered += (uncovered.empty() ? "" : ", ") + name;
            errors.push_back({start.line, start.col,
                              "unguarded dependency: no body atom contains all body variables; uncovered: " +
                                  uncovered});
            continue;
        }
        out.tgds.push_back(std::move(t));
        out.lines.push_back(start.line);
    }
    if (!errors.empty())
        throw ParseFailure(std::move(errors));
    return out;
}

Instance parse_instance(std::string_view text)
{
    Instance out;
    std::vector<Diagnostic> errors;
    std::map<Symbol, std::size_t> table;
    ArityTable arities(table);
    Parser p(text);
    while (!p.at_end()) {
        try {
            RawAtom a = p.atom();
            p.expect(Tok::Dot, "'.'");
            if (auto d = arities.check(a)) {
                errors.push_back(*d);
                continue;
            }
            Atom f(a.relation, {});
            bool ok = true;
            for (const auto& s : a.args) {
                if (is_variable_name(s)) {
                    errors.push_back({a.line, a.col, "variable '" + s + "' in fact; facts take constants only"});
                    ok = false;
                    break;
                }
                f.args.push_back(Term::constant(s));
            }
            if (ok)
                out.insert(std::move(f));
        } catch (const SyntaxError& e) {
            errors.push_back(e.d);
            p.recover();
        }
    }
    if (!errors.empty())
        throw ParseFailure(std::move(errors));
    return out;
}

Atom parse_fact(std::string_view text)
{
    std::string s(text);
    auto last = s.find_last_not_of(" \t\r\n");
    if (last == std::string::npos || s[last] != '.')
        s += ".";
    Instance one = parse_instance(s);
    if (one.size() != 1)
        throw ParseFailure({{1, 1, "expected exactly one fact"}});
    return *one.begin();
}

DatalogProgram to_program(std::span<const Tgd> tgds)
{
    DatalogProgram out;
    for (const auto& t : head_normal_form(tgds)) {
        if (!is_full(t))
            throw ParseFailure({{0, 0, "not a Datalog program: " + to_string(t) + " has existential variables"}});
        out.push_back(to_rule(t));
    }
    return out;
}

} // namespace gtgd
