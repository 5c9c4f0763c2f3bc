#include "gtgd/dependency.hpp"

#include <algorithm>
#include <ostream>
#include <unordered_map>

namespace gtgd {

VarSet universal_vars(const Tgd& t)
{
    return vars_of(t.body);
}

VarSet existential_vars(const Tgd& t)
{
    VarSet body = vars_of(t.body);
    VarSet out;
    for (VarId v : vars_of(t.head))
        if (!contains(body, v))
            out.push_back(v);
    return out;
}

VarSet all_vars(const Rule& r)
{
    VarSet s = vars_of(r.body);
    collect_vars(r.head, s);
    return s;
}

bool is_full(const Tgd& t)
{
    return existential_vars(t).empty();
}

bool is_single_head(const Tgd& t)
{
    return t.head.size() == 1;
}

bool is_head_normal(const Tgd& t)
{
    return is_full(t) ? t.head.size() == 1 : true;
}

bool is_skolem_free(const Rule& r)
{
    return !has_function(r.body) && !r.head.has_function();
}

bool is_datalog(const Rule& r)
{
    return is_skolem_free(r);
}

std::size_t body_width(const Tgd& t)
{
    return vars_of(t.body).size();
}

std::size_t head_width(const Tgd& t)
{
    return vars_of(t.head).size();
}

std::vector<Tgd> head_normal_form(const Tgd& t)
{
    VarSet ex = existential_vars(t);
    std::vector<Tgd> out;
    if (ex.empty()) {
        for (const auto& a : t.head)
            out.push_back(Tgd{t.body, {a}});
        return out;
    }
    Tgd nonfull{t.body, {}};
    std::vector<Tgd> full;
    for (const auto& a : t.head) {
        if (intersects(vars_of(a), ex))
            nonfull.head.push_back(a);
        else
            full.push_back(Tgd{t.body, {a}});
    }
    out.push_back(std::move(nonfull));
    for (auto& f : full)
        out.push_back(std::move(f));
    return out;
}

std::vector<Tgd> head_normal_form(std::span<const Tgd> sigma)
{
    std::vector<Tgd> out;
    for (const auto& t : sigma)
        for (auto& h : head_normal_form(t))
            out.push_back(std::move(h));
    return out;
}

std::vector<std::size_t> find_guards(const Tgd& t)
{
    VarSet all = vars_of(t.body);
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < t.body.size(); ++i)
        if (vars_of(t.body[i]).size() == all.size())
            out.push_back(i);
    return out;
}

bool is_guarded(const Tgd& t)
{
    return !t.body.empty() && !find_guards(t).empty();
}

namespace {

bool skolem_terms_ok(const Term& t, const VarSet& all)
{
    if (!t.is_function())
        return true;
    for (const auto& a : t.args())
        if (a.is_function())
            return false;
    VarSet vs;
    collect_vars(t, vs);
    return vs == all;
}

} // namespace

std::vector<std::size_t> find_guards(const Rule& r)
{
    VarSet all = all_vars(r);
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < r.body.size(); ++i)
        if (!r.body[i].has_function() && vars_of(r.body[i]) == all)
            out.push_back(i);
    return out;
}

bool is_guarded_rule(const Rule& r)
{
    if (r.body.empty())
        return false;
    VarSet all = all_vars(r);
    if (find_guards(r).empty())
        return false;
    auto ok = [&](const Atom& a) {
        return std::all_of(a.args.begin(), a.args.end(), [&](const Term& t) { return skolem_terms_ok(t, all); });
    };
    return std::all_of(r.body.begin(), r.body.end(), ok) && ok(r.head);
}

namespace {

// Canonical variable renaming and atom order.  Atoms are placed one at a time;
// at each step the candidates are the unplaced atoms of the smallest relation
// whose rendering under the partial renaming is minimal.  Exact ties are
// explored, so the result is the same for every variant of the input.
class Canonicalizer {
public:
    Canonicalizer(std::vector<Atom> body, std::vector<Atom> head, const VarSet& existentials)
        : body_(std::move(body)), head_(std::move(head)), ex_(existentials)
    {
        auto prep = [](std::vector<Atom>& v) {
            std::sort(v.begin(), v.end());
            v.erase(std::unique(v.begin(), v.end()), v.end());
            std::stable_sort(v.begin(), v.end(), [](const Atom& a, const Atom& b) { return rel_less(a, b); });
        };
        prep(body_);
        prep(head_);
        used_body_.assign(body_.size(), false);
        used_head_.assign(head_.size(), false);
    }

    std::pair<std::vector<Atom>, std::vector<Atom>> run()
    {
        search();
        std::vector<Atom> b(best_.begin(), best_.begin() + static_cast<std::ptrdiff_t>(body_.size()));
        std::vector<Atom> h(best_.begin() + static_cast<std::ptrdiff_t>(body_.size()), best_.end());
        return {std::move(b), std::move(h)};
    }

private:
    static bool rel_less(const Atom& a, const Atom& b)
    {
        if (a.relation != b.relation)
            return a.relation.name() < b.relation.name();
        return a.args.size() < b.args.size();
    }
    static bool same_rel(const Atom& a, const Atom& b)
    {
        return a.relation == b.relation && a.args.size() == b.args.size();
    }

    struct Renaming {
        std::vector<std::pair<VarId, VarId>> map;
        VarId nx = 0;
        VarId ny = 0;
    };

    Term render(const Term& t, Renaming& r) const
    {
        if (t.is_variable()) {
            for (const auto& [from, to] : r.map)
                if (from == t.index())
                    return Term::variable(to);
            VarId to = contains(ex_, t.index()) ? kExistentialBase + r.ny++ : r.nx++;
            r.map.emplace_back(t.index(), to);
            return Term::variable(to);
        }
        if (!t.is_function())
            return t;
        std::vector<Term> args;
        for (const auto& a : t.args())
            args.push_back(render(a, r));
        return Term::function(t.symbol(), std::move(args));
    }

    Atom render(const Atom& a, Renaming& r) const
    {
        Atom out;
        out.relation = a.relation;
        for (const auto& t : a.args)
            out.args.push_back(render(t, r));
        return out;
    }

    void search()
    {
        std::size_t k = placed_.size();
        if (k == body_.size() + head_.size()) {
            if (!have_best_ || less(placed_, best_)) {
                best_ = placed_;
                have_best_ = true;
            }
            ++leaves_;
            return;
        }
        bool in_body = k < body_.size();
        auto& atoms = in_body ? body_ : head_;
        auto& used = in_body ? used_body_ : used_head_;

        std::size_t first = 0;
        while (used[first])
            ++first;
        std::vector<std::size_t> cands;
        std::vector<Atom> rendered;
        std::vector<Renaming> ren;
        for (std::size_t i = first; i < atoms.size() && same_rel(atoms[i], atoms[first]); ++i) {
            if (used[i])
                continue;
            Renaming r = renaming_;
            Atom a = render(atoms[i], r);
            if (!rendered.empty()) {
                int c = compare_canonical(a, rendered.front());
                if (c > 0)
                    continue;
                if (c < 0) {
                    cands.clear();
                    rendered.clear();
                    ren.clear();
                }
            }
            cands.push_back(i);
            rendered.push_back(std::move(a));
            ren.push_back(std::move(r));
        }

        std::size_t branches = leaves_ >= kLeafBudget ? 1 : cands.size();
        for (std::size_t j = 0; j < branches; ++j) {
            Renaming saved = renaming_;
            renaming_ = ren[j];
            used[cands[j]] = true;
            placed_.push_back(rendered[j]);
            search();
            placed_.pop_back();
            used[cands[j]] = false;
            renaming_ = std::move(saved);
        }
    }

    static bool less(const std::vector<Atom>& a, const std::vector<Atom>& b)
    {
        for (std::size_t i = 0; i < a.size(); ++i)
            if (int c = compare_canonical(a[i], b[i]))
                return c < 0;
        return false;
    }

    static constexpr std::size_t kLeafBudget = 4096;

    std::vector<Atom> body_, head_;
    const VarSet& ex_;
    std::vector<bool> used_body_, used_head_;
    std::vector<Atom> placed_;
    std::vector<Atom> best_;
    bool have_best_ = false;
    std::size_t leaves_ = 0;
    Renaming renaming_;
};

} // namespace

Tgd normalize(const Tgd& t)
{
    VarSet ex = existential_vars(t);
    auto [b, h] = Canonicalizer(t.body, t.head, ex).run();
    return Tgd{std::move(b), std::move(h)};
}

Rule normalize(const Rule& r)
{
    VarSet none;
    auto [b, h] = Canonicalizer(r.body, {r.head}, none).run();
    return Rule{std::move(b), std::move(h.front())};
}

std::string to_string(const Tgd& t)
{
    return to_string(std::span<const Atom>(t.body)) + " -> " + to_string(std::span<const Atom>(t.head)) + ".";
}

std::string to_string(const Rule& r)
{
    return to_string(std::span<const Atom>(r.body)) + " -> " + to_string(r.head) + ".";
}

std::ostream& operator<<(std::ostream& os, const Tgd& t)
{
    return os << to_string(t);
}

std::ostream& operator<<(std::ostream& os, const Rule& r)
{
    return os << to_string(r);
}

namespace {

bool atom_in(const Atom& a, std::span<const Atom> set)
{
    return std::find(set.begin(), set.end(), a) != set.end();
}

bool all_in(std::span<const Atom> sub, std::span<const Atom> super)
{
    return std::all_of(sub.begin(), sub.end(), [&](const Atom& a) { return atom_in(a, super); });
}

} // namespace

bool is_syntactic_tautology(const Tgd& t)
{
    return all_in(t.head, t.body);
}

bool is_syntactic_tautology(const Rule& r)
{
    return atom_in(r.head, r.body);
}

bool subsumes_approx(const Tgd& a, const Tgd& b)
{
    return all_in(a.body, b.body) && all_in(b.head, a.head);
}

bool subsumes_approx(const Rule& a, const Rule& b)
{
    return a.head == b.head && all_in(a.body, b.body);
}

std::vector<Rule> skolemize(std::span<const Tgd> sigma)
{
    std::vector<std::pair<std::string, Tgd>> sorted;
    for (const auto& t : sigma) {
        Tgd n = normalize(t);
        sorted.emplace_back(to_string(n), std::move(n));
    }
    std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    sorted.erase(std::unique(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) { return a.first == b.first; }),
                 sorted.end());

    std::vector<Rule> out;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        const Tgd& t = sorted[i].second;
        VarSet xs = universal_vars(t);
        std::vector<Term> xterms;
        for (VarId x : xs)
            xterms.push_back(Term::variable(x));
        Substitution sk;
        for (VarId y : existential_vars(t)) {
            Symbol f = Symbol::intern("sk_" + std::to_string(i) + "_" + var_name(y));
            sk.bind(y, Term::function(f, xterms));
        }
        for (const auto& a : t.head)
            out.push_back(Rule{t.body, sk.apply(a)});
    }
    return out;
}

Rule to_rule(const Tgd& t)
{
    GTGD_CHECK(t.head.size() == 1 && is_full(t), "only full single-head TGDs are rules");
    return Rule{t.body, t.head.front()};
}

Tgd to_tgd(const Rule& r)
{
    return Tgd{r.body, {r.head}};
}

Substitution VarRenamer::fresh_for(const VarSet& vars)
{
    Substitution s;
    for (VarId v : vars)
        s.bind(v, Term::variable(next_++));
    return s;
}

Tgd VarRenamer::rename(const Tgd& t)
{
    VarSet vs = vars_of(t.body);
    collect_vars(t.head, vs);
    Substitution s = fresh_for(vs);
    return Tgd{s.apply(t.body), s.apply(t.head)};
}

Rule VarRenamer::rename(const Rule& r)
{
    Substitution s = fresh_for(all_vars(r));
    return Rule{s.apply(r.body), s.apply(r.head)};
}

bool covers(const Atom& fact, std::span<const Term> terms, const std::set<Term>& constants)
{
    for (const auto& t : terms) {
        if (constants.count(t))
            continue;
        if (std::find(fact.args.begin(), fact.args.end(), t) == fact.args.end())
            return false;
    }
    return true;
}

std::set<Symbol> SignatureStats::body_relations() const
{
    std::set<Symbol> out;
    for (const auto& [r, n] : body_occurrences)
        out.insert(r);
    return out;
}

void collect_constants(const Atom& a, std::set<Term>& out)
{
    std::vector<const Term*> stack;
    for (const auto& t : a.args)
        stack.push_back(&t);
    while (!stack.empty()) {
        const Term* t = stack.back();
        stack.pop_back();
        if (t->is_constant())
            out.insert(*t);
        for (const auto& s : t->args())
            stack.push_back(&s);
    }
}

std::set<Term> constants_of(std::span<const Atom> atoms)
{
    std::set<Term> out;
    for (const auto& a : atoms)
        collect_constants(a, out);
    return out;
}

SignatureStats signature_stats(std::span<const Tgd> sigma)
{
    SignatureStats s;
    auto note = [&](const Atom& a) { s.arity.emplace(a.relation, a.args.size()); };
    for (const auto& t : sigma) {
        for (const auto& a : t.body) {
            note(a);
            ++s.body_occurrences[a.relation];
            collect_constants(a, s.constants);
        }
        for (const auto& a : t.head) {
            note(a);
            ++s.head_occurrences[a.relation];
            collect_constants(a, s.constants);
        }
        s.max_body_width = std::max(s.max_body_width, body_width(t));
        s.max_head_width = std::max(s.max_head_width, head_width(t));
        s.existential_count += existential_vars(t).size();
    }
    return s;
}

} // namespace gtgd
