#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace gtgd {

// Interned name.  The same table serves relations, constants and function
// symbols; the kind is carried by the term or atom that uses it.
class Symbol {
public:
    Symbol() = default;
    static Symbol intern(std::string_view name);

    std::uint32_t id() const { return id_; }
    const std::string& name() const;

    friend bool operator==(Symbol a, Symbol b) { return a.id_ == b.id_; }
    friend auto operator<=>(Symbol a, Symbol b) { return a.id_ <=> b.id_; }

private:
    friend class Term;
    explicit Symbol(std::uint32_t id) : id_(id) {}
    std::uint32_t id_ = 0;
};

using VarId = std::uint32_t;

// Normalized universal variables are 0..k-1, normalized existential
// variables start at kExistentialBase.  Anything at or above kScratchBase is a
// renamed-apart working variable.
inline constexpr VarId kExistentialBase = 1u << 20;
inline constexpr VarId kScratchBase = 1u << 21;

enum class TermKind : std::uint8_t { Constant, Variable, Null, Function };

class Term {
public:
    Term() = default;

    static Term constant(Symbol s) { return Term(TermKind::Constant, s.id(), {}); }
    static Term constant(std::string_view name) { return constant(Symbol::intern(name)); }
    static Term variable(VarId v) { return Term(TermKind::Variable, v, {}); }
    static Term null(std::uint32_t n) { return Term(TermKind::Null, n, {}); }
    static Term function(Symbol f, std::vector<Term> args)
    {
        return Term(TermKind::Function, f.id(), std::move(args));
    }

    TermKind kind() const { return kind_; }
    bool is_constant() const { return kind_ == TermKind::Constant; }
    bool is_variable() const { return kind_ == TermKind::Variable; }
    bool is_null() const { return kind_ == TermKind::Null; }
    bool is_function() const { return kind_ == TermKind::Function; }

    // Variable id or null id.
    std::uint32_t index() const { return value_; }
    // Constant or function symbol.
    Symbol symbol() const { return Symbol(value_); }
    std::span<const Term> args() const { return args_; }
    std::vector<Term>& mutable_args() { return args_; }

    bool contains_function() const { return kind_ == TermKind::Function; }
    bool contains_variable(VarId v) const;
    bool is_ground() const;

    std::size_t hash() const;

    friend bool operator==(const Term& a, const Term& b);
    friend std::strong_ordering operator<=>(const Term& a, const Term& b);

private:
    Term(TermKind k, std::uint32_t v, std::vector<Term> args) : kind_(k), value_(v), args_(std::move(args)) {}

    TermKind kind_ = TermKind::Constant;
    std::uint32_t value_ = 0;
    std::vector<Term> args_;
};

struct Atom {
    Symbol relation;
    std::vector<Term> args;

    Atom() = default;
    Atom(Symbol r, std::vector<Term> a) : relation(r), args(std::move(a)) {}
    Atom(std::string_view r, std::vector<Term> a) : relation(Symbol::intern(r)), args(std::move(a)) {}

    std::size_t arity() const { return args.size(); }
    bool has_function() const;
    bool is_ground() const;
    bool contains_variable(VarId v) const;
    std::size_t hash() const;

    friend bool operator==(const Atom& a, const Atom& b) = default;
    friend std::strong_ordering operator<=>(const Atom& a, const Atom& b);
};

// Sorted, duplicate-free list of variable ids.
using VarSet = std::vector<VarId>;

bool contains(const VarSet& s, VarId v);
void insert(VarSet& s, VarId v);
void collect_vars(const Term& t, VarSet& out);
void collect_vars(const Atom& a, VarSet& out);
void collect_vars(std::span<const Atom> atoms, VarSet& out);
VarSet vars_of(const Atom& a);
VarSet vars_of(std::span<const Atom> atoms);
bool intersects(const VarSet& a, const VarSet& b);
bool is_subset(const VarSet& a, const VarSet& b);

bool has_function(std::span<const Atom> atoms);

// Ordering used by normalization and the writer: relation name, arity, then
// arguments with constants and function symbols compared by name.
int compare_canonical(const Term& a, const Term& b);
int compare_canonical(const Atom& a, const Atom& b);
struct CanonicalLess {
    bool operator()(const Atom& a, const Atom& b) const { return compare_canonical(a, b) < 0; }
};

std::string to_string(const Term& t);
std::string to_string(const Atom& a);
std::string to_string(std::span<const Atom> atoms);
std::string var_name(VarId v);
std::ostream& operator<<(std::ostream& os, const Term& t);
std::ostream& operator<<(std::ostream& os, const Atom& a);

struct TermHash {
    std::size_t operator()(const Term& t) const { return t.hash(); }
};
struct AtomHash {
    std::size_t operator()(const Atom& a) const { return a.hash(); }
};

} // namespace gtgd
