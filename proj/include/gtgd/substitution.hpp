#pragma once

#include "gtgd/term.hpp"

#include <optional>
#include <utility>
#include <vector>

namespace gtgd {

// Finite map from variables to terms, kept sorted by variable.
class Substitution {
public:
    Substitution() = default;

    const Term* find(VarId v) const;
    bool binds(VarId v) const { return find(v) != nullptr; }
    // Overwrites an existing binding.
    void bind(VarId v, Term t);
    std::size_t size() const { return bindings_.size(); }
    bool empty() const { return bindings_.empty(); }
    const std::vector<std::pair<VarId, Term>>& bindings() const { return bindings_; }

    // Simultaneous, single-pass application.
    Term apply(const Term& t) const;
    Atom apply(const Atom& a) const;
    std::vector<Atom> apply(std::span<const Atom> atoms) const;

    // Follows bindings until a fixpoint; used for substitutions in triangular
    // form during unification.
    Term resolve(const Term& t) const;
    // Rewrites every binding to its resolved form, making the map idempotent.
    void make_idempotent();

    // (this ∘ inner)(t) == this(inner(t)).
    Substitution compose_after(const Substitution& inner) const;

    friend bool operator==(const Substitution&, const Substitution&) = default;

private:
    std::vector<std::pair<VarId, Term>> bindings_;
};

std::string to_string(const Substitution& s);

// Unification with occurs check.  Variables in `frozen` behave like constants
// (they never receive a binding).  `theta` is extended in triangular form;
// call make_idempotent() on the final result.
bool unify(const Term& a, const Term& b, Substitution& theta, const VarSet* frozen = nullptr);
bool unify(const Atom& a, const Atom& b, Substitution& theta, const VarSet* frozen = nullptr);

// Idempotent most general unifier of all pairs.
std::optional<Substitution> mgu(std::span<const std::pair<Atom, Atom>> pairs);
std::optional<Substitution> mgu(const Atom& a, const Atom& b);
// Most general unifier that treats the variables in `frozen` as constants.
std::optional<Substitution> frozen_mgu(const VarSet& frozen, std::span<const std::pair<Atom, Atom>> pairs);
std::optional<Substitution> frozen_mgu(const VarSet& frozen, const Atom& a, const Atom& b);

// One-way matching: extends `theta` so that theta(pattern) == target, never
// binding variables that occur in the target.
bool match(const Term& pattern, const Term& target, Substitution& theta);
bool match(const Atom& pattern, const Atom& target, Substitution& theta);

} // namespace gtgd
