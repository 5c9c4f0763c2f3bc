#include "gtgd/substitution.hpp"

#include <algorithm>

namespace gtgd {

const Term* Substitution::find(VarId v) const
{
    auto it = std::lower_bound(bindings_.begin(), bindings_.end(), v,
                               [](const auto& b, VarId x) { return b.first < x; });
    if (it == bindings_.end() || it->first != v)
        return nullptr;
    return &it->second;
}

void Substitution::bind(VarId v, Term t)
{
    auto it = std::lower_bound(bindings_.begin(), bindings_.end(), v,
                               [](const auto& b, VarId x) { return b.first < x; });
    if (it != bindings_.end() && it->first == v)
        it->second = std::move(t);
    else
        bindings_.emplace(it, v, std::move(t));
}

Term Substitution::apply(const Term& t) const
{
    switch (t.kind()) {
    case TermKind::Variable:
        if (const Term* b = find(t.index()))
            return *b;
        return t;
    case TermKind::Function: {
        std::vector<Term> args;
        args.reserve(t.args().size());
        for (const auto& a : t.args())
            args.push_back(apply(a));
        return Term::function(t.symbol(), std::move(args));
    }
    default:
        return t;
    }
}

Atom Substitution::apply(const Atom& a) const
{
    Atom r;
    r.relation = a.relation;
    r.args.reserve(a.args.size());
    for (const auto& t : a.args)
        r.args.push_back(apply(t));
    return r;
}

std::vector<Atom> Substitution::apply(std::span<const Atom> atoms) const
{
    std::vector<Atom> r;
    r.reserve(atoms.size());
    for (const auto& a : atoms)
        r.push_back(apply(a));
    return r;
}

Term Substitution::resolve(const Term& t) const
{
    switch (t.kind()) {
    case TermKind::Variable:
        if (const Term* b = find(t.index()))
            return resolve(*b);
        return t;
    case TermKind::Function: {
        std::vector<Term> args;
        args.reserve(t.args().size());
        for (const auto& a : t.args())
            args.push_back(resolve(a));
        return Term::function(t.symbol(), std::move(args));
    }
    default:
        return t;
    }
}

void Substitution::make_idempotent()
{
    std::vector<std::pair<VarId, Term>> out;
    out.reserve(bindings_.size());
    for (const auto& [v, t] : bindings_) {
        Term r = resolve(t);
        if (!(r.is_variable() && r.index() == v))
            out.emplace_back(v, std::move(r));
    }
    bindings_ = std::move(out);
}

Substitution Substitution::compose_after(const Substitution& inner) const
{
    Substitution r;
    for (const auto& [v, t] : inner.bindings_)
        r.bindings_.emplace_back(v, apply(t));
    for (const auto& [v, t] : bindings_)
        if (!inner.binds(v))
            r.bind(v, t);
    std::erase_if(r.bindings_, [](const auto& b) { return b.second.is_variable() && b.second.index() == b.first; });
    return r;
}

std::string to_string(const Substitution& s)
{
    std::string out = "{";
    bool first = true;
    for (const auto& [v, t] : s.bindings()) {
        if (!first)
            out += ", ";
        first = false;
        out += var_name(v) + "->" + to_string(t);
    }
    return out + "}";
}

namespace {

const Term& walk(const Term& t, const Substitution& theta)
{
    const Term* cur = &t;
    while (cur->is_variable()) {
        const Term* b = theta.find(cur->index());
        if (!b)
            break;
        cur = b;
    }
    return *cur;
}

bool occurs(VarId v, const Term& t, const Substitution& theta)
{
    const Term& w = walk(t, theta);
    if (w.is_variable())
        return w.index() == v;
    for (const auto& a : w.args())
        if (occurs(v, a, theta))
            return true;
    return false;
}

bool is_frozen(const Term& t, const VarSet* frozen)
{
    return frozen && t.is_variable() && contains(*frozen, t.index());
}

} // namespace

bool unify(const Term& a0, const Term& b0, Substitution& theta, const VarSet* frozen)
{
    const Term a = walk(a0, theta);
    const Term b = walk(b0, theta);
    if (a == b)
        return true;
    bool af = a.is_variable() && !is_frozen(a, frozen);
    bool bf = b.is_variable() && !is_frozen(b, frozen);
    if (af || bf) {
        const Term& var = af ? a : b;
        const Term& other = af ? b : a;
        if (occurs(var.index(), other, theta))
            return false;
        theta.bind(var.index(), other);
        return true;
    }
    if (!a.is_function() || !b.is_function())
        return false;
    if (a.symbol() != b.symbol() || a.args().size() != b.args().size())
        return false;
    for (std::size_t i = 0; i < a.args().size(); ++i)
        if (!unify(a.args()[i], b.args()[i], theta, frozen))
            return false;
    return true;
}

bool unify(const Atom& a, const Atom& b, Substitution& theta, const VarSet* frozen)
{
    if (a.relation != b.relation || a.args.size() != b.args.size())
        return false;
    for (std::size_t i = 0; i < a.args.size(); ++i)
        if (!unify(a.args[i], b.args[i], theta, frozen))
            return false;
    return true;
}

std::optional<Substitution> mgu(std::span<const std::pair<Atom, Atom>> pairs)
{
    Substitution theta;
    for (const auto& [a, b] : pairs)
        if (!unify(a, b, theta))
            return std::nullopt;
    theta.make_idempotent();
    return theta;
}

std::optional<Substitution> mgu(const Atom& a, const Atom& b)
{
    Substitution theta;
    if (!unify(a, b, theta))
        return std::nullopt;
    theta.make_idempotent();
    return theta;
}

std::optional<Substitution> frozen_mgu(const VarSet& frozen, std::span<const std::pair<Atom, Atom>> pairs)
{
    Substitution theta;
    for (const auto& [a, b] : pairs)
        if (!unify(a, b, theta, &frozen))
            return std::nullopt;
    theta.make_idempotent();
    return theta;
}

std::optional<Substitution> frozen_mgu(const VarSet& frozen, const Atom& a, const Atom& b)
{
    Substitution theta;
    if (!unify(a, b, theta, &frozen))
        return std::nullopt;
    theta.make_idempotent();
    return theta;
}

bool match(const Term& pattern, const Term& target, Substitution& theta)
{
    if (pattern.is_variable()) {
        if (const Term* b = theta.find(pattern.index()))
            return *b == target;
        theta.bind(pattern.index(), target);
        return true;
    }
    if (pattern.kind() != target.kind() || pattern.index() != target.index())
        return false;
    if (pattern.args().size() != target.args().size())
        return false;
    for (std::size_t i = 0; i < pattern.args().size(); ++i)
        if (!match(pattern.args()[i], target.args()[i], theta))
            return false;
    return true;
}

bool match(const Atom& pattern, const Atom& target, Substitution& theta)
{
    if (pattern.relation != target.relation || pattern.args.size() != target.args.size())
        return false;
    for (std::size_t i = 0; i < pattern.args.size(); ++i)
        if (!match(pattern.args[i], target.args[i], theta))
            return false;
    return true;
}

} // namespace gtgd
