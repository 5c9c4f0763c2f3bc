#include "gtgd/inference.hpp"

#include <algorithm>
#include <set>
#include <string>

namespace gtgd {

namespace {

VarId first_free_var(std::span<const Atom> a, std::span<const Atom> b)
{
    VarId m = kScratchBase;
    VarSet vs = vars_of(a);
    collect_vars(b, vs);
    if (!vs.empty())
        m = std::max(m, vs.back() + 1);
    return m;
}

VarId first_free_var(const Tgd& t)
{
    return first_free_var(t.body, t.head);
}

VarId first_free_var(const Rule& r)
{
    return first_free_var(r.body, head_atoms(r));
}

bool is_var_in(const Term& t, const VarSet& s)
{
    return t.is_variable() && contains(s, t.index());
}

void append(std::vector<Atom>& dst, std::vector<Atom> src)
{
    for (auto& a : src)
        dst.push_back(std::move(a));
}

bool mentions(std::span<const Atom> atoms, const VarSet& ys)
{
    return intersects(vars_of(atoms), ys);
}

// Enumerates the y-unifiers theta of head atoms of `tau` (non-full) with a
// selection of body atoms of `tp` such that theta(x) avoids y and exactly the
// selected atoms mention y afterwards.  Each selection is grown from its
// lowest-numbered atom, so it is produced once.  f(theta, rest) receives the
// unselected body atoms under theta.
template <class F>
void y_unifiers(const Tgd& tau, const Tgd& tp, F&& f)
{
    const VarSet ys = existential_vars(tau);
    const VarSet xs = universal_vars(tau);
    const std::size_t n = tp.body.size();
    std::vector<bool> selected(n, false);
    Substitution theta;

    auto bad = [&] {
        for (VarId x : xs)
            if (is_var_in(theta.resolve(Term::variable(x)), ys))
                return true;
        return false;
    };
    auto has_y = [&](const Atom& a) {
        for (const auto& t : a.args) {
            VarSet vs;
            collect_vars(theta.resolve(t), vs);
            if (intersects(vs, ys))
                return true;
        }
        return false;
    };

    auto close = [&](auto& self, std::size_t seed) -> void {
        for (std::size_t i = 0; i < n; ++i) {
            if (selected[i] || !has_y(tp.body[i]))
                continue;
            if (i < seed)
                return;
            for (const Atom& h : tau.head) {
                Substitution saved = theta;
                if (unify(h, tp.body[i], theta, &ys) && !bad()) {
                    selected[i] = true;
                    self(self, seed);
                    selected[i] = false;
                }
                theta = std::move(saved);
            }
            return;
        }
        Substitution th = theta;
        th.make_idempotent();
        std::vector<Atom> rest;
        for (std::size_t i = 0; i < n; ++i)
            if (!selected[i])
                rest.push_back(th.apply(tp.body[i]));
        f(th, rest);
    };

    for (std::size_t s = 0; s < n; ++s) {
        for (const Atom& h : tau.head) {
            Substitution saved = theta;
            if (unify(h, tp.body[s], theta, &ys) && !bad()) {
                selected[s] = true;
                close(close, s);
                selected[s] = false;
            }
            theta = std::move(saved);
        }
    }
}

struct Dedup {
    std::set<std::string> seen;
    bool fresh(const Tgd& t) { return seen.insert(to_string(normalize(t))).second; }
    bool fresh(const Rule& r) { return seen.insert(to_string(normalize(r))).second; }
};

} // namespace

std::vector<Tgd> exbdr_apply(const Tgd& tau, const Tgd& tau_prime)
{
    GTGD_CHECK(!is_full(tau) && is_full(tau_prime) && tau_prime.head.size() == 1, "ExbDR premise shape");
    VarRenamer ren(first_free_var(tau));
    Tgd tp = ren.rename(tau_prime);
    std::vector<Tgd> out;
    Dedup dedup;
    y_unifiers(tau, tp, [&](const Substitution& theta, const std::vector<Atom>& rest) {
        Tgd c;
        c.body = theta.apply(tau.body);
        append(c.body, rest);
        c.head = theta.apply(tau.head);
        c.head.push_back(theta.apply(tp.head.front()));
        if (dedup.fresh(c))
            out.push_back(std::move(c));
    });
    return out;
}

std::vector<Rule> skdr_apply(const Rule& tau, const Rule& tau_prime)
{
    if (has_function(tau.body) || !tau.head.has_function())
        return {};
    VarRenamer ren(first_free_var(tau));
    Rule tp = ren.rename(tau_prime);
    bool tp_free = is_skolem_free(tp);
    VarSet tp_vars = all_vars(tp);
    std::vector<Rule> out;
    Dedup dedup;
    for (std::size_t k = 0; k < tp.body.size(); ++k) {
        const Atom& a = tp.body[k];
        bool eligible = a.has_function() || (tp_free && vars_of(a) == tp_vars);
        if (!eligible)
            continue;
        auto theta = mgu(tau.head, a);
        if (!theta)
            continue;
        Rule c;
        c.body = theta->apply(tau.body);
        for (std::size_t j = 0; j < tp.body.size(); ++j)
            if (j != k)
                c.body.push_back(theta->apply(tp.body[j]));
        c.head = theta->apply(tp.head);
        if (dedup.fresh(c))
            out.push_back(std::move(c));
    }
    return out;
}

namespace {

class HyperSearch {
public:
    HyperSearch(const Rule& tp, const PartnerLookup& lookup, const Rule* required, VarId first_var)
        : tp_(tp), lookup_(lookup), required_(required), ren_(first_var), resolved_(tp.body.size(), false)
    {
    }

    std::vector<Rule> run()
    {
        auto guards = find_guards(tp_);
        if (guards.empty())
            return {};
        branch(guards.front(), tp_.body[guards.front()]);
        return std::move(out_);
    }

private:
    void fold()
    {
        for (std::size_t i = 0; i < tp_.body.size(); ++i) {
            if (resolved_[i])
                continue;
            Atom img = theta_.resolve_atom(tp_.body[i]);
            if (img.has_function()) {
                branch(i, img);
                return;
            }
        }
        emit();
    }

    void branch(std::size_t i, const Atom& img)
    {
        for (const Rule* p : lookup_(img)) {
            if (has_function(p->body) || !p->head.has_function())
                continue;
            if (p->head.relation != img.relation)
                continue;
            Rule renamed = ren_.rename(*p);
            Substitution saved = theta_.sub;
            if (unify(renamed.head, tp_.body[i], theta_.sub)) {
                resolved_[i] = true;
                used_.push_back(std::move(renamed));
                std::size_t hits = required_hits_;
                if (p == required_)
                    ++required_hits_;
                fold();
                required_hits_ = hits;
                used_.pop_back();
                resolved_[i] = false;
            }
            theta_.sub = std::move(saved);
        }
    }

    void emit()
    {
        if (required_ && required_hits_ == 0)
            return;
        Substitution th = theta_.sub;
        th.make_idempotent();
        Rule c;
        for (const auto& p : used_) {
            auto b = th.apply(p.body);
            // Partner bodies must stay Skolem-free.
            if (has_function(b))
                return;
            append(c.body, std::move(b));
        }
        for (std::size_t i = 0; i < tp_.body.size(); ++i)
            if (!resolved_[i])
                c.body.push_back(th.apply(tp_.body[i]));
        c.head = th.apply(tp_.head);
        if (dedup_.fresh(c))
            out_.push_back(std::move(c));
    }

    struct Theta {
        Substitution sub;
        Atom resolve_atom(const Atom& a) const
        {
            Atom r;
            r.relation = a.relation;
            for (const auto& t : a.args)
                r.args.push_back(sub.resolve(t));
            return r;
        }
    };

    const Rule& tp_;
    const PartnerLookup& lookup_;
    const Rule* required_;
    VarRenamer ren_;
    Theta theta_;
    std::vector<bool> resolved_;
    std::vector<Rule> used_;
    std::size_t required_hits_ = 0;
    Dedup dedup_;
    std::vector<Rule> out_;
};

} // namespace

std::vector<Rule> hypdr_apply(const Rule& tau_prime, const PartnerLookup& partners, const Rule* required)
{
    if (!is_skolem_free(tau_prime))
        return {};
    // Working variables of the partners start well above those of tau_prime.
    VarId start = std::max<VarId>(first_free_var(tau_prime), kScratchBase) + (1u << 24);
    return HyperSearch(tau_prime, partners, required, start).run();
}

std::vector<Rule> hypdr_apply(const Rule& tau_prime, std::span<const Rule> partners)
{
    PartnerLookup lookup = [&](const Atom& a) {
        std::vector<const Rule*> out;
        for (const auto& p : partners)
            if (p.head.relation == a.relation)
                out.push_back(&p);
        return out;
    };
    return hypdr_apply(tau_prime, lookup, nullptr);
}

namespace {

// Every map of `vars` into `range` fresh variables (up to renaming of those
// variables) and the given constants.
template <class F>
void for_each_grounding(const VarSet& vars, std::size_t range, const std::vector<Term>& consts, F&& f)
{
    Substitution rho;
    std::vector<Term> fresh;
    for (std::size_t i = 0; i < range; ++i)
        fresh.push_back(Term::variable(kScratchBase + (1u << 25) + static_cast<VarId>(i)));
    auto rec = [&](auto& self, std::size_t i, std::size_t used) -> void {
        if (i == vars.size()) {
            f(rho);
            return;
        }
        for (const auto& c : consts) {
            rho.bind(vars[i], c);
            self(self, i + 1, used);
        }
        for (std::size_t w = 0; w < used; ++w) {
            rho.bind(vars[i], fresh[w]);
            self(self, i + 1, used);
        }
        if (used < range) {
            rho.bind(vars[i], fresh[used]);
            self(self, i + 1, used + 1);
        }
    };
    rec(rec, 0, 0);
}

std::vector<Term> constants_vector(const Tgd& a, const Tgd& b)
{
    std::set<Term> cs = constants_of(a.body);
    for (const auto* part : {&a.head, &b.body, &b.head})
        for (const auto& atom : *part)
            collect_constants(atom, cs);
    return {cs.begin(), cs.end()};
}

} // namespace

std::vector<Tgd> fulldr_compose(const Tgd& tau, const Tgd& tau_prime, std::size_t range)
{
    GTGD_CHECK(is_full(tau) && tau.head.size() == 1 && is_full(tau_prime) && tau_prime.head.size() == 1,
               "FullDR composition premise shape");
    VarRenamer ren(first_free_var(tau));
    Tgd tp = ren.rename(tau_prime);
    auto consts = constants_vector(tau, tp);
    std::vector<Tgd> out;
    Dedup dedup;
    for (std::size_t k = 0; k < tp.body.size(); ++k) {
        auto theta = mgu(tau.head.front(), tp.body[k]);
        if (!theta)
            continue;
        Tgd base;
        base.body = theta->apply(tau.body);
        for (std::size_t j = 0; j < tp.body.size(); ++j)
            if (j != k)
                base.body.push_back(theta->apply(tp.body[j]));
        base.head = theta->apply(tp.head);
        VarSet vs = vars_of(base.body);
        collect_vars(base.head, vs);
        for_each_grounding(vs, range, consts, [&](const Substitution& rho) {
            Tgd c{rho.apply(base.body), rho.apply(base.head)};
            if (dedup.fresh(c))
                out.push_back(std::move(c));
        });
    }
    return out;
}

std::vector<Tgd> fulldr_propagate(const Tgd& tau, const Tgd& tau_prime, std::size_t range)
{
    GTGD_CHECK(!is_full(tau) && is_full(tau_prime) && tau_prime.head.size() == 1, "FullDR propagation premise shape");
    VarRenamer ren(first_free_var(tau));
    Tgd tp = ren.rename(tau_prime);
    VarSet ys = existential_vars(tau);
    auto consts = constants_vector(tau, tp);
    std::vector<Tgd> out;
    Dedup dedup;
    y_unifiers(tau, tp, [&](const Substitution& theta, const std::vector<Atom>& rest) {
        Atom h = theta.apply(tp.head.front());
        if (mentions({&h, 1}, ys))
            return;
        Tgd base;
        base.body = theta.apply(tau.body);
        append(base.body, rest);
        base.head = {h};
        VarSet vs = vars_of(base.body);
        collect_vars(base.head, vs);
        for_each_grounding(vs, range, consts, [&](const Substitution& rho) {
            Tgd c{rho.apply(base.body), rho.apply(base.head)};
            if (dedup.fresh(c))
                out.push_back(std::move(c));
        });
    });
    return out;
}

bool cheap_lookahead_keep(const Tgd& conclusion, const std::set<Symbol>& body_relations)
{
    if (conclusion.head.empty())
        return true;
    const Atom& added = conclusion.head.back();
    if (!intersects(vars_of(added), existential_vars(conclusion)))
        return true;
    return body_relations.count(added.relation) > 0;
}

bool cheap_lookahead_keep(const Rule& conclusion, const std::set<Symbol>& body_relations)
{
    if (!conclusion.head.has_function())
        return true;
    return body_relations.count(conclusion.head.relation) > 0;
}

} // namespace gtgd
