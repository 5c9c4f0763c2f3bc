#include "oracles.hpp"

#include <algorithm>
#include <functional>

namespace gtgd::test {

namespace {

constexpr VarId kApart = kScratchBase + (1u << 26);

bool maps_to_variable_in(const Substitution& mu, VarId x, const VarSet& allowed)
{
    const Term* t = mu.find(x);
    return t && t->is_variable() && contains(allowed, t->index());
}

// Backtracking over pattern atoms; `done` is called with each complete
// extension and returns true to stop.
bool match_all(std::span<const Atom> patterns, std::size_t i, std::span<const Atom> targets, Substitution& mu,
               const std::function<bool(Substitution&)>& done)
{
    if (i == patterns.size())
        return done(mu);
    for (const auto& t : targets) {
        Substitution saved = mu;
        if (match(patterns[i], t, mu) && match_all(patterns, i + 1, targets, mu, done))
            return true;
        mu = std::move(saved);
    }
    return false;
}

} // namespace

bool subsumes_exact(const Tgd& a_in, const Tgd& b)
{
    VarRenamer ren(kApart);
    Tgd a = ren.rename(a_in);
    VarSet ua = universal_vars(a), ya = existential_vars(a);
    VarSet ub = universal_vars(b), yb = existential_vars(b);

    // Every head atom of b must be the image of a head atom of a.
    std::function<bool(std::size_t, Substitution&)> cover_head = [&](std::size_t k, Substitution& mu) -> bool {
        if (k == b.head.size()) {
            std::vector<Term> images;
            for (VarId y : ya) {
                const Term* t = mu.find(y);
                if (!t)
                    continue;
                if (!maps_to_variable_in(mu, y, yb))
                    return false;
                images.push_back(*t);
            }
            std::sort(images.begin(), images.end());
            return std::adjacent_find(images.begin(), images.end()) == images.end();
        }
        for (const auto& h : a.head) {
            Substitution saved = mu;
            if (match(h, b.head[k], mu) && cover_head(k + 1, mu))
                return true;
            mu = std::move(saved);
        }
        return false;
    };

    Substitution mu;
    return match_all(a.body, 0, b.body, mu, [&](Substitution& m) {
        for (VarId x : ua)
            if (!maps_to_variable_in(m, x, ub))
                return false;
        Substitution copy = m;
        return cover_head(0, copy);
    });
}

bool subsumes_exact(const Rule& a_in, const Rule& b)
{
    VarRenamer ren(kApart);
    Rule a = ren.rename(a_in);
    Substitution mu;
    if (!match(a.head, b.head, mu))
        return false;
    return match_all(a.body, 0, b.body, mu, [](Substitution&) { return true; });
}

Instance naive_fixpoint(std::span<const Rule> program, const Instance& facts)
{
    Instance cur = facts;
    while (true) {
        Instance next = cur;
        for (const auto& r : program) {
            Substitution theta;
            for_each_match(r.body, cur, theta, [&](const Substitution& s) { next.insert(s.apply(r.head)); });
        }
        if (next.size() == cur.size())
            return cur;
        cur = std::move(next);
    }
}

Instance base_facts(const Instance& facts)
{
    Instance out;
    for (const auto& f : facts)
        if (std::all_of(f.args.begin(), f.args.end(), [](const Term& t) { return t.is_constant(); }))
            out.insert(f);
    return out;
}

bool datalog_entails(std::span<const Rule> program, const Rule& r)
{
    Substitution freeze;
    for (VarId v : all_vars(r))
        freeze.bind(v, Term::constant("frz_" + std::to_string(v)));
    Instance body;
    for (const auto& a : r.body)
        body.insert(freeze.apply(a));
    return naive_fixpoint(program, body).count(freeze.apply(r.head)) > 0;
}

namespace {

bool path_compatible(const Term& a, const Term& b)
{
    if (a.is_variable() || b.is_variable())
        return true;
    if (a.kind() != b.kind())
        return false;
    if (a.is_null())
        return a.index() == b.index();
    if (a.symbol() != b.symbol() || a.args().size() != b.args().size())
        return false;
    for (std::size_t i = 0; i < a.args().size(); ++i)
        if (!path_compatible(a.args()[i], b.args()[i]))
            return false;
    return true;
}

} // namespace

bool path_compatible(const Atom& a, const Atom& b)
{
    if (a.relation != b.relation || a.args.size() != b.args.size())
        return false;
    for (std::size_t i = 0; i < a.args.size(); ++i)
        if (!path_compatible(a.args[i], b.args[i]))
            return false;
    return true;
}

bool feature_subset(const std::vector<std::uint32_t>& a, const std::vector<std::uint32_t>& b)
{
    return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

namespace {

std::size_t pick(Rng& rng, std::size_t lo, std::size_t hi)
{
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

bool chance(Rng& rng, double p)
{
    return std::bernoulli_distribution(p)(rng);
}

} // namespace

std::vector<Tgd> random_sigma(Rng& rng, const RandomSpec& spec)
{
    struct Rel {
        std::string name;
        std::size_t arity;
    };
    std::vector<Rel> rels(pick(rng, std::min<std::size_t>(3, spec.max_relations), spec.max_relations));
    for (std::size_t i = 0; i < rels.size(); ++i)
        rels[i] = {"r" + std::to_string(i), pick(rng, 1, spec.max_arity)};
    std::vector<Term> consts;
    for (std::size_t i = 0, n = pick(rng, 0, spec.max_constants); i < n; ++i)
        consts.push_back(Term::constant("k" + std::to_string(i)));

    auto any_rel = [&]() -> const Rel& { return rels[pick(rng, 0, rels.size() - 1)]; };
    auto from = [&](const std::vector<Term>& pool) {
        return pool[pick(rng, 0, pool.size() - 1)];
    };

    std::vector<Tgd> out(pick(rng, std::min<std::size_t>(4, spec.max_tgds), spec.max_tgds));
    for (auto& t : out) {
        const Rel& g = any_rel();
        Atom guard(g.name, {});
        std::vector<Term> xs;
        for (std::size_t j = 0; j < g.arity; ++j) {
            if (!consts.empty() && chance(rng, 0.1)) {
                guard.args.push_back(from(consts));
            } else if (!xs.empty() && chance(rng, 0.2)) {
                guard.args.push_back(from(xs));
            } else {
                xs.push_back(Term::variable(VarId(xs.size())));
                guard.args.push_back(xs.back());
            }
        }
        t.body.push_back(guard);
        std::vector<Term> body_pool = xs;
        body_pool.insert(body_pool.end(), consts.begin(), consts.end());
        for (std::size_t k = 0, n = pick(rng, 0, 2); k < n && !body_pool.empty(); ++k) {
            const Rel& r = any_rel();
            Atom a(r.name, {});
            for (std::size_t j = 0; j < r.arity; ++j)
                a.args.push_back(chance(rng, 0.9) && !xs.empty() ? from(xs) : from(body_pool));
            t.body.push_back(a);
        }

        std::vector<Term> ys;
        if (chance(rng, spec.nonfull_ratio))
            for (std::size_t k = 0, n = pick(rng, 1, 2); k < n; ++k)
                ys.push_back(Term::variable(kExistentialBase + VarId(k)));
        // Heads mostly mix frontier variables with existentials, so that
        // facts about fresh nulls can flow back through full TGDs.
        // Full heads project onto a small subset of the body variables.
        std::vector<Term> frontier = xs;
        std::shuffle(frontier.begin(), frontier.end(), rng);
        if (ys.empty() && !frontier.empty())
            frontier.resize(pick(rng, 1, std::min<std::size_t>(2, frontier.size())));
        auto head_term = [&]() {
            if (!ys.empty() && (frontier.empty() || chance(rng, 0.45)))
                return from(ys);
            if (!frontier.empty() && (consts.empty() || chance(rng, 0.95)))
                return from(frontier);
            return consts.empty() ? Term::constant("k0") : from(consts);
        };
        std::size_t heads = ys.empty() ? 1 : pick(rng, 1, 2);
        for (std::size_t k = 0; k < heads; ++k) {
            const Rel& r = any_rel();
            Atom a(r.name, {});
            for (std::size_t j = 0; j < r.arity; ++j)
                a.args.push_back(head_term());
            t.head.push_back(a);
        }
        // Make every existential appear somewhere.
        for (const auto& y : ys) {
            bool used = std::any_of(t.head.begin(), t.head.end(), [&](const Atom& a) {
                return std::find(a.args.begin(), a.args.end(), y) != a.args.end();
            });
            if (!used) {
                Atom& a = t.head[pick(rng, 0, t.head.size() - 1)];
                a.args[pick(rng, 0, a.args.size() - 1)] = y;
            }
        }
    }

    // Plant derivations through nulls: some full TGDs read the head of a
    // non-full one and project onto its frontier.
    std::vector<std::size_t> nonfull;
    for (std::size_t i = 0; i < out.size(); ++i)
        if (!is_full(out[i]))
            nonfull.push_back(i);
    for (auto& t : out) {
        if (nonfull.empty() || !is_full(t) || !chance(rng, 0.5))
            continue;
        const Tgd& src = out[nonfull[pick(rng, 0, nonfull.size() - 1)]];
        const Atom& g = src.head[pick(rng, 0, src.head.size() - 1)];
        VarSet gv = vars_of(g);
        Substitution ren;
        VarId next = 0;
        for (VarId v : gv)
            ren.bind(v, Term::variable(next++));
        std::vector<Term> front;
        for (VarId v : gv)
            if (v < kExistentialBase)
                front.push_back(*ren.find(v));
        Tgd planted{{ren.apply(g)}, {}};
        for (const auto& a : src.head)
            if (&a != &g && is_subset(vars_of(a), gv))
                planted.body.push_back(ren.apply(a));
        const Rel& r = any_rel();
        Atom h(r.name, {});
        for (std::size_t j = 0; j < r.arity; ++j)
            h.args.push_back(!front.empty() ? from(front) : consts.empty() ? Term::constant("k0") : from(consts));
        planted.head.push_back(h);
        t = std::move(planted);
    }
    return out;
}

Instance random_instance(Rng& rng, std::span<const Tgd> sigma, const RandomSpec& spec)
{
    std::map<Symbol, std::size_t> arity;
    for (const auto& t : sigma) {
        for (const auto& a : t.body)
            arity[a.relation] = a.args.size();
        for (const auto& a : t.head)
            arity[a.relation] = a.args.size();
    }
    // Symbol order depends on interning history; sort by name so the output
    // depends only on the seed.
    std::vector<std::pair<Symbol, std::size_t>> rels(arity.begin(), arity.end());
    std::sort(rels.begin(), rels.end(), [](const auto& a, const auto& b) { return a.first.name() < b.first.name(); });
    std::vector<Term> pool{Term::constant("a"), Term::constant("b"), Term::constant("c")};
    std::set<Term> sc;
    for (const auto& t : sigma)
        for (const auto& a : t.body)
            collect_constants(a, sc);
    std::vector<Term> extra(sc.begin(), sc.end());
    std::sort(extra.begin(), extra.end(), [](const Term& a, const Term& b) { return a.symbol().name() < b.symbol().name(); });
    pool.insert(pool.end(), extra.begin(), extra.end());

    // Most facts come from instantiating some body, so that rules fire.
    Instance out;
    const std::size_t n = pick(rng, std::min<std::size_t>(3, spec.max_facts), spec.max_facts);
    while (out.size() < n) {
        if (chance(rng, 0.6)) {
            const Tgd& t = sigma[pick(rng, 0, sigma.size() - 1)];
            Substitution theta;
            for (VarId v : universal_vars(t))
                theta.bind(v, pool[pick(rng, 0, pool.size() - 1)]);
            for (const auto& a : t.body)
                if (out.size() < n)
                    out.insert(theta.apply(a));
            continue;
        }
        auto [r, k] = rels[pick(rng, 0, rels.size() - 1)];
        Atom f{r, {}};
        for (std::size_t j = 0; j < k; ++j)
            f.args.push_back(pool[pick(rng, 0, pool.size() - 1)]);
        out.insert(f);
    }
    return out;
}

std::vector<Rule> random_rules(Rng& rng, const RandomSpec& spec)
{
    auto sigma = random_sigma(rng, spec);
    auto hnf = head_normal_form(sigma);
    return skolemize(hnf);
}

namespace {

template <class Clause>
Clause weaken(Rng& rng, Clause c)
{
    VarSet vs;
    collect_vars(std::span<const Atom>(c.body), vs);
    std::vector<Term> pool;
    for (VarId v : vs)
        pool.push_back(Term::variable(v));
    if constexpr (std::is_same_v<Clause, Tgd>) {
        if (c.head.size() > 1 && chance(rng, 0.5)) {
            c.head.erase(c.head.begin() + static_cast<std::ptrdiff_t>(pick(rng, 0, c.head.size() - 1)));
            return c;
        }
    }
    Atom extra = c.body[pick(rng, 0, c.body.size() - 1)];
    for (auto& t : extra.args)
        if (t.is_variable() && !pool.empty() && chance(rng, 0.5))
            t = pool[pick(rng, 0, pool.size() - 1)];
    c.body.push_back(extra);
    return c;
}

template <class Clause, class Make>
std::vector<std::pair<Clause, Clause>> pairs_of(Rng& rng, std::size_t n, Make make)
{
    RandomSpec small{4, 3, 2, 1, 0, 0.5};
    std::vector<std::pair<Clause, Clause>> out;
    while (out.size() < n) {
        std::vector<Clause> cs = make(rng, small);
        for (std::size_t i = 0; i < cs.size() && out.size() < n; ++i) {
            const Clause& c = cs[i];
            if (chance(rng, 0.5))
                out.emplace_back(normalize(c), normalize(weaken(rng, c)));
            else
                out.emplace_back(normalize(c), normalize(cs[pick(rng, 0, cs.size() - 1)]));
        }
    }
    return out;
}

} // namespace

std::vector<std::pair<Tgd, Tgd>> subsumption_pairs(Rng& rng, std::size_t n)
{
    return pairs_of<Tgd>(rng, n, [](Rng& r, const RandomSpec& s) { return head_normal_form(random_sigma(r, s)); });
}

std::vector<std::pair<Rule, Rule>> rule_subsumption_pairs(Rng& rng, std::size_t n)
{
    return pairs_of<Rule>(rng, n, [](Rng& r, const RandomSpec& s) { return random_rules(r, s); });
}

} // namespace gtgd::test
