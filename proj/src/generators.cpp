#include "gtgd/generators.hpp"

#include <algorithm>
#include <random>

namespace gtgd {

std::optional<Family> parse_family(std::string_view s)
{
    if (s == "expVsSk")
        return Family::ExpVsSk;
    if (s == "skVsExb")
        return Family::SkVsExb;
    if (s == "skVsHyp")
        return Family::SkVsHyp;
    return std::nullopt;
}

namespace {

Term x(VarId i) { return Term::variable(i); }
Term y(VarId i) { return Term::variable(kExistentialBase + i); }
std::string indexed(const char* base, std::size_t i) { return base + std::to_string(i); }

} // namespace

std::vector<Tgd> gen_family(Family kind, std::size_t n)
{
    std::vector<Tgd> out;
    switch (kind) {
    case Family::ExpVsSk: {
        Tgd first{{Atom("a", {x(0)})}, {}};
        for (std::size_t i = 1; i <= n; ++i)
            first.head.push_back(Atom(indexed("b", i), {x(0), y(VarId(i - 1))}));
        out.push_back(first);
        for (std::size_t i = 1; i <= n; ++i)
            out.push_back(Tgd{{Atom(indexed("b", i), {x(0), x(1)}), Atom(indexed("c", i), {x(0)})},
                              {Atom(indexed("d", i), {x(0), x(1)})}});
        break;
    }
    case Family::SkVsExb: {
        Tgd first{{Atom("a", {x(0)})}, {}};
        Tgd second{{}, {Atom("c", {x(0)})}};
        for (std::size_t i = 1; i <= n; ++i) {
            first.head.push_back(Atom(indexed("b", i), {x(0), y(0)}));
            second.body.push_back(Atom(indexed("b", i), {x(0), x(1)}));
        }
        out.push_back(first);
        out.push_back(second);
        break;
    }
    case Family::SkVsHyp: {
        out.push_back(Tgd{{Atom("a", {x(0)})}, {Atom("b", {x(0), y(0)})}});
        Tgd last{{}, {Atom("e", {x(0)})}};
        for (std::size_t i = 1; i <= n; ++i) {
            out.push_back(Tgd{{Atom("b", {x(0), x(1)}), Atom(indexed("c", i), {x(0)})},
                              {Atom(indexed("d", i), {x(0), x(1)})}});
            last.body.push_back(Atom(indexed("d", i), {x(0), x(1)}));
        }
        out.push_back(last);
        break;
    }
    }
    return out;
}

std::vector<Tgd> gen_blowup(std::span<const Tgd> sigma, std::size_t b, std::uint64_t seed,
                            std::optional<std::size_t> max_extra)
{
    GTGD_CHECK(b >= 1, "blowup factor must be at least 1");
    const std::size_t extra_cap = max_extra.value_or(b);
    std::mt19937_64 rng(seed);
    auto uniform = [&](std::size_t lo, std::size_t hi) {
        return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
    };
    std::size_t aux = 0;
    std::vector<Tgd> out;
    std::vector<Tgd> companions;

    for (const auto& tau : sigma) {
        VarSet us = universal_vars(tau);
        VarSet ys = existential_vars(tau);
        auto widen = [&](const Atom& a) {
            Atom r{a.relation, {}};
            for (const auto& t : a.args) {
                if (!t.is_variable()) {
                    r.args.push_back(t);
                    continue;
                }
                bool universal = contains(us, t.index());
                const VarSet& from = universal ? us : ys;
                VarId pos = VarId(std::lower_bound(from.begin(), from.end(), t.index()) - from.begin());
                for (std::size_t j = 0; j < b; ++j) {
                    VarId id = pos * VarId(b) + VarId(j);
                    r.args.push_back(Term::variable(universal ? id : kExistentialBase + id));
                }
            }
            return r;
        };
        Tgd wide;
        for (const auto& a : tau.body)
            wide.body.push_back(widen(a));
        for (const auto& a : tau.head)
            wide.head.push_back(widen(a));

        auto guards = find_guards(wide);
        GTGD_CHECK(!guards.empty(), "blowup input must be guarded");
        const Atom guard = wide.body[guards.front()];
        VarSet gvars = universal_vars(wide);
        VarSet evars = existential_vars(wide);

        auto pick = [&](const VarSet& from, std::size_t k) {
            std::vector<VarId> pool(from.begin(), from.end());
            std::shuffle(pool.begin(), pool.end(), rng);
            pool.resize(std::min(k, pool.size()));
            std::vector<Term> args;
            for (VarId v : pool)
                args.push_back(Term::variable(v));
            return args;
        };

        std::size_t extra = uniform(0, extra_cap);
        for (std::size_t e = 0; e < extra; ++e) {
            std::string name = "aux_" + std::to_string(aux++);
            bool body_atom = !gvars.empty() && uniform(0, 1) == 0;
            if (body_atom) {
                Atom a(name, pick(gvars, uniform(1, std::min<std::size_t>(2, gvars.size()))));
                wide.body.push_back(a);
                companions.push_back(Tgd{{guard}, {a}});
            } else if (!evars.empty()) {
                std::vector<Term> args = pick(evars, 1);
                for (auto& t : pick(gvars, uniform(0, std::min<std::size_t>(1, gvars.size()))))
                    args.push_back(t);
                wide.head.push_back(Atom(name, std::move(args)));
            } else {
                wide.head.push_back(Atom(name, pick(gvars, uniform(0, std::min<std::size_t>(2, gvars.size())))));
            }
        }
        out.push_back(std::move(wide));
    }
    out.insert(out.end(), companions.begin(), companions.end());
    return out;
}

} // namespace gtgd
