#include "fixtures.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace gtgd::test {

const char* const kRunningExample = R"(
a(X1, X2) -> b(X1, Y), c(X1, Y).
c(X1, X2) -> d(X1, X2).
b(X1, X2), d(X1, X2) -> e(X1).
a(X1, X2), e(X1) -> f(X1, Y1), f(Y1, Y2).
e(X1), f(X1, X2) -> g(X1).
b(X1, X2), g(X1) -> h(X1).
)";

const char* const kRunningShortcuts = R"(
a(X1, X2) -> e(X1).
a(X1, X2), e(X1) -> g(X1).
a(X1, X2), g(X1) -> h(X1).
)";

const char* const kCimExample = R"(
acEquipment(X) -> hasTerminal(X, Y), acTerminal(Y).
acTerminal(X) -> terminal(X).
hasTerminal(X, Z), terminal(Z) -> equipment(X).
acTerminal(X) -> partOf(X, Y), acEquipment(Y).
)";

const char* const kCimFacts = R"(
acEquipment(sw1). acEquipment(sw2).
hasTerminal(sw1, trm1). acTerminal(trm1).
)";

std::vector<Tgd> tgds(const char* text)
{
    return parse_program(text).tgds;
}

Tgd tgd(const char* text)
{
    auto ts = tgds(text);
    if (ts.size() != 1)
        throw std::invalid_argument("expected one dependency");
    return ts.front();
}

Rule rule(const char* text)
{
    ParseOptions po;
    po.require_guarded = false;
    auto ts = parse_program(text, po).tgds;
    if (ts.size() != 1 || !is_full(ts.front()) || ts.front().head.size() != 1)
        throw std::invalid_argument("expected one single-head full dependency");
    return to_rule(ts.front());
}

Atom fact(const char* text)
{
    return parse_fact(text);
}

std::size_t find_tgd(const ChaseContext& ctx, const char* text)
{
    std::string want = to_string(normalize(tgd(text)));
    for (std::size_t i = 0; i < ctx.sigma.size(); ++i)
        if (to_string(normalize(ctx.sigma[i])) == want)
            return i;
    throw std::invalid_argument(std::string("not in context: ") + text);
}

ChaseStepRecord step_at(ChaseTree& t, const ChaseContext& ctx, const char* tgd_text, VertexId v)
{
    std::size_t i = find_tgd(ctx, tgd_text);
    std::optional<Substitution> first;
    Substitution theta;
    for_each_match(ctx.sigma[i].body, t.vertex(v).facts, theta, [&](const Substitution& s) {
        if (!first)
            first = s;
    });
    if (!first)
        throw std::invalid_argument(std::string("no match for ") + tgd_text);
    return t.chase_step(ctx, i, v, *first);
}

namespace {

const char* const k1 = "a(X1, X2) -> b(X1, Y), c(X1, Y).";
const char* const k2 = "c(X1, X2) -> d(X1, X2).";
const char* const k3 = "b(X1, X2), d(X1, X2) -> e(X1).";
const char* const k4 = "a(X1, X2), e(X1) -> f(X1, Y1), f(Y1, Y2).";
const char* const k5 = "e(X1), f(X1, X2) -> g(X1).";
const char* const k6 = "b(X1, X2), g(X1) -> h(X1).";

// Shared prefix T1..T6: the E(a) loop at the root, then the F-child deriving G(a).
ChaseProof prefix(const ChaseContext& ctx, ChaseTree& t, VertexId& v1, VertexId& v2)
{
    ChaseProof p{t.vertex(0).facts, {}, fact("h(a)")};
    p.steps.push_back(step_at(t, ctx, k1, 0));
    v1 = p.steps.back().target;
    p.steps.push_back(step_at(t, ctx, k2, v1));
    p.steps.push_back(step_at(t, ctx, k3, v1));
    p.steps.push_back(t.propagate(ctx, v1, 0, fact("e(a)")));
    p.steps.push_back(step_at(t, ctx, k4, 0));
    v2 = p.steps.back().target;
    p.steps.push_back(step_at(t, ctx, k5, v2));
    return p;
}

} // namespace

ChaseProof sibling_sequence(const ChaseContext& ctx)
{
    ChaseTree t(Instance{fact("a(a, b)")});
    VertexId v1 = 0, v2 = 0;
    ChaseProof p = prefix(ctx, t, v1, v2);
    p.steps.push_back(t.propagate(ctx, v2, v1, fact("g(a)")));
    p.steps.push_back(step_at(t, ctx, k6, v1));
    p.steps.push_back(t.propagate(ctx, v1, 0, fact("h(a)")));
    return p;
}

ChaseProof one_pass_sequence(const ChaseContext& ctx)
{
    ChaseTree t(Instance{fact("a(a, b)")});
    VertexId v1 = 0, v2 = 0;
    ChaseProof p = prefix(ctx, t, v1, v2);
    p.steps.push_back(t.propagate(ctx, v2, 0, fact("g(a)")));
    p.steps.push_back(step_at(t, ctx, k1, 0));
    VertexId v3 = p.steps.back().target;
    p.steps.push_back(step_at(t, ctx, k6, v3));
    p.steps.push_back(t.propagate(ctx, v3, 0, fact("h(a)")));
    return p;
}

std::vector<Tgd> new_tgds(std::span<const Tgd> sigma, const SaturationResult& r)
{
    std::set<std::string> input;
    for (const auto& t : head_normal_form(sigma))
        input.insert(to_string(normalize(t)));
    std::vector<Tgd> out;
    for (const auto& t : r.worked_off_tgds)
        if (!input.count(to_string(normalize(t))))
            out.push_back(t);
    return out;
}

std::vector<Rule> new_rules(std::span<const Tgd> sigma, const SaturationResult& r)
{
    std::set<std::string> input;
    for (const auto& x : skolemize(head_normal_form(sigma)))
        input.insert(to_string(normalize(x)));
    std::vector<Rule> out;
    for (const auto& x : r.worked_off_rules)
        if (!input.count(to_string(normalize(x))))
            out.push_back(x);
    return out;
}

std::size_t count_head(std::span<const Rule> rules, std::string_view relation_prefix)
{
    std::size_t n = 0;
    for (const auto& r : rules)
        if (r.head.relation.name().starts_with(relation_prefix))
            ++n;
    return n;
}

Instance materialize_base(const DatalogProgram& p, const Instance& facts)
{
    Instance out;
    for (const auto& f : datalog_fixpoint(p, facts))
        if (std::all_of(f.args.begin(), f.args.end(), [](const Term& t) { return t.is_constant(); }))
            out.insert(f);
    return out;
}

SaturationOptions counting_options(Algorithm a)
{
    SaturationOptions o;
    o.algorithm = a;
    o.subsumption = false;
    o.lookahead = false;
    return o;
}

} // namespace gtgd::test
