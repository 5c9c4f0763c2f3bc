#include "fixtures.hpp"
#include "oracles.hpp"

#include "gtgd/chase.hpp"
#include "gtgd/parser.hpp"

#include <gtest/gtest.h>

using namespace gtgd;
using namespace gtgd::test;

namespace {

const char* const kT1 = "a(X1, X2) -> b(X1, Y), c(X1, Y).";
const char* const kT2 = "c(X1, X2) -> d(X1, X2).";
const char* const kT3 = "b(X1, X2), d(X1, X2) -> e(X1).";

Atom with_null(const char* rel, const char* c, std::uint32_t n)
{
    return Atom(rel, {Term::constant(c), Term::null(n)});
}

class RunningChase : public ::testing::Test {
protected:
    ChaseContext ctx = ChaseContext::make(tgds(kRunningExample));
};

} // namespace

TEST_F(RunningChase, NonFullStepCreatesChild)
{
    ChaseTree t(Instance{fact("a(a, b)")});
    auto r = step_at(t, ctx, kT1, 0);
    EXPECT_EQ(r.kind, StepKind::NonFull);
    ASSERT_EQ(t.size(), 2u);
    EXPECT_EQ(r.target, 1u);
    EXPECT_EQ(t.vertex(1).parent, VertexId{0});
    EXPECT_EQ(t.vertex(0).children, std::vector<VertexId>{1});
    // a(a, b) mentions b, which the new head facts do not cover.
    EXPECT_EQ(t.vertex(1).facts, (Instance{with_null("b", "a", 0), with_null("c", "a", 0)}));
    EXPECT_EQ(t.recently_updated(), 1u);
    EXPECT_EQ(t.next_null(), 1u);
}

TEST_F(RunningChase, ChildInheritsGuardedParentFacts)
{
    ChaseTree t(Instance{fact("a(a, b)"), fact("e(a)")});
    step_at(t, ctx, kT1, 0);
    EXPECT_TRUE(t.vertex(1).facts.count(fact("e(a)")));
    EXPECT_FALSE(t.vertex(1).facts.count(fact("a(a, b)")));
}

TEST_F(RunningChase, FullStepExtendsVertex)
{
    ChaseTree t(Instance{fact("a(a, b)")});
    step_at(t, ctx, kT1, 0);
    auto r = step_at(t, ctx, kT2, 1);
    EXPECT_EQ(r.kind, StepKind::Full);
    EXPECT_EQ(t.size(), 2u);
    EXPECT_TRUE(t.vertex(1).facts.count(with_null("d", "a", 0)));
    EXPECT_EQ(t.recently_updated(), 1u);
}

TEST_F(RunningChase, StepRequiresBodyMatch)
{
    ChaseTree t(Instance{fact("a(a, b)")});
    Substitution s;
    s.bind(0, Term::constant("a"));
    s.bind(1, Term::constant("z"));
    EXPECT_THROW(t.chase_step(ctx, find_tgd(ctx, kT1), 0, s), ChaseStepError);
    EXPECT_THROW(step_at(t, ctx, kT3, 0), std::invalid_argument);
}

TEST_F(RunningChase, PropagationChecksGuardAndSource)
{
    ChaseTree t(Instance{fact("a(a, b)")});
    step_at(t, ctx, kT1, 0);
    step_at(t, ctx, kT2, 1);
    EXPECT_THROW(t.propagate(ctx, 1, 0, with_null("b", "a", 0)), ChaseStepError);
    EXPECT_THROW(t.propagate(ctx, 1, 0, fact("e(a)")), ChaseStepError);
    step_at(t, ctx, kT3, 1);
    EXPECT_TRUE(t.propagation_to_parent_applicable(ctx, 1));
    EXPECT_EQ(t.propagatable_to_parent(ctx, 1), std::vector<Atom>{fact("e(a)")});
    auto r = t.propagate(ctx, 1, 0, fact("e(a)"));
    EXPECT_EQ(r.kind, StepKind::Propagation);
    EXPECT_TRUE(t.vertex(0).facts.count(fact("e(a)")));
    EXPECT_EQ(t.recently_updated(), 0u);
    EXPECT_FALSE(t.propagation_to_parent_applicable(ctx, 1));
}

TEST_F(RunningChase, FreeFunctionsLeaveInputUnchanged)
{
    ChaseTree t(Instance{fact("a(a, b)")});
    Substitution s;
    s.bind(0, Term::constant("a"));
    s.bind(1, Term::constant("b"));
    ChaseTree t2 = apply_chase_step(t, ctx, find_tgd(ctx, kT1), 0, s);
    EXPECT_EQ(t.size(), 1u);
    EXPECT_EQ(t2.size(), 2u);
    EXPECT_EQ(t2.all_facts().size(), 3u);
}

TEST_F(RunningChase, SiblingPropagationRejected)
{
    auto v = validate_one_pass(sibling_sequence(ctx), ctx);
    EXPECT_FALSE(v.ok);
    EXPECT_EQ(v.step, 7u);
    EXPECT_FALSE(v.reason.empty());
}

TEST_F(RunningChase, RepairedSequenceAccepted)
{
    auto p = one_pass_sequence(ctx);
    auto v = validate_one_pass(p, ctx);
    EXPECT_TRUE(v.ok) << v.reason;
    auto trees = replay(p, ctx);
    ASSERT_EQ(trees.size(), p.steps.size() + 1);
    EXPECT_TRUE(trees.back().vertex(0).facts.count(fact("h(a)")));
    EXPECT_FALSE(trees.front().vertex(0).facts.count(fact("h(a)")));
}

TEST_F(RunningChase, RootLoopsOutputInOrder)
{
    auto p = one_pass_sequence(ctx);
    std::vector<Atom> outputs;
    for (const auto& l : decompose_loops(p, ctx)) {
        EXPECT_LT(l.begin, l.end);
        if (l.vertex == 0)
            outputs.push_back(l.output);
    }
    EXPECT_EQ(outputs, (std::vector<Atom>{fact("e(a)"), fact("g(a)"), fact("h(a)")}));
}

TEST_F(RunningChase, ProofSearchFindsShallowProof)
{
    SearchBounds b;
    b.max_depth = 1;
    auto p = find_one_pass_proof(Instance{fact("a(a, b)")}, ctx, fact("h(a)"), b);
    ASSERT_TRUE(p);
    EXPECT_EQ(p->target, fact("h(a)"));
    auto v = validate_one_pass(*p, ctx);
    EXPECT_TRUE(v.ok) << v.reason << "\n" << format_proof(*p, ctx);
    EXPECT_TRUE(replay(*p, ctx).back().vertex(0).facts.count(fact("h(a)")));
    EXPECT_NE(format_proof(*p, ctx).find("h(a)"), std::string::npos);
}

TEST_F(RunningChase, ProofSearchWithoutChildrenFails)
{
    SearchBounds b;
    b.max_depth = 0;
    EXPECT_FALSE(find_one_pass_proof(Instance{fact("a(a, b)")}, ctx, fact("h(a)"), b));
}

TEST_F(RunningChase, ProofOfInputFactIsEmpty)
{
    auto p = find_one_pass_proof(Instance{fact("a(a, b)")}, ctx, fact("a(a, b)"));
    ASSERT_TRUE(p);
    EXPECT_TRUE(p->steps.empty());
    EXPECT_TRUE(validate_one_pass(*p, ctx).ok);
}

TEST_F(RunningChase, UnentailedFactHasNoProof)
{
    EXPECT_FALSE(find_one_pass_proof(Instance{fact("a(a, b)")}, ctx, fact("h(b)")));
}

TEST_F(RunningChase, EntailedBaseFacts)
{
    auto r = entailed_base_facts(Instance{fact("a(a, b)")}, ctx);
    EXPECT_FALSE(r.truncated);
    EXPECT_EQ(r.facts, (Instance{fact("a(a, b)"), fact("e(a)"), fact("g(a)"), fact("h(a)")}));
}

TEST_F(RunningChase, DotOutput)
{
    ChaseTree t(Instance{fact("a(a, b)")});
    step_at(t, ctx, kT1, 0);
    std::string dot = to_dot(t);
    EXPECT_EQ(dot.rfind("digraph", 0), 0u);
    EXPECT_NE(dot.find("->"), std::string::npos);
}

TEST(ChaseSearch, CimEquipment)
{
    auto ctx = ChaseContext::make(tgds(kCimExample));
    Instance facts = parse_instance(kCimFacts);
    for (const char* goal : {"equipment(sw1)", "equipment(sw2)"}) {
        auto p = find_one_pass_proof(facts, ctx, fact(goal));
        ASSERT_TRUE(p) << goal;
        auto v = validate_one_pass(*p, ctx);
        EXPECT_TRUE(v.ok) << goal << ": " << v.reason;
        decompose_loops(*p, ctx);
    }
    auto r = entailed_base_facts(facts, ctx);
    EXPECT_TRUE(r.facts.count(fact("equipment(sw2)")));
}

TEST(ChaseSearch, ConstantsInDependencies)
{
    auto ctx = ChaseContext::make(tgds("r(X) -> s(X, Y), t(Y, k).\nt(X, k) -> u(k).\ns(X, Y), u(k) -> v(X)."));
    EXPECT_TRUE(ctx.constants.count(Term::constant("k")));
    auto r = entailed_base_facts(Instance{fact("r(a)")}, ctx);
    EXPECT_TRUE(r.facts.count(fact("u(k)")));
    EXPECT_TRUE(r.facts.count(fact("v(a)")));
    auto p = find_one_pass_proof(Instance{fact("r(a)")}, ctx, fact("v(a)"));
    ASSERT_TRUE(p);
    EXPECT_TRUE(validate_one_pass(*p, ctx).ok);
}

TEST(SigmaGuardedFact, UsesContextConstants)
{
    Instance facts{fact("r(a)")};
    EXPECT_TRUE(sigma_guarded(fact("s(a, k)"), facts, {Term::constant("k")}));
    EXPECT_FALSE(sigma_guarded(fact("s(a, k)"), facts, {}));
}
