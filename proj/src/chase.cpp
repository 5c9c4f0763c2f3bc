#include "gtgd/chase.hpp"

#include <algorithm>
#include <sstream>

namespace gtgd {

ChaseContext ChaseContext::make(std::span<const Tgd> sigma)
{
    ChaseContext ctx;
    ctx.sigma = head_normal_form(sigma);
    for (const auto& t : ctx.sigma) {
        for (const auto& a : t.body)
            collect_constants(a, ctx.constants);
        for (const auto& a : t.head)
            collect_constants(a, ctx.constants);
    }
    return ctx;
}

bool sigma_guarded(std::span<const Term> terms, const Instance& facts, const std::set<Term>& constants)
{
    return std::any_of(facts.begin(), facts.end(), [&](const Atom& f) { return covers(f, terms, constants); });
}

bool sigma_guarded(const Atom& fact, const Instance& facts, const std::set<Term>& constants)
{
    return sigma_guarded(fact.args, facts, constants);
}

std::string to_string(const ChaseStepRecord& r)
{
    std::ostringstream os;
    switch (r.kind) {
    case StepKind::Full:
        os << "full tgd=" << r.tgd << " at v" << r.vertex << " sigma=" << to_string(r.sigma);
        break;
    case StepKind::NonFull:
        os << "nonfull tgd=" << r.tgd << " at v" << r.vertex << " creates v" << r.target
           << " sigma=" << to_string(r.sigma) << " nulls=" << to_string(r.extension);
        break;
    case StepKind::Propagation:
        os << "propagate v" << r.vertex << " -> v" << r.target << " fact " << to_string(r.fact);
        break;
    }
    return os.str();
}

ChaseTree::ChaseTree(Instance root_facts)
{
    vertices_.push_back(ChaseVertex{std::nullopt, {}, std::move(root_facts)});
}

namespace {

void check_vertex(const std::vector<ChaseVertex>& vs, VertexId v)
{
    if (v >= vs.size())
        throw ChaseStepError("no vertex v" + std::to_string(v));
}

} // namespace

ChaseStepRecord ChaseTree::chase_step(const ChaseContext& ctx, std::size_t tgd, VertexId v, const Substitution& sigma)
{
    ChaseStepRecord r;
    r.tgd = tgd;
    r.vertex = v;
    r.sigma = sigma;
    if (tgd >= ctx.sigma.size())
        throw ChaseStepError("no dependency #" + std::to_string(tgd));
    VarSet ys = existential_vars(ctx.sigma[tgd]);
    for (std::size_t k = 0; k < ys.size(); ++k)
        r.extension.bind(ys[k], Term::null(next_null_ + static_cast<std::uint32_t>(k)));
    r.kind = ys.empty() ? StepKind::Full : StepKind::NonFull;
    replay(ctx, r);
    if (r.kind == StepKind::NonFull)
        r.target = vertices_.size() - 1;
    return r;
}

ChaseStepRecord ChaseTree::propagate(const ChaseContext& ctx, VertexId from, VertexId to, const Atom& fact)
{
    ChaseStepRecord r;
    r.kind = StepKind::Propagation;
    r.vertex = from;
    r.target = to;
    r.fact = fact;
    replay(ctx, r);
    return r;
}

void ChaseTree::replay(const ChaseContext& ctx, const ChaseStepRecord& r)
{
    check_vertex(vertices_, r.vertex);
    if (r.kind == StepKind::Propagation) {
        check_vertex(vertices_, r.target);
        const auto& src = vertices_[r.vertex];
        const auto& dst = vertices_[r.target];
        if (!src.facts.count(r.fact))
            throw ChaseStepError("propagated fact " + to_string(r.fact) + " is not in v" + std::to_string(r.vertex));
        if (!sigma_guarded(r.fact, dst.facts, ctx.constants))
            throw ChaseStepError("propagated fact " + to_string(r.fact) + " is not guarded by v" +
                                 std::to_string(r.target));
        vertices_[r.target].facts.insert(r.fact);
        recent_ = r.target;
        return;
    }

    if (r.tgd >= ctx.sigma.size())
        throw ChaseStepError("no dependency #" + std::to_string(r.tgd));
    const Tgd& tau = ctx.sigma[r.tgd];
    for (const auto& a : tau.body) {
        Atom f = r.sigma.apply(a);
        if (!f.is_ground() || !vertices_[r.vertex].facts.count(f))
            throw ChaseStepError("body atom " + to_string(f) + " does not hold in v" + std::to_string(r.vertex));
    }
    VarSet ys = existential_vars(tau);
    if (ys.empty()) {
        if (r.kind != StepKind::Full)
            throw ChaseStepError("full dependency recorded as non-full step");
        for (const auto& a : tau.head)
            vertices_[r.vertex].facts.insert(r.sigma.apply(a));
        recent_ = r.vertex;
        return;
    }
    if (r.kind != StepKind::NonFull)
        throw ChaseStepError("non-full dependency recorded as full step");
    Substitution ext = r.sigma;
    for (VarId y : ys) {
        const Term* n = r.extension.find(y);
        if (!n || !n->is_null())
            throw ChaseStepError("missing null for an existential variable");
        ext.bind(y, *n);
        next_null_ = std::max(next_null_, n->index() + 1);
    }
    Instance head;
    for (const auto& a : tau.head)
        head.insert(ext.apply(a));
    ChaseVertex child{r.vertex, {}, head};
    for (const auto& f : vertices_[r.vertex].facts)
        if (sigma_guarded(f, head, ctx.constants))
            child.facts.insert(f);
    VertexId id = vertices_.size();
    vertices_[r.vertex].children.push_back(id);
    vertices_.push_back(std::move(child));
    recent_ = id;
}

std::vector<Atom> ChaseTree::propagatable_to_parent(const ChaseContext& ctx, VertexId v) const
{
    std::vector<Atom> out;
    const auto& vx = vertices_.at(v);
    if (!vx.parent)
        return out;
    const auto& p = vertices_[*vx.parent];
    for (const auto& f : vx.facts)
        if (!p.facts.count(f) && sigma_guarded(f, p.facts, ctx.constants))
            out.push_back(f);
    return out;
}

bool ChaseTree::propagation_to_parent_applicable(const ChaseContext& ctx, VertexId v) const
{
    return !propagatable_to_parent(ctx, v).empty();
}

Instance ChaseTree::all_facts() const
{
    Instance out;
    for (const auto& v : vertices_)
        out.insert(v.facts.begin(), v.facts.end());
    return out;
}

ChaseTree apply_chase_step(const ChaseTree& t, const ChaseContext& ctx, std::size_t tgd, VertexId v,
                           const Substitution& sigma)
{
    ChaseTree copy = t;
    copy.chase_step(ctx, tgd, v, sigma);
    return copy;
}

ChaseTree apply_propagation(const ChaseTree& t, const ChaseContext& ctx, VertexId from, VertexId to, const Atom& fact)
{
    ChaseTree copy = t;
    copy.propagate(ctx, from, to, fact);
    return copy;
}

std::vector<ChaseTree> replay(const ChaseProof& p, const ChaseContext& ctx)
{
    std::vector<ChaseTree> trees{ChaseTree(p.initial)};
    for (const auto& s : p.steps) {
        ChaseTree next = trees.back();
        next.replay(ctx, s);
        trees.push_back(std::move(next));
    }
    return trees;
}

OnePassVerdict validate_one_pass(const ChaseProof& p, const ChaseContext& ctx)
{
    ChaseTree t(p.initial);
    auto fail = [](std::size_t i, std::string why) { return OnePassVerdict{false, i, std::move(why)}; };
    for (std::size_t i = 0; i < p.steps.size(); ++i) {
        const auto& s = p.steps[i];
        VertexId v = t.recently_updated();
        if (s.kind == StepKind::Propagation) {
            if (s.vertex != v)
                return fail(i + 1, "propagation does not start at the recently updated vertex");
            auto parent = t.vertex(v).parent;
            if (!parent || s.target != *parent)
                return fail(i + 1, "propagation target is not the parent of the recently updated vertex");
        } else {
            if (s.vertex != v)
                return fail(i + 1, "chase step is not at the recently updated vertex");
            if (t.propagation_to_parent_applicable(ctx, v))
                return fail(i + 1, "chase step while a propagation to the parent is applicable");
        }
        try {
            t.replay(ctx, s);
        } catch (const ChaseStepError& e) {
            return fail(i + 1, e.what());
        }
    }
    if (!t.all_facts().count(p.target))
        return fail(p.steps.size(), "target fact " + to_string(p.target) + " is not derived");
    return {};
}

namespace {

std::vector<Term> terms_of(const Instance& facts)
{
    std::set<Term> ts;
    for (const auto& f : facts)
        ts.insert(f.args.begin(), f.args.end());
    return {ts.begin(), ts.end()};
}

} // namespace

std::vector<Loop> decompose_loops(const ChaseProof& p, const ChaseContext& ctx)
{
    auto trees = replay(p, ctx);
    std::vector<Loop> out;
    for (std::size_t s = 0; s < p.steps.size(); ++s) {
        const auto& step = p.steps[s];
        if (step.kind != StepKind::NonFull)
            continue;
        const std::size_t i = s;
        const VertexId v = step.vertex;
        const VertexId child = trees[i + 1].recently_updated();
        std::optional<std::size_t> j;
        for (std::size_t k = s + 1; k < p.steps.size(); ++k) {
            const auto& q = p.steps[k];
            if (q.kind == StepKind::Propagation && q.vertex == child && q.target == v) {
                j = k + 1;
                break;
            }
        }
        if (!j || trees[i].recently_updated() != v || trees[*j].recently_updated() != v)
            continue;

        std::set<Term> fresh;
        for (const auto& [y, n] : step.extension.bindings())
            fresh.insert(n);
        for (std::size_t k = i + 1; k <= *j; ++k) {
            std::vector<Term> ts;
            for (const auto& t : terms_of(trees[k].vertex(child).facts))
                if (!fresh.count(t))
                    ts.push_back(t);
            GTGD_CHECK(sigma_guarded(ts, trees[i].vertex(v).facts, ctx.constants),
                       "loop child terms are not guarded by the loop vertex");
        }
        out.push_back(Loop{i, *j, v, p.steps[*j - 1].fact});
    }
    return out;
}

std::string to_dot(const ChaseTree& t)
{
    std::ostringstream os;
    os << "digraph chase {\n  node [shape=box];\n";
    for (VertexId v = 0; v < t.size(); ++v) {
        os << "  v" << v << " [label=\"v" << v;
        for (const auto& f : t.vertex(v).facts)
            os << "\\n" << to_string(f);
        os << "\"];\n";
    }
    for (VertexId v = 0; v < t.size(); ++v)
        for (VertexId c : t.vertex(v).children)
            os << "  v" << v << " -> v" << c << ";\n";
    os << "}\n";
    return os.str();
}

std::string format_proof(const ChaseProof& p, const ChaseContext& ctx)
{
    std::ostringstream os;
    for (std::size_t i = 0; i < p.steps.size(); ++i) {
        const auto& s = p.steps[i];
        os << "step " << i + 1 << ": " << to_string(s);
        if (s.kind != StepKind::Propagation && s.tgd < ctx.sigma.size())
            os << " using " << to_string(ctx.sigma[s.tgd]);
        os << "\n";
    }
    os << "target: " << to_string(p.target) << "\n";
    return os.str();
}

} // namespace gtgd
