// Bounded one-pass proof search.
//
// Each vertex is saturated on its own: full steps first, then one loop per
// applicable non-full step.  A loop explores the child until it derives a
// fact that is new to the parent and guarded by it; such facts are the loop
// outputs and are not added to the child.  Child explorations are memoized on
// the child's initial facts plus the parent facts over the child's frontier,
// with nulls renumbered.  The recorded event lists are replayed into concrete
// chase steps when a proof is requested.

#include "gtgd/chase.hpp"

#include <map>
#include <memory>

namespace gtgd {

namespace {

// Nulls of a run's own term space: ids below kNewNull are inherited from the
// parent, ids in [kNewNull, kTempNull) are created by the step that opened
// the vertex, ids from kTempNull on are placeholders for a child being built.
constexpr std::uint32_t kNewNull = 1u << 28;
constexpr std::uint32_t kTempNull = 1u << 29;

struct Run;

struct Event {
    bool loop = false;
    bool output = false;
    std::size_t tgd = 0;
    Substitution sigma;
    Atom fact;
    std::shared_ptr<const Run> child;
    std::size_t child_event = 0;
    // child-space inherited null -> term of this run's space
    std::vector<std::pair<Term, Term>> child_terms;
};

struct Run {
    std::vector<Event> events;
    Instance final_state;
};

bool is_new_null(const Term& t)
{
    return t.is_null() && t.index() >= kNewNull && t.index() < kTempNull;
}

bool has_new_null(const Atom& f)
{
    return std::any_of(f.args.begin(), f.args.end(), is_new_null);
}

class Explorer {
public:
    Explorer(const ChaseContext& ctx, const SearchBounds& bounds) : ctx_(ctx), bounds_(bounds)
    {
        for (std::size_t i = 0; i < ctx.sigma.size(); ++i)
            (is_full(ctx.sigma[i]) ? full_ : nonfull_).push_back(i);
    }

    std::shared_ptr<const Run> root(const Instance& facts) { return explore(facts, nullptr, bounds_.max_depth); }
    bool truncated() const { return truncated_; }

private:
    bool out_of_budget()
    {
        if (steps_ >= bounds_.max_steps)
            truncated_ = true;
        return steps_ >= bounds_.max_steps;
    }

    std::shared_ptr<const Run> explore(const Instance& initial, const Instance* context, std::size_t depth_left)
    {
        auto run = std::make_shared<Run>();
        Instance state = initial;
        Instance outputs;

        auto record = [&](Event e) {
            ++steps_;
            bool out = context && !has_new_null(e.fact) && !context->count(e.fact);
            e.output = out;
            if (out)
                outputs.insert(e.fact);
            else
                state.insert(e.fact);
            run->events.push_back(std::move(e));
        };
        auto known = [&](const Atom& f) { return state.count(f) || outputs.count(f); };
        auto full_state = [&] {
            if (state.size() >= bounds_.max_facts_per_vertex) {
                truncated_ = true;
                return true;
            }
            return false;
        };

        bool changed = true;
        while (changed && !out_of_budget() && !full_state()) {
            changed = false;
            bool progress = true;
            while (progress && !out_of_budget() && !full_state()) {
                progress = false;
                for (std::size_t t : full_) {
                    const Tgd& tau = ctx_.sigma[t];
                    std::vector<Substitution> matches;
                    Substitution theta;
                    for_each_match(tau.body, state, theta, [&](const Substitution& s) { matches.push_back(s); });
                    for (const auto& s : matches) {
                        Atom f = s.apply(tau.head.front());
                        if (known(f))
                            continue;
                        Event e;
                        e.tgd = t;
                        e.sigma = s;
                        e.fact = std::move(f);
                        record(std::move(e));
                        progress = changed = true;
                    }
                }
            }
            if (depth_left == 0)
                break;
            for (std::size_t t : nonfull_) {
                const Tgd& tau = ctx_.sigma[t];
                std::vector<Substitution> matches;
                Substitution theta;
                for_each_match(tau.body, state, theta, [&](const Substitution& s) { matches.push_back(s); });
                for (const auto& s : matches) {
                    if (out_of_budget() || full_state())
                        break;
                    changed |= open_loop(t, s, state, depth_left, known, record);
                }
            }
        }
        run->final_state = std::move(state);
        return run;
    }

    template <class Known, class Record>
    bool open_loop(std::size_t t, const Substitution& sigma, const Instance& state, std::size_t depth_left,
                   Known& known, Record& record)
    {
        const Tgd& tau = ctx_.sigma[t];
        VarSet ys = existential_vars(tau);
        Substitution ext = sigma;
        for (std::size_t k = 0; k < ys.size(); ++k)
            ext.bind(ys[k], Term::null(kTempNull + static_cast<std::uint32_t>(k)));
        Instance head;
        for (const auto& a : tau.head)
            head.insert(ext.apply(a));
        Instance c0 = head;
        for (const auto& f : state)
            if (sigma_guarded(f, head, ctx_.constants))
                c0.insert(f);
        std::set<Term> frontier = ctx_.constants;
        for (const auto& f : head)
            for (const auto& term : f.args)
                if (!(term.is_null() && term.index() >= kTempNull))
                    frontier.insert(term);
        Instance context;
        for (const auto& f : state)
            if (std::all_of(f.args.begin(), f.args.end(), [&](const Term& x) { return frontier.count(x) > 0; }))
                context.insert(f);

        // Renumber nulls into the child's space.
        std::map<Term, Term> fwd;
        std::uint32_t next = 0;
        auto to_child = [&](const Term& x) {
            if (!x.is_null())
                return x;
            if (x.index() >= kTempNull)
                return Term::null(kNewNull + (x.index() - kTempNull));
            auto it = fwd.find(x);
            if (it != fwd.end())
                return it->second;
            Term n = Term::null(next++);
            fwd.emplace(x, n);
            return n;
        };
        auto map_facts = [&](const Instance& in) {
            Instance out;
            for (const auto& f : in) {
                Atom g{f.relation, {}};
                for (const auto& x : f.args)
                    g.args.push_back(to_child(x));
                out.insert(std::move(g));
            }
            return out;
        };
        Instance child_initial = map_facts(c0);
        Instance child_context = map_facts(context);

        std::string key = std::to_string(depth_left - 1) + "#";
        for (const auto& f : child_initial)
            key += to_string(f) + ";";
        key += "#";
        for (const auto& f : child_context)
            key += to_string(f) + ";";

        std::shared_ptr<const Run> child;
        if (auto it = memo_.find(key); it != memo_.end()) {
            child = it->second;
        } else {
            child = explore(child_initial, &child_context, depth_left - 1);
            memo_.emplace(key, child);
        }

        std::map<Term, Term> back;
        for (const auto& [local, c] : fwd)
            back.emplace(c, local);

        bool changed = false;
        for (std::size_t i = 0; i < child->events.size(); ++i) {
            const Event& ce = child->events[i];
            if (!ce.output)
                continue;
            Atom f{ce.fact.relation, {}};
            for (const auto& x : ce.fact.args)
                f.args.push_back(x.is_null() ? back.at(x) : x);
            if (known(f))
                continue;
            Event e;
            e.loop = true;
            e.tgd = t;
            e.sigma = sigma;
            e.fact = std::move(f);
            e.child = child;
            e.child_event = i;
            e.child_terms.assign(back.begin(), back.end());
            record(std::move(e));
            changed = true;
        }
        return changed;
    }

    const ChaseContext& ctx_;
    SearchBounds bounds_;
    std::vector<std::size_t> full_, nonfull_;
    std::map<std::string, std::shared_ptr<const Run>> memo_;
    std::size_t steps_ = 0;
    bool truncated_ = false;
};

class Emitter {
public:
    Emitter(const ChaseContext& ctx, const Instance& initial) : ctx_(ctx), tree_(initial) {}

    using TermMap = std::map<Term, Term>;

    void prefix(const Run& run, std::size_t upto, VertexId v, const TermMap& m)
    {
        for (std::size_t i = 0; i < upto; ++i)
            if (!run.events[i].output)
                event(run.events[i], v, m);
        event(run.events[upto], v, m);
    }

    std::vector<ChaseStepRecord> take() { return std::move(steps_); }

private:
    static Term conc(const Term& t, const TermMap& m) { return t.is_null() ? m.at(t) : t; }

    static Atom conc(const Atom& a, const TermMap& m)
    {
        Atom r{a.relation, {}};
        for (const auto& t : a.args)
            r.args.push_back(conc(t, m));
        return r;
    }

    void event(const Event& e, VertexId v, const TermMap& m)
    {
        Substitution s;
        for (const auto& [x, t] : e.sigma.bindings())
            s.bind(x, conc(t, m));
        ChaseStepRecord rec = tree_.chase_step(ctx_, e.tgd, v, s);
        steps_.push_back(rec);
        if (!e.loop)
            return;
        VertexId c = rec.target;
        TermMap cm;
        for (const auto& [child_term, local] : e.child_terms)
            cm.emplace(child_term, conc(local, m));
        VarSet ys = existential_vars(ctx_.sigma[e.tgd]);
        for (std::size_t k = 0; k < ys.size(); ++k)
            cm.emplace(Term::null(kNewNull + static_cast<std::uint32_t>(k)), *rec.extension.find(ys[k]));
        prefix(*e.child, e.child_event, c, cm);
        Atom f = conc(e.child->events[e.child_event].fact, cm);
        GTGD_CHECK(f == conc(e.fact, m), "loop output mismatch during proof reconstruction");
        steps_.push_back(tree_.propagate(ctx_, c, v, f));
    }

    const ChaseContext& ctx_;
    ChaseTree tree_;
    std::vector<ChaseStepRecord> steps_;
};

} // namespace

std::optional<ChaseProof> find_one_pass_proof(const Instance& facts, const ChaseContext& ctx, const Atom& fact,
                                              const SearchBounds& bounds)
{
    ChaseProof proof{facts, {}, fact};
    if (facts.count(fact))
        return proof;
    Explorer ex(ctx, bounds);
    auto run = ex.root(facts);
    for (std::size_t i = 0; i < run->events.size(); ++i) {
        if (run->events[i].fact != fact)
            continue;
        Emitter em(ctx, facts);
        em.prefix(*run, i, 0, {});
        proof.steps = em.take();
        return proof;
    }
    return std::nullopt;
}

EntailmentResult entailed_base_facts(const Instance& facts, const ChaseContext& ctx, const SearchBounds& bounds)
{
    Explorer ex(ctx, bounds);
    auto run = ex.root(facts);
    EntailmentResult r;
    for (const auto& f : run->final_state)
        if (f.is_ground() && std::all_of(f.args.begin(), f.args.end(), [](const Term& t) { return t.is_constant(); }))
            r.facts.insert(f);
    r.truncated = ex.truncated();
    return r;
}

} // namespace gtgd
