#pragma once

#include "gtgd/datalog.hpp"
#include "gtgd/dependency.hpp"

#include <cstdint>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace gtgd {

// Head-normal GTGDs plus the constants they mention.
struct ChaseContext {
    std::vector<Tgd> sigma;
    std::set<Term> constants;

    static ChaseContext make(std::span<const Tgd> sigma);
};

// Set of terms of `terms` is covered by one fact of `facts` up to the
// context constants.
bool sigma_guarded(std::span<const Term> terms, const Instance& facts, const std::set<Term>& constants);
bool sigma_guarded(const Atom& fact, const Instance& facts, const std::set<Term>& constants);

using VertexId = std::size_t;

struct ChaseVertex {
    std::optional<VertexId> parent;
    std::vector<VertexId> children;
    Instance facts;
};

class ChaseStepError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class StepKind : std::uint8_t { Full, NonFull, Propagation };

struct ChaseStepRecord {
    StepKind kind = StepKind::Full;
    std::size_t tgd = 0;      // chase steps
    Substitution sigma;       // body match (chase steps)
    Substitution extension;   // existential variables -> nulls (non-full steps)
    VertexId vertex = 0;      // where the step applies / propagation source
    VertexId target = 0;      // new child / propagation target
    Atom fact;                // propagated fact
};

std::string to_string(const ChaseStepRecord& r);

class ChaseTree {
public:
    explicit ChaseTree(Instance root_facts);

    const ChaseVertex& vertex(VertexId v) const { return vertices_.at(v); }
    std::size_t size() const { return vertices_.size(); }
    VertexId recently_updated() const { return recent_; }
    std::uint32_t next_null() const { return next_null_; }

    // Applies tau = ctx.sigma[tgd] at v with body match sigma.  Throws
    // ChaseStepError if sigma(body) is not contained in the vertex.
    ChaseStepRecord chase_step(const ChaseContext& ctx, std::size_t tgd, VertexId v, const Substitution& sigma);
    // Copies a fact between vertices; it must be Sigma-guarded by the target.
    ChaseStepRecord propagate(const ChaseContext& ctx, VertexId from, VertexId to, const Atom& fact);
    // Replays a recorded step; null numbering follows the record.
    void replay(const ChaseContext& ctx, const ChaseStepRecord& r);

    // Some fact of v, absent from its parent, is Sigma-guarded by the parent.
    bool propagation_to_parent_applicable(const ChaseContext& ctx, VertexId v) const;
    // Facts of v that can be propagated to its parent and are new there,
    // in ascending order.
    std::vector<Atom> propagatable_to_parent(const ChaseContext& ctx, VertexId v) const;

    // Every fact of every vertex.
    Instance all_facts() const;

private:
    std::vector<ChaseVertex> vertices_;
    VertexId recent_ = 0;
    std::uint32_t next_null_ = 0;
};

// Free-function forms returning the new tree.
ChaseTree apply_chase_step(const ChaseTree& t, const ChaseContext& ctx, std::size_t tgd, VertexId v,
                           const Substitution& sigma);
ChaseTree apply_propagation(const ChaseTree& t, const ChaseContext& ctx, VertexId from, VertexId to,
                            const Atom& fact);

struct ChaseProof {
    Instance initial;
    std::vector<ChaseStepRecord> steps;
    Atom target;
};

// T_0 .. T_n.  Throws ChaseStepError if a step does not apply.
std::vector<ChaseTree> replay(const ChaseProof& p, const ChaseContext& ctx);

struct OnePassVerdict {
    bool ok = true;
    std::size_t step = 0; // 1-based index of the first offending step
    std::string reason;
};

OnePassVerdict validate_one_pass(const ChaseProof& p, const ChaseContext& ctx);

struct Loop {
    std::size_t begin = 0; // i: tree T_i before the non-full step
    std::size_t end = 0;   // j: tree T_j after the propagation
    VertexId vertex = 0;
    Atom output;
};

// Matching pairs of a non-full step creating a child of v and the
// propagation from that child back to v.  Also checks the loop shape
// invariant (throws InvariantViolation on failure).
std::vector<Loop> decompose_loops(const ChaseProof& p, const ChaseContext& ctx);

struct SearchBounds {
    std::size_t max_depth = 3;
    std::size_t max_facts_per_vertex = 64;
    std::size_t max_steps = 100000;
};

// Bounded search for a one-pass proof of `fact`.
std::optional<ChaseProof> find_one_pass_proof(const Instance& facts, const ChaseContext& ctx, const Atom& fact,
                                              const SearchBounds& bounds = {});

struct EntailmentResult {
    Instance facts;
    // A bound was hit, so the set may be incomplete.
    bool truncated = false;
};

// Base facts (constants only) derivable at the root by one-pass proofs
// within the bounds.
EntailmentResult entailed_base_facts(const Instance& facts, const ChaseContext& ctx, const SearchBounds& bounds = {});

// Graphviz description of a tree.
std::string to_dot(const ChaseTree& t);
std::string format_proof(const ChaseProof& p, const ChaseContext& ctx);

} // namespace gtgd
