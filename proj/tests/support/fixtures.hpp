#pragma once

#include "gtgd/chase.hpp"
#include "gtgd/parser.hpp"
#include "gtgd/saturation.hpp"

#include <string>
#include <vector>

namespace gtgd::test {

extern const char* const kRunningExample;
extern const char* const kRunningShortcuts;
extern const char* const kCimExample;
extern const char* const kCimFacts;

std::vector<Tgd> tgds(const char* text);
Tgd tgd(const char* text);
Rule rule(const char* text);
Atom fact(const char* text);

// Index in ctx.sigma of the dependency equal to `text` up to normalization.
std::size_t find_tgd(const ChaseContext& ctx, const char* text);

// Chase step with the first body match at vertex v.
ChaseStepRecord step_at(ChaseTree& t, const ChaseContext& ctx, const char* tgd_text, VertexId v);

// Chase sequences of the running example: the one that propagates G(a)
// between siblings, and its one-pass repair.
ChaseProof sibling_sequence(const ChaseContext& ctx);
ChaseProof one_pass_sequence(const ChaseContext& ctx);

// Worked-off clauses that are not (normalized) input clauses.
std::vector<Tgd> new_tgds(std::span<const Tgd> sigma, const SaturationResult& r);
std::vector<Rule> new_rules(std::span<const Tgd> sigma, const SaturationResult& r);

// Relation name of a clause head, and counting by it.
std::size_t count_head(std::span<const Rule> rules, std::string_view relation_prefix);

// Base facts of the program's fixpoint on the instance.
Instance materialize_base(const DatalogProgram& p, const Instance& facts);

SaturationOptions counting_options(Algorithm a);

} // namespace gtgd::test
