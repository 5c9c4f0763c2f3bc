#pragma once

#include "gtgd/dependency.hpp"

#include <functional>
#include <set>
#include <span>
#include <vector>

namespace gtgd {

// ExbDR: `tau` non-full and head-normal, `tau_prime` full and single-head.
// Each conclusion keeps the atom inherited from tau_prime's head as the last
// head atom.  Conclusions are not yet in head-normal form.
std::vector<Tgd> exbdr_apply(const Tgd& tau, const Tgd& tau_prime);

// SkDR: `tau` has a Skolem-free body and a head with a Skolem term.
std::vector<Rule> skdr_apply(const Rule& tau, const Rule& tau_prime);

// Candidate partners for one body atom (already instantiated).  The callback
// may over-approximate; unification decides.
using PartnerLookup = std::function<std::vector<const Rule*>(const Atom&)>;

// HypDR with Skolem-free `tau_prime`.  Partners are rules with Skolem-free
// bodies and Skolem heads; each use is renamed apart.  If `required` is set,
// only conclusions that use that partner at least once are returned.
std::vector<Rule> hypdr_apply(const Rule& tau_prime, const PartnerLookup& partners, const Rule* required = nullptr);
std::vector<Rule> hypdr_apply(const Rule& tau_prime, std::span<const Rule> partners);

// FullDR.  `range` is the number of fresh variables the composed
// substitutions may use.
std::vector<Tgd> fulldr_compose(const Tgd& tau, const Tgd& tau_prime, std::size_t range);
std::vector<Tgd> fulldr_propagate(const Tgd& tau, const Tgd& tau_prime, std::size_t range);

// Drop test applied before a conclusion is kept.  For TGDs it looks at the
// last head atom (the one ExbDR adds).
bool cheap_lookahead_keep(const Tgd& conclusion, const std::set<Symbol>& body_relations);
bool cheap_lookahead_keep(const Rule& conclusion, const std::set<Symbol>& body_relations);

} // namespace gtgd
