#pragma once

#include "gtgd/dependency.hpp"

#include <set>
#include <span>
#include <vector>

namespace gtgd {

using Instance = std::set<Atom>;

// Least fixpoint of a function-free program over an instance (semi-naive).
Instance datalog_fixpoint(std::span<const Rule> program, const Instance& facts);

// All extensions of `theta` mapping every atom of `body` into `facts`.
template <class F>
void for_each_match(std::span<const Atom> body, const Instance& facts, Substitution& theta, F&& f);

} // namespace gtgd

#include "gtgd/detail/match.hpp"
