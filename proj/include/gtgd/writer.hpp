#pragma once

#include "gtgd/datalog.hpp"
#include "gtgd/dependency.hpp"

#include <string>

namespace gtgd {

// One normalized statement per line, sorted.  The output parses back to the
// same clauses up to variable names.
std::string write_program(std::span<const Rule> program);
std::string write_tgds(std::span<const Tgd> tgds);
std::string write_instance(const Instance& facts);

} // namespace gtgd
