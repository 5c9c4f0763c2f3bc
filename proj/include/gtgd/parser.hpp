#pragma once

#include "gtgd/datalog.hpp"
#include "gtgd/dependency.hpp"

#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace gtgd {

struct Diagnostic {
    std::size_t line = 0;
    std::size_t col = 0;
    std::string message;
};

std::string to_string(const Diagnostic& d);

class ParseFailure : public std::runtime_error {
public:
    explicit ParseFailure(std::vector<Diagnostic> ds);
    std::vector<Diagnostic> diagnostics;
};

struct SourceProgram {
    std::vector<Tgd> tgds;
    std::vector<std::size_t> lines; // line of each statement
    std::map<Symbol, std::size_t> arity;
};

struct ParseOptions {
    // Reject statements without a body atom holding every body variable.
    bool require_guarded = true;
};

// Grammar: `body -> head.` with comma-separated atoms; identifiers starting
// with an uppercase letter are variables, the rest are constants or
// relations.  `%` comments run to the end of the line.  Head variables that
// do not occur in the body are existential.
SourceProgram parse_program(std::string_view text, const ParseOptions& opts = {});

// Facts `r(c1, ..., cn).` over constants.
Instance parse_instance(std::string_view text);

// A single fact, with or without the final dot.
Atom parse_fact(std::string_view text);

// Full TGDs of a parsed program as Datalog rules (head-normal split first).
DatalogProgram to_program(std::span<const Tgd> tgds);

} // namespace gtgd
