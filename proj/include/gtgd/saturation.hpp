#pragma once

#include "gtgd/dependency.hpp"

#include <chrono>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace gtgd {

enum class Algorithm : std::uint8_t { ExbDR, SkDR, HypDR, FullDR };

std::string to_string(Algorithm a);
std::optional<Algorithm> parse_algorithm(std::string_view s);

struct SaturationOptions {
    Algorithm algorithm = Algorithm::ExbDR;
    bool subsumption = true;
    bool lookahead = true;
    std::chrono::milliseconds timeout{std::chrono::hours(1)};
    // Clusters per polarity for the subsumption index; 0 = default.
    std::size_t clusters = 0;
    // Candidate retrieval through indexes, or by scanning the worked-off set.
    bool use_indexes = true;
    // FullDR only runs when the number of fresh variables it needs
    // (head width plus number of constants) is at most this.
    std::size_t fulldr_max_range = 6;
};

struct SaturationStats {
    std::size_t input_size = 0;
    std::size_t output_size = 0;
    std::size_t derived = 0;
    std::size_t fwd_subsumed = 0;
    std::size_t bwd_subsumed = 0;
    std::size_t tautologies = 0;
    std::size_t lookahead_dropped = 0;
    std::size_t duplicates = 0;
    std::size_t iterations = 0;
    std::size_t max_body_atoms = 0;
    double time_ms = 0;

    double blowup() const { return input_size ? double(output_size) / double(input_size) : 0.0; }
};

struct SaturationResult {
    DatalogProgram program;
    SaturationStats stats;
    // Worked-off set at the end: TGDs for ExbDR/FullDR, rules otherwise.
    std::vector<Tgd> worked_off_tgds;
    std::vector<Rule> worked_off_rules;
};

class SaturationTimeout : public std::runtime_error {
public:
    explicit SaturationTimeout(SaturationStats s)
        : std::runtime_error("saturation timed out"), stats(s) {}
    SaturationStats stats;
};

class SaturationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Rewrites guarded TGDs into a Datalog program with the same base-fact
// consequences on every instance.
SaturationResult saturate(std::span<const Tgd> sigma, const SaturationOptions& opts = {});

} // namespace gtgd
