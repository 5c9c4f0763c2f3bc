#pragma once

#include "gtgd/saturation.hpp"

#include <string>

namespace gtgd {

struct BenchmarkRow {
    std::string input;
    std::string algorithm;
    std::size_t input_size = 0;
    std::size_t output_size = 0;
    double blowup = 0;
    std::size_t max_body_atoms = 0;
    std::size_t derived = 0;
    std::size_t fwd_subsumed = 0;
    std::size_t bwd_subsumed = 0;
    double time_ms = 0;
    std::string status; // ok, timeout, error
};

BenchmarkRow make_row(std::string input, Algorithm a, const SaturationStats& s, std::string status);

std::string csv_header();
std::string to_csv(const BenchmarkRow& r);

// Appends the row, writing the header first if the file is empty.  Holds an
// exclusive lock on the file while writing.
void append_csv(const std::string& path, const BenchmarkRow& r);

} // namespace gtgd
