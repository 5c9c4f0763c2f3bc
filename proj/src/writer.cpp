#include "gtgd/writer.hpp"

#include <algorithm>

namespace gtgd {

namespace {

template <class Clause>
std::string write_sorted(std::span<const Clause> clauses)
{
    std::vector<std::string> lines;
    lines.reserve(clauses.size());
    for (const auto& c : clauses)
        lines.push_back(to_string(normalize(c)));
    std::sort(lines.begin(), lines.end());
    lines.erase(std::unique(lines.begin(), lines.end()), lines.end());
    std::string out;
    for (const auto& l : lines)
        out += l + "\n";
    return out;
}

} // namespace

std::string write_program(std::span<const Rule> program)
{
    return write_sorted(program);
}

std::string write_tgds(std::span<const Tgd> tgds)
{
    return write_sorted(tgds);
}

std::string write_instance(const Instance& facts)
{
    std::vector<std::string> lines;
    for (const auto& f : facts)
        lines.push_back(to_string(f) + ".");
    std::sort(lines.begin(), lines.end());
    std::string out;
    for (const auto& l : lines)
        out += l + "\n";
    return out;
}

} // namespace gtgd
