#pragma once

#include "gtgd/dependency.hpp"

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

namespace gtgd {

enum class Family : std::uint8_t { ExpVsSk, SkVsExb, SkVsHyp };

std::optional<Family> parse_family(std::string_view s);

// The separating families: ExbDR exponential against SkDR, SkDR exponential
// against ExbDR, SkDR exponential against HypDR.
std::vector<Tgd> gen_family(Family kind, std::size_t n);

// Every variable argument becomes b fresh variables; then up to max_extra
// random aux_<k> atoms per TGD are added (max_extra defaults to b).  An extra
// body atom uses guard variables only and comes with a full TGD from the
// guard that derives it, so the original TGD still fires.
std::vector<Tgd> gen_blowup(std::span<const Tgd> sigma, std::size_t b, std::uint64_t seed,
                            std::optional<std::size_t> max_extra = std::nullopt);

} // namespace gtgd
