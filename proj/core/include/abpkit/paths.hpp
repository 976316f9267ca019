#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>

#include "abpkit/abp.hpp"

namespace abpkit {

/// Number of paths in a segment, saturating at UINT64_MAX.
std::uint64_t count_paths(const Abp& p, const Segment& seg);

/// Calls `visit` with every path of the segment (as edge indices). Throws
/// BudgetExceeded after `cap` paths. The empty path is reported for from == to.
void for_each_path(const Abp& p, const Segment& seg, std::uint64_t cap,
                   const std::function<void(std::span<const EdgeIndex>)>& visit);

/// Brute-force [segment] as the sum of path weights. Independent of the DP in subprogram_poly.
MultilinearPoly path_sum_poly(const Abp& p, const Segment& seg, std::uint64_t cap = 10'000'000);

/// Some u -> v path, if one exists.
std::optional<Path> find_path(const Abp& p, NodeId u, NodeId v);

/// Product of labels along a path; throws MultilinearityError on a repeated variable.
MultilinearPoly path_weight(const Abp& p, std::span<const EdgeIndex> path);

/// Union of variable labels along a path, or nullopt if one repeats.
std::optional<Monomial> path_vars(const Abp& p, std::span<const EdgeIndex> path);

}  // namespace abpkit
