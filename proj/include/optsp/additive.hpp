#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "optsp/instances.hpp"

namespace optsp {

inline constexpr double kDefaultReductionConstant = 8.0;

struct ReducedInstance {
  HybridInstance instance;
  double scale = 1.0;                // d / d'
  std::vector<std::size_t> coords;   // sampled source coordinates; empty for the identity
};

// Keeps d' = min(d, ceil(c eps^-2 ln(k sum n_i + 2))) coordinates sampled with replacement.
ReducedInstance dimension_reduce(const HybridInstance& inst, double eps, std::uint64_t seed,
                                 double c = kDefaultReductionConstant);

// One coordinate (y, j) per satisfying assignment alpha_j of phi_y; the generalized
// inner product of every tuple equals its value.
VectorInstance cover_to_maxip(const HybridInstance& inst);

using MaxIPSolver = std::function<SolveResult(const VectorInstance&)>;
// Enumerates all but the last two sides, then scans pairs on the common support.
SolveResult maxip_by_prefix(const VectorInstance& inst);

struct AdditiveResult {
  double value = 0.0;
  std::size_t reduced_dim = 0;
  std::optional<Tuple> witness;
};

// |value - OPT| <= eps d with high probability.
AdditiveResult additive_approx(const HybridInstance& inst, Objective objective, double eps, std::uint64_t seed,
                               const MaxIPSolver& solver = {}, double c = kDefaultReductionConstant);

}  // namespace optsp
