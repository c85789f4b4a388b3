#pragma once

#include <cstdint>
#include <functional>
#include <optional>

#include "optsp/instances.hpp"
#include "optsp/oracle.hpp"

namespace optsp {

struct ApproxResult {
  SolveResult result;  // value is the exact value of the witness
  double ratio = 1.0;  // certified factor
};

// For a function with exactly one satisfying assignment alpha: is some
// coordinate y hit by a vector x_i with x_i[y] = alpha_i on every side?
bool detect_positive(const HybridInstance& inst);
// A tuple of positive value when one exists (least coordinate, least indices).
std::optional<Tuple> positive_witness(const HybridInstance& inst);

// Every coordinate function must be closed under complementing all inputs.
// Ratio k + 1.
ApproxResult approx_opposite(const HybridInstance& inst);
// Shared function with at least two satisfying assignments (l of them). Ratio l(k + 1).
ApproxResult approx_constant(const HybridInstance& inst);
// Shared function; v * max(m, 1)^eps >= OPT.
ApproxResult approx_polyfactor(const HybridInstance& inst, double eps);

// Furthest-neighbor plug-in: two sides, returns the best pair it finds.
using FurthestNeighborSolver = std::function<PairResult(const VectorInstance&)>;

struct SchemeOptions {
  // Rewritten instances larger than this (vectors times coordinates) are rejected.
  std::uint64_t rewrite_budget = 50'000'000;
  // Replace the disagreement coordinates by OR-hashing into this many buckets.
  // The result then reports an infinite (uncertified) ratio.
  std::optional<std::size_t> hash_buckets;
  std::uint64_t seed = 0;
};

// Residual two-variable instance rewritten into agreement/disagreement coordinates.
struct RewrittenPair {
  HybridInstance instance;     // two sides, each coordinate "1001" or "0110"
  std::int64_t constant = 0;   // coordinates whose function was constant true
  // instance value + 2 * constant = 2 * residual value, for every pair
};
RewrittenPair rewrite_pair(const HybridInstance& residual);
// Complement side 0 on agreement coordinates, leaving a pure disagreement count.
VectorInstance to_furthest_neighbor(const RewrittenPair& rp);
// OR-hash a set of coordinates into `buckets` fresh ones; the others are kept.
VectorInstance or_hash(const VectorInstance& inst, std::size_t buckets, std::uint64_t seed);

// Hand <= 1 with a shared pair of sides; exact when the plug-in is exact.
ApproxResult approx_scheme_max(const HybridInstance& inst, double eps,
                               const FurthestNeighborSolver& fn_solver = {}, const SchemeOptions& options = {});

// The pair of sides whose restrictions never leave a unique satisfying assignment.
std::optional<std::pair<int, int>> hand1_pair(const HybridInstance& inst);

}  // namespace optsp
