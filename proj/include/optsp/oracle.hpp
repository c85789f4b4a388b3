#pragma once

#include <cstdint>
#include <vector>

#include "optsp/instances.hpp"

namespace optsp {

// Exhaustive reference solvers. Cost is counted as tuples times coordinates and
// checked against the budget before any work is done.

SolveResult oracle_solve(const HybridInstance& inst, Objective objective,
                         std::uint64_t budget = kDefaultOracleBudget);
// Values of all tuples in rank order.
std::vector<std::int64_t> oracle_all_values(const HybridInstance& inst, std::uint64_t budget = kDefaultOracleBudget);
// Zero-value tuples in lexicographic order.
std::vector<Tuple> oracle_list_zeros(const HybridInstance& inst, std::uint64_t budget = kDefaultOracleBudget);
bool oracle_zero_decider(const HybridInstance& inst, std::uint64_t budget = kDefaultOracleBudget);

struct PairResult {
  std::int64_t value = 0;
  std::size_t first = 0;
  std::size_t second = 0;
};
// Largest Hamming distance between a vector of side 0 and a vector of side 1.
PairResult exact_furthest_neighbor(const VectorInstance& inst, std::uint64_t budget = kDefaultOracleBudget);
// Largest number of coordinates where all chosen vectors are one.
SolveResult exact_maxip(const VectorInstance& inst, std::uint64_t budget = kDefaultOracleBudget);

void check_budget(const std::vector<std::size_t>& sizes, std::size_t dim, std::uint64_t budget);

}  // namespace optsp
