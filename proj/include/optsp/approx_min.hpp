#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <vector>

#include "optsp/approx_max.hpp"
#include "optsp/instances.hpp"

namespace optsp {

struct CandidateOptions {
  // Vectors of weight at least m^(delta/3) and prefixes shared by at least
  // m^(delta/3) candidates are handled by the baseline.
  double delta = 1.0;
};

// Exact value of every candidate tuple.
std::map<Tuple, std::int64_t> values_for_candidates(const HybridInstance& inst, const std::vector<Tuple>& candidates,
                                                    const CandidateOptions& options = {});

using ZeroDecider = std::function<bool(const HybridInstance&)>;
// Lists min(L, #zeros) tuples of value zero, sorted. Empty decider means the oracle.
using ZeroLister = std::function<std::vector<Tuple>(const HybridInstance&, std::size_t)>;

std::vector<Tuple> list_zeros_generic(const HybridInstance& inst, std::size_t limit, const ZeroDecider& decider = {});
// Needs a pair of sides without uniquely satisfiable restrictions (Hand <= 1) and k >= 2.
std::vector<Tuple> list_zeros_hand1(const HybridInstance& inst, std::size_t limit);

struct GapAnswer {
  bool small = false;  // a witness of value <= c * t was found
  std::optional<Tuple> witness;
  std::int64_t value = 0;
};

struct GapOptions {
  std::optional<std::size_t> repetitions;  // default ceil(log2 n) + 3
  CandidateOptions candidates;
};

// "small" is always backed by a checked witness; when OPT <= t it is found with
// good probability.
GapAnswer lsh_gap_decide(const HybridInstance& inst, std::int64_t t, double c, double gamma, const ZeroLister& lister,
                         std::uint64_t seed, const GapOptions& options = {});

// Binary search over t with the generic lister; ratio c.
ApproxResult approx_min_constant(const HybridInstance& inst, std::uint64_t seed, const ZeroDecider& decider = {},
                                 double c = 3.0, double gamma = 1.0);
// Hand <= 1: ratio 1 + eps with the pair lister.
ApproxResult approx_min_scheme(const HybridInstance& inst, double eps, std::uint64_t seed);

}  // namespace optsp
