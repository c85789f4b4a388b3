#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "optsp/instances.hpp"

namespace optsp {

// Downward self-reduction: fix side 0, recurse on the hybrid instance over the
// remaining sides; a single side is scored directly from its support.
SolveResult baseline_solve(const HybridInstance& inst, Objective objective);
std::vector<std::int64_t> baseline_all_values(const HybridInstance& inst);

// Sides whose pair has no monomial above it in any coordinate function.
std::optional<std::pair<int, int>> linear_pair(const HybridInstance& inst);
// Exact for instances where linear_pair exists; throws otherwise.
SolveResult solve_hdeg1(const HybridInstance& inst, Objective objective);

// k-partite h-uniform hypergraph with integer edge weights. Edges of a part
// subset I are stored densely, indexed in mixed radix over the parts of I.
class WeightedHypergraph {
 public:
  WeightedHypergraph(int uniformity, std::vector<std::size_t> part_sizes);

  int uniformity() const { return h_; }
  int parts() const { return static_cast<int>(sizes_.size()); }
  std::size_t part_size(int p) const { return sizes_[p]; }
  const std::vector<std::size_t>& part_sizes() const { return sizes_; }
  // part subsets of size h, in index-list order
  const std::vector<std::uint32_t>& part_subsets() const { return subsets_; }

  // `vertices` lists one vertex per part of part_mask, parts ascending.
  void set_weight(std::uint32_t part_mask, std::span<const std::size_t> vertices, std::int64_t w);
  void add_weight(std::uint32_t part_mask, std::span<const std::size_t> vertices, std::int64_t w);
  void remove_edge(std::uint32_t part_mask, std::span<const std::size_t> vertices);
  std::optional<std::int64_t> weight(std::uint32_t part_mask, std::span<const std::size_t> vertices) const;
  // Same, with the vertices read from a full clique assignment.
  std::optional<std::int64_t> weight_in(std::uint32_t part_mask, std::span<const std::size_t> clique) const;
  std::size_t edge_count() const;

  // Raw access per subset slot (position in part_subsets()).
  std::size_t slot_size(std::size_t slot) const { return weights_[slot].size(); }
  bool slot_present(std::size_t slot, std::size_t key) const { return present_[slot][key] != 0; }
  std::int64_t slot_weight(std::size_t slot, std::size_t key) const { return weights_[slot][key]; }
  std::vector<std::size_t> slot_vertices(std::size_t slot, std::size_t key) const;
  void slot_remove(std::size_t slot, std::size_t key) { present_[slot][key] = 0; }

 private:
  std::size_t slot_of(std::uint32_t part_mask) const;
  std::size_t key_of(std::uint32_t part_mask, std::span<const std::size_t> vertices) const;

  int h_;
  std::vector<std::size_t> sizes_;
  std::vector<std::uint32_t> subsets_;
  std::vector<std::int64_t> slot_index_;  // part mask -> slot or -1
  std::vector<std::vector<std::int64_t>> weights_;
  std::vector<std::vector<std::uint8_t>> present_;
};

// Total weight of a clique, or nothing when some h-subset is not an edge.
std::optional<std::int64_t> clique_weight(const WeightedHypergraph& g, std::span<const std::size_t> clique);

// Unweighted decision: return a clique (one vertex per part, all h-subsets present) or nothing.
using CliqueDetector = std::function<std::optional<std::vector<std::size_t>>(const WeightedHypergraph&)>;
std::optional<std::vector<std::size_t>> exhaustive_clique_detector(const WeightedHypergraph& g);

struct HypercliqueOptions {
  std::optional<double> gamma;  // default 1 / (2 * C(k, h))
  std::uint64_t combination_cap = 1'000'000;
};

struct HypercliqueResult {
  std::int64_t weight = 0;
  std::vector<std::size_t> clique;
  std::size_t heavy_edges = 0;
  std::size_t combinations_tested = 0;
  bool used_fallback = false;
};

HypercliqueResult max_weight_hyperclique(const WeightedHypergraph& g, const CliqueDetector& detector = exhaustive_clique_detector,
                                         const HypercliqueOptions& options = {});

struct ViaHypercliqueOptions {
  // Sides kept for the hypergraph (h+1 of them); default is the least valid choice.
  std::optional<std::vector<int>> core_sides;
  HypercliqueOptions hyperclique;
};

SolveResult solve_via_hyperclique(const HybridInstance& inst, Objective objective,
                                  const CliqueDetector& detector = exhaustive_clique_detector,
                                  const ViaHypercliqueOptions& options = {});

struct AutoResult {
  SolveResult result;
  std::string strategy;
};
AutoResult solve_exact_auto(const HybridInstance& inst, Objective objective);

}  // namespace optsp
