#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>

#include "optsp/error.hpp"
#include "optsp/exact.hpp"

namespace optsp {

WeightedHypergraph::WeightedHypergraph(int uniformity, std::vector<std::size_t> part_sizes)
    : h_(uniformity), sizes_(std::move(part_sizes)) {
  const int k = parts();
  if (k < 1 || k > 16) throw RangeError("hypergraph needs between 1 and 16 parts");
  if (h_ < 1 || h_ > k) throw RangeError("uniformity must lie between 1 and the number of parts");
  subsets_ = subsets_of_size(k, h_);
  slot_index_.assign(std::size_t{1} << k, -1);
  for (std::size_t s = 0; s < subsets_.size(); ++s) {
    slot_index_[subsets_[s]] = static_cast<std::int64_t>(s);
    std::size_t n = 1;
    for (int p : mask_indices(subsets_[s])) n *= sizes_[p];
    weights_.emplace_back(n, 0);
    present_.emplace_back(n, 0);
  }
}

std::size_t WeightedHypergraph::slot_of(std::uint32_t part_mask) const {
  if (part_mask >= slot_index_.size() || slot_index_[part_mask] < 0) throw RangeError("not an edge part set");
  return static_cast<std::size_t>(slot_index_[part_mask]);
}

std::size_t WeightedHypergraph::key_of(std::uint32_t part_mask, std::span<const std::size_t> vertices) const {
  std::size_t key = 0, j = 0;
  for (int p = 0; p < parts(); ++p) {
    if (!(part_mask >> p & 1U)) continue;
    if (j >= vertices.size() || vertices[j] >= sizes_[p]) throw RangeError("edge vertex out of range");
    key = key * sizes_[p] + vertices[j++];
  }
  if (j != vertices.size()) throw RangeError("edge has the wrong number of vertices");
  return key;
}

void WeightedHypergraph::set_weight(std::uint32_t part_mask, std::span<const std::size_t> vertices, std::int64_t w) {
  const auto s = slot_of(part_mask);
  const auto key = key_of(part_mask, vertices);
  weights_[s][key] = w;
  present_[s][key] = 1;
}

void WeightedHypergraph::add_weight(std::uint32_t part_mask, std::span<const std::size_t> vertices, std::int64_t w) {
  const auto s = slot_of(part_mask);
  const auto key = key_of(part_mask, vertices);
  weights_[s][key] += w;
  present_[s][key] = 1;
}

void WeightedHypergraph::remove_edge(std::uint32_t part_mask, std::span<const std::size_t> vertices) {
  present_[slot_of(part_mask)][key_of(part_mask, vertices)] = 0;
}

std::optional<std::int64_t> WeightedHypergraph::weight(std::uint32_t part_mask,
                                                       std::span<const std::size_t> vertices) const {
  const auto s = slot_of(part_mask);
  const auto key = key_of(part_mask, vertices);
  if (!present_[s][key]) return std::nullopt;
  return weights_[s][key];
}

std::optional<std::int64_t> WeightedHypergraph::weight_in(std::uint32_t part_mask,
                                                          std::span<const std::size_t> clique) const {
  std::size_t key = 0;
  for (int p = 0; p < parts(); ++p)
    if (part_mask >> p & 1U) key = key * sizes_[p] + clique[p];
  const auto s = slot_of(part_mask);
  if (!present_[s][key]) return std::nullopt;
  return weights_[s][key];
}

std::size_t WeightedHypergraph::edge_count() const {
  std::size_t c = 0;
  for (const auto& p : present_) c += static_cast<std::size_t>(std::count(p.begin(), p.end(), 1));
  return c;
}

std::vector<std::size_t> WeightedHypergraph::slot_vertices(std::size_t slot, std::size_t key) const {
  const auto ps = mask_indices(subsets_[slot]);
  std::vector<std::size_t> v(ps.size());
  for (std::size_t j = ps.size(); j-- > 0;) {
    v[j] = key % sizes_[ps[j]];
    key /= sizes_[ps[j]];
  }
  return v;
}

std::optional<std::int64_t> clique_weight(const WeightedHypergraph& g, std::span<const std::size_t> clique) {
  std::int64_t total = 0;
  for (auto m : g.part_subsets()) {
    auto w = g.weight_in(m, clique);
    if (!w) return std::nullopt;
    total += *w;
  }
  return total;
}

namespace {

// Depth-first over parts; edges are checked as soon as their highest part is assigned.
class CliqueSearch {
 public:
  explicit CliqueSearch(const WeightedHypergraph& g) : g_(g), closing_(g.parts()) {
    for (auto m : g.part_subsets()) closing_[31 - std::countl_zero(m)].push_back(m);
  }

  // visit(clique) returns false to stop
  template <class Visit>
  void run(const std::vector<std::optional<std::size_t>>& fixed, Visit&& visit) {
    std::vector<std::size_t> cur(g_.parts(), 0);
    bool stop = false;
    rec(0, fixed, cur, visit, stop);
  }

 private:
  template <class Visit>
  void rec(int p, const std::vector<std::optional<std::size_t>>& fixed, std::vector<std::size_t>& cur, Visit& visit,
           bool& stop) {
    if (p == g_.parts()) {
      if (!visit(cur)) stop = true;
      return;
    }
    const std::size_t lo = fixed[p] ? *fixed[p] : 0;
    const std::size_t hi = fixed[p] ? *fixed[p] + 1 : g_.part_size(p);
    for (std::size_t v = lo; v < hi && !stop; ++v) {
      cur[p] = v;
      bool ok = true;
      for (auto m : closing_[p])
        if (!g_.weight_in(m, cur)) {
          ok = false;
          break;
        }
      if (ok) rec(p + 1, fixed, cur, visit, stop);
    }
  }

  const WeightedHypergraph& g_;
  std::vector<std::vector<std::uint32_t>> closing_;
};

struct Best {
  bool found = false;
  std::int64_t weight = 0;
  std::vector<std::size_t> clique;

  void offer(std::int64_t w, const std::vector<std::size_t>& c) {
    if (!found || w > weight || (w == weight && c < clique)) {
      found = true;
      weight = w;
      clique = c;
    }
  }
};

}  // namespace

std::optional<std::vector<std::size_t>> exhaustive_clique_detector(const WeightedHypergraph& g) {
  std::optional<std::vector<std::size_t>> out;
  CliqueSearch search(g);
  search.run(std::vector<std::optional<std::size_t>>(g.parts()), [&](const std::vector<std::size_t>& c) {
    out = c;
    return false;
  });
  return out;
}

HypercliqueResult max_weight_hyperclique(const WeightedHypergraph& g, const CliqueDetector& detector,
                                         const HypercliqueOptions& options) {
  const int k = g.parts();
  const double binom = static_cast<double>(g.part_subsets().size());
  const double gamma = options.gamma.value_or(1.0 / (2.0 * binom));
  const std::size_t n = *std::max_element(g.part_sizes().begin(), g.part_sizes().end());
  const double threshold = std::pow(static_cast<double>(std::max<std::size_t>(n, 1)), gamma);

  HypercliqueResult res;
  Best best;
  WeightedHypergraph light = g;
  const auto& subsets = g.part_subsets();

  // cliques through a heavy edge, by completing every heavy edge
  CliqueSearch full(g);
  for (std::size_t s = 0; s < subsets.size(); ++s) {
    const auto ps = mask_indices(subsets[s]);
    for (std::size_t key = 0; key < g.slot_size(s); ++key) {
      if (!g.slot_present(s, key)) continue;
      if (std::fabs(static_cast<double>(g.slot_weight(s, key))) <= threshold) continue;
      ++res.heavy_edges;
      light.slot_remove(s, key);
      std::vector<std::optional<std::size_t>> fixed(k);
      const auto vs = g.slot_vertices(s, key);
      for (std::size_t j = 0; j < ps.size(); ++j) fixed[ps[j]] = vs[j];
      full.run(fixed, [&](const std::vector<std::size_t>& c) {
        best.offer(*clique_weight(g, c), c);
        return true;
      });
    }
  }

  // light cliques: guess the weight of each part subset, then ask the detector
  std::vector<std::vector<std::int64_t>> values(subsets.size());
  bool any_empty = false;
  long double combos = 1;
  for (std::size_t s = 0; s < subsets.size(); ++s) {
    for (std::size_t key = 0; key < light.slot_size(s); ++key)
      if (light.slot_present(s, key)) values[s].push_back(light.slot_weight(s, key));
    std::sort(values[s].begin(), values[s].end(), std::greater<>());
    values[s].erase(std::unique(values[s].begin(), values[s].end()), values[s].end());
    if (values[s].empty()) any_empty = true;
    combos *= static_cast<long double>(values[s].size());
  }

  if (!any_empty && combos > static_cast<long double>(options.combination_cap)) {
    res.used_fallback = true;
    CliqueSearch search(light);
    search.run(std::vector<std::optional<std::size_t>>(k), [&](const std::vector<std::size_t>& c) {
      best.offer(*clique_weight(light, c), c);
      return true;
    });
  } else if (!any_empty) {
    struct Combo {
      std::int64_t sum;
      std::vector<std::uint32_t> pick;
    };
    std::vector<Combo> all;
    std::vector<std::uint32_t> pick(subsets.size(), 0);
    while (true) {
      std::int64_t sum = 0;
      for (std::size_t s = 0; s < subsets.size(); ++s) sum += values[s][pick[s]];
      all.push_back({sum, pick});
      std::size_t s = subsets.size();
      while (s-- > 0) {
        if (++pick[s] < values[s].size()) break;
        pick[s] = 0;
      }
      if (s == static_cast<std::size_t>(-1)) break;
    }
    std::stable_sort(all.begin(), all.end(), [](const Combo& a, const Combo& b) { return a.sum > b.sum; });
    std::optional<std::int64_t> hit_sum;
    for (const auto& combo : all) {
      if (hit_sum && combo.sum < *hit_sum) break;
      WeightedHypergraph filtered = light;
      for (std::size_t s = 0; s < subsets.size(); ++s)
        for (std::size_t key = 0; key < filtered.slot_size(s); ++key)
          if (filtered.slot_present(s, key) && filtered.slot_weight(s, key) != values[s][combo.pick[s]])
            filtered.slot_remove(s, key);
      ++res.combinations_tested;
      if (auto c = detector(filtered)) {
        if (!clique_weight(filtered, *c)) throw PreconditionError("clique detector returned a non-clique");
        hit_sum = combo.sum;
        best.offer(combo.sum, *c);
      }
    }
  }

  if (!best.found) throw PreconditionError("hypergraph contains no clique");
  res.weight = best.weight;
  res.clique = best.clique;
  return res;
}

}  // namespace optsp
