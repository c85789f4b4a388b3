#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "optsp/boolfun.hpp"

namespace optsp {

using Tuple = std::vector<std::size_t>;

struct OneEntry {
  int side;
  std::size_t index;
  std::size_t coord;
  auto operator<=>(const OneEntry&) const = default;
};

// k sets of Boolean vectors over a common dimension, stored as sorted supports.
class VectorInstance {
 public:
  VectorInstance() = default;
  VectorInstance(std::vector<std::size_t> sizes, std::size_t dim);

  static VectorInstance from_ones(std::vector<std::size_t> sizes, std::size_t dim, std::span<const OneEntry> ones);
  // supports[side][index] lists coordinates equal to one; sorted and deduplicated here.
  static VectorInstance from_supports(std::size_t dim, std::vector<std::vector<std::vector<std::uint32_t>>> supports);

  int k() const { return static_cast<int>(sizes_.size()); }
  std::size_t size(int side) const { return sizes_[side]; }
  const std::vector<std::size_t>& sizes() const { return sizes_; }
  std::size_t dim() const { return dim_; }
  std::size_t sparsity() const { return m_; }

  std::span<const std::uint32_t> support(int side, std::size_t index) const { return support_[side][index]; }
  std::size_t weight(int side, std::size_t index) const { return support_[side][index].size(); }
  std::size_t side_weight(int side) const;
  bool entry(int side, std::size_t index, std::size_t coord) const;
  std::vector<OneEntry> ones() const;
  const std::vector<std::vector<std::vector<std::uint32_t>>>& supports() const { return support_; }

  bool operator==(const VectorInstance&) const = default;

 private:
  std::vector<std::size_t> sizes_;
  std::size_t dim_ = 0;
  std::size_t m_ = 0;
  std::vector<std::vector<std::vector<std::uint32_t>>> support_;
};

// Vector instance with a (possibly different) k-input function per coordinate.
// Functions are kept in a deduplicated palette; palette entry 0 is the default.
class HybridInstance {
 public:
  HybridInstance() = default;
  HybridInstance(VectorInstance vectors, BooleanFunction shared, Objective objective = Objective::Max);
  HybridInstance(VectorInstance vectors, std::vector<BooleanFunction> palette, std::vector<std::uint32_t> coord_fn,
                 Objective objective = Objective::Max);
  static HybridInstance per_coordinate(VectorInstance vectors, std::span<const BooleanFunction> fns,
                                       Objective objective = Objective::Max);

  const VectorInstance& vectors() const { return vectors_; }
  int k() const { return vectors_.k(); }
  std::size_t dim() const { return vectors_.dim(); }
  Objective objective() const { return objective_; }
  HybridInstance with_objective(Objective o) const;

  const std::vector<BooleanFunction>& palette() const { return palette_; }
  std::uint32_t palette_index(std::size_t y) const { return coord_fn_[y]; }
  const std::vector<std::uint32_t>& coord_fn() const { return coord_fn_; }
  const BooleanFunction& function_at(std::size_t y) const { return palette_[coord_fn_[y]]; }
  // True when every coordinate uses palette entry 0.
  bool uniform() const;
  // The function shared by all coordinates; throws when the instance is hybrid.
  const BooleanFunction& shared_function() const;
  // Functions actually used by some coordinate (palette indices).
  std::vector<std::uint32_t> used_palette() const;

  // sum over y of phi_y(0, ..., 0)
  std::int64_t zero_value() const;
  HybridInstance negated() const;

  bool operator==(const HybridInstance&) const = default;

 private:
  VectorInstance vectors_;
  std::vector<BooleanFunction> palette_;
  std::vector<std::uint32_t> coord_fn_;
  Objective objective_ = Objective::Max;
};

struct SolveResult {
  std::int64_t value = 0;
  std::optional<Tuple> witness;
};

inline constexpr std::uint64_t kDefaultOracleBudget = 10'000'000;

HybridInstance parse_instance(std::string_view text);
std::string serialize_instance(const HybridInstance& inst);
HybridInstance read_instance_file(const std::string& path);

VectorInstance gen_random(int k, std::size_t n, std::size_t d, double p, std::uint64_t seed);
VectorInstance gen_random(const std::vector<std::size_t>& sizes, std::size_t d, double p, std::uint64_t seed);

// Sparse evaluation of the objective for one tuple.
std::int64_t tuple_value(const HybridInstance& inst, std::span<const std::size_t> tuple);
// Number of coordinates where all vectors of sides in side_mask are one (side_mask nonempty).
std::int64_t generalized_ip(const VectorInstance& inst, std::span<const std::size_t> tuple, std::uint32_t side_mask);

bool better(Objective o, std::int64_t a, std::int64_t b);

struct ComplementTranslation {
  HybridInstance instance;  // every function negated, objective flipped
  std::int64_t offset;      // original value = offset - translated value
};
ComplementTranslation complement_translate(const HybridInstance& inst);

// Sub-instances. Side indices keep their relative order.
HybridInstance fix_sides(const HybridInstance& inst, std::span<const std::optional<std::size_t>> choice);
HybridInstance select_vectors(const HybridInstance& inst, const std::vector<std::vector<std::size_t>>& keep);
// New coordinate j copies coordinate coords[j] (repeats allowed).
HybridInstance project_coordinates(const HybridInstance& inst, std::span<const std::size_t> coords);

// Tuple ranks: side 0 most significant.
std::uint64_t tuple_count(const std::vector<std::size_t>& sizes);
Tuple tuple_unrank(const std::vector<std::size_t>& sizes, std::uint64_t rank);
std::uint64_t tuple_rank(const std::vector<std::size_t>& sizes, std::span<const std::size_t> tuple);
// Advance to the next tuple in lexicographic order; false after the last.
bool next_tuple(const std::vector<std::size_t>& sizes, Tuple& t);

std::string format_tuple(std::span<const std::size_t> t);

}  // namespace optsp
