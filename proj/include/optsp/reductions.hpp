#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "optsp/boolfun.hpp"
#include "optsp/instances.hpp"

namespace optsp {

enum class Unary : std::uint8_t { Zero, One, Id, Negate };

// z_i is replaced by tags[i](z_i). Written as a string over 0, 1, I, N.
struct UnaryTransformation {
  std::vector<Unary> tags;

  static UnaryTransformation identity(int k);
  static UnaryTransformation parse(std::string_view text);
  std::string to_string() const;
  bool apply(int i, bool z) const;
  auto operator<=>(const UnaryTransformation&) const = default;
};

BooleanFunction transform(const BooleanFunction& f, const UnaryTransformation& tau);

struct GadgetEntry {
  UnaryTransformation tau;
  std::int64_t multiplicity = 1;
  bool operator==(const GadgetEntry&) const = default;
};

// sum_j mult_j * (f o tau_j) = beta1 - beta2 * z_1 ... z_k
struct Gadget {
  std::vector<GadgetEntry> entries;
  std::int64_t beta1 = 0;
  std::int64_t beta2 = 0;
  std::int64_t total() const;
};

MultilinearPoly gadget_sum(const BooleanFunction& f, const Gadget& g);
bool gadget_valid(const BooleanFunction& f, const Gadget& g);
// Needs degree(f) == arity(f) >= 1.
Gadget coordinate_gadget(const BooleanFunction& f);

// Least assignment of the variables outside set_mask whose restriction has full
// degree on set_mask (bits at the original positions).
std::optional<std::uint32_t> full_degree_restriction(const BooleanFunction& f, std::uint32_t set_mask);

struct ThresholdInstance {
  HybridInstance instance;
  std::int64_t threshold = 0;  // maximum reaches it exactly when the source answer is yes
};

// Orthogonal tuple exists iff the maximum is beta1 * d.
ThresholdInstance kov_to_vopt(const VectorInstance& ov, const BooleanFunction& f);
// Brute-force orthogonal tuple search.
std::optional<Tuple> find_orthogonal(const VectorInstance& ov, std::uint64_t budget = kDefaultOracleBudget);

// h-uniform k'-partite hypergraph; an edge lists one vertex in each of h distinct parts.
class Hypergraph {
 public:
  Hypergraph(int uniformity, std::vector<std::size_t> part_sizes);
  int uniformity() const { return h_; }
  int parts() const { return static_cast<int>(sizes_.size()); }
  const std::vector<std::size_t>& part_sizes() const { return sizes_; }

  // vertices: (part, index) pairs
  void add_edge(std::vector<std::pair<int, std::size_t>> vertices);
  bool has_edge(std::vector<std::pair<int, std::size_t>> vertices) const;
  std::size_t edge_count() const { return edges_.size(); }
  // one vertex per part such that every h-subset is an edge
  bool is_clique(std::span<const std::size_t> pick) const;

 private:
  std::vector<std::pair<int, std::size_t>> normalize(std::vector<std::pair<int, std::size_t>> v) const;
  int h_;
  std::vector<std::size_t> sizes_;
  std::set<std::vector<std::pair<int, std::size_t>>> edges_;
};

std::optional<Tuple> find_hyperclique(const Hypergraph& g, std::uint64_t budget = kDefaultOracleBudget);

// Parts are grouped into k consecutive blocks; side i enumerates the vertex
// tuples of block i. A k'-clique exists iff the maximum is the threshold.
ThresholdInstance hyperclique_to_vopt(const Hypergraph& g, int k, const BooleanFunction& f);
// Tuple of the output instance for a pick of one vertex per part.
Tuple clique_to_tuple(const Hypergraph& g, int k, std::span<const std::size_t> pick);

// Vectors where coordinate y only looks at the sides in active[y].
struct ActiveSetInstance {
  VectorInstance vectors;
  std::vector<std::uint32_t> active;  // side masks, one per coordinate
};
// sum over y of the product of x_a[y] for a in active[y]
std::int64_t active_value(const ActiveSetInstance& inst, std::span<const std::size_t> tuple);

struct Cnf {
  int variables = 0;
  std::vector<std::vector<int>> clauses;  // DIMACS literals
};
Cnf parse_dimacs(std::string_view text);
int satisfied_clauses(const Cnf& cnf, std::span<const std::uint8_t> assignment);

struct SplitList {
  ActiveSetInstance instance;  // d = number of clauses
  int vars_per_side = 0;       // variables padded up to k * vars_per_side
};
// Unsatisfied clauses = active value of the tuple for the joined assignment.
SplitList split_and_list_max3sat(const Cnf& cnf, int k);
Tuple assignment_to_tuple(const SplitList& s, std::span<const std::uint8_t> assignment);
std::vector<std::uint8_t> tuple_to_assignment(const SplitList& s, std::span<const std::size_t> tuple);

// Value-preserving for every tuple; needs hand(f) >= 3 and active sets of size 3.
VectorInstance k3maxip_to_vmax(const ActiveSetInstance& inst, const BooleanFunction& f);

struct AffineInstance {
  HybridInstance instance;
  std::int64_t beta1 = 0;  // new value = beta1 - beta2 * active value
  std::int64_t beta2 = 0;
};
// Active sets of size h = hdeg(f).
AffineInstance khmaxip_to_vmin(const ActiveSetInstance& inst, const BooleanFunction& f);

enum class K3Mode { Ov, MaxIp, ExactIp };
struct K3Answer {
  bool yes = false;
  std::int64_t value = 0;
  std::optional<Tuple> witness;
};
// Ov: some tuple of value 0. MaxIp: the largest value. ExactIp: some tuple of value target.
K3Answer solve_k3_bruteforce(const ActiveSetInstance& inst, K3Mode mode, std::int64_t target = 0,
                             std::uint64_t budget = kDefaultOracleBudget);

}  // namespace optsp
