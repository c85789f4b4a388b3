#pragma once

#include <cstdint>
#include <functional>
#include <set>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "optsp/boolfun.hpp"
#include "optsp/instances.hpp"

namespace optsp {

// Expression tree stored in an arena; children are node indices.
struct FormulaNode {
  enum class Kind { True, False, EdgeXX, EdgeXY, Not, And, Or };
  Kind kind = Kind::True;
  int a = 0;  // EdgeXX: i < j (0-based); EdgeXY: i
  int b = 0;
  int left = -1;
  int right = -1;
  bool operator==(const FormulaNode&) const = default;
};

struct GraphFormula {
  int k = 0;
  Objective objective = Objective::Max;
  std::vector<FormulaNode> nodes;
  int root = -1;

  // xx: bit p set when the p-th pair (in pair_index order) is an edge; xy: bit i = E(x_i, y)
  bool eval(std::uint32_t xx, std::uint32_t xy) const;
  bool operator==(const GraphFormula&) const = default;
};

// Pairs i < j numbered in lexicographic order.
int pair_count(int k);
int pair_index(int k, int i, int j);
std::pair<int, int> pair_at(int k, int p);

GraphFormula parse_formula(std::string_view text);
std::string print_formula(const GraphFormula& f);

// Every x-x atom replaced by false.
BooleanFunction derive_psi0(const GraphFormula& f);
// x-x atoms set from the pattern: bit p true when pair p is an edge.
BooleanFunction restrict_pattern(const GraphFormula& f, std::uint32_t pattern);

// Parts X_1..X_k and Y; x-y edges are kept as a vector instance over Y.
class GraphStructure {
 public:
  GraphStructure(std::vector<std::size_t> parts, std::size_t y_size);

  int k() const { return static_cast<int>(parts_.size()); }
  const std::vector<std::size_t>& parts() const { return parts_; }
  std::size_t y_size() const { return y_size_; }
  // total number of edges
  std::size_t sparsity() const { return xx_.size() + xy_count_; }

  void add_xx(int s, std::size_t i, int t, std::size_t j);
  void add_xy(int s, std::size_t i, std::size_t y);
  bool has_xx(int s, std::size_t i, int t, std::size_t j) const;
  std::size_t xx_degree(int s, std::size_t i) const { return degree_[s][i]; }
  std::uint32_t pattern(std::span<const std::size_t> tuple) const;
  // x-y edges as Boolean vectors over Y
  VectorInstance vectors() const;
  const std::set<std::tuple<int, std::size_t, int, std::size_t>>& xx_edges() const { return xx_; }
  const std::vector<std::tuple<int, std::size_t, std::size_t>>& xy_edges() const { return xy_; }

 private:
  std::vector<std::size_t> parts_;
  std::size_t y_size_;
  std::set<std::tuple<int, std::size_t, int, std::size_t>> xx_;
  std::set<std::tuple<int, std::size_t, std::size_t>> xy_set_;
  std::vector<std::tuple<int, std::size_t, std::size_t>> xy_;
  std::size_t xy_count_ = 0;
  std::vector<std::vector<std::size_t>> degree_;
};

GraphStructure parse_structure(std::string_view text);
std::string serialize_structure(const GraphStructure& g);

SolveResult baseline_graph_solve(const GraphFormula& f, const GraphStructure& g,
                                 std::uint64_t budget = kDefaultOracleBudget);

using VectorSolver = std::function<SolveResult(const HybridInstance&, Objective)>;

struct DecomposeOptions {
  std::optional<double> gamma;  // default 1 / (2k)
  std::uint64_t budget = kDefaultOracleBudget;
};

struct DecomposeStats {
  std::size_t heavy_vertices = 0;
  std::size_t boxes = 0;
  std::size_t boxes_solved = 0;
  std::size_t fallback_boxes = 0;
};

SolveResult decompose_graph_solve(const GraphFormula& f, const GraphStructure& g, const VectorSolver& solver = {},
                                  const DecomposeOptions& options = {}, DecomposeStats* stats = nullptr);

}  // namespace optsp
