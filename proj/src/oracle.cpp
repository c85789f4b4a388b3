#include "optsp/oracle.hpp"

#include <algorithm>

#include "optsp/error.hpp"

namespace optsp {

void check_budget(const std::vector<std::size_t>& sizes, std::size_t dim, std::uint64_t budget) {
  std::uint64_t cost = 1;
  const std::uint64_t factor = std::max<std::uint64_t>(dim, 1);
  for (auto n : sizes) {
    if (n != 0 && cost > budget / n) throw BudgetError("exhaustive evaluation exceeds the oracle budget");
    cost *= n;
  }
  if (cost != 0 && cost > budget / factor) throw BudgetError("exhaustive evaluation exceeds the oracle budget");
}

namespace {

// Dense copy of every vector plus a straightforward per-coordinate evaluation.
class DenseEvaluator {
 public:
  explicit DenseEvaluator(const HybridInstance& inst) : inst_(inst) {
    const auto& V = inst.vectors();
    bits_.resize(V.k());
    for (int i = 0; i < V.k(); ++i) {
      bits_[i].assign(V.size(i), std::vector<std::uint8_t>(V.dim(), 0));
      for (std::size_t x = 0; x < V.size(i); ++x)
        for (auto y : V.support(i, x)) bits_[i][x][y] = 1;
    }
  }

  std::int64_t value(const Tuple& t) const {
    std::int64_t v = 0;
    const int k = inst_.k();
    for (std::size_t y = 0; y < inst_.dim(); ++y) {
      std::uint32_t idx = 0;
      for (int i = 0; i < k; ++i)
        if (bits_[i][t[i]][y]) idx |= 1U << i;
      v += inst_.function_at(y).at(idx);
    }
    return v;
  }

 private:
  const HybridInstance& inst_;
  std::vector<std::vector<std::vector<std::uint8_t>>> bits_;
};

bool has_empty_side(const std::vector<std::size_t>& sizes) {
  return std::any_of(sizes.begin(), sizes.end(), [](std::size_t n) { return n == 0; });
}

}  // namespace

SolveResult oracle_solve(const HybridInstance& inst, Objective objective, std::uint64_t budget) {
  const auto& sizes = inst.vectors().sizes();
  if (has_empty_side(sizes)) throw PreconditionError("some side has no vectors");
  check_budget(sizes, inst.dim(), budget);
  DenseEvaluator ev(inst);
  Tuple t(sizes.size(), 0);
  SolveResult best;
  do {
    const auto v = ev.value(t);
    if (!best.witness || better(objective, v, best.value)) {
      best.value = v;
      best.witness = t;
    }
  } while (next_tuple(sizes, t));
  return best;
}

std::vector<std::int64_t> oracle_all_values(const HybridInstance& inst, std::uint64_t budget) {
  const auto& sizes = inst.vectors().sizes();
  if (has_empty_side(sizes)) return {};
  check_budget(sizes, inst.dim(), budget);
  DenseEvaluator ev(inst);
  std::vector<std::int64_t> out;
  out.reserve(tuple_count(sizes));
  Tuple t(sizes.size(), 0);
  do {
    out.push_back(ev.value(t));
  } while (next_tuple(sizes, t));
  return out;
}

std::vector<Tuple> oracle_list_zeros(const HybridInstance& inst, std::uint64_t budget) {
  const auto& sizes = inst.vectors().sizes();
  if (has_empty_side(sizes)) return {};
  check_budget(sizes, inst.dim(), budget);
  DenseEvaluator ev(inst);
  std::vector<Tuple> out;
  Tuple t(sizes.size(), 0);
  do {
    if (ev.value(t) == 0) out.push_back(t);
  } while (next_tuple(sizes, t));
  return out;
}

bool oracle_zero_decider(const HybridInstance& inst, std::uint64_t budget) {
  const auto& sizes = inst.vectors().sizes();
  if (has_empty_side(sizes)) return false;
  check_budget(sizes, inst.dim(), budget);
  DenseEvaluator ev(inst);
  Tuple t(sizes.size(), 0);
  do {
    if (ev.value(t) == 0) return true;
  } while (next_tuple(sizes, t));
  return false;
}

PairResult exact_furthest_neighbor(const VectorInstance& inst, std::uint64_t budget) {
  if (inst.k() != 2) throw PreconditionError("furthest neighbor needs exactly two sides");
  if (has_empty_side(inst.sizes())) throw PreconditionError("some side has no vectors");
  check_budget(inst.sizes(), inst.dim(), budget);
  PairResult best{-1, 0, 0};
  for (std::size_t a = 0; a < inst.size(0); ++a)
    for (std::size_t b = 0; b < inst.size(1); ++b) {
      const Tuple t{a, b};
      const auto common = generalized_ip(inst, t, 3U);
      const auto dist = static_cast<std::int64_t>(inst.weight(0, a) + inst.weight(1, b)) - 2 * common;
      if (dist > best.value) best = {dist, a, b};
    }
  return best;
}

SolveResult exact_maxip(const VectorInstance& inst, std::uint64_t budget) {
  if (inst.k() < 1) throw PreconditionError("inner product needs at least one side");
  if (has_empty_side(inst.sizes())) throw PreconditionError("some side has no vectors");
  check_budget(inst.sizes(), inst.dim(), budget);
  const std::uint32_t all = (1U << inst.k()) - 1;
  Tuple t(inst.k(), 0);
  SolveResult best;
  do {
    const auto v = generalized_ip(inst, t, all);
    if (!best.witness || v > best.value) {
      best.value = v;
      best.witness = t;
    }
  } while (next_tuple(inst.sizes(), t));
  return best;
}

}  // namespace optsp
