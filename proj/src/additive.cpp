#include "optsp/additive.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "optsp/error.hpp"
#include "optsp/oracle.hpp"
#include "optsp/rng.hpp"

namespace optsp {

ReducedInstance dimension_reduce(const HybridInstance& inst, double eps, std::uint64_t seed, double c) {
  if (!(eps > 0.0)) throw RangeError("eps must be positive");
  const auto& sizes = inst.vectors().sizes();
  const double vectors = static_cast<double>(std::accumulate(sizes.begin(), sizes.end(), std::size_t{0}));
  const double want = std::ceil(c / (eps * eps) * std::log(inst.k() * vectors + 2.0));
  const std::size_t d = inst.dim();
  if (want >= static_cast<double>(d)) return {inst, 1.0, {}};
  const auto reduced = static_cast<std::size_t>(std::max(want, 1.0));
  SplitMix64 rng(seed);
  std::vector<std::size_t> coords(reduced);
  for (auto& y : coords) y = rng.below(d);
  auto projected = project_coordinates(inst, coords);
  return {std::move(projected), static_cast<double>(d) / static_cast<double>(reduced), std::move(coords)};
}

VectorInstance cover_to_maxip(const HybridInstance& inst) {
  const auto& V = inst.vectors();
  const int k = V.k();
  std::vector<SatisfyingAnalysis> sat(inst.palette().size());
  for (auto p : inst.used_palette()) sat[p] = analyze_satisfying(inst.palette()[p]);
  std::vector<std::vector<std::vector<std::uint32_t>>> sup(k);
  for (int i = 0; i < k; ++i) sup[i].resize(V.size(i));
  std::uint32_t next = 0;
  for (std::size_t y = 0; y < V.dim(); ++y)
    for (const auto& alpha : sat[inst.palette_index(y)].assignments) {
      for (int i = 0; i < k; ++i)
        for (std::size_t x = 0; x < V.size(i); ++x)
          if (V.entry(i, x, y) == (alpha[i] != 0)) sup[i][x].push_back(next);
      ++next;
    }
  return VectorInstance::from_supports(next, std::move(sup));
}

SolveResult maxip_by_prefix(const VectorInstance& inst) {
  const int k = inst.k();
  if (k <= 2) return exact_maxip(inst);
  for (auto n : inst.sizes())
    if (n == 0) throw PreconditionError("some side has no vectors");
  const std::vector<std::size_t> head(inst.sizes().begin(), inst.sizes().end() - 2);
  SolveResult best;
  Tuple t(k - 2, 0);
  do {
    // coordinates where every fixed vector is one
    auto s0 = inst.support(0, t[0]);
    std::vector<std::uint32_t> common(s0.begin(), s0.end());
    for (int i = 1; i < k - 2; ++i) {
      const auto s = inst.support(i, t[i]);
      std::vector<std::uint32_t> keep;
      std::set_intersection(common.begin(), common.end(), s.begin(), s.end(), std::back_inserter(keep));
      common = std::move(keep);
    }
    std::vector<std::vector<std::vector<std::uint32_t>>> sup(2);
    for (int side = 0; side < 2; ++side)
      for (std::size_t x = 0; x < inst.size(k - 2 + side); ++x) {
        const auto s = inst.support(k - 2 + side, x);
        std::vector<std::uint32_t> keep;
        std::set_intersection(common.begin(), common.end(), s.begin(), s.end(), std::back_inserter(keep));
        sup[side].push_back(std::move(keep));
      }
    const auto pair = exact_maxip(VectorInstance::from_supports(inst.dim(), std::move(sup)));
    if (!best.witness || pair.value > best.value) {
      Tuple w = t;
      w.insert(w.end(), pair.witness->begin(), pair.witness->end());
      best = {pair.value, std::move(w)};
    }
  } while (next_tuple(head, t));
  return best;
}

AdditiveResult additive_approx(const HybridInstance& inst, Objective objective, double eps, std::uint64_t seed,
                               const MaxIPSolver& solver, double c) {
  if (!(eps > 0.0)) throw RangeError("eps must be positive");
  for (auto n : inst.vectors().sizes())
    if (n == 0) throw PreconditionError("some side has no vectors");
  const MaxIPSolver& solve = solver ? solver : MaxIPSolver(maxip_by_prefix);
  const auto d = static_cast<double>(inst.dim());
  if (objective == Objective::Max) {
    const auto red = dimension_reduce(inst, eps, seed, c);
    const auto r = solve(cover_to_maxip(red.instance));
    return {red.scale * static_cast<double>(r.value), red.instance.dim(), r.witness};
  }
  // minimum of phi = d' minus the maximum of the negated functions, rescaled
  const auto red = dimension_reduce(inst, eps / 2.0, seed, c);
  const auto r = solve(cover_to_maxip(red.instance.negated()));
  return {d - red.scale * static_cast<double>(r.value), red.instance.dim(), r.witness};
}

}  // namespace optsp
