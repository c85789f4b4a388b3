#include "optsp/approx_max.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>

#include "optsp/error.hpp"
#include "optsp/exact.hpp"
#include "optsp/rng.hpp"

namespace optsp {

namespace {

void require_nonempty(const HybridInstance& inst) {
  for (auto n : inst.vectors().sizes())
    if (n == 0) throw PreconditionError("some side has no vectors");
}

Tuple merge_choice(const std::vector<std::optional<std::size_t>>& choice, const Tuple& rest) {
  Tuple out(choice.size());
  std::size_t j = 0;
  for (std::size_t i = 0; i < choice.size(); ++i) out[i] = choice[i] ? *choice[i] : rest[j++];
  return out;
}

struct Keeper {
  SolveResult best;
  void offer(const HybridInstance& inst, const Tuple& t) {
    const auto v = tuple_value(inst, t);
    if (!best.witness || v > best.value) {
      best.value = v;
      best.witness = t;
    }
  }
};

// best completion with side i fixed to vector x, exact
SolveResult fixed_side_max(const HybridInstance& inst, int side, std::size_t x) {
  std::vector<std::optional<std::size_t>> choice(inst.k());
  choice[side] = x;
  const auto r = baseline_solve(fix_sides(inst, choice), Objective::Max);
  return {r.value, merge_choice(choice, *r.witness)};
}

ApproxResult exact_fallback(const HybridInstance& inst) { return {baseline_solve(inst, Objective::Max), 1.0}; }

}  // namespace

std::optional<Tuple> positive_witness(const HybridInstance& inst) {
  const auto& V = inst.vectors();
  const int k = V.k();
  const std::size_t d = V.dim();
  for (int i = 0; i < k; ++i)
    if (V.size(i) == 0) return std::nullopt;
  // ones[i][y]: how many vectors of side i have a one at y
  std::vector<std::vector<std::size_t>> ones(k, std::vector<std::size_t>(d, 0));
  for (int i = 0; i < k; ++i)
    for (std::size_t x = 0; x < V.size(i); ++x)
      for (auto y : V.support(i, x)) ++ones[i][y];
  std::vector<std::vector<std::uint32_t>> sat(inst.palette().size());
  for (std::size_t p = 0; p < sat.size(); ++p)
    for (std::uint32_t b = 0; b < inst.palette()[p].table_size(); ++b)
      if (inst.palette()[p].at(b)) sat[p].push_back(b);
  for (std::size_t y = 0; y < d; ++y) {
    for (auto alpha : sat[inst.palette_index(y)]) {
      bool ok = true;
      for (int i = 0; i < k && ok; ++i) {
        const bool want = alpha >> i & 1U;
        ok = want ? ones[i][y] > 0 : ones[i][y] < V.size(i);
      }
      if (!ok) continue;
      Tuple t(k);
      for (int i = 0; i < k; ++i) {
        const bool want = alpha >> i & 1U;
        std::size_t x = 0;
        while (V.entry(i, x, y) != want) ++x;
        t[i] = x;
      }
      return t;
    }
  }
  return std::nullopt;
}

bool detect_positive(const HybridInstance& inst) { return positive_witness(inst).has_value(); }

ApproxResult approx_opposite(const HybridInstance& inst) {
  for (auto p : inst.used_palette())
    if (!analyze_satisfying(inst.palette()[p]).opposite)
      throw PreconditionError("coordinate function is not closed under complement");
  require_nonempty(inst);
  const int k = inst.k();
  Keeper keep;
  keep.offer(inst, Tuple(k, 0));
  for (int i = 0; i < k; ++i) {
    const auto r = fixed_side_max(inst, i, 0);
    keep.offer(inst, *r.witness);
  }
  return {keep.best, static_cast<double>(k + 1)};
}

ApproxResult approx_constant(const HybridInstance& inst) {
  const auto& f = inst.shared_function();
  const auto sat = analyze_satisfying(f);
  const int k = inst.k();
  const std::size_t l = sat.assignments.size();
  if (l < 2) throw PreconditionError("need at least two satisfying assignments");
  require_nonempty(inst);

  auto index_of = [k](const std::vector<std::uint8_t>& a) {
    std::uint32_t b = 0;
    for (int i = 0; i < k; ++i)
      if (a[i]) b |= 1U << i;
    return b;
  };
  const std::uint32_t first = index_of(sat.assignments[0]);
  Keeper keep;
  for (std::size_t j = 1; j < l; ++j) {
    const std::uint32_t other = index_of(sat.assignments[j]);
    const auto pair_fn =
        BooleanFunction::from_predicate(k, [&](std::uint32_t b) { return b == first || b == other; });
    const HybridInstance pinst(inst.vectors(), pair_fn);
    const std::uint32_t diff = first ^ other;
    if (std::popcount(diff) == 1) {
      // the pair function ignores that input
      const auto r = fixed_side_max(pinst, std::countr_zero(diff), 0);
      keep.offer(inst, *r.witness);
      continue;
    }
    // enumerate the sides where both assignments agree; the rest is an opposite instance
    const auto& V = inst.vectors();
    std::vector<int> agree;
    for (int i = 0; i < k; ++i)
      if (!(diff >> i & 1U)) agree.push_back(i);
    std::vector<std::size_t> sizes;
    for (int i : agree) sizes.push_back(V.size(i));
    Tuple t(agree.size(), 0);
    do {
      std::vector<std::optional<std::size_t>> choice(k);
      for (std::size_t a = 0; a < agree.size(); ++a) choice[agree[a]] = t[a];
      const auto r = approx_opposite(fix_sides(pinst, choice));
      keep.offer(inst, merge_choice(choice, *r.result.witness));
    } while (next_tuple(sizes, t));
  }
  return {keep.best, static_cast<double>(l) * (k + 1)};
}

ApproxResult approx_polyfactor(const HybridInstance& inst, double eps) {
  if (!(eps > 0.0)) throw RangeError("eps must be positive");
  const auto& f = inst.shared_function();
  require_nonempty(inst);
  const auto& V = inst.vectors();
  const int k = inst.k();
  const double bound = std::pow(static_cast<double>(std::max<std::size_t>(V.sparsity(), 1)), eps);
  const auto sat = analyze_satisfying(f);

  if (sat.assignments.empty()) {
    const Tuple t(k, 0);
    return {{0, t}, 1.0};
  }
  if (!sat.unique_sat) {
    // the constant-factor guarantee only helps once it beats m^eps
    const double r = static_cast<double>(sat.assignments.size()) * (k + 1);
    if (r <= bound) return approx_constant(inst);
    return exact_fallback(inst);
  }

  const auto& alpha = sat.assignments[0];
  Keeper keep;
  int one_side = -1;
  for (int i = 0; i < k; ++i)
    if (alpha[i]) {
      one_side = i;
      break;
    }
  if (one_side >= 0) {
    // sparse vectors cap the value by their weight, so one satisfied coordinate suffices
    std::vector<std::vector<std::size_t>> keep_idx(k);
    for (int i = 0; i < k; ++i)
      for (std::size_t x = 0; x < V.size(i); ++x)
        if (i != one_side || static_cast<double>(V.weight(i, x)) <= bound) keep_idx[i].push_back(x);
    if (!keep_idx[one_side].empty()) {
      if (auto w = positive_witness(select_vectors(inst, keep_idx))) {
        Tuple t = *w;
        for (int i = 0; i < k; ++i) t[i] = keep_idx[i][t[i]];
        keep.offer(inst, t);
      }
    }
    for (std::size_t x = 0; x < V.size(one_side); ++x)
      if (static_cast<double>(V.weight(one_side, x)) > bound) keep.offer(inst, *fixed_side_max(inst, one_side, x).witness);
    if (!keep.best.witness) keep.offer(inst, Tuple(k, 0));
    return {keep.best, bound};
  }

  const std::size_t d = V.dim();
  if (static_cast<double>(d) <= bound) {
    keep.offer(inst, positive_witness(inst).value_or(Tuple(k, 0)));
    return {keep.best, bound};
  }
  const double light = static_cast<double>(d) / (k + 1);
  Tuple light_tuple(k, 0);
  int heavy_side = -1;
  for (int i = 0; i < k && heavy_side < 0; ++i) {
    std::size_t x = 0;
    while (x < V.size(i) && static_cast<double>(V.weight(i, x)) > light) ++x;
    if (x == V.size(i))
      heavy_side = i;
    else
      light_tuple[i] = x;
  }
  if (heavy_side < 0) {
    if (static_cast<double>(k + 1) > bound) return exact_fallback(inst);
    keep.offer(inst, light_tuple);
    return {keep.best, static_cast<double>(k + 1)};
  }
  // every vector on this side is heavy, and there are few of them
  for (std::size_t x = 0; x < V.size(heavy_side); ++x) keep.offer(inst, *fixed_side_max(inst, heavy_side, x).witness);
  return {keep.best, 1.0};
}

std::optional<std::pair<int, int>> hand1_pair(const HybridInstance& inst) {
  const int k = inst.k();
  const auto used = inst.used_palette();
  for (int a = 0; a < k; ++a)
    for (int b = a + 1; b < k; ++b) {
      const std::uint32_t mask = (1U << a) | (1U << b);
      bool ok = true;
      for (auto p : used)
        if (unique_sat_restriction(inst.palette()[p], mask)) {
          ok = false;
          break;
        }
      if (ok) return std::make_pair(a, b);
    }
  return std::nullopt;
}

namespace {

enum class Slot : std::uint8_t { Id, Zero };

struct NewCoord {
  std::size_t source;
  Slot s0, s1;
  bool agree;  // "1001" when true, "0110" otherwise
};

// indicator of the two assignments {u, v} (bit 0 = first input)
NewCoord pair_coord(std::size_t y, std::uint32_t u, std::uint32_t v) {
  const std::uint32_t diff = u ^ v;
  if (diff == 3) return {y, Slot::Id, Slot::Id, (u == 0 || u == 3)};
  if (diff == 2) {
    // depends on the first input only
    const bool c = u & 1U;
    return {y, Slot::Id, Slot::Zero, !c};
  }
  const bool c = u >> 1 & 1U;
  return {y, Slot::Zero, Slot::Id, !c};
}

}  // namespace

RewrittenPair rewrite_pair(const HybridInstance& residual) {
  if (residual.k() != 2) throw PreconditionError("rewriting needs a two-sided instance");
  const auto& V = residual.vectors();
  std::vector<NewCoord> coords;
  std::int64_t constant = 0;
  for (std::size_t y = 0; y < V.dim(); ++y) {
    const auto& g = residual.function_at(y);
    std::vector<std::uint32_t> sat;
    for (std::uint32_t b = 0; b < 4; ++b)
      if (g.at(b)) sat.push_back(b);
    switch (sat.size()) {
      case 0: break;
      case 4: ++constant; break;
      case 1: throw PreconditionError("coordinate function has a unique satisfying assignment");
      case 2:
        coords.push_back(pair_coord(y, sat[0], sat[1]));
        coords.push_back(pair_coord(y, sat[0], sat[1]));
        break;
      case 3:
        // each satisfying assignment is covered by exactly two of the three pairs
        coords.push_back(pair_coord(y, sat[0], sat[1]));
        coords.push_back(pair_coord(y, sat[0], sat[2]));
        coords.push_back(pair_coord(y, sat[1], sat[2]));
        break;
    }
  }
  std::vector<std::vector<std::vector<std::uint32_t>>> sup(2);
  for (int side = 0; side < 2; ++side) {
    sup[side].resize(V.size(side));
    for (std::size_t x = 0; x < V.size(side); ++x)
      for (std::size_t j = 0; j < coords.size(); ++j) {
        const Slot s = side == 0 ? coords[j].s0 : coords[j].s1;
        if (s == Slot::Id && V.entry(side, x, coords[j].source)) sup[side][x].push_back(static_cast<std::uint32_t>(j));
      }
  }
  const auto eq = BooleanFunction::from_bits("1001");
  const auto neq = BooleanFunction::from_bits("0110");
  std::vector<BooleanFunction> fns;
  for (const auto& c : coords) fns.push_back(c.agree ? eq : neq);
  auto vec = VectorInstance::from_supports(coords.size(), std::move(sup));
  return {HybridInstance::per_coordinate(std::move(vec), fns), constant};
}

VectorInstance to_furthest_neighbor(const RewrittenPair& rp) {
  const auto& inst = rp.instance;
  const auto& V = inst.vectors();
  const auto eq = BooleanFunction::from_bits("1001");
  std::vector<std::uint8_t> flip(V.dim());
  for (std::size_t y = 0; y < V.dim(); ++y) flip[y] = inst.function_at(y) == eq;
  auto sup = V.supports();
  for (std::size_t x = 0; x < V.size(0); ++x) {
    std::vector<std::uint32_t> row;
    std::vector<std::uint8_t> bit(V.dim(), 0);
    for (auto y : V.support(0, x)) bit[y] = 1;
    for (std::size_t y = 0; y < V.dim(); ++y)
      if ((bit[y] != 0) != (flip[y] != 0)) row.push_back(static_cast<std::uint32_t>(y));
    sup[0][x] = std::move(row);
  }
  return VectorInstance::from_supports(V.dim(), std::move(sup));
}

VectorInstance or_hash(const VectorInstance& inst, std::size_t buckets, std::uint64_t seed) {
  if (buckets == 0) throw RangeError("need at least one bucket");
  SplitMix64 rng(seed);
  std::vector<std::uint32_t> to(inst.dim());
  for (auto& b : to) b = static_cast<std::uint32_t>(rng.below(buckets));
  std::vector<std::vector<std::vector<std::uint32_t>>> sup(inst.k());
  for (int i = 0; i < inst.k(); ++i) {
    sup[i].resize(inst.size(i));
    for (std::size_t x = 0; x < inst.size(i); ++x)
      for (auto y : inst.support(i, x)) sup[i][x].push_back(to[y]);
  }
  return VectorInstance::from_supports(buckets, std::move(sup));
}

ApproxResult approx_scheme_max(const HybridInstance& inst, double eps, const FurthestNeighborSolver& fn_solver,
                               const SchemeOptions& options) {
  if (!(eps > 0.0)) throw RangeError("eps must be positive");
  require_nonempty(inst);
  const int k = inst.k();
  if (k < 2) return exact_fallback(inst);
  const auto pair = hand1_pair(inst);
  if (!pair) throw PreconditionError("Hand above 1: every pair of sides has a uniquely satisfiable restriction");
  const auto [a, b] = *pair;
  const auto& V = inst.vectors();

  std::vector<int> others;
  for (int i = 0; i < k; ++i)
    if (i != a && i != b) others.push_back(i);
  std::vector<std::size_t> sizes;
  for (int i : others) sizes.push_back(V.size(i));
  Keeper keep;
  Tuple t(others.size(), 0);
  std::uint64_t round = 0;
  do {
    std::vector<std::optional<std::size_t>> choice(k);
    for (std::size_t j = 0; j < others.size(); ++j) choice[others[j]] = t[j];
    const auto residual = fix_sides(inst, choice);
    const auto rp = rewrite_pair(residual);
    const auto cost = static_cast<std::uint64_t>(V.size(a) + V.size(b)) * std::max<std::size_t>(rp.instance.dim(), 1);
    if (cost > options.rewrite_budget) throw BudgetError("rewritten instance exceeds the configured budget");
    auto fnv = to_furthest_neighbor(rp);
    if (options.hash_buckets) fnv = or_hash(fnv, *options.hash_buckets, derive_seed(options.seed, round));
    const auto pr = fn_solver ? fn_solver(fnv) : exact_furthest_neighbor(fnv, ~std::uint64_t{0});
    keep.offer(inst, merge_choice(choice, Tuple{pr.first, pr.second}));
    ++round;
  } while (next_tuple(sizes, t));
  // hashing carries no certified factor at these sizes
  double ratio = fn_solver ? 1.0 + eps : 1.0;
  if (options.hash_buckets) ratio = std::numeric_limits<double>::infinity();
  return {keep.best, ratio};
}

}  // namespace optsp
