#include "optsp/exact.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <map>

#include "optsp/error.hpp"

namespace optsp {

namespace {

bool has_empty_side(const VectorInstance& v) {
  return std::any_of(v.sizes().begin(), v.sizes().end(), [](std::size_t n) { return n == 0; });
}

// Palettes for each recursion depth; the function at depth t has arity k - t
// and its variable 0 belongs to side t.
class Baseline {
 public:
  explicit Baseline(const HybridInstance& inst) : inst_(inst), k_(inst.k()), d_(inst.dim()), levels_(k_ + 1) {
    for (const auto& f : inst.palette()) intern(0, f);
  }

  template <class Visit>
  void run(Visit&& visit) {
    Tuple t(k_, 0);
    rec(0, inst_.coord_fn(), t, visit);
  }

 private:
  struct Level {
    std::vector<BooleanFunction> palette;
    std::map<BooleanFunction, std::uint32_t> index;
    std::vector<std::array<std::int64_t, 2>> next;
  };

  std::uint32_t intern(int t, const BooleanFunction& f) {
    auto& L = levels_[t];
    auto [it, inserted] = L.index.emplace(f, static_cast<std::uint32_t>(L.palette.size()));
    if (inserted) {
      L.palette.push_back(f);
      L.next.push_back({-1, -1});
    }
    return it->second;
  }

  std::uint32_t step(int t, std::uint32_t p, int bit) {
    auto cached = levels_[t].next[p][bit];
    if (cached >= 0) return static_cast<std::uint32_t>(cached);
    auto g = restrict_mask(levels_[t].palette[p], 1U, static_cast<std::uint32_t>(bit));
    const auto idx = intern(t + 1, g);
    levels_[t].next[p][bit] = idx;
    return idx;
  }

  template <class Visit>
  void rec(int t, const std::vector<std::uint32_t>& cur, Tuple& tuple, Visit& visit) {
    const int r = k_ - t;
    const auto& V = inst_.vectors();
    if (r == 0) {
      std::int64_t v = 0;
      for (auto p : cur) v += levels_[t].palette[p].at(0);
      visit(tuple, v);
      return;
    }
    if (r == 1) {
      const auto& pal = levels_[t].palette;
      std::int64_t base = 0;
      for (auto p : cur) base += pal[p].at(0);
      for (std::size_t x = 0; x < V.size(t); ++x) {
        std::int64_t v = base;
        for (auto y : V.support(t, x)) v += static_cast<std::int64_t>(pal[cur[y]].at(1)) - pal[cur[y]].at(0);
        tuple[t] = x;
        visit(tuple, v);
      }
      return;
    }
    std::vector<std::uint32_t> next(d_);
    for (std::size_t y = 0; y < d_; ++y) next[y] = step(t, cur[y], 0);
    for (std::size_t x = 0; x < V.size(t); ++x) {
      const auto sup = V.support(t, x);
      for (auto y : sup) next[y] = step(t, cur[y], 1);
      tuple[t] = x;
      rec(t + 1, next, tuple, visit);
      for (auto y : sup) next[y] = step(t, cur[y], 0);
    }
  }

  const HybridInstance& inst_;
  int k_;
  std::size_t d_;
  std::vector<Level> levels_;
};

std::vector<MultilinearPoly> palette_polys(const HybridInstance& inst) {
  std::vector<MultilinearPoly> out;
  for (const auto& f : inst.palette()) out.push_back(fourier(f));
  return out;
}

// Sets of the given size whose supersets vanish in every used coordinate function.
std::vector<std::uint32_t> common_vanishing(const HybridInstance& inst, const std::vector<MultilinearPoly>& polys,
                                            int size) {
  std::vector<std::uint32_t> common = subsets_of_size(inst.k(), size);
  for (auto p : inst.used_palette()) {
    const auto v = vanishing_sets(polys[p], size);
    std::vector<std::uint32_t> keep;
    for (auto m : common)
      if (std::find(v.begin(), v.end(), m) != v.end()) keep.push_back(m);
    common = std::move(keep);
  }
  return common;
}

// Iterate every assignment of the sides outside `core`, lexicographically.
template <class Visit>
void for_each_prefix(const VectorInstance& V, std::uint32_t core, Visit&& visit) {
  std::vector<int> others;
  for (int i = 0; i < V.k(); ++i)
    if (!(core >> i & 1U)) others.push_back(i);
  std::vector<std::size_t> sizes;
  for (int i : others) sizes.push_back(V.size(i));
  Tuple t(others.size(), 0);
  do {
    std::vector<std::optional<std::size_t>> choice(V.k());
    for (std::size_t j = 0; j < others.size(); ++j) choice[others[j]] = t[j];
    visit(choice);
  } while (next_tuple(sizes, t));
}

Tuple merge_choice(const std::vector<std::optional<std::size_t>>& choice, const std::vector<std::size_t>& rest) {
  Tuple out(choice.size());
  std::size_t j = 0;
  for (std::size_t i = 0; i < choice.size(); ++i) out[i] = choice[i] ? *choice[i] : rest[j++];
  return out;
}

}  // namespace

SolveResult baseline_solve(const HybridInstance& inst, Objective objective) {
  if (has_empty_side(inst.vectors())) throw PreconditionError("some side has no vectors");
  SolveResult best;
  Baseline b(inst);
  b.run([&](const Tuple& t, std::int64_t v) {
    if (!best.witness || better(objective, v, best.value)) {
      best.value = v;
      best.witness = t;
    }
  });
  return best;
}

std::vector<std::int64_t> baseline_all_values(const HybridInstance& inst) {
  std::vector<std::int64_t> out;
  if (has_empty_side(inst.vectors())) return out;
  out.reserve(tuple_count(inst.vectors().sizes()));
  Baseline b(inst);
  b.run([&](const Tuple&, std::int64_t v) { out.push_back(v); });
  return out;
}

std::optional<std::pair<int, int>> linear_pair(const HybridInstance& inst) {
  if (inst.k() < 2) return std::nullopt;
  const auto common = common_vanishing(inst, palette_polys(inst), 2);
  if (common.empty()) return std::nullopt;
  const auto idx = mask_indices(common.front());
  return std::make_pair(idx[0], idx[1]);
}

SolveResult solve_hdeg1(const HybridInstance& inst, Objective objective) {
  const auto pair = linear_pair(inst);
  if (!pair) throw PreconditionError("hdeg above 1: no pair of sides splits the objective");
  if (has_empty_side(inst.vectors())) throw PreconditionError("some side has no vectors");
  const auto [a, b] = *pair;
  const std::uint32_t core = (1U << a) | (1U << b);

  SolveResult best;
  for_each_prefix(inst.vectors(), core, [&](const std::vector<std::optional<std::size_t>>& choice) {
    const auto res = fix_sides(inst, choice);
    const auto& V = res.vectors();
    const auto& pal = res.palette();
    std::vector<std::int64_t> c0(pal.size()), ca(pal.size()), cb(pal.size());
    for (std::size_t p = 0; p < pal.size(); ++p) {
      const auto poly = fourier(pal[p]);
      c0[p] = poly.coefficient(0);
      ca[p] = poly.coefficient(1);
      cb[p] = poly.coefficient(2);
    }
    std::int64_t total = 0;
    for (auto p : res.coord_fn()) total += c0[p];
    std::size_t pick[2] = {0, 0};
    for (int side = 0; side < 2; ++side) {
      const auto& coef = side == 0 ? ca : cb;
      std::int64_t bv = 0;
      for (std::size_t x = 0; x < V.size(side); ++x) {
        std::int64_t s = 0;
        for (auto y : V.support(side, x)) s += coef[res.palette_index(y)];
        if (x == 0 || better(objective, s, bv)) {
          bv = s;
          pick[side] = x;
        }
      }
      total += bv;
    }
    if (!best.witness || better(objective, total, best.value)) {
      best.value = total;
      best.witness = merge_choice(choice, {pick[0], pick[1]});
    }
  });
  return best;
}

SolveResult solve_via_hyperclique(const HybridInstance& inst, Objective objective, const CliqueDetector& detector,
                                  const ViaHypercliqueOptions& options) {
  if (objective == Objective::Min) {
    const auto ct = complement_translate(inst);
    auto r = solve_via_hyperclique(ct.instance, Objective::Max, detector, options);
    r.value = ct.offset - r.value;
    return r;
  }
  if (has_empty_side(inst.vectors())) throw PreconditionError("some side has no vectors");
  const int k = inst.k();
  const auto polys = palette_polys(inst);
  std::uint32_t core = 0;
  if (options.core_sides) {
    for (int i : *options.core_sides) {
      if (i < 0 || i >= k || (core >> i & 1U)) throw RangeError("invalid core side list");
      core |= 1U << i;
    }
    const auto size = std::popcount(core);
    if (size < 2) throw RangeError("at least two core sides are needed");
    const auto ok = common_vanishing(inst, polys, size);
    if (std::find(ok.begin(), ok.end(), core) == ok.end())
      throw PreconditionError("chosen sides do not have vanishing supersets");
  } else {
    for (int size = 2; size <= k && core == 0; ++size) {
      const auto ok = common_vanishing(inst, polys, size);
      if (!ok.empty()) core = ok.front();
    }
    if (core == 0) throw PreconditionError("hdeg equals k: no hyperclique reduction applies");
  }
  const auto core_sides = mask_indices(core);
  const int s = static_cast<int>(core_sides.size());
  const int h = s - 1;

  SolveResult best;
  for_each_prefix(inst.vectors(), core, [&](const std::vector<std::optional<std::size_t>>& choice) {
    const auto res = fix_sides(inst, choice);
    const auto& V = res.vectors();
    std::vector<MultilinearPoly> rp;
    for (const auto& f : res.palette()) rp.push_back(fourier(f));

    std::int64_t constant = 0;
    for (auto p : res.coord_fn()) constant += rp[p].coefficient(0);

    WeightedHypergraph g(h, V.sizes());
    // complete hypergraph, weights accumulated below
    for (auto m : g.part_subsets()) {
      const auto ps = mask_indices(m);
      std::vector<std::size_t> sz;
      for (int p : ps) sz.push_back(V.size(p));
      Tuple t(ps.size(), 0);
      do {
        g.set_weight(m, t, 0);
      } while (next_tuple(sz, t));
    }
    const std::uint32_t full = (1U << s) - 1;
    for (std::uint32_t u = 1; u < full; ++u) {
      const int size = std::popcount(u);
      if (size > h) continue;
      // promote to a fixed h-superset
      std::uint32_t target = u;
      for (int i = 0; i < s && std::popcount(target) < h; ++i) target |= 1U << i;
      const auto us = mask_indices(u);
      const auto ts = mask_indices(target);
      std::vector<std::size_t> usz, tsz;
      for (int p : us) usz.push_back(V.size(p));
      for (int p : ts) tsz.push_back(V.size(p));
      Tuple full_tuple(s, 0);
      Tuple xu(us.size(), 0);
      do {
        for (std::size_t j = 0; j < us.size(); ++j) full_tuple[us[j]] = xu[j];
        std::int64_t w = 0;
        // coordinates where all of x_U are one
        const int lead = us[0];
        for (auto y : V.support(lead, xu[0])) {
          bool all = true;
          for (std::size_t j = 1; j < us.size() && all; ++j) all = V.entry(us[j], xu[j], y);
          if (all) w += rp[res.palette_index(y)].coefficient(u);
        }
        if (w == 0) continue;
        // spread onto every extension of x_U inside the target part set
        std::vector<int> extra;
        for (int p : ts)
          if (!(u >> p & 1U)) extra.push_back(p);
        std::vector<std::size_t> esz;
        for (int p : extra) esz.push_back(V.size(p));
        Tuple xe(extra.size(), 0);
        do {
          for (std::size_t j = 0; j < extra.size(); ++j) full_tuple[extra[j]] = xe[j];
          std::vector<std::size_t> verts;
          for (int p : ts) verts.push_back(full_tuple[p]);
          g.add_weight(target, verts, w);
        } while (next_tuple(esz, xe));
      } while (next_tuple(usz, xu));
    }

    const auto hc = max_weight_hyperclique(g, detector, options.hyperclique);
    const auto value = constant + hc.weight;
    if (!best.witness || value > best.value) {
      best.value = value;
      best.witness = merge_choice(choice, hc.clique);
    }
  });
  return best;
}

AutoResult solve_exact_auto(const HybridInstance& inst, Objective objective) {
  const int k = inst.k();
  if (k <= 1) return {baseline_solve(inst, objective), "baseline"};
  if (linear_pair(inst)) return {solve_hdeg1(inst, objective), "hdeg1"};
  if (k >= 3 && !common_vanishing(inst, palette_polys(inst), 3).empty())
    return {solve_via_hyperclique(inst, objective), "hyperclique"};
  return {baseline_solve(inst, objective), "baseline (classified hard)"};
}

}  // namespace optsp
