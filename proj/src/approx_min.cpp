#include "optsp/approx_min.hpp"

#include <algorithm>
#include <cmath>

#include "optsp/error.hpp"
#include "optsp/exact.hpp"
#include "optsp/oracle.hpp"
#include "optsp/rng.hpp"

namespace optsp {

namespace {

bool has_empty(const std::vector<std::size_t>& sizes) {
  return std::any_of(sizes.begin(), sizes.end(), [](std::size_t n) { return n == 0; });
}

Tuple drop_side(const Tuple& t, int side) {
  Tuple out;
  for (std::size_t i = 0; i < t.size(); ++i)
    if (static_cast<int>(i) != side) out.push_back(t[i]);
  return out;
}

}  // namespace

std::map<Tuple, std::int64_t> values_for_candidates(const HybridInstance& inst, const std::vector<Tuple>& candidates,
                                                    const CandidateOptions& options) {
  std::map<Tuple, std::int64_t> out;
  const int k = inst.k();
  const auto& V = inst.vectors();
  const double m = static_cast<double>(std::max<std::size_t>(V.sparsity(), 1));
  const double tau = std::pow(m, options.delta / 3.0);
  std::vector<Tuple> rest;
  for (const auto& t : candidates)
    if (!out.contains(t)) rest.push_back(t);
  std::sort(rest.begin(), rest.end());
  rest.erase(std::unique(rest.begin(), rest.end()), rest.end());

  if (k >= 2) {
    // heavy vectors: all completions at once
    std::map<std::pair<int, std::size_t>, std::vector<Tuple>> heavy;
    std::vector<Tuple> light;
    for (auto& t : rest) {
      int side = -1;
      for (int i = 0; i < k && side < 0; ++i)
        if (static_cast<double>(V.weight(i, t[i])) >= tau) side = i;
      if (side < 0)
        light.push_back(std::move(t));
      else
        heavy[{side, t[side]}].push_back(std::move(t));
    }
    for (const auto& [key, group] : heavy) {
      std::vector<std::optional<std::size_t>> choice(k);
      choice[key.first] = key.second;
      const auto residual = fix_sides(inst, choice);
      const auto all = baseline_all_values(residual);
      for (const auto& t : group) out[t] = all[tuple_rank(residual.vectors().sizes(), drop_side(t, key.first))];
    }
    // heavy prefixes: every vector of the last side at once
    std::map<Tuple, std::vector<Tuple>> by_prefix;
    for (auto& t : light) by_prefix[Tuple(t.begin(), t.end() - 1)].push_back(std::move(t));
    rest.clear();
    for (auto& [prefix, group] : by_prefix) {
      if (static_cast<double>(group.size()) < tau) {
        for (auto& t : group) rest.push_back(std::move(t));
        continue;
      }
      std::vector<std::optional<std::size_t>> choice(prefix.begin(), prefix.end());
      choice.emplace_back();
      const auto all = baseline_all_values(fix_sides(inst, choice));
      for (const auto& t : group) out[t] = all[t.back()];
    }
  }
  for (const auto& t : rest) out[t] = tuple_value(inst, t);
  return out;
}

namespace {

class GenericLister {
 public:
  GenericLister(const HybridInstance& inst, std::size_t limit, const ZeroDecider& decider)
      : inst_(inst), limit_(limit), decider_(decider) {}

  std::vector<Tuple> run() {
    std::vector<std::vector<std::size_t>> keep(inst_.k());
    for (int i = 0; i < inst_.k(); ++i)
      for (std::size_t x = 0; x < inst_.vectors().size(i); ++x) keep[i].push_back(x);
    if (limit_ > 0) recurse(keep);
    std::sort(out_.begin(), out_.end());
    if (out_.size() > limit_) out_.resize(limit_);
    return std::move(out_);
  }

 private:
  bool decide(const HybridInstance& sub) const {
    return decider_ ? decider_(sub) : oracle_zero_decider(sub);
  }

  void collect(const std::vector<std::vector<std::size_t>>& keep) {
    const auto sub = select_vectors(inst_, keep);
    const auto all = baseline_all_values(sub);
    const auto& sizes = sub.vectors().sizes();
    Tuple t(sizes.size(), 0);
    std::size_t r = 0;
    do {
      if (all[r++] == 0) {
        Tuple full(t.size());
        for (std::size_t i = 0; i < t.size(); ++i) full[i] = keep[i][t[i]];
        out_.push_back(std::move(full));
      }
    } while (next_tuple(sizes, t));
  }

  void recurse(const std::vector<std::vector<std::size_t>>& keep) {
    if (out_.size() >= limit_) return;
    for (const auto& s : keep)
      if (s.empty()) return;
    if (!decide(select_vectors(inst_, keep))) return;
    const int k = inst_.k();
    const auto& V = inst_.vectors();
    // split each side at its weight median
    std::vector<std::vector<std::size_t>> left(k), right(k), rest(k);
    std::vector<std::size_t> mid(k);
    for (int i = 0; i < k; ++i) {
      std::size_t total = 0;
      for (auto x : keep[i]) total += V.weight(i, x);
      std::size_t acc = 0, p = 0;
      while (p + 1 < keep[i].size() && 2 * (acc + V.weight(i, keep[i][p])) < total) acc += V.weight(i, keep[i][p++]);
      left[i].assign(keep[i].begin(), keep[i].begin() + static_cast<std::ptrdiff_t>(p));
      mid[i] = keep[i][p];
      right[i].assign(keep[i].begin() + static_cast<std::ptrdiff_t>(p) + 1, keep[i].end());
      rest[i] = left[i];
      rest[i].insert(rest[i].end(), right[i].begin(), right[i].end());
    }
    // tuples whose first middle element sits at side i
    for (int i = 0; i < k && out_.size() < limit_; ++i) {
      std::vector<std::vector<std::size_t>> box(k);
      for (int j = 0; j < k; ++j) box[j] = j < i ? rest[j] : j == i ? std::vector<std::size_t>{mid[i]} : keep[j];
      if (std::none_of(box.begin(), box.end(), [](const auto& s) { return s.empty(); })) collect(box);
    }
    for (std::uint32_t mask = 0; mask < (1U << k) && out_.size() < limit_; ++mask) {
      std::vector<std::vector<std::size_t>> box(k);
      for (int j = 0; j < k; ++j) box[j] = mask >> j & 1U ? right[j] : left[j];
      recurse(box);
    }
  }

  const HybridInstance& inst_;
  std::size_t limit_;
  const ZeroDecider& decider_;
  std::vector<Tuple> out_;
};

// Zero constraints of one two-input coordinate function.
struct PairConstraint {
  bool impossible = false;
  std::optional<bool> first, second;  // forced values
  std::optional<bool> flip;           // second = first xor flip
};

PairConstraint pair_constraint(const BooleanFunction& g) {
  std::vector<std::uint32_t> zeros;
  for (std::uint32_t u = 0; u < 4; ++u)
    if (!g.at(u)) zeros.push_back(u);
  PairConstraint c;
  switch (zeros.size()) {
    case 0:
      c.impossible = true;
      break;
    case 1:
      c.first = (zeros[0] & 1U) != 0;
      c.second = (zeros[0] >> 1 & 1U) != 0;
      break;
    case 2: {
      const std::uint32_t u = zeros[0], diff = zeros[0] ^ zeros[1];
      if (diff == 1)
        c.second = (u >> 1 & 1U) != 0;
      else if (diff == 2)
        c.first = (u & 1U) != 0;
      else
        c.flip = u == 1;
      break;
    }
    case 3:
      throw PreconditionError("restriction with a unique satisfying assignment");
    default:
      break;
  }
  return c;
}

// Zero pairs of a two-sided instance, from per-coordinate unary and equality constraints.
std::vector<std::pair<std::size_t, std::size_t>> list_pairs(const HybridInstance& res, std::size_t limit) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  const auto& V = res.vectors();
  std::vector<PairConstraint> cons(res.palette().size());
  for (auto p : res.used_palette()) cons[p] = pair_constraint(res.palette()[p]);
  std::vector<std::pair<std::size_t, bool>> unary_a, unary_b, relation;
  for (std::size_t y = 0; y < res.dim(); ++y) {
    const auto& c = cons[res.palette_index(y)];
    if (c.impossible) return out;
    if (c.first) unary_a.emplace_back(y, *c.first);
    if (c.second) unary_b.emplace_back(y, *c.second);
    if (c.flip) relation.emplace_back(y, *c.flip);
  }
  auto passes = [&](int side, std::size_t x, const std::vector<std::pair<std::size_t, bool>>& u) {
    return std::all_of(u.begin(), u.end(), [&](const auto& e) { return V.entry(side, x, e.first) == e.second; });
  };
  // group the second side by its pattern on the relational coordinates
  std::map<std::vector<bool>, std::vector<std::size_t>> buckets;
  for (std::size_t x = 0; x < V.size(1); ++x) {
    if (!passes(1, x, unary_b)) continue;
    std::vector<bool> key;
    for (const auto& [y, f] : relation) key.push_back(V.entry(1, x, y));
    buckets[key].push_back(x);
  }
  for (std::size_t x = 0; x < V.size(0) && out.size() < limit; ++x) {
    if (!passes(0, x, unary_a)) continue;
    std::vector<bool> key;
    for (const auto& [y, f] : relation) key.push_back(V.entry(0, x, y) != f);
    const auto it = buckets.find(key);
    if (it == buckets.end()) continue;
    for (auto b : it->second) {
      if (out.size() >= limit) break;
      out.emplace_back(x, b);
    }
  }
  return out;
}

}  // namespace

std::vector<Tuple> list_zeros_generic(const HybridInstance& inst, std::size_t limit, const ZeroDecider& decider) {
  if (has_empty(inst.vectors().sizes())) return {};
  return GenericLister(inst, limit, decider).run();
}

std::vector<Tuple> list_zeros_hand1(const HybridInstance& inst, std::size_t limit) {
  const int k = inst.k();
  if (k < 2) throw PreconditionError("pair listing needs at least two sides");
  const auto pair = hand1_pair(inst);
  if (!pair) throw PreconditionError("Hand above 1: every pair of sides has a uniquely satisfiable restriction");
  const auto [a, b] = *pair;
  const auto& V = inst.vectors();
  std::vector<Tuple> out;
  if (has_empty(V.sizes()) || limit == 0) return out;
  std::vector<int> others;
  for (int i = 0; i < k; ++i)
    if (i != a && i != b) others.push_back(i);
  std::vector<std::size_t> sizes;
  for (int i : others) sizes.push_back(V.size(i));
  Tuple t(others.size(), 0);
  do {
    std::vector<std::optional<std::size_t>> choice(k);
    for (std::size_t j = 0; j < others.size(); ++j) choice[others[j]] = t[j];
    for (const auto& [xa, xb] : list_pairs(fix_sides(inst, choice), limit - out.size())) {
      Tuple full(k);
      for (std::size_t j = 0; j < others.size(); ++j) full[others[j]] = t[j];
      full[a] = xa;
      full[b] = xb;
      out.push_back(std::move(full));
    }
  } while (out.size() < limit && next_tuple(sizes, t));
  std::sort(out.begin(), out.end());
  return out;
}

GapAnswer lsh_gap_decide(const HybridInstance& inst, std::int64_t t, double c, double gamma, const ZeroLister& lister,
                         std::uint64_t seed, const GapOptions& options) {
  const int k = inst.k();
  const auto& V = inst.vectors();
  if (!(c > 1.0)) throw RangeError("c must exceed 1");
  if (!(gamma > 0.0) || !(gamma < k)) throw RangeError("gamma must lie strictly between 0 and k");
  if (t < 0) throw RangeError("threshold must be non-negative");
  if (has_empty(V.sizes())) throw PreconditionError("some side has no vectors");
  const double d = static_cast<double>(V.dim());
  const double bound = c * static_cast<double>(t) + 1e-9;
  GapAnswer ans;

  if (c * static_cast<double>(t) >= d) {
    // every tuple qualifies
    const Tuple z(k, 0);
    return {true, z, tuple_value(inst, z)};
  }

  const std::size_t n = *std::max_element(V.sizes().begin(), V.sizes().end());
  const double nn = static_cast<double>(n);
  const double total = static_cast<double>(tuple_count(V.sizes()));
  const double want = std::ceil(8.0 * std::pow(nn, k - gamma * (1.0 - 1.0 / c))) + 1.0;
  const auto limit = static_cast<std::size_t>(std::min(want, total));

  auto check = [&](const HybridInstance& projected) {
    const auto cands = lister(projected, limit);
    if (cands.empty()) return false;
    for (const auto& [tup, v] : values_for_candidates(inst, cands, options.candidates))
      if (!ans.witness || v < ans.value) {
        ans.witness = tup;
        ans.value = v;
      }
    ans.small = static_cast<double>(ans.value) <= bound;
    return ans.small;
  };

  if (t == 0) {
    check(inst);
    return ans;
  }
  const double p1 = 1.0 - static_cast<double>(t) / d;
  const double p2 = 1.0 - c * static_cast<double>(t) / d;
  const auto samples = static_cast<std::size_t>(std::ceil(gamma * std::log(nn) / std::log(1.0 / p2)));
  const auto rounds = static_cast<std::size_t>(std::ceil(std::pow(p1, -static_cast<double>(samples))));
  const std::size_t reps =
      options.repetitions.value_or(static_cast<std::size_t>(std::ceil(std::log2(std::max(nn, 1.0)))) + 3);
  for (std::size_t rep = 0; rep < reps; ++rep)
    for (std::size_t r = 0; r < rounds; ++r) {
      SplitMix64 rng(derive_seed(seed, rep, r));
      std::vector<std::size_t> coords(samples);
      for (auto& y : coords) y = rng.below(V.dim());
      if (check(project_coordinates(inst, coords))) return ans;
    }
  return ans;
}

namespace {

ApproxResult search_threshold(const HybridInstance& inst, double c, double gamma, const ZeroLister& lister,
                              std::uint64_t seed) {
  const int k = inst.k();
  if (has_empty(inst.vectors().sizes())) throw PreconditionError("some side has no vectors");
  const auto d = static_cast<std::int64_t>(inst.dim());
  SolveResult best{tuple_value(inst, Tuple(k, 0)), Tuple(k, 0)};
  auto offer = [&](const GapAnswer& g) {
    if (g.witness && (g.value < best.value || (g.value == best.value && *g.witness < *best.witness))) {
      best.value = g.value;
      best.witness = g.witness;
    }
  };
  std::int64_t lo = 0, hi = d;
  while (lo < hi) {
    const std::int64_t mid = lo + (hi - lo) / 2;
    const auto g = lsh_gap_decide(inst, mid, c, gamma, lister, derive_seed(seed, static_cast<std::uint64_t>(mid)));
    offer(g);
    if (g.small)
      hi = mid;
    else
      lo = mid + 1;
  }
  return {best, c};
}

}  // namespace

ApproxResult approx_min_constant(const HybridInstance& inst, std::uint64_t seed, const ZeroDecider& decider, double c,
                                 double gamma) {
  if (inst.k() == 1) return {baseline_solve(inst, Objective::Min), 1.0};
  const ZeroLister lister = [&decider](const HybridInstance& h, std::size_t limit) {
    return list_zeros_generic(h, limit, decider);
  };
  return search_threshold(inst, c, gamma, lister, seed);
}

ApproxResult approx_min_scheme(const HybridInstance& inst, double eps, std::uint64_t seed) {
  if (!(eps > 0.0)) throw RangeError("eps must be positive");
  if (inst.k() < 2 || !hand1_pair(inst))
    throw PreconditionError("scheme needs k >= 2 and a pair of sides without uniquely satisfiable restrictions");
  return search_threshold(inst, 1.0 + eps, 1.0, list_zeros_hand1, seed);
}

}  // namespace optsp
