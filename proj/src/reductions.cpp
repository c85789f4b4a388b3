#include "optsp/reductions.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "optsp/error.hpp"
#include "optsp/oracle.hpp"

namespace optsp {

UnaryTransformation UnaryTransformation::identity(int k) { return {std::vector<Unary>(k, Unary::Id)}; }

UnaryTransformation UnaryTransformation::parse(std::string_view text) {
  UnaryTransformation t;
  for (char ch : text) {
    switch (ch) {
      case '0': t.tags.push_back(Unary::Zero); break;
      case '1': t.tags.push_back(Unary::One); break;
      case 'I': t.tags.push_back(Unary::Id); break;
      case 'N': t.tags.push_back(Unary::Negate); break;
      default: throw ParseError("unknown unary tag '" + std::string(1, ch) + "'");
    }
  }
  return t;
}

std::string UnaryTransformation::to_string() const {
  std::string s;
  for (auto u : tags) s += "01IN"[static_cast<int>(u)];
  return s;
}

bool UnaryTransformation::apply(int i, bool z) const {
  switch (tags[i]) {
    case Unary::Zero: return false;
    case Unary::One: return true;
    case Unary::Id: return z;
    case Unary::Negate: return !z;
  }
  return z;
}

BooleanFunction transform(const BooleanFunction& f, const UnaryTransformation& tau) {
  const int k = f.arity();
  if (static_cast<int>(tau.tags.size()) != k) throw RangeError("transformation length differs from the arity");
  return BooleanFunction::from_predicate(k, [&](std::uint32_t b) {
    std::uint32_t idx = 0;
    for (int i = 0; i < k; ++i)
      if (tau.apply(i, b >> i & 1U)) idx |= 1U << i;
    return f.at(idx);
  });
}

std::int64_t Gadget::total() const {
  std::int64_t s = 0;
  for (const auto& e : entries) s += e.multiplicity;
  return s;
}

MultilinearPoly gadget_sum(const BooleanFunction& f, const Gadget& g) {
  MultilinearPoly sum(f.arity());
  for (const auto& e : g.entries) sum += fourier(transform(f, e.tau)).scaled(e.multiplicity);
  return sum;
}

bool gadget_valid(const BooleanFunction& f, const Gadget& g) {
  if (g.beta2 < 1 || g.beta1 < g.beta2) return false;
  MultilinearPoly want(f.arity());
  const std::uint32_t full = (1U << f.arity()) - 1;
  want.set(0, g.beta1);
  want.set(full, want.coefficient(full) - g.beta2);
  return gadget_sum(f, g) == want;
}

namespace {

// index-list order among sets of equal size
bool index_less(std::uint32_t a, std::uint32_t b) { return mask_indices(a) < mask_indices(b); }

}  // namespace

Gadget coordinate_gadget(const BooleanFunction& f) {
  const int k = f.arity();
  if (k < 1 || degree(f) != k) throw PreconditionError("gadget needs a function of full degree");
  const auto phi = fourier(f);
  const std::uint32_t full = (1U << k) - 1;

  std::vector<GadgetEntry> entries;
  auto start = UnaryTransformation::identity(k);
  if (phi.coefficient(full) > 0) start.tags[0] = Unary::Negate;
  entries.push_back({start, 1});
  auto g = fourier(transform(f, start));

  std::pair<int, int> last{k + 1, 0};
  while (true) {
    // interior monomial of largest degree, least index list on ties
    int top = 0, count = 0;
    for (std::uint32_t s = 1; s < full; ++s)
      if (g.coefficient(s) != 0) top = std::max(top, std::popcount(s));
    std::optional<std::uint32_t> S;
    for (std::uint32_t s = 1; s < full; ++s) {
      if (g.coefficient(s) == 0 || std::popcount(s) != top) continue;
      ++count;
      if (!S || index_less(s, *S)) S = s;
    }
    if (!S) break;
    const std::pair<int, int> measure{std::popcount(*S), count};
    if (!(measure < last)) throw std::logic_error("gadget elimination did not progress");
    last = measure;

    std::optional<std::uint32_t> T;
    for (std::uint32_t t = *S;; t = (t + 1) | *S) {
      if (phi.coefficient(t) != 0 &&
          (!T || std::popcount(t) < std::popcount(*T) || (std::popcount(t) == std::popcount(*T) && index_less(t, *T))))
        T = t;
      if (t == full) break;
    }
    UnaryTransformation tau;
    for (int i = 0; i < k; ++i)
      tau.tags.push_back(*S >> i & 1U ? Unary::Id : *T >> i & 1U ? Unary::One : Unary::Zero);
    auto star = fourier(transform(f, tau));
    if ((star.coefficient(*S) > 0) == (g.coefficient(*S) > 0)) {
      tau.tags[std::countr_zero(*S)] = Unary::Negate;
      star = fourier(transform(f, tau));
    }
    const std::int64_t a = std::abs(phi.coefficient(*T));
    const std::int64_t b = std::abs(g.coefficient(*S));
    for (auto& e : entries) e.multiplicity *= a;
    auto it = std::find_if(entries.begin(), entries.end(), [&](const GadgetEntry& e) { return e.tau == tau; });
    if (it == entries.end())
      entries.push_back({tau, b});
    else
      it->multiplicity += b;
    g = g.scaled(a);
    g += star.scaled(b);
    if (g.coefficient(*S) != 0) throw std::logic_error("gadget cancellation failed");
  }

  std::int64_t div = 0;
  for (const auto& e : entries) div = std::gcd(div, e.multiplicity);
  Gadget out;
  for (auto& e : entries) out.entries.push_back({e.tau, e.multiplicity / div});
  out.beta1 = g.coefficient(0) / div;
  out.beta2 = -g.coefficient(full) / div;
  if (out.beta2 < 1 || out.beta1 < out.beta2) throw std::logic_error("gadget constants out of range");
  return out;
}

std::optional<std::uint32_t> full_degree_restriction(const BooleanFunction& f, std::uint32_t set_mask) {
  const std::uint32_t full = f.table_size() - 1;
  const std::uint32_t rest = full & ~set_mask;
  const int want = std::popcount(set_mask);
  for (std::uint32_t a = 0;; a = (a - rest) & rest) {
    if (degree(restrict_mask(f, rest, a)) == want) return a;
    if (a == rest) break;
  }
  return std::nullopt;
}

namespace {

// New coordinate c: side i stores bit(i, x, c).
template <class Bit>
VectorInstance build(const std::vector<std::size_t>& sizes, std::size_t dim, Bit bit) {
  const int k = static_cast<int>(sizes.size());
  std::vector<std::vector<std::vector<std::uint32_t>>> sup(k);
  for (int i = 0; i < k; ++i) {
    sup[i].resize(sizes[i]);
    for (std::size_t x = 0; x < sizes[i]; ++x)
      for (std::size_t c = 0; c < dim; ++c)
        if (bit(i, x, c)) sup[i][x].push_back(static_cast<std::uint32_t>(c));
  }
  return VectorInstance::from_supports(dim, std::move(sup));
}

// Gadget of the restriction of f to set_mask, with the other variables fixed.
struct MaskedGadget {
  std::uint32_t fixed_values = 0;
  Gadget gadget;
  std::vector<UnaryTransformation> expanded;  // over all k inputs, one per unit of multiplicity

  static MaskedGadget make(const BooleanFunction& f, std::uint32_t set_mask, std::int64_t repeat = 1) {
    const int k = f.arity();
    const std::uint32_t full = (1U << k) - 1;
    MaskedGadget m;
    const auto a = full_degree_restriction(f, set_mask);
    if (!a) throw PreconditionError("no restriction of full degree on a required set of sides");
    m.fixed_values = *a;
    m.gadget = coordinate_gadget(restrict_mask(f, full & ~set_mask, *a));
    m.expand(k, set_mask, repeat);
    return m;
  }

  void expand(int k, std::uint32_t set_mask, std::int64_t repeat) {
    expanded.clear();
    const auto idx = mask_indices(set_mask);
    for (std::int64_t r = 0; r < repeat; ++r)
      for (const auto& e : gadget.entries) {
        UnaryTransformation t;
        for (int i = 0; i < k; ++i) t.tags.push_back(fixed_values >> i & 1U ? Unary::One : Unary::Zero);
        for (std::size_t j = 0; j < idx.size(); ++j) t.tags[idx[j]] = e.tau.tags[j];
        for (std::int64_t c = 0; c < e.multiplicity; ++c) expanded.push_back(t);
      }
  }
};

}  // namespace

ThresholdInstance kov_to_vopt(const VectorInstance& ov, const BooleanFunction& f) {
  const int k = ov.k();
  if (f.arity() != k) throw PreconditionError("function arity differs from the number of sides");
  if (hdeg(f) != k) throw PreconditionError("function must have full degree");
  const auto m = MaskedGadget::make(f, (1U << k) - 1);
  const std::size_t l = m.expanded.size();
  const auto vec = build(ov.sizes(), ov.dim() * l, [&](int i, std::size_t x, std::size_t c) {
    return m.expanded[c % l].apply(i, ov.entry(i, x, c / l));
  });
  return {HybridInstance(vec, f, Objective::Max), m.gadget.beta1 * static_cast<std::int64_t>(ov.dim())};
}

std::optional<Tuple> find_orthogonal(const VectorInstance& ov, std::uint64_t budget) {
  for (auto n : ov.sizes())
    if (n == 0) return std::nullopt;
  check_budget(ov.sizes(), ov.dim(), budget);
  const std::uint32_t all = (1U << ov.k()) - 1;
  Tuple t(ov.k(), 0);
  do {
    if (generalized_ip(ov, t, all) == 0) return t;
  } while (next_tuple(ov.sizes(), t));
  return std::nullopt;
}

Hypergraph::Hypergraph(int uniformity, std::vector<std::size_t> part_sizes)
    : h_(uniformity), sizes_(std::move(part_sizes)) {
  if (h_ < 1 || h_ > static_cast<int>(sizes_.size())) throw RangeError("uniformity out of range");
  if (sizes_.size() > 31) throw RangeError("too many parts");
}

std::vector<std::pair<int, std::size_t>> Hypergraph::normalize(std::vector<std::pair<int, std::size_t>> v) const {
  if (static_cast<int>(v.size()) != h_) throw RangeError("edge size differs from the uniformity");
  std::sort(v.begin(), v.end());
  for (std::size_t j = 0; j < v.size(); ++j) {
    if (v[j].first < 0 || v[j].first >= parts() || v[j].second >= sizes_[v[j].first])
      throw RangeError("edge vertex out of range");
    if (j > 0 && v[j].first == v[j - 1].first) throw RangeError("edge uses a part twice");
  }
  return v;
}

void Hypergraph::add_edge(std::vector<std::pair<int, std::size_t>> vertices) {
  edges_.insert(normalize(std::move(vertices)));
}

bool Hypergraph::has_edge(std::vector<std::pair<int, std::size_t>> vertices) const {
  return edges_.contains(normalize(std::move(vertices)));
}

bool Hypergraph::is_clique(std::span<const std::size_t> pick) const {
  for (auto s : subsets_of_size(parts(), h_)) {
    std::vector<std::pair<int, std::size_t>> e;
    for (int p : mask_indices(s)) e.emplace_back(p, pick[p]);
    if (!edges_.contains(e)) return false;
  }
  return true;
}

std::optional<Tuple> find_hyperclique(const Hypergraph& g, std::uint64_t budget) {
  const auto& sizes = g.part_sizes();
  for (auto n : sizes)
    if (n == 0) return std::nullopt;
  check_budget(sizes, subsets_of_size(g.parts(), g.uniformity()).size(), budget);
  Tuple t(sizes.size(), 0);
  do {
    if (g.is_clique(t)) return t;
  } while (next_tuple(sizes, t));
  return std::nullopt;
}

namespace {

std::vector<std::size_t> block_sizes(const Hypergraph& g, int k, int b) {
  const int per = g.parts() / k;
  return {g.part_sizes().begin() + b * per, g.part_sizes().begin() + (b + 1) * per};
}

}  // namespace

Tuple clique_to_tuple(const Hypergraph& g, int k, std::span<const std::size_t> pick) {
  const int per = g.parts() / k;
  Tuple t(k);
  for (int b = 0; b < k; ++b) t[b] = tuple_rank(block_sizes(g, k, b), pick.subspan(b * per, per));
  return t;
}

ThresholdInstance hyperclique_to_vopt(const Hypergraph& g, int k, const BooleanFunction& f) {
  const int h = g.uniformity();
  const int kp = g.parts();
  if (k < 1 || kp % k != 0) throw PreconditionError("number of parts must be a multiple of k");
  if (f.arity() != k) throw PreconditionError("function arity differs from k");
  if (h < 2 || h > k) throw PreconditionError("uniformity must lie between 2 and k");
  if (hdeg(f) < h) throw PreconditionError("Hdeg of the function is below the uniformity");
  for (auto n : g.part_sizes())
    if (n == 0) throw PreconditionError("empty part");
  const int per = kp / k;

  // non-edges with the gadget of the blocks they touch
  struct Slot {
    std::vector<std::pair<int, std::size_t>> non_edge;
    std::uint32_t blocks;
  };
  std::vector<Slot> slots;
  std::map<std::uint32_t, MaskedGadget> gadgets;
  std::int64_t target = 0;
  for (auto s : subsets_of_size(kp, h)) {
    const auto ps = mask_indices(s);
    std::vector<std::size_t> sz;
    for (int p : ps) sz.push_back(g.part_sizes()[p]);
    Tuple t(ps.size(), 0);
    do {
      std::vector<std::pair<int, std::size_t>> e;
      std::uint32_t blocks = 0;
      for (std::size_t j = 0; j < ps.size(); ++j) {
        e.emplace_back(ps[j], t[j]);
        blocks |= 1U << (ps[j] / per);
      }
      if (g.has_edge(e)) continue;
      auto it = gadgets.find(blocks);
      if (it == gadgets.end()) it = gadgets.emplace(blocks, MaskedGadget::make(f, blocks)).first;
      for (std::size_t c = 0; c < it->second.expanded.size(); ++c) slots.push_back({e, blocks});
      target += it->second.gadget.beta1;
    } while (next_tuple(sz, t));
  }

  std::vector<std::size_t> sizes(k);
  std::vector<std::vector<Tuple>> members(k);
  for (int b = 0; b < k; ++b) {
    const auto bs = block_sizes(g, k, b);
    sizes[b] = static_cast<std::size_t>(tuple_count(bs));
    for (std::size_t x = 0; x < sizes[b]; ++x) members[b].push_back(tuple_unrank(bs, x));
  }
  // position of slot c inside its gadget expansion
  std::vector<const UnaryTransformation*> tau(slots.size());
  for (std::size_t c = 0; c < slots.size();) {
    const auto& m = gadgets.at(slots[c].blocks);
    for (std::size_t j = 0; j < m.expanded.size(); ++j) tau[c + j] = &m.expanded[j];
    c += m.expanded.size();
  }
  const auto vec = build(sizes, slots.size(), [&](int i, std::size_t x, std::size_t c) {
    bool contains = true;
    for (const auto& [p, v] : slots[c].non_edge)
      if (p / per == i && members[i][x][p % per] != v) contains = false;
    return tau[c]->apply(i, contains);
  });
  return {HybridInstance(vec, f, Objective::Max), target};
}

std::int64_t active_value(const ActiveSetInstance& inst, std::span<const std::size_t> tuple) {
  const auto& V = inst.vectors;
  std::int64_t v = 0;
  for (std::size_t y = 0; y < V.dim(); ++y) {
    bool all = true;
    for (int a : mask_indices(inst.active[y]))
      if (!V.entry(a, tuple[a], y)) {
        all = false;
        break;
      }
    v += all;
  }
  return v;
}

Cnf parse_dimacs(std::string_view text) {
  Cnf cnf;
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  bool header = false;
  std::size_t expected = 0;
  std::vector<int> current;
  auto fail = [&](const std::string& msg) { throw ParseError("line " + std::to_string(line_no) + ": " + msg); };
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ls(line);
    std::string tok;
    if (!(ls >> tok) || tok[0] == 'c' || tok[0] == '%') continue;
    if (tok == "p") {
      std::string fmt;
      long long n = -1, m = -1;
      if (header || !(ls >> fmt >> n >> m) || fmt != "cnf" || n < 0 || m < 0) fail("bad header");
      cnf.variables = static_cast<int>(n);
      expected = static_cast<std::size_t>(m);
      header = true;
      continue;
    }
    if (!header) fail("clause before the header");
    do {
      long long lit;
      try {
        std::size_t used;
        lit = std::stoll(tok, &used);
        if (used != tok.size()) fail("bad literal '" + tok + "'");
      } catch (const std::logic_error&) {
        fail("bad literal '" + tok + "'");
      }
      if (lit == 0) {
        cnf.clauses.push_back(std::move(current));
        current.clear();
      } else {
        if (std::llabs(lit) > cnf.variables) fail("literal out of range");
        current.push_back(static_cast<int>(lit));
      }
    } while (ls >> tok);
  }
  if (!header) throw ParseError("missing header");
  if (!current.empty()) throw ParseError("unterminated clause");
  if (cnf.clauses.size() != expected) throw ParseError("clause count differs from the header");
  return cnf;
}

int satisfied_clauses(const Cnf& cnf, std::span<const std::uint8_t> assignment) {
  int n = 0;
  for (const auto& c : cnf.clauses)
    n += std::any_of(c.begin(), c.end(), [&](int lit) { return (assignment[std::abs(lit) - 1] != 0) == (lit > 0); });
  return n;
}

SplitList split_and_list_max3sat(const Cnf& cnf, int k) {
  if (k < 1 || k > 31) throw RangeError("k out of range");
  const int per = (cnf.variables + k - 1) / k;
  if (per > 20) throw BudgetError("too many variables per side");
  const std::size_t n = std::size_t{1} << per;
  const int width = std::min(3, k);
  std::vector<std::uint32_t> active;
  for (const auto& c : cnf.clauses) {
    if (c.size() > 3) throw PreconditionError("clause with more than three literals");
    std::uint32_t mask = 0;
    for (int lit : c) mask |= 1U << ((std::abs(lit) - 1) / per);
    for (int i = 0; i < k && std::popcount(mask) < width; ++i) mask |= 1U << i;
    active.push_back(mask);
  }
  const std::vector<std::size_t> sizes(k, n);
  auto vec = build(sizes, cnf.clauses.size(), [&](int i, std::size_t x, std::size_t j) {
    for (int lit : cnf.clauses[j]) {
      const int v = std::abs(lit) - 1;
      if (v / per != i) continue;
      if (((x >> (v % per) & 1U) != 0) == (lit > 0)) return false;
    }
    return true;
  });
  return {{std::move(vec), std::move(active)}, per};
}

Tuple assignment_to_tuple(const SplitList& s, std::span<const std::uint8_t> assignment) {
  const int k = s.instance.vectors.k();
  Tuple t(k, 0);
  for (std::size_t v = 0; v < assignment.size(); ++v)
    if (assignment[v]) t[v / s.vars_per_side] |= std::size_t{1} << (v % s.vars_per_side);
  return t;
}

std::vector<std::uint8_t> tuple_to_assignment(const SplitList& s, std::span<const std::size_t> tuple) {
  std::vector<std::uint8_t> a(static_cast<std::size_t>(s.vars_per_side) * tuple.size());
  for (std::size_t v = 0; v < a.size(); ++v) a[v] = tuple[v / s.vars_per_side] >> (v % s.vars_per_side) & 1U;
  return a;
}

VectorInstance k3maxip_to_vmax(const ActiveSetInstance& inst, const BooleanFunction& f) {
  const auto& V = inst.vectors;
  const int k = V.k();
  if (k < 3 || f.arity() != k) throw PreconditionError("need k >= 3 and a function of arity k");
  if (hand(f) < 3) throw PreconditionError("Hand of the function is below 3");
  // per active set: values of the inactive sides and the satisfying pattern of the active ones
  std::map<std::uint32_t, std::pair<std::uint32_t, std::uint32_t>> plan;
  for (auto a : inst.active) {
    if (std::popcount(a) != 3) throw PreconditionError("active sets must have three sides");
    if (plan.contains(a)) continue;
    const auto rest = *unique_sat_restriction(f, a);
    std::uint32_t sat = a;
    for (std::uint32_t s = a;; s = (s - 1) & a) {
      if (f.at(rest | s)) sat = s;
      if (s == 0) break;
    }
    plan[a] = {rest, sat};
  }
  return build(V.sizes(), V.dim(), [&](int i, std::size_t x, std::size_t y) {
    const auto a = inst.active[y];
    const auto [rest, sat] = plan.at(a);
    if (!(a >> i & 1U)) return (rest >> i & 1U) != 0;
    return V.entry(i, x, y) == ((sat >> i & 1U) != 0);
  });
}

AffineInstance khmaxip_to_vmin(const ActiveSetInstance& inst, const BooleanFunction& f) {
  const auto& V = inst.vectors;
  const int k = V.k();
  if (f.arity() != k) throw PreconditionError("function arity differs from the number of sides");
  if (V.dim() == 0) return {HybridInstance(V, f, Objective::Min), 0, 1};
  const int h = std::popcount(inst.active[0]);
  for (auto a : inst.active)
    if (std::popcount(a) != h) throw PreconditionError("active sets differ in size");
  if (hdeg(f) < h) throw PreconditionError("Hdeg of the function is below the active set size");
  std::map<std::uint32_t, MaskedGadget> gadgets;
  std::int64_t beta2 = 1;
  for (auto a : inst.active)
    if (!gadgets.contains(a)) {
      auto m = MaskedGadget::make(f, a);
      beta2 = std::lcm(beta2, m.gadget.beta2);
      gadgets.emplace(a, std::move(m));
    }
  // equalize beta2 by repeating gadgets
  for (auto& [a, m] : gadgets) m.expand(k, a, beta2 / m.gadget.beta2);
  std::int64_t beta1 = 0;
  std::vector<std::pair<std::size_t, const UnaryTransformation*>> coords;
  for (std::size_t y = 0; y < V.dim(); ++y) {
    const auto& m = gadgets.at(inst.active[y]);
    beta1 += beta2 / m.gadget.beta2 * m.gadget.beta1;
    for (const auto& t : m.expanded) coords.emplace_back(y, &t);
  }
  const auto vec = build(V.sizes(), coords.size(), [&](int i, std::size_t x, std::size_t c) {
    return coords[c].second->apply(i, V.entry(i, x, coords[c].first));
  });
  return {HybridInstance(vec, f, Objective::Min), beta1, beta2};
}

K3Answer solve_k3_bruteforce(const ActiveSetInstance& inst, K3Mode mode, std::int64_t target, std::uint64_t budget) {
  const auto& sizes = inst.vectors.sizes();
  K3Answer ans;
  for (auto n : sizes)
    if (n == 0) return ans;
  check_budget(sizes, inst.vectors.dim(), budget);
  Tuple t(sizes.size(), 0);
  do {
    const auto v = active_value(inst, t);
    switch (mode) {
      case K3Mode::Ov:
      case K3Mode::ExactIp:
        if (v == (mode == K3Mode::Ov ? 0 : target)) return {true, v, t};
        break;
      case K3Mode::MaxIp:
        if (!ans.witness || v > ans.value) ans = {true, v, t};
        break;
    }
  } while (next_tuple(sizes, t));
  return ans;
}

}  // namespace optsp
