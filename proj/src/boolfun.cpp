#include "optsp/boolfun.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <map>

#include "optsp/error.hpp"

namespace optsp {

Objective flip(Objective o) { return o == Objective::Max ? Objective::Min : Objective::Max; }

std::string_view to_string(Objective o) { return o == Objective::Max ? "max" : "min"; }

Objective parse_objective(std::string_view text) {
  if (text == "max") return Objective::Max;
  if (text == "min") return Objective::Min;
  throw ParseError("objective must be max or min, got '" + std::string(text) + "'");
}

BooleanFunction::BooleanFunction(int k, std::vector<std::uint8_t> table) : k_(k), table_(std::move(table)) {
  if (k < 0 || k > kMaxArity) throw RangeError("arity out of range: " + std::to_string(k));
  if (table_.size() != (std::size_t{1} << k)) throw RangeError("truth table length does not match arity");
  for (auto& v : table_) v = v ? 1 : 0;
}

BooleanFunction BooleanFunction::from_bits(std::string_view bits) {
  const std::size_t n = bits.size();
  if (n == 0 || (n & (n - 1)) != 0) throw ParseError("truth table length must be a power of two");
  const int k = std::countr_zero(n);
  if (k > kMaxArity) throw ParseError("truth table too long");
  std::vector<std::uint8_t> table(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (bits[i] != '0' && bits[i] != '1') throw ParseError("truth table must consist of 0 and 1");
    table[i] = bits[i] == '1';
  }
  return BooleanFunction(k, std::move(table));
}

BooleanFunction BooleanFunction::from_predicate(int k, const std::function<bool(std::uint32_t)>& pred) {
  if (k < 0 || k > kMaxArity) throw RangeError("arity out of range: " + std::to_string(k));
  std::vector<std::uint8_t> table(std::size_t{1} << k);
  for (std::uint32_t b = 0; b < table.size(); ++b) table[b] = pred(b);
  return BooleanFunction(k, std::move(table));
}

BooleanFunction BooleanFunction::constant(int k, bool value) {
  return from_predicate(k, [value](std::uint32_t) { return value; });
}

bool BooleanFunction::eval(std::span<const std::uint8_t> point) const {
  if (point.size() != static_cast<std::size_t>(k_)) throw RangeError("point length does not match arity");
  std::uint32_t idx = 0;
  for (int i = 0; i < k_; ++i)
    if (point[i]) idx |= 1U << i;
  return at(idx);
}

std::string BooleanFunction::to_bits() const {
  std::string s(table_.size(), '0');
  for (std::size_t i = 0; i < table_.size(); ++i)
    if (table_[i]) s[i] = '1';
  return s;
}

BooleanFunction BooleanFunction::negated() const {
  auto t = table_;
  for (auto& v : t) v ^= 1;
  return BooleanFunction(k_, std::move(t));
}

bool BooleanFunction::is_constant() const {
  return std::all_of(table_.begin(), table_.end(), [&](std::uint8_t v) { return v == table_[0]; });
}

std::uint32_t BooleanFunction::count_satisfying() const {
  return static_cast<std::uint32_t>(std::count(table_.begin(), table_.end(), 1));
}

BooleanFunction restrict_mask(const BooleanFunction& f, std::uint32_t fixed_mask, std::uint32_t fixed_values) {
  const int k = f.arity();
  if (k < 32 && (fixed_mask >> k) != 0) throw RangeError("restriction mentions a variable beyond the arity");
  const std::vector<int> free_vars = mask_indices(~fixed_mask & ((1U << k) - 1));
  const int r = static_cast<int>(free_vars.size());
  std::vector<std::uint8_t> table(std::size_t{1} << r);
  const std::uint32_t base = fixed_values & fixed_mask;
  for (std::uint32_t b = 0; b < table.size(); ++b) {
    std::uint32_t idx = base;
    for (int j = 0; j < r; ++j)
      if (b >> j & 1U) idx |= 1U << free_vars[j];
    table[b] = f.at(idx);
  }
  return BooleanFunction(r, std::move(table));
}

BooleanFunction restrict(const BooleanFunction& f, std::span<const FixedVariable> fixed) {
  std::uint32_t mask = 0, values = 0;
  for (const auto& fv : fixed) {
    if (fv.index < 0 || fv.index >= f.arity()) throw RangeError("restricted variable out of range");
    if (mask >> fv.index & 1U) throw RangeError("variable fixed twice");
    mask |= 1U << fv.index;
    if (fv.value) values |= 1U << fv.index;
  }
  return restrict_mask(f, mask, values);
}

int MultilinearPoly::degree() const {
  int d = -1;
  for (std::uint32_t s = 0; s < coeffs_.size(); ++s)
    if (coeffs_[s] != 0) d = std::max(d, std::popcount(s));
  return d;
}

std::int64_t MultilinearPoly::evaluate(std::uint32_t point) const {
  std::int64_t v = 0;
  // sum over subsets of the point
  for (std::uint32_t s = point;; s = (s - 1) & point) {
    v += coeffs_[s];
    if (s == 0) break;
  }
  return v;
}

std::vector<std::uint32_t> MultilinearPoly::support() const {
  std::vector<std::uint32_t> out;
  for (std::uint32_t s = 0; s < coeffs_.size(); ++s)
    if (coeffs_[s] != 0) out.push_back(s);
  return out;
}

MultilinearPoly& MultilinearPoly::operator+=(const MultilinearPoly& o) {
  if (o.k_ != k_) throw RangeError("adding polynomials of different arity");
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
  return *this;
}

MultilinearPoly MultilinearPoly::scaled(std::int64_t s) const {
  MultilinearPoly p = *this;
  for (auto& c : p.coeffs_) c *= s;
  return p;
}

MultilinearPoly fourier(const BooleanFunction& f) {
  const int k = f.arity();
  MultilinearPoly p(k);
  std::vector<std::int64_t> a(f.table_size());
  for (std::uint32_t b = 0; b < a.size(); ++b) a[b] = f.at(b);
  // Moebius inversion over the subset lattice
  for (int i = 0; i < k; ++i)
    for (std::uint32_t s = 0; s < a.size(); ++s)
      if (s >> i & 1U) a[s] -= a[s ^ (1U << i)];
  for (std::uint32_t s = 0; s < a.size(); ++s) p.set(s, a[s]);
  return p;
}

int degree(const BooleanFunction& f) { return std::max(0, fourier(f).degree()); }

std::vector<std::uint32_t> subsets_of_size(int k, int size) {
  std::vector<std::uint32_t> out;
  if (size < 0 || size > k) return out;
  std::vector<int> idx(size);
  for (int i = 0; i < size; ++i) idx[i] = i;
  while (true) {
    std::uint32_t m = 0;
    for (int v : idx) m |= 1U << v;
    out.push_back(m);
    int i = size - 1;
    while (i >= 0 && idx[i] == k - size + i) --i;
    if (i < 0) break;
    ++idx[i];
    for (int j = i + 1; j < size; ++j) idx[j] = idx[j - 1] + 1;
  }
  return out;
}

std::optional<std::uint32_t> unique_sat_restriction(const BooleanFunction& f, std::uint32_t set_mask) {
  const std::uint32_t full = f.table_size() - 1;
  const std::uint32_t rest = full & ~set_mask;
  for (std::uint32_t a = 0;; a = (a - rest) & rest) {
    int count = 0;
    for (std::uint32_t s = set_mask;; s = (s - 1) & set_mask) {
      count += f.at(a | s);
      if (count > 1 || s == 0) break;
    }
    if (count == 1) return a;
    if (a == rest) break;
  }
  return std::nullopt;
}

int hand(const BooleanFunction& f) {
  if (f.is_constant()) return 0;
  const int k = f.arity();
  for (int h = k; h > 0; --h) {
    bool all = true;
    for (std::uint32_t s : subsets_of_size(k, h)) {
      if (!unique_sat_restriction(f, s)) {
        all = false;
        break;
      }
    }
    if (all) return h;
  }
  return 0;
}

namespace {

// up[S] = some T containing S has a nonzero coefficient
std::vector<std::uint8_t> superset_cover(const MultilinearPoly& p) {
  const int k = p.arity();
  std::vector<std::uint8_t> up(p.coefficients().size());
  for (std::uint32_t s = 0; s < up.size(); ++s) up[s] = p.coefficient(s) != 0;
  for (int i = 0; i < k; ++i)
    for (std::uint32_t s = 0; s < up.size(); ++s)
      if (!(s >> i & 1U)) up[s] |= up[s | (1U << i)];
  return up;
}

}  // namespace

int hdeg(const BooleanFunction& f) {
  if (f.is_constant()) return 0;
  const auto up = superset_cover(fourier(f));
  const int k = f.arity();
  for (int h = k; h > 0; --h) {
    bool all = true;
    for (std::uint32_t s : subsets_of_size(k, h))
      if (!up[s]) {
        all = false;
        break;
      }
    if (all) return h;
  }
  return 0;
}

std::vector<std::uint32_t> vanishing_sets(const MultilinearPoly& p, int size) {
  const auto up = superset_cover(p);
  std::vector<std::uint32_t> out;
  for (std::uint32_t s : subsets_of_size(p.arity(), size))
    if (!up[s]) out.push_back(s);
  return out;
}

SatisfyingAnalysis analyze_satisfying(const BooleanFunction& f) {
  SatisfyingAnalysis a;
  const int k = f.arity();
  for (std::uint32_t b = 0; b < f.table_size(); ++b) {
    if (!f.at(b)) continue;
    std::vector<std::uint8_t> pt(k);
    for (int i = 0; i < k; ++i) pt[i] = b >> i & 1U;
    a.assignments.push_back(std::move(pt));
  }
  std::sort(a.assignments.begin(), a.assignments.end());
  a.unique_sat = a.assignments.size() == 1;
  const std::uint32_t full = f.table_size() - 1;
  a.opposite = true;
  for (std::uint32_t b = 0; b < f.table_size(); ++b)
    if (f.at(b) && !f.at(b ^ full)) a.opposite = false;
  return a;
}

std::string_view to_string(Regime r) {
  switch (r) {
    case Regime::R1: return "R1";
    case Regime::R2: return "R2";
    case Regime::R2orR3: return "R2orR3";
    case Regime::R3: return "R3";
    case Regime::R4max: return "R4max";
    case Regime::R4min: return "R4min";
  }
  return "?";
}

Regime regime_for(int k, Objective objective, int hand_value, int hdeg_value) {
  if (k <= 1) return Regime::R1;
  if (k == 2) {
    if (hdeg_value <= 1) return Regime::R1;
    if (hand_value <= 1) return Regime::R2;
    return objective == Objective::Max ? Regime::R4max : Regime::R4min;
  }
  if (hdeg_value <= 2) return Regime::R1;
  if (hand_value <= 1) return Regime::R2;
  if (hand_value == 2) return Regime::R2orR3;
  if (objective == Objective::Min) return Regime::R4min;
  return hand_value < k ? Regime::R3 : Regime::R4max;
}

Classification classify(const BooleanFunction& f, Objective objective) {
  const int k = f.arity();
  if (k < 1) throw RangeError("classification needs at least one input");
  Classification c;
  c.k = k;
  c.objective = objective;
  c.hand = hand(f);
  c.hdeg = hdeg(f);
  c.regime = regime_for(k, objective, c.hand, c.hdeg);
  switch (c.regime) {
    case Regime::R1: c.notes = k == 1 ? "single input" : "low hdeg"; break;
    case Regime::R2: c.notes = "hand<=1"; break;
    case Regime::R2orR3: c.notes = "hand=2 unresolved"; break;
    case Regime::R3: c.notes = "3<=hand<k"; break;
    case Regime::R4max: c.notes = "hand=k"; break;
    case Regime::R4min: c.notes = k == 2 ? "hand=2" : "hand>=3"; break;
  }
  return c;
}

namespace named {

BooleanFunction and_k(int k) {
  const std::uint32_t full = (1U << k) - 1;
  return BooleanFunction::from_predicate(k, [full](std::uint32_t b) { return b == full; });
}
BooleanFunction or_k(int k) {
  return BooleanFunction::from_predicate(k, [](std::uint32_t b) { return b != 0; });
}
BooleanFunction nand_k(int k) { return and_k(k).negated(); }
BooleanFunction nor_k(int k) { return or_k(k).negated(); }
BooleanFunction xor_k(int k) {
  return BooleanFunction::from_predicate(k, [](std::uint32_t b) { return std::popcount(b) % 2 == 1; });
}
BooleanFunction xor_eq_k(int k) { return xor_k(k).negated(); }
BooleanFunction agreement(int k) {
  const std::uint32_t full = (1U << k) - 1;
  return BooleanFunction::from_predicate(k, [full](std::uint32_t b) { return b == 0 || b == full; });
}
BooleanFunction exact_one(int k) {
  return BooleanFunction::from_predicate(k, [](std::uint32_t b) { return std::popcount(b) == 1; });
}

}  // namespace named

namespace {

const std::map<std::string, BooleanFunction (*)(int), std::less<>>& name_table() {
  static const std::map<std::string, BooleanFunction (*)(int), std::less<>> t = {
      {"and", named::and_k},
      {"ip", named::and_k},
      {"k-ip", named::and_k},
      {"or", named::or_k},
      {"nand", named::nand_k},
      {"nor", named::nor_k},
      {"xor", named::xor_k},
      {"k-xor", named::xor_k},
      {"xor-neq", named::xor_k},
      {"xor-eq", named::xor_eq_k},
      {"k-xor-eq", named::xor_eq_k},
      {"agreement", named::agreement},
      {"k-agreement", named::agreement},
      {"exact-one", named::exact_one},
      {"exact-cover", named::exact_one},
      {"true", [](int k) { return BooleanFunction::constant(k, true); }},
      {"false", [](int k) { return BooleanFunction::constant(k, false); }},
  };
  return t;
}

}  // namespace

BooleanFunction named_function(std::string_view text) {
  const auto colon = text.find(':');
  if (colon == std::string_view::npos) throw ParseError("named function must look like name:k");
  const auto name = text.substr(0, colon);
  const auto num = text.substr(colon + 1);
  int k = -1;
  auto [ptr, ec] = std::from_chars(num.data(), num.data() + num.size(), k);
  if (ec != std::errc() || ptr != num.data() + num.size()) throw ParseError("bad arity in '" + std::string(text) + "'");
  if (k < 1 || k > kMaxArity) throw RangeError("arity out of range in '" + std::string(text) + "'");
  const auto& t = name_table();
  auto it = t.find(name);
  if (it == t.end()) throw ParseError("unknown function name '" + std::string(name) + "'");
  return it->second(k);
}

std::vector<std::string> named_function_names() {
  std::vector<std::string> out;
  for (const auto& [k, v] : name_table()) out.push_back(k);
  return out;
}

}  // namespace optsp
