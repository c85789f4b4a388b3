#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace optsp {

inline constexpr int kMaxArity = 12;

enum class Objective { Max, Min };

Objective flip(Objective o);
std::string_view to_string(Objective o);
Objective parse_objective(std::string_view text);

// Truth table of a k-input Boolean function. In a table index b, bit i holds
// the value of variable i (0-based), so variable 0 is the least significant
// bit. Serialized as 2^k characters, index 0 first: AND on two inputs is "0001".
class BooleanFunction {
 public:
  BooleanFunction() : table_(1, 0) {}
  BooleanFunction(int k, std::vector<std::uint8_t> table);

  static BooleanFunction from_bits(std::string_view bits);
  static BooleanFunction from_predicate(int k, const std::function<bool(std::uint32_t)>& pred);
  static BooleanFunction constant(int k, bool value);

  int arity() const { return k_; }
  std::uint32_t table_size() const { return static_cast<std::uint32_t>(table_.size()); }
  bool at(std::uint32_t index) const { return table_[index] != 0; }
  bool eval(std::span<const std::uint8_t> point) const;
  const std::vector<std::uint8_t>& table() const { return table_; }

  std::string to_bits() const;
  BooleanFunction negated() const;
  bool is_constant() const;
  std::uint32_t count_satisfying() const;

  bool operator==(const BooleanFunction&) const = default;
  auto operator<=>(const BooleanFunction& o) const {
    if (k_ != o.k_) return k_ <=> o.k_;
    return table_ <=> o.table_;
  }

 private:
  int k_ = 0;
  std::vector<std::uint8_t> table_;
};

struct FixedVariable {
  int index;
  bool value;
};

// Fix the listed variables; the remaining ones keep their relative order.
BooleanFunction restrict(const BooleanFunction& f, std::span<const FixedVariable> fixed);
// Same, with the fixed set as a bit mask and their values packed at the same bit positions.
BooleanFunction restrict_mask(const BooleanFunction& f, std::uint32_t fixed_mask, std::uint32_t fixed_values);

// Integer multilinear polynomial in k variables; coefficient of z^S at index mask(S).
class MultilinearPoly {
 public:
  MultilinearPoly() : coeffs_(1, 0) {}
  explicit MultilinearPoly(int k) : k_(k), coeffs_(std::size_t{1} << k, 0) {}

  int arity() const { return k_; }
  std::int64_t coefficient(std::uint32_t mask) const { return coeffs_[mask]; }
  void set(std::uint32_t mask, std::int64_t c) { coeffs_[mask] = c; }
  const std::vector<std::int64_t>& coefficients() const { return coeffs_; }

  int degree() const;  // -1 for the zero polynomial
  std::int64_t evaluate(std::uint32_t point) const;
  std::vector<std::uint32_t> support() const;

  MultilinearPoly& operator+=(const MultilinearPoly& o);
  MultilinearPoly scaled(std::int64_t s) const;
  bool operator==(const MultilinearPoly&) const = default;

 private:
  int k_ = 0;
  std::vector<std::int64_t> coeffs_;
};

MultilinearPoly fourier(const BooleanFunction& f);
int degree(const BooleanFunction& f);  // 0 for constants

// Largest h such that every h-set of variables admits a restriction of the
// others leaving exactly one satisfying assignment. Constants give 0.
int hand(const BooleanFunction& f);
// Largest h such that every h-set is contained in the support of the expansion.
// Constants give 0.
int hdeg(const BooleanFunction& f);

// Least assignment (by complement bit pattern) of the variables outside `set_mask`
// that leaves a uniquely satisfiable function on set_mask.
std::optional<std::uint32_t> unique_sat_restriction(const BooleanFunction& f, std::uint32_t set_mask);

// Sets of the given size with no superset in the expansion support, in
// increasing order of their sorted index lists.
std::vector<std::uint32_t> vanishing_sets(const MultilinearPoly& p, int size);

struct SatisfyingAnalysis {
  std::vector<std::vector<std::uint8_t>> assignments;  // lexicographic, variable 0 first
  bool unique_sat = false;
  bool opposite = false;
};
SatisfyingAnalysis analyze_satisfying(const BooleanFunction& f);

enum class Regime { R1, R2, R2orR3, R3, R4max, R4min };
std::string_view to_string(Regime r);

struct Classification {
  int k = 0;
  Objective objective = Objective::Max;
  int hand = 0;
  int hdeg = 0;
  Regime regime = Regime::R1;
  std::string notes;
};

Regime regime_for(int k, Objective objective, int hand_value, int hdeg_value);
Classification classify(const BooleanFunction& f, Objective objective);

namespace named {
BooleanFunction and_k(int k);
BooleanFunction or_k(int k);
BooleanFunction nand_k(int k);
BooleanFunction nor_k(int k);
BooleanFunction xor_k(int k);     // odd parity
BooleanFunction xor_eq_k(int k);  // even parity
BooleanFunction agreement(int k);
BooleanFunction exact_one(int k);
}  // namespace named

// "name:k", e.g. "k-agreement:4" or "and:3".
BooleanFunction named_function(std::string_view text);
std::vector<std::string> named_function_names();

// Helpers on variable masks.
inline std::vector<int> mask_indices(std::uint32_t mask) {
  std::vector<int> out;
  for (int i = 0; mask != 0; ++i, mask >>= 1)
    if (mask & 1U) out.push_back(i);
  return out;
}
// Masks with `size` bits set among `k`, ordered by their sorted index lists.
std::vector<std::uint32_t> subsets_of_size(int k, int size);

}  // namespace optsp
