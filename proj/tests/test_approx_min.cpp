#include <doctest.h>

#include <set>

#include "oracles.hpp"
#include "optsp/approx_min.hpp"
#include "optsp/error.hpp"
#include "optsp/oracle.hpp"
#include "optsp/rng.hpp"

using namespace optsp;

namespace {

BooleanFunction from_code(int k, std::uint64_t code) {
  return BooleanFunction::from_predicate(k, [code](std::uint32_t b) { return code >> b & 1U; });
}

HybridInstance instance_a() {
  const OneEntry ones[] = {{0, 0, 0}, {0, 0, 1}, {0, 1, 2}, {1, 0, 0}, {1, 0, 1}, {1, 0, 2}, {1, 1, 0}};
  return HybridInstance(VectorInstance::from_ones({2, 2}, 3, ones), named::and_k(2));
}

void check_listing(const std::vector<Tuple>& got, const std::vector<Tuple>& zeros, std::size_t limit) {
  REQUIRE(got.size() == std::min(limit, zeros.size()));
  REQUIRE(std::set<Tuple>(got.begin(), got.end()).size() == got.size());
  const std::set<Tuple> all(zeros.begin(), zeros.end());
  for (const auto& t : got) REQUIRE(all.contains(t));
}

// functions with a pair of sides that never restricts to a unique satisfying assignment
BooleanFunction random_hand1(SplitMix64& rng, int k) {
  while (true) {
    const auto f = from_code(k, rng.next());
    if (hand(f) <= 1) return f;
  }
}

}  // namespace

TEST_CASE("candidate values") {
  const auto a = instance_a();
  std::vector<Tuple> all;
  Tuple t(2, 0);
  do all.push_back(t);
  while (next_tuple(a.vectors().sizes(), t));
  const auto vals = values_for_candidates(a, all);
  const auto want = oracle_all_values(a);
  for (std::size_t r = 0; r < all.size(); ++r) CHECK(vals.at(all[r]) == want[r]);
  CHECK(values_for_candidates(a, {}).empty());
  CHECK(values_for_candidates(a, {Tuple{0, 1}}).at(Tuple{0, 1}) == tuple_value(a, Tuple{0, 1}));

  SplitMix64 rng(21);
  for (int i = 0; i < 60; ++i) {
    const int k = 1 + static_cast<int>(rng.below(4));
    const HybridInstance inst(gen_random(k, 1 + rng.below(5), rng.below(10), 0.5, rng.next()), from_code(k, rng.next()));
    std::vector<Tuple> cands;
    for (int j = 0; j < 40; ++j) cands.push_back(tuple_unrank(inst.vectors().sizes(), rng.below(tuple_count(inst.vectors().sizes()))));
    for (double delta : {0.0, 1.0, 3.0}) {
      const auto v = values_for_candidates(inst, cands, {delta});
      for (const auto& c : cands) REQUIRE(v.at(c) == ref::value(inst, c));
    }
  }
}

TEST_CASE("generic zero listing") {
  CHECK(list_zeros_generic(instance_a(), 10) == std::vector<Tuple>{{1, 1}});
  CHECK(list_zeros_generic(instance_a(), 0).empty());
  SplitMix64 rng(22);
  for (int i = 0; i < 100; ++i) {
    const int k = 1 + static_cast<int>(rng.below(4));
    const HybridInstance inst(gen_random(k, 1 + rng.below(5), rng.below(6), 0.3, rng.next()), from_code(k, rng.next()));
    const auto zeros = oracle_list_zeros(inst);
    for (std::size_t limit : {std::size_t{1}, std::size_t{3}, std::size_t{1000}}) check_listing(list_zeros_generic(inst, limit), zeros, limit);
  }
}

TEST_CASE("pair zero listing") {
  SplitMix64 rng(23);
  for (int i = 0; i < 100; ++i) {
    const auto v = gen_random(2, 1 + rng.below(6), rng.below(5), 0.5, rng.next());
    for (const auto& f : {named::xor_eq_k(2), named::or_k(2), BooleanFunction::from_bits("0111"), named::xor_k(2)}) {
      const HybridInstance inst(v, f);
      const auto zeros = oracle_list_zeros(inst);
      for (std::size_t limit : {std::size_t{2}, std::size_t{1000}}) check_listing(list_zeros_hand1(inst, limit), zeros, limit);
    }
  }
  for (int i = 0; i < 100; ++i) {
    const int k = 2 + static_cast<int>(rng.below(3));
    const auto v = gen_random(k, 1 + rng.below(4), rng.below(6), 0.4, rng.next());
    HybridInstance inst(v, random_hand1(rng, k));
    if (i % 2 == 1) {
      // per-coordinate functions sharing the pair of the first one
      const auto base = inst.shared_function();
      const auto pair = *hand1_pair(inst);
      std::vector<BooleanFunction> fns;
      for (std::size_t y = 0; y < v.dim(); ++y) {
        auto f = random_hand1(rng, k);
        fns.push_back(hand1_pair(HybridInstance(v, f)) == pair ? f : base);
      }
      inst = HybridInstance::per_coordinate(v, fns);
    }
    if (!hand1_pair(inst)) continue;
    const auto zeros = oracle_list_zeros(inst);
    for (std::size_t limit : {std::size_t{1}, std::size_t{5}, std::size_t{1000}}) check_listing(list_zeros_hand1(inst, limit), zeros, limit);
  }
  CHECK(list_zeros_hand1(HybridInstance(gen_random(2, 3, 2, 0.5, 1), BooleanFunction::constant(2, true)), 10).empty());
  CHECK_THROWS_AS(list_zeros_hand1(instance_a(), 10), PreconditionError);
}

TEST_CASE("gap decision") {
  const auto lister = [](const HybridInstance& h, std::size_t l) { return list_zeros_generic(h, l); };
  SplitMix64 rng(24);
  // threshold d: anything qualifies
  const HybridInstance any(gen_random(3, 4, 6, 0.5, 2), named::and_k(3));
  CHECK(lsh_gap_decide(any, 6, 3.0, 1.0, lister, 1).small);
  // every tuple has value d, far above c * t
  const HybridInstance ones(VectorInstance({3, 3}, 9), named::nor_k(2));
  for (std::uint64_t s = 0; s < 10; ++s) CHECK_FALSE(lsh_gap_decide(ones, 2, 3.0, 1.0, lister, s).small);
  int hits = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const int k = 2 + trial % 2;
    const HybridInstance inst(gen_random(k, 2 + rng.below(7), 12, 0.4, rng.next()), from_code(k, rng.next()));
    const auto opt = ref::opt(inst, Objective::Min);
    const auto g = lsh_gap_decide(inst, opt, 3.0, 1.0, lister, rng.next());
    if (g.small) {
      REQUIRE(ref::value(inst, *g.witness) == g.value);
      REQUIRE(static_cast<double>(g.value) <= 3.0 * static_cast<double>(opt));
      ++hits;
    }
  }
  CHECK(hits >= 90);
  CHECK_THROWS_AS(lsh_gap_decide(any, 1, 1.0, 1.0, lister, 1), RangeError);
}

TEST_CASE("constant-factor minimization") {
  CHECK(approx_min_constant(instance_a(), 1).result.value == 0);
  SplitMix64 rng(25);
  int within = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const int k = 2 + trial % 2;
    const HybridInstance inst(gen_random(k, 2 + rng.below(6), 4 + rng.below(12), 0.4, rng.next()), from_code(k, rng.next()));
    const auto opt = ref::opt(inst, Objective::Min);
    const auto r = approx_min_constant(inst, rng.next());
    REQUIRE(ref::value(inst, *r.result.witness) == r.result.value);
    REQUIRE(r.result.value >= opt);
    if (opt == 0) REQUIRE(r.result.value == 0);
    if (r.result.value <= 3 * opt) ++within;
  }
  CHECK(within >= 90);
}

TEST_CASE("minimization scheme for closest pair") {
  SplitMix64 rng(26);
  int within = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const HybridInstance inst(gen_random(2, 2 + rng.below(7), 1 + rng.below(16), 0.5, rng.next()), named::xor_eq_k(2));
    const auto opt = ref::opt(inst, Objective::Min);
    const auto r = approx_min_scheme(inst, 0.25, rng.next());
    REQUIRE(ref::value(inst, *r.result.witness) == r.result.value);
    REQUIRE(r.result.value >= opt);
    if (opt == 0) REQUIRE(r.result.value == 0);
    if (static_cast<double>(r.result.value) <= 1.25 * static_cast<double>(opt)) ++within;
  }
  CHECK(within >= 90);
  CHECK(approx_min_scheme(HybridInstance(VectorInstance({2, 2}, 0), named::xor_eq_k(2)), 0.25, 1).result.value == 0);
  CHECK_THROWS_AS(approx_min_scheme(instance_a(), 0.25, 1), PreconditionError);
}
