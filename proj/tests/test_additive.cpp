#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "optsp/additive.hpp"
#include "optsp/error.hpp"
#include "optsp/oracle.hpp"
#include "optsp/rng.hpp"

using namespace optsp;

namespace {

BooleanFunction from_code(int k, std::uint64_t code) {
  return BooleanFunction::from_predicate(k, [code](std::uint32_t b) { return code >> b & 1U; });
}

HybridInstance random_instance(SplitMix64& rng, std::size_t d, bool hybrid) {
  const int k = 2 + static_cast<int>(rng.below(2));
  const auto v = gen_random(k, 2 + rng.below(5), d, 0.5, rng.next());
  if (!hybrid) return HybridInstance(v, from_code(k, rng.next()));
  std::vector<BooleanFunction> fns;
  for (std::size_t y = 0; y < d; ++y) fns.push_back(from_code(k, rng.next()));
  return HybridInstance::per_coordinate(v, fns);
}

}  // namespace

TEST_CASE("covering keeps every value") {
  // x1 = (1,0), x2 = (1,1): agreement at the first coordinate only
  const OneEntry ones[] = {{0, 0, 0}, {1, 0, 0}, {1, 0, 1}};
  const HybridInstance eq(VectorInstance::from_ones({1, 1}, 2, ones), named::xor_eq_k(2));
  const auto cov = cover_to_maxip(eq);
  CHECK(cov.dim() == 4);
  CHECK(generalized_ip(cov, Tuple{0, 0}, 3U) == 1);

  const auto v = gen_random(3, 3, 5, 0.5, 9);
  CHECK(cover_to_maxip(HybridInstance(v, named::and_k(3))) == v);
  CHECK(cover_to_maxip(HybridInstance(v, BooleanFunction::constant(3, false))).dim() == 0);

  SplitMix64 rng(31);
  for (int i = 0; i < 60; ++i) {
    const auto inst = random_instance(rng, rng.below(7), i % 2 == 1);
    const auto c = cover_to_maxip(inst);
    const std::uint32_t all = (1U << inst.k()) - 1;
    Tuple t(inst.k(), 0);
    do REQUIRE(generalized_ip(c, t, all) == ref::value(inst, t));
    while (next_tuple(inst.vectors().sizes(), t));
  }
}

TEST_CASE("inner product by prefix enumeration") {
  SplitMix64 rng(32);
  for (int i = 0; i < 40; ++i) {
    const int k = 1 + static_cast<int>(rng.below(4));
    const auto v = gen_random(k, 1 + rng.below(4), rng.below(9), 0.6, rng.next());
    const auto r = maxip_by_prefix(v);
    REQUIRE(r.value == ref::opt(HybridInstance(v, named::and_k(k)), Objective::Max));
    REQUIRE(generalized_ip(v, *r.witness, (1U << k) - 1) == r.value);
  }
}

TEST_CASE("dimension reduction") {
  const auto inst = HybridInstance(gen_random(2, 4, 10, 0.5, 3), named::xor_k(2));
  const auto id = dimension_reduce(inst, 0.5, 1);
  CHECK(id.instance == inst);
  CHECK(id.scale == 1.0);

  // identical columns: the normalized optimum cannot move
  std::vector<OneEntry> ones;
  for (std::size_t y = 0; y < 64; ++y) ones.push_back({0, 1, y});
  const HybridInstance same(VectorInstance::from_ones({3, 3}, 64, ones), named::xor_k(2));
  const auto r = dimension_reduce(same, 0.2, 5, 0.1);
  CHECK(r.instance.dim() < 64);
  CHECK(ref::opt(r.instance, Objective::Max) * r.scale == doctest::Approx(64.0));

  SplitMix64 rng(33);
  for (double c : {kDefaultReductionConstant, 0.5}) {
    int ok = 0;
    for (int trial = 0; trial < 100; ++trial) {
      const auto in = random_instance(rng, 64, trial % 2 == 1);
      const auto red = dimension_reduce(in, 0.2, rng.next(), c);
      REQUIRE(red.instance.k() == in.k());
      REQUIRE(red.instance.vectors().sizes() == in.vectors().sizes());
      const double a = static_cast<double>(ref::opt(in, Objective::Max)) / 64.0;
      const double b = static_cast<double>(ref::opt(red.instance, Objective::Max)) / static_cast<double>(red.instance.dim());
      if (std::abs(a - b) <= 0.2) ++ok;
    }
    CAPTURE(c);
    CHECK(ok >= 90);
  }
}

TEST_CASE("additive approximation") {
  SplitMix64 rng(34);
  // no sampling and an exact solver: exact answer
  for (int i = 0; i < 40; ++i) {
    const auto inst = random_instance(rng, 1 + rng.below(10), i % 2 == 1);
    for (auto o : {Objective::Max, Objective::Min}) {
      const auto r = additive_approx(inst, o, 0.2, rng.next());
      REQUIRE(r.reduced_dim == inst.dim());
      REQUIRE(r.value == static_cast<double>(ref::opt(inst, o)));
    }
  }
  for (double c : {kDefaultReductionConstant, 0.5}) {
    int ok = 0;
    for (int trial = 0; trial < 100; ++trial) {
      const auto inst = random_instance(rng, 64, trial % 3 == 2);
      const auto o = trial % 2 == 0 ? Objective::Max : Objective::Min;
      const auto r = additive_approx(inst, o, 0.2, rng.next(), {}, c);
      if (std::abs(r.value - static_cast<double>(ref::opt(inst, o))) <= 0.2 * 64) ++ok;
    }
    CAPTURE(c);
    CHECK(ok >= 90);
  }
  const auto inst = random_instance(rng, 8, false);
  const auto loose = additive_approx(inst, Objective::Max, 1.5, 1);
  CHECK(loose.value >= 0.0);
  CHECK(loose.value <= 8.0);
  CHECK_THROWS_AS(additive_approx(inst, Objective::Max, 0.0, 1), RangeError);
}
