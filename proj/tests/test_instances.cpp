#include <doctest.h>

#include <fstream>
#include <sstream>

#include "oracles.hpp"
#include "optsp/error.hpp"
#include "optsp/instances.hpp"
#include "optsp/oracle.hpp"

using namespace optsp;

namespace {

// X1 = {110, 001}, X2 = {111, 100}
HybridInstance instance_a(const BooleanFunction& f) {
  const OneEntry ones[] = {{0, 0, 0}, {0, 0, 1}, {0, 1, 2}, {1, 0, 0}, {1, 0, 1}, {1, 0, 2}, {1, 1, 0}};
  return HybridInstance(VectorInstance::from_ones({2, 2}, 3, ones), f);
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("small AND instance by hand") {
  const auto inst = instance_a(named::and_k(2));
  CHECK(inst.vectors().sparsity() == 7);
  const Tuple t00{0, 0}, t01{0, 1}, t11{1, 1};
  CHECK(tuple_value(inst, t00) == 2);
  CHECK(tuple_value(inst, t01) == 1);
  CHECK(tuple_value(inst, t11) == 0);
  const auto mx = oracle_solve(inst, Objective::Max);
  CHECK(mx.value == 2);
  CHECK(*mx.witness == t00);
  const auto mn = oracle_solve(inst, Objective::Min);
  CHECK(mn.value == 0);
  CHECK(*mn.witness == t11);
  CHECK(oracle_list_zeros(inst) == std::vector<Tuple>{t11});
  CHECK(oracle_solve(instance_a(named::nand_k(2)), Objective::Max).value == 3);
}

TEST_CASE("empty vectors and empty dimension") {
  const auto v = VectorInstance({2, 3}, 0);
  CHECK(oracle_solve(HybridInstance(v, named::and_k(2)), Objective::Max).value == 0);
  const auto z = VectorInstance({1, 1}, 4);
  CHECK(oracle_solve(HybridInstance(z, named::and_k(2)), Objective::Max).value == 0);
  CHECK(oracle_solve(HybridInstance(z, named::nor_k(2)), Objective::Max).value == 4);
  CHECK_THROWS_AS(oracle_solve(HybridInstance(VectorInstance({0, 1}, 2), named::and_k(2)), Objective::Max),
                  PreconditionError);
}

TEST_CASE("sparse evaluation equals naive evaluation") {
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    const int k = 1 + static_cast<int>(seed % 4);
    const auto v = gen_random(k, 3, 7, 0.4, seed);
    std::vector<BooleanFunction> fns;
    for (std::size_t y = 0; y < v.dim(); ++y)
      fns.push_back(BooleanFunction::from_predicate(k, [&](std::uint32_t b) { return ((seed * 31 + y * 7 + b * 13) % 5) < 2; }));
    const auto inst = HybridInstance::per_coordinate(v, fns);
    const auto all = oracle_all_values(inst);
    Tuple t(k, 0);
    std::size_t r = 0;
    do {
      REQUIRE(tuple_value(inst, t) == ref::value(inst, t));
      REQUIRE(all[r++] == ref::value(inst, t));
      REQUIRE(tuple_unrank(v.sizes(), tuple_rank(v.sizes(), t)) == t);
    } while (next_tuple(v.sizes(), t));
  }
}

TEST_CASE("value identity through the expansion") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const int k = 2 + static_cast<int>(seed % 3);
    const auto v = gen_random(k, 3, 6, 0.5, seed);
    const auto f = BooleanFunction::from_predicate(k, [&](std::uint32_t b) { return (b * 2654435761U + seed) % 3 == 0; });
    const auto p = fourier(f);
    const HybridInstance inst(v, f);
    Tuple t(k, 0);
    do {
      std::int64_t via = p.coefficient(0) * static_cast<std::int64_t>(v.dim());
      for (std::uint32_t S = 1; S < (1U << k); ++S) via += p.coefficient(S) * generalized_ip(v, t, S);
      REQUIRE(via == tuple_value(inst, t));
    } while (next_tuple(v.sizes(), t));
  }
}

TEST_CASE("complement translation") {
  const auto inst = instance_a(named::and_k(2));
  const auto ct = complement_translate(inst);
  CHECK(ct.instance.objective() == Objective::Min);
  CHECK(ct.offset - oracle_solve(ct.instance, Objective::Min).value == oracle_solve(inst, Objective::Max).value);
}

TEST_CASE("sub-instances") {
  const auto v = gen_random(3, 3, 6, 0.5, 99);
  const auto inst = HybridInstance(v, named::agreement(3));
  const std::vector<std::optional<std::size_t>> choice{std::nullopt, 2, std::nullopt};
  const auto res = fix_sides(inst, choice);
  CHECK(res.k() == 2);
  Tuple t(2, 0);
  do {
    const Tuple full{t[0], 2, t[1]};
    REQUIRE(tuple_value(res, t) == tuple_value(inst, full));
  } while (next_tuple(res.vectors().sizes(), t));

  const auto sel = select_vectors(inst, {{2}, {0, 1}, {1}});
  const Tuple a{0, 1, 0}, b{2, 1, 1};
  CHECK(tuple_value(sel, a) == tuple_value(inst, b));

  const std::size_t coords[] = {5, 0, 0};
  const auto proj = project_coordinates(inst, coords);
  CHECK(proj.dim() == 3);
  for (int i = 0; i < 3; ++i) CHECK(proj.vectors().entry(i, 1, 1) == inst.vectors().entry(i, 1, 0));
}

TEST_CASE("seeded generation is reproducible") {
  CHECK(gen_random(3, 4, 10, 0.3, 5) == gen_random(3, 4, 10, 0.3, 5));
  CHECK_FALSE(gen_random(3, 4, 10, 0.3, 5) == gen_random(3, 4, 10, 0.3, 6));
  CHECK(gen_random(2, 3, 4, 1.0, 1).sparsity() == 24);
  CHECK(gen_random(2, 3, 4, 0.0, 1).sparsity() == 0);
}

TEST_CASE("text format round trip") {
  const auto inst = instance_a(named::and_k(2));
  const auto text = serialize_instance(inst);
  CHECK(parse_instance(text) == inst);
  CHECK(serialize_instance(parse_instance(text)) == text);

  for (const char* name : {"and2.inst", "agree3.inst", "hybrid2.inst"}) {
    CAPTURE(name);
    const auto raw = slurp(std::string(OPTSP_FIXTURES) + "/" + name);
    const auto canon = serialize_instance(parse_instance(raw));
    CHECK(serialize_instance(parse_instance(canon)) == canon);
  }
  const auto commented = slurp(std::string(OPTSP_FIXTURES) + "/and2.inst");
  CHECK(parse_instance(commented) == inst);
}

TEST_CASE("parse errors carry line numbers") {
  const char* bad_side = "k 2\nsizes 1 1\ndim 2\nfunction 0001\nobjective max\n2 0 0\n";
  try {
    parse_instance(bad_side);
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("line 6") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_instance("k 2\nsizes 1 1\ndim 2\nfunction 001\nobjective max\n"), ParseError);
  CHECK_THROWS_AS(parse_instance("k 2\nsizes 1 1\ndim 2\nfunction 0001\nobjective max\n0 0 0\n0 0 0\n"), ParseError);
  CHECK_THROWS_AS(parse_instance("k 2\nsizes 1 1\ndim 2\nfunction 0001\n"), ParseError);
  CHECK_THROWS_AS(parse_instance("k 2\nsizes 1 1\ndim 2\nfunction 0001\nobjective best\n"), ParseError);
  CHECK_THROWS_AS(parse_instance("k 2\nsizes 1 1\ndim 2\nfunction 0001\nobjective max\ncoordfun 5 0110\n"), ParseError);
}

TEST_CASE("oracle budget") {
  const auto v = gen_random(3, 20, 50, 0.5, 1);
  CHECK_THROWS_AS(oracle_solve(HybridInstance(v, named::and_k(3)), Objective::Max, 1000), BudgetError);
}

TEST_CASE("furthest neighbor and inner product references") {
  const auto v = gen_random(2, 5, 9, 0.5, 3);
  const auto fn = exact_furthest_neighbor(v);
  CHECK(fn.value == ref::opt(HybridInstance(v, named::xor_k(2)), Objective::Max));
  const auto ip = exact_maxip(v);
  CHECK(ip.value == ref::opt(HybridInstance(v, named::and_k(2)), Objective::Max));
}
