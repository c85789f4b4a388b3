#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "oracles.hpp"
#include "optsp/graphformula.hpp"
#include "optsp/instances.hpp"
#include "optsp/oracle.hpp"
#include "optsp/reductions.hpp"

using namespace optsp;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run_cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string fixture(const std::string& name) { return std::string(OPTSP_FIXTURES) + "/" + name; }

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::filesystem::path scratch() {
  const auto dir = std::filesystem::temp_directory_path() / "optsp_cli_test";
  std::filesystem::create_directories(dir);
  return dir;
}

std::string write_temp(const std::string& name, const std::string& text) {
  const auto p = (scratch() / name).string();
  std::ofstream(p, std::ios::binary) << text;
  return p;
}

std::string field(const std::string& record, const std::string& key) {
  std::istringstream in(record);
  std::string tok;
  while (in >> tok)
    if (tok.rfind(key + "=", 0) == 0) return tok.substr(key.size() + 1);
  return {};
}

std::int64_t certificate_value(const std::string& text, const std::string& key) {
  const auto pos = text.find("# certificate");
  REQUIRE(pos != std::string::npos);
  return std::stoll(field(text.substr(pos), key));
}

}  // namespace

TEST_CASE("classify a function") {
  const auto r = run_cli({"classify", "--k", "4", "--function", named::agreement(4).to_bits(), "--objective", "max"});
  CHECK(r.code == 0);
  CHECK(r.out.find("hand=3 hdeg=4 regime=R3") != std::string::npos);
  const auto n = run_cli({"classify", "--named", "k-agreement", "--k", "4", "--objective", "min"});
  CHECK(field(n.out, "regime") == "R4min");
  CHECK(run_cli({"classify", "--named", "k-agreement:3", "--k", "4"}).code == 1);
  CHECK(run_cli({"classify", "--function", "011"}).code == 2);
  CHECK(run_cli({"classify"}).code == 1);
}

TEST_CASE("classify table golden file") {
  const auto r = run_cli({"classify", "--table1"});
  CHECK(r.code == 0);
  CHECK(r.out == slurp(std::string(OPTSP_FIXTURES) + "/../golden/table1.txt"));
}

TEST_CASE("classify a graph formula through its vector part") {
  const auto r = run_cli({"classify", "--formula", "max x1 x2 x3 x4 count y : E(x1,y) & E(x2,y) & E(x3,y) & E(x4,y) | "
                                               "!E(x1,y) & !E(x2,y) & !E(x3,y) & !E(x4,y)"});
  CHECK(r.code == 0);
  CHECK(r.out.find("hand=3 hdeg=4 regime=R3") != std::string::npos);
  const auto f = run_cli({"classify", "--formula", fixture("common_neighbors.formula")});
  CHECK(field(f.out, "psi0") == "0001");
  CHECK(field(f.out, "regime") == "R4max");
}

TEST_CASE("randomized commands demand a seed") {
  const auto inst = fixture("and2.inst");
  CHECK(run_cli({"approx", inst, "--algo", "min-scheme"}).code == 1);
  CHECK(run_cli({"approx", inst, "--algo", "min-constant"}).code == 1);
  CHECK(run_cli({"approx", inst, "--algo", "additive"}).code == 1);
  CHECK(run_cli({"approx", inst, "--algo", "max-scheme", "--hash-buckets", "4"}).code == 1);
  CHECK(run_cli({"gen", "--named", "and:2"}).code == 1);
  CHECK(run_cli({"approx", inst, "--algo", "opposite"}).code == 3);
}

TEST_CASE("exit codes") {
  const auto bad = write_temp("bad.inst", "k 2\nsizes 1 1\ndim 2\nfunction 0001\n");
  CHECK(run_cli({"solve", bad}).code == 2);
  CHECK(run_cli({"solve", fixture("missing.inst")}).code == 2);
  CHECK(run_cli({"solve", fixture("agree3.inst"), "--algo", "hdeg1"}).code == 3);
  CHECK(run_cli({"solve", fixture("agree3.inst"), "--algo", "oracle", "--budget", "10"}).code == 4);
  CHECK(run_cli({"solve", fixture("agree3.inst"), "--algo", "nonsense"}).code == 1);
  CHECK(run_cli({"frobnicate"}).code == 1);
  CHECK(run_cli({"--help"}).code == 0);
}

TEST_CASE("instance, formula and structure round trips are byte stable") {
  for (const char* name : {"and2.inst", "agree3.inst", "hybrid2.inst"}) {
    CAPTURE(name);
    const auto canon = serialize_instance(read_instance_file(fixture(name)));
    CHECK(serialize_instance(parse_instance(canon)) == canon);
  }
  for (const char* name : {"common_neighbors.formula", "mixed.formula"}) {
    CAPTURE(name);
    const auto f = parse_formula(slurp(fixture(name)));
    const auto text = print_formula(f);
    CHECK(parse_formula(text) == f);
    CHECK(print_formula(parse_formula(text)) == text);
  }
  const auto g = parse_structure(slurp(fixture("triangle.graph")));
  const auto text = serialize_structure(g);
  CHECK(serialize_structure(parse_structure(text)) == text);

  const auto gen = run_cli({"gen", "--named", "k-agreement:3", "--n", "3", "--d", "7", "--seed", "5"});
  REQUIRE(gen.code == 0);
  CHECK(serialize_instance(parse_instance(gen.out)) == gen.out);
  CHECK(run_cli({"gen", "--named", "k-agreement:3", "--n", "3", "--d", "7", "--seed", "5"}).out == gen.out);
}

TEST_CASE("solve then verify report the same value") {
  const auto inst = fixture("agree3.inst");
  const auto s = run_cli({"solve", "--algo", "auto", inst});
  const auto v = run_cli({"verify", inst});
  REQUIRE(s.code == 0);
  REQUIRE(v.code == 0);
  CHECK(field(s.out, "value") == field(v.out, "value"));
  CHECK(field(s.out, "strategy") == "hyperclique");
}

TEST_CASE("verify accepts every solve and approx record") {
  std::vector<std::string> instances{fixture("and2.inst"), fixture("agree3.inst"), fixture("hybrid2.inst")};
  const std::pair<const char*, int> gens[] = {{"k-agreement:4", 4}, {"k-xor-eq:2", 6}, {"exact-one:3", 4}, {"or:3", 4}};
  for (std::uint64_t seed = 1; seed <= 3; ++seed)
    for (const auto& [name, n] : gens) {
      const auto g = run_cli({"gen", "--named", name, "--n", std::to_string(n), "--d", "10", "--seed", std::to_string(seed)});
      REQUIRE(g.code == 0);
      instances.push_back(write_temp(std::string(name).replace(std::string(name).find(':'), 1, "_") + "_" +
                                         std::to_string(seed) + ".inst",
                                     g.out));
    }
  const std::vector<std::vector<std::string>> commands{
      {"solve", "--algo", "auto"},
      {"solve", "--algo", "baseline"},
      {"solve", "--algo", "hdeg1"},
      {"solve", "--algo", "hyperclique"},
      {"solve", "--algo", "oracle", "--objective", "min"},
      {"approx", "--algo", "opposite"},
      {"approx", "--algo", "constant"},
      {"approx", "--algo", "polyfactor", "--eps", "0.5"},
      {"approx", "--algo", "max-scheme", "--eps", "0.25"},
      {"approx", "--algo", "max-scheme", "--hash-buckets", "4", "--seed", "3"},
      {"approx", "--algo", "min-constant", "--seed", "7"},
      {"approx", "--algo", "min-scheme", "--eps", "0.25", "--seed", "7"},
      {"approx", "--algo", "additive", "--eps", "0.2", "--seed", "7"},
      {"approx", "--algo", "additive", "--eps", "0.2", "--c", "0.5", "--seed", "7", "--objective", "min"},
  };
  std::size_t records = 0;
  for (const auto& inst : instances) {
    std::string results;
    for (auto cmd : commands) {
      cmd.insert(cmd.begin() + 1, inst);
      const auto r = run_cli(cmd);
      CAPTURE(inst);
      CAPTURE(cmd[2]);
      REQUIRE((r.code == 0 || r.code == 3));
      results += r.out;
      if (r.code == 0) ++records;
    }
    const auto path = write_temp("results.txt", results);
    const auto v = run_cli({"verify", inst, "--result", path});
    CAPTURE(v.out);
    CHECK(v.code == 0);
    CHECK(field(v.out.substr(v.out.rfind("verified=")), "mismatches") == "0");
  }
  CHECK(records > 100);
}

TEST_CASE("verify rejects a wrong record") {
  const auto inst = fixture("and2.inst");
  const auto wrong = write_temp("wrong.txt", "algo=oracle objective=max value=3 witness=0,0\n");
  CHECK(run_cli({"verify", inst, "--result", wrong}).code == 5);
  const auto lying = write_temp("lying.txt", "algo=opposite objective=max value=2 ratio=1.5 witness=0,1\n");
  CHECK(run_cli({"verify", inst, "--result", lying}).code == 5);
  const auto garbled = write_temp("garbled.txt", "value 3\n");
  CHECK(run_cli({"verify", inst, "--result", garbled}).code == 2);
}

TEST_CASE("graph formula solve and verify") {
  const auto f = fixture("common_neighbors.formula");
  const auto g = fixture("triangle.graph");
  for (const char* algo : {"auto", "baseline"}) {
    const auto s = run_cli({"solve", "--formula", f, "--structure", g, "--algo", algo});
    REQUIRE(s.code == 0);
    CHECK(field(s.out, "value") == "2");
    const auto path = write_temp("graph.txt", s.out);
    CHECK(run_cli({"verify", "--formula", f, "--structure", g, "--result", path}).code == 0);
  }
  CHECK(run_cli({"solve", "--formula", f}).code == 1);
}

TEST_CASE("reduce emits certified instances") {
  SUBCASE("orthogonal vectors") {
    const auto r = run_cli({"reduce", "--from", "ov", fixture("and2.inst"), "--named", "k-agreement:2"});
    REQUIRE(r.code == 0);
    const auto inst = parse_instance(r.out);
    const bool yes = find_orthogonal(read_instance_file(fixture("and2.inst")).vectors()).has_value();
    CHECK((oracle_solve(inst, Objective::Max).value == certificate_value(r.out, "threshold")) == yes);
  }
  SUBCASE("hyperclique") {
    const auto r = run_cli({"reduce", "--from", "hyperclique", fixture("triangle.hyper"), "--named", "k-agreement:3"});
    REQUIRE(r.code == 0);
    CHECK(oracle_solve(parse_instance(r.out), Objective::Max).value == certificate_value(r.out, "threshold"));
  }
  const auto cnf = parse_dimacs(slurp(fixture("small.cnf")));
  int best_sat = 0, worst_sat = static_cast<int>(cnf.clauses.size());
  for (std::uint32_t a = 0; a < (1U << cnf.variables); ++a) {
    std::vector<std::uint8_t> x(cnf.variables);
    for (int i = 0; i < cnf.variables; ++i) x[i] = a >> i & 1U;
    best_sat = std::max(best_sat, satisfied_clauses(cnf, x));
    worst_sat = std::min(worst_sat, satisfied_clauses(cnf, x));
  }
  const auto m = static_cast<std::int64_t>(cnf.clauses.size());
  SUBCASE("cnf") {
    for (const char* fn : {"k-ip:3", "exact-one:3", "k-xor:3"}) {
      CAPTURE(fn);
      const auto r = run_cli({"reduce", "--from", "cnf", fixture("small.cnf"), "--named", fn});
      REQUIRE(r.code == 0);
      const auto b1 = certificate_value(r.out, "b1"), b2 = certificate_value(r.out, "b2");
      const auto inst = parse_instance(r.out);
      // value = b1 - b2 * unsatisfied, so the minimum sits at the worst assignment
      CHECK(oracle_solve(inst, Objective::Min).value == b1 - b2 * (m - worst_sat));
      CHECK(oracle_solve(inst, Objective::Max).value == b1 - b2 * (m - best_sat));
    }
  }
  SUBCASE("k3maxip") {
    const auto r = run_cli({"reduce", "--from", "k3maxip", fixture("small.cnf"), "--named", "k-ip:3"});
    REQUIRE(r.code == 0);
    CHECK(r.out.find("# certificate identity") != std::string::npos);
    CHECK(oracle_solve(parse_instance(r.out), Objective::Max).value == m - worst_sat);
    CHECK(run_cli({"reduce", "--from", "k3maxip", fixture("small.cnf"), "--named", "k-agreement:3"}).code == 3);
  }
  CHECK(run_cli({"reduce", "--from", "ov", fixture("and2.inst")}).code == 1);
}

TEST_CASE("bench is deterministic and its ratios respect the guarantees") {
  const auto a = (scratch() / "bench_a.csv").string();
  const auto b = (scratch() / "bench_b.csv").string();
  REQUIRE(run_cli({"bench", fixture("bench.json"), "--out", a}).code == 0);
  REQUIRE(run_cli({"bench", fixture("bench.json"), "--out", b}).code == 0);
  const auto text = slurp(a);
  CHECK(text == slurp(b));
  CHECK(text.rfind("function,k,objective,algo,n,d,seed,value,oracle,ratio,micros\n", 0) == 0);
  std::istringstream in(text);
  std::string line;
  std::getline(in, line);
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    std::vector<std::string> cols;
    std::stringstream ss(line);
    for (std::string c; std::getline(ss, c, ',');) cols.push_back(c);
    REQUIRE(cols.size() == 11);
    const double ratio = cols[9] == "inf" ? 1e300 : std::stod(cols[9]);
    if (cols[3] == "opposite") CHECK(ratio <= std::stoi(cols[1]) + 1);
    if (cols[0] == "k-agreement:3") CHECK(cols[9] == "1");
    CHECK(cols[10] == "0");
    ++rows;
  }
  CHECK(rows == 34);
}
