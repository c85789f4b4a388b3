#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>

#include "optsp/additive.hpp"
#include "optsp/approx_max.hpp"
#include "optsp/approx_min.hpp"
#include "optsp/boolfun.hpp"
#include "optsp/error.hpp"
#include "optsp/exact.hpp"
#include "optsp/graphformula.hpp"
#include "optsp/instances.hpp"
#include "optsp/oracle.hpp"
#include "optsp/reductions.hpp"
#include "optsp/rng.hpp"

namespace optsp::cli {

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Mismatch : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string fmt_double(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  std::ostringstream o;
  o << std::setprecision(12) << x;
  return o.str();
}

class Record {
 public:
  Record& add(std::string_view key, std::string_view v) {
    if (!text_.empty()) text_ += ' ';
    text_.append(key).append("=").append(v);
    return *this;
  }
  Record& add(std::string_view key, const std::string& v) { return add(key, std::string_view(v)); }
  Record& add(std::string_view key, const char* v) { return add(key, std::string_view(v)); }
  template <typename T>
    requires std::is_integral_v<T>
  Record& add(std::string_view key, T v) {
    return add(key, std::to_string(v));
  }
  Record& add(std::string_view key, double v) { return add(key, fmt_double(v)); }
  Record& witness(const std::optional<Tuple>& w) { return add("witness", w ? format_tuple(*w) : "none"); }
  const std::string& str() const { return text_; }

 private:
  std::string text_;
};

std::map<std::string, std::string> parse_record(const std::string& line, std::size_t line_no) {
  std::map<std::string, std::string> out;
  std::istringstream in(line);
  std::string tok;
  while (in >> tok) {
    const auto eq = tok.find('=');
    if (eq == std::string::npos || eq == 0)
      throw ParseError("line " + std::to_string(line_no) + ": expected key=value, got '" + tok + "'");
    out[tok.substr(0, eq)] = tok.substr(eq + 1);
  }
  return out;
}

Tuple parse_tuple(const std::string& text) {
  Tuple t;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto comma = std::min(text.find(',', pos), text.size());
    const auto part = text.substr(pos, comma - pos);
    if (part.empty() || part.find_first_not_of("0123456789") != std::string::npos)
      throw ParseError("bad tuple '" + text + "'");
    t.push_back(std::stoull(part));
    pos = comma + 1;
  }
  return t;
}

double parse_number(const std::string& text, const std::string& key) {
  if (text == "inf") return std::numeric_limits<double>::infinity();
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used == text.size()) return v;
  } catch (const std::exception&) {
  }
  throw ParseError("bad number for " + key + ": '" + text + "'");
}

// ---- function selection

struct FunctionArgs {
  std::string bits;
  std::string named;
  int k = 0;
};

void add_function_options(CLI::App* sub, FunctionArgs& a) {
  auto* fb = sub->add_option("--function", a.bits, "truth table, index 0 first");
  auto* fn = sub->add_option("--named", a.named, "named function, e.g. k-agreement:4");
  fb->excludes(fn);
  sub->add_option("--k", a.k, "arity")->check(CLI::Range(1, kMaxArity));
}

std::optional<BooleanFunction> resolve_function(const FunctionArgs& a) {
  std::optional<BooleanFunction> f;
  if (!a.bits.empty()) {
    f = BooleanFunction::from_bits(a.bits);
  } else if (!a.named.empty()) {
    auto name = a.named;
    if (name.find(':') == std::string::npos) {
      if (a.k == 0) throw UsageError("--named " + name + " needs :k or --k");
      name += ":" + std::to_string(a.k);
    }
    try {
      f = named_function(name);
    } catch (const ParseError&) {
      throw;
    } catch (const std::exception& e) {
      throw UsageError(e.what());
    }
  }
  if (f && a.k != 0 && f->arity() != a.k)
    throw UsageError("function has arity " + std::to_string(f->arity()) + ", --k is " + std::to_string(a.k));
  return f;
}

BooleanFunction require_function(const FunctionArgs& a) {
  auto f = resolve_function(a);
  if (!f) throw UsageError("one of --function or --named is required");
  return *f;
}

GraphFormula load_formula(const std::string& text_or_path) {
  std::ifstream in(text_or_path);
  if (in) {
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_formula(ss.str());
  }
  return parse_formula(text_or_path);
}

// ---- algorithms on vector instances

struct AlgoParams {
  std::optional<Objective> objective;
  double eps = 0.25;
  std::optional<double> c;
  double gamma = 1.0;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> hash_buckets;
  std::uint64_t budget = kDefaultOracleBudget;
};

struct AlgoOutcome {
  Objective objective = Objective::Max;
  double value = 0;
  bool integral = true;
  std::optional<Tuple> witness;
  std::optional<double> ratio;
  std::string strategy;
  std::optional<std::size_t> reduced_dim;
};

const std::vector<std::string>& exact_algos() {
  static const std::vector<std::string> v{"auto", "baseline", "hdeg1", "hyperclique", "oracle"};
  return v;
}

const std::vector<std::string>& approx_algos() {
  static const std::vector<std::string> v{"opposite",     "constant",   "polyfactor", "max-scheme",
                                          "scheme",       "min-constant", "min-scheme", "additive"};
  return v;
}

bool is_exact(const std::string& algo) {
  return std::find(exact_algos().begin(), exact_algos().end(), algo) != exact_algos().end();
}

void check_algo(const std::string& algo, const AlgoParams& p) {
  if (!is_exact(algo) && std::find(approx_algos().begin(), approx_algos().end(), algo) == approx_algos().end())
    throw UsageError("unknown algorithm " + algo);
  const bool randomized = algo == "min-constant" || algo == "min-scheme" || algo == "additive" ||
                          ((algo == "max-scheme" || algo == "scheme") && p.hash_buckets);
  if (randomized && !p.seed) throw UsageError(algo + " is randomized and needs --seed");
  if (!(p.eps > 0)) throw UsageError("--eps must be positive");
}

AlgoOutcome run_algo(const std::string& algo, const HybridInstance& inst, const AlgoParams& p) {
  check_algo(algo, p);
  AlgoOutcome out;
  auto take = [&](const SolveResult& r) {
    out.value = static_cast<double>(r.value);
    out.witness = r.witness;
  };
  auto take_approx = [&](const ApproxResult& r) {
    take(r.result);
    out.ratio = r.ratio;
  };
  const Objective own = p.objective.value_or(inst.objective());
  if (is_exact(algo)) {
    out.objective = own;
    out.strategy = algo;
    if (algo == "auto") {
      const auto r = solve_exact_auto(inst, own);
      take(r.result);
      out.strategy = r.strategy;
      for (auto& ch : out.strategy)
        if (ch == ' ') ch = '-';
      out.strategy.erase(std::remove(out.strategy.begin(), out.strategy.end(), '('), out.strategy.end());
      out.strategy.erase(std::remove(out.strategy.begin(), out.strategy.end(), ')'), out.strategy.end());
    } else if (algo == "baseline") {
      check_budget(inst.vectors().sizes(), inst.dim(), p.budget);
      take(baseline_solve(inst, own));
    } else if (algo == "hdeg1") {
      take(solve_hdeg1(inst, own));
    } else if (algo == "hyperclique") {
      take(solve_via_hyperclique(inst, own));
    } else {
      take(oracle_solve(inst, own, p.budget));
    }
    return out;
  }
  out.strategy = algo;
  if (algo == "opposite" || algo == "constant" || algo == "polyfactor" || algo == "max-scheme" || algo == "scheme") {
    out.objective = Objective::Max;
    if (algo == "opposite") {
      take_approx(approx_opposite(inst));
    } else if (algo == "constant") {
      take_approx(approx_constant(inst));
    } else if (algo == "polyfactor") {
      take_approx(approx_polyfactor(inst, p.eps));
    } else {
      SchemeOptions so;
      so.hash_buckets = p.hash_buckets;
      so.seed = p.seed.value_or(0);
      take_approx(approx_scheme_max(inst, p.eps, {}, so));
    }
  } else if (algo == "min-constant") {
    out.objective = Objective::Min;
    take_approx(approx_min_constant(inst, *p.seed, {}, p.c.value_or(3.0), p.gamma));
  } else if (algo == "min-scheme") {
    out.objective = Objective::Min;
    take_approx(approx_min_scheme(inst, p.eps, *p.seed));
  } else {
    out.objective = own;
    const auto r = additive_approx(inst, own, p.eps, *p.seed, {}, p.c.value_or(kDefaultReductionConstant));
    out.value = r.value;
    out.integral = false;
    out.witness = r.witness;
    out.reduced_dim = r.reduced_dim;
  }
  return out;
}

Record outcome_record(const std::string& algo, const AlgoOutcome& o, const HybridInstance& inst, const AlgoParams& p) {
  Record r;
  r.add("algo", algo);
  if (o.strategy != algo) r.add("strategy", o.strategy);
  r.add("objective", to_string(o.objective));
  if (o.integral)
    r.add("value", static_cast<std::int64_t>(o.value));
  else
    r.add("value", o.value);
  if (o.ratio) r.add("ratio", *o.ratio);
  if (o.reduced_dim) {
    r.add("eps", p.eps);
    r.add("dim", inst.dim());
    r.add("reduced_dim", *o.reduced_dim);
  }
  r.witness(o.witness);
  return r;
}

std::int64_t graph_tuple_value(const GraphFormula& f, const GraphStructure& g, const VectorInstance& v,
                               const Tuple& t) {
  return tuple_value(HybridInstance(v, restrict_pattern(f, g.pattern(t))), t);
}

// ---- table of named examples

struct TableRow {
  int row;
  const char* problem;
  int kmin;
  int kmax;
  std::vector<Objective> objectives;
};

const std::vector<TableRow>& table_rows() {
  static const std::vector<TableRow> rows{
      {1, "k-agreement", 2, 2, {Objective::Max, Objective::Min}},
      {2, "k-agreement", 3, 3, {Objective::Max, Objective::Min}},
      {3, "k-agreement", 4, 5, {Objective::Max}},
      {4, "k-agreement", 4, 5, {Objective::Min}},
      {5, "k-xor", 2, 5, {Objective::Max, Objective::Min}},
      {6, "k-ip", 2, 5, {Objective::Max}},
      {7, "k-ip", 2, 5, {Objective::Min}},
  };
  return rows;
}

// ---- hypergraph files: "uniformity h", "parts n1 .. nk", "edge p i p i ..."

Hypergraph parse_hypergraph(std::string_view text) {
  std::optional<int> h;
  std::optional<std::vector<std::size_t>> parts;
  std::vector<std::vector<std::pair<int, std::size_t>>> edges;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t no = 0;
  auto fail = [&](const std::string& msg) { throw ParseError("line " + std::to_string(no) + ": " + msg); };
  while (std::getline(in, line)) {
    ++no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    std::istringstream ls(line);
    std::string key;
    if (!(ls >> key)) continue;
    std::vector<long long> nums;
    std::string tok;
    while (ls >> tok) {
      if (tok.find_first_not_of("0123456789") != std::string::npos) fail("expected a number, got '" + tok + "'");
      nums.push_back(std::stoll(tok));
    }
    if (key == "uniformity") {
      if (nums.size() != 1 || nums[0] < 1) fail("uniformity takes one positive number");
      h = static_cast<int>(nums[0]);
    } else if (key == "parts") {
      if (nums.empty()) fail("parts needs at least one size");
      parts.emplace(nums.begin(), nums.end());
    } else if (key == "edge") {
      if (!h || !parts) fail("edge before uniformity and parts");
      if (nums.size() != 2 * static_cast<std::size_t>(*h)) fail("edge needs " + std::to_string(*h) + " part/index pairs");
      std::vector<std::pair<int, std::size_t>> e;
      for (std::size_t i = 0; i < nums.size(); i += 2) {
        if (nums[i] >= static_cast<long long>(parts->size())) fail("part out of range");
        if (nums[i + 1] >= static_cast<long long>((*parts)[nums[i]])) fail("vertex out of range");
        e.emplace_back(static_cast<int>(nums[i]), static_cast<std::size_t>(nums[i + 1]));
      }
      edges.push_back(std::move(e));
    } else {
      fail("unknown directive '" + key + "'");
    }
  }
  if (!h || !parts) throw ParseError("hypergraph needs uniformity and parts");
  Hypergraph g(*h, *parts);
  for (auto& e : edges) {
    try {
      g.add_edge(e);
    } catch (const RangeError& ex) {
      throw ParseError(ex.what());
    }
  }
  return g;
}

// ---- subcommands

struct Common {
  std::uint64_t seed = 0;
  std::uint64_t budget = kDefaultOracleBudget;
  std::string out;
};

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--seed", c.seed, "seed for randomized steps");
  sub->add_option("--budget", c.budget, "oracle budget (tuples times coordinates)");
  sub->add_option("--out", c.out, "write output here instead of stdout");
}

std::optional<std::uint64_t> seed_of(const CLI::App* sub, const Common& c) {
  if (sub->count("--seed") == 0) return std::nullopt;
  return c.seed;
}

struct ClassifyArgs {
  FunctionArgs fn;
  std::string formula;
  std::string objective;
  bool table1 = false;
};

void cmd_classify(const ClassifyArgs& a, std::ostream& os) {
  if (a.table1) {
    for (const auto& line : table1_lines()) os << line << '\n';
    return;
  }
  Record r;
  Classification c;
  if (!a.formula.empty()) {
    if (!a.fn.bits.empty() || !a.fn.named.empty()) throw UsageError("--formula excludes --function and --named");
    const auto f = load_formula(a.formula);
    const auto psi0 = derive_psi0(f);
    c = classify(psi0, a.objective.empty() ? f.objective : parse_objective(a.objective));
    r.add("psi0", psi0.to_bits());
  } else {
    const auto f = require_function(a.fn);
    c = classify(f, a.objective.empty() ? Objective::Max : parse_objective(a.objective));
    r.add("function", f.to_bits());
  }
  r.add("k", c.k).add("objective", to_string(c.objective)).add("hand", c.hand).add("hdeg", c.hdeg);
  r.add("regime", to_string(c.regime));
  os << r.str() << '\n';
}

struct SolveArgs {
  std::string input;
  std::string formula;
  std::string structure;
  std::string algo = "auto";
  std::string objective;
  double gamma = 0;
};

void cmd_solve(const SolveArgs& a, const Common& common, std::ostream& os) {
  if (!a.formula.empty() || !a.structure.empty()) {
    if (a.formula.empty() || a.structure.empty()) throw UsageError("--formula and --structure go together");
    if (!a.input.empty()) throw UsageError("give either an instance file or --formula/--structure");
    const auto f = load_formula(a.formula);
    const auto g = parse_structure(read_file(a.structure));
    SolveResult res;
    if (a.algo == "auto" || a.algo == "decompose") {
      DecomposeOptions opt;
      opt.budget = common.budget;
      if (a.gamma > 0) opt.gamma = a.gamma;
      res = decompose_graph_solve(f, g, {}, opt);
    } else if (a.algo == "baseline" || a.algo == "oracle") {
      res = baseline_graph_solve(f, g, common.budget);
    } else {
      throw UsageError("graph formulas take --algo auto|decompose|baseline|oracle");
    }
    Record r;
    r.add("algo", a.algo).add("objective", to_string(f.objective)).add("value", res.value).witness(res.witness);
    os << r.str() << '\n';
    return;
  }
  if (a.input.empty()) throw UsageError("solve needs an instance file");
  if (!is_exact(a.algo)) throw UsageError("solve takes --algo auto|baseline|hdeg1|hyperclique|oracle");
  const auto inst = read_instance_file(a.input);
  AlgoParams p;
  p.budget = common.budget;
  if (!a.objective.empty()) p.objective = parse_objective(a.objective);
  const auto o = run_algo(a.algo, inst, p);
  os << outcome_record(a.algo, o, inst, p).str() << '\n';
}

struct ApproxArgs {
  std::string input;
  std::string algo;
  std::string objective;
  double eps = 0.25;
  double c = 0;
  double gamma = 1.0;
  std::size_t hash_buckets = 0;
};

AlgoParams approx_params(const ApproxArgs& a, const CLI::App* sub, const Common& common) {
  AlgoParams p;
  p.eps = a.eps;
  if (sub->count("--c")) p.c = a.c;
  p.gamma = a.gamma;
  p.seed = seed_of(sub, common);
  if (sub->count("--hash-buckets")) p.hash_buckets = a.hash_buckets;
  p.budget = common.budget;
  if (!a.objective.empty()) p.objective = parse_objective(a.objective);
  return p;
}

void cmd_approx(const ApproxArgs& a, const AlgoParams& p, std::ostream& os) {
  check_algo(a.algo, p);
  if (is_exact(a.algo)) throw UsageError("exact algorithms belong to solve");
  const auto inst = read_instance_file(a.input);
  const auto o = run_algo(a.algo, inst, p);
  os << outcome_record(a.algo, o, inst, p).str() << '\n';
}

struct ReduceArgs {
  std::string input;
  std::string from;
  FunctionArgs fn;
};

void cmd_reduce(const ReduceArgs& a, std::ostream& os) {
  const auto f = require_function(a.fn);
  const int k = f.arity();
  if (a.from == "ov") {
    const auto src = read_instance_file(a.input);
    if (src.k() != k) throw PreconditionError("function arity differs from the number of sides");
    const auto t = kov_to_vopt(src.vectors(), f);
    os << serialize_instance(t.instance) << "# certificate threshold=" << t.threshold << '\n';
  } else if (a.from == "hyperclique") {
    const auto g = parse_hypergraph(read_file(a.input));
    const auto t = hyperclique_to_vopt(g, k, f);
    os << serialize_instance(t.instance) << "# certificate threshold=" << t.threshold << '\n';
  } else if (a.from == "cnf" || a.from == "k3maxip") {
    const auto cnf = parse_dimacs(read_file(a.input));
    const auto s = split_and_list_max3sat(cnf, k);
    os << "# clauses=" << cnf.clauses.size() << " variables=" << cnf.variables
       << " vars_per_side=" << s.vars_per_side << '\n';
    if (a.from == "cnf") {
      const auto r = khmaxip_to_vmin(s.instance, f);
      os << serialize_instance(r.instance) << "# certificate affine b1=" << r.beta1 << " b2=" << r.beta2 << '\n';
    } else {
      const HybridInstance inst(k3maxip_to_vmax(s.instance, f), f, Objective::Max);
      os << serialize_instance(inst) << "# certificate identity\n";
    }
  } else {
    throw UsageError("--from takes ov|hyperclique|cnf|k3maxip");
  }
}

struct GenArgs {
  FunctionArgs fn;
  std::size_t n = 4;
  std::size_t d = 8;
  double p = 0.5;
  std::string objective = "max";
};

void cmd_gen(const GenArgs& a, std::optional<std::uint64_t> seed, std::ostream& os) {
  if (!seed) throw UsageError("gen is randomized and needs --seed");
  const auto f = require_function(a.fn);
  const HybridInstance inst(gen_random(f.arity(), a.n, a.d, a.p, *seed), f, parse_objective(a.objective));
  os << serialize_instance(inst);
}

struct VerifyArgs {
  std::string input;
  std::string formula;
  std::string structure;
  std::string result;
  std::string objective;
};

void cmd_verify(const VerifyArgs& a, const Common& common, std::ostream& os) {
  const bool graph = !a.formula.empty() || !a.structure.empty();
  std::optional<HybridInstance> inst;
  std::optional<GraphFormula> gf;
  std::optional<GraphStructure> gs;
  VectorInstance gv;
  if (graph) {
    if (a.formula.empty() || a.structure.empty()) throw UsageError("--formula and --structure go together");
    gf = load_formula(a.formula);
    gs = parse_structure(read_file(a.structure));
    gv = gs->vectors();
  } else {
    if (a.input.empty()) throw UsageError("verify needs an instance file");
    inst = read_instance_file(a.input);
  }
  std::map<Objective, SolveResult> cache;
  auto opt = [&](Objective o) -> const SolveResult& {
    auto it = cache.find(o);
    if (it == cache.end()) {
      SolveResult r;
      if (graph) {
        if (o != gf->objective) throw PreconditionError("formula objective is " + std::string(to_string(gf->objective)));
        r = baseline_graph_solve(*gf, *gs, common.budget);
      } else {
        r = oracle_solve(*inst, o, common.budget);
      }
      it = cache.emplace(o, r).first;
    }
    return it->second;
  };
  const Objective own = graph ? gf->objective : (a.objective.empty() ? inst->objective() : parse_objective(a.objective));

  if (a.result.empty()) {
    const auto& r = opt(own);
    Record rec;
    rec.add("algo", "oracle").add("objective", to_string(own)).add("value", r.value).witness(r.witness);
    os << rec.str() << '\n';
    return;
  }

  std::istringstream in(read_file(a.result));
  std::string line;
  std::size_t no = 0, checked = 0, bad = 0;
  while (std::getline(in, line)) {
    ++no;
    if (line.find_first_not_of(" \t\r") == std::string::npos || line[line.find_first_not_of(" \t")] == '#') continue;
    const auto rec = parse_record(line, no);
    if (!rec.contains("value") || !rec.contains("algo"))
      throw ParseError("line " + std::to_string(no) + ": record needs algo= and value=");
    const auto algo = rec.at("algo");
    const Objective o = rec.contains("objective") ? parse_objective(rec.at("objective")) : own;
    const double value = parse_number(rec.at("value"), "value");
    const auto& best = opt(o);
    const double oracle = static_cast<double>(best.value);
    std::string problem;

    std::optional<std::int64_t> witness_value;
    if (rec.contains("witness") && rec.at("witness") != "none") {
      const auto t = parse_tuple(rec.at("witness"));
      const auto& sizes = graph ? gs->parts() : inst->vectors().sizes();
      bool in_range = t.size() == sizes.size();
      for (std::size_t i = 0; in_range && i < t.size(); ++i) in_range = t[i] < sizes[i];
      if (!in_range)
        problem = "witness out of range";
      else
        witness_value = graph ? graph_tuple_value(*gf, *gs, gv, t) : tuple_value(*inst, t);
    }

    if (problem.empty() && algo == "additive") {
      if (!rec.contains("eps") || !rec.contains("dim")) throw ParseError("line " + std::to_string(no) + ": additive record needs eps= and dim=");
      const double slack = parse_number(rec.at("eps"), "eps") * parse_number(rec.at("dim"), "dim");
      if (std::abs(value - oracle) > slack + 1e-9) problem = "outside the additive window";
    } else if (problem.empty()) {
      if (witness_value && static_cast<double>(*witness_value) != value)
        problem = "witness has value " + std::to_string(*witness_value);
      else if (rec.contains("ratio")) {
        const double ratio = parse_number(rec.at("ratio"), "ratio");
        const double tol = 1e-9 * std::max(1.0, std::abs(oracle));
        if (o == Objective::Max && (value > oracle || value * ratio < oracle - tol)) problem = "ratio violated";
        if (o == Objective::Min && (value < oracle || value > ratio * oracle + tol)) problem = "ratio violated";
      } else if (value != oracle) {
        problem = "not optimal";
      }
    }
    ++checked;
    Record out;
    out.add("line", no).add("algo", algo).add("objective", to_string(o)).add("value", rec.at("value"));
    out.add("oracle", best.value).add("status", problem.empty() ? "ok" : "mismatch");
    os << out.str();
    if (!problem.empty()) {
      ++bad;
      os << " # " << problem;
    }
    os << '\n';
  }
  Record sum;
  sum.add("verified", checked).add("mismatches", bad);
  os << sum.str() << '\n';
  if (bad != 0) throw Mismatch(std::to_string(bad) + " record(s) disagree with the oracle");
}

struct BenchArgs {
  std::string config;
  bool timing = false;
};

template <typename T>
std::vector<T> as_list(const nlohmann::json& j, const char* key) {
  if (!j.contains(key)) throw ParseError(std::string("bench suite needs '") + key + "'");
  const auto& v = j.at(key);
  if (v.is_array()) return v.get<std::vector<T>>();
  return {v.get<T>()};
}

void cmd_bench(const BenchArgs& a, const Common& common, std::ostream& os) {
  nlohmann::json cfg;
  try {
    cfg = nlohmann::json::parse(read_file(a.config));
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("bench config: ") + e.what());
  }
  if (!cfg.contains("suites") || !cfg.at("suites").is_array()) throw ParseError("bench config needs a 'suites' array");
  os << "function,k,objective,algo,n,d,seed,value,oracle,ratio,micros\n";
  try {
    for (const auto& s : cfg.at("suites")) {
      const auto name = s.at("function").get<std::string>();
      const auto f = name.find_first_not_of("01") == std::string::npos ? BooleanFunction::from_bits(name)
                                                                       : named_function(name);
      const Objective objective = parse_objective(s.value("objective", std::string("max")));
      const auto algos = as_list<std::string>(s, "algos");
      const auto ns = as_list<std::size_t>(s, "n");
      const auto ds = as_list<std::size_t>(s, "d");
      const auto seeds = as_list<std::uint64_t>(s, "seeds");
      const double density = s.value("p", 0.5);
      AlgoParams p;
      p.eps = s.value("eps", 0.25);
      if (s.contains("c")) p.c = s.at("c").get<double>();
      p.gamma = s.value("gamma", 1.0);
      p.budget = common.budget;
      auto probe = p;
      probe.seed = 0;
      for (const auto& algo : algos) check_algo(algo, probe);
      for (auto n : ns)
        for (auto d : ds)
          for (auto seed : seeds) {
            const HybridInstance inst(gen_random(f.arity(), n, d, density, seed), f, objective);
            for (const auto& algo : algos) {
              auto q = p;
              q.seed = derive_seed(seed, 0x62656e6368ULL);
              const auto t0 = std::chrono::steady_clock::now();
              const auto o = run_algo(algo, inst, q);
              const auto t1 = std::chrono::steady_clock::now();
              const double oracle = static_cast<double>(oracle_solve(inst, o.objective, common.budget).value);
              const double inf = std::numeric_limits<double>::infinity();
              double ratio;
              if (o.objective == Objective::Max)
                ratio = o.value == 0 ? (oracle == 0 ? 1.0 : inf) : oracle / o.value;
              else
                ratio = oracle == 0 ? (o.value == 0 ? 1.0 : inf) : o.value / oracle;
              const auto micros =
                  a.timing ? std::chrono::duration_cast<std::chrono::microseconds>(t1 - t0).count() : 0;
              os << name << ',' << f.arity() << ',' << to_string(o.objective) << ',' << algo << ',' << n << ',' << d
                 << ',' << seed << ','
                 << (o.integral ? std::to_string(static_cast<std::int64_t>(o.value)) : fmt_double(o.value)) << ','
                 << static_cast<std::int64_t>(oracle) << ',' << fmt_double(ratio) << ',' << micros << '\n';
            }
          }
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("bench config: ") + e.what());
  }
}

}  // namespace

std::vector<std::string> table1_lines() {
  std::vector<std::string> out;
  for (const auto& row : table_rows())
    for (int k = row.kmin; k <= row.kmax; ++k)
      for (auto o : row.objectives) {
        const auto c = classify(named_function(std::string(row.problem) + ":" + std::to_string(k)), o);
        Record r;
        r.add("row", row.row).add("problem", row.problem).add("k", k).add("objective", to_string(o));
        r.add("hdeg", c.hdeg).add("hand", c.hand).add("regime", to_string(c.regime));
        out.push_back(r.str());
      }
  return out;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Classify, solve, approximate and reduce sparse vector optimization problems", "optsp"};
  app.require_subcommand(1);
  Common common;

  ClassifyArgs ca;
  auto* classify_cmd = app.add_subcommand("classify", "Hand, Hdeg and regime of a function or graph formula");
  add_common(classify_cmd, common);
  add_function_options(classify_cmd, ca.fn);
  classify_cmd->add_option("--formula", ca.formula, "graph formula text or file");
  classify_cmd->add_option("--objective", ca.objective)->check(CLI::IsMember({"max", "min"}));
  classify_cmd->add_flag("--table1", ca.table1, "classify the table of named examples");

  SolveArgs sa;
  auto* solve_cmd = app.add_subcommand("solve", "exact optimum");
  add_common(solve_cmd, common);
  solve_cmd->add_option("input", sa.input, "instance file");
  solve_cmd->add_option("--formula", sa.formula, "graph formula text or file");
  solve_cmd->add_option("--structure", sa.structure, "graph structure file");
  solve_cmd->add_option("--algo", sa.algo);
  solve_cmd->add_option("--objective", sa.objective)->check(CLI::IsMember({"max", "min"}));
  solve_cmd->add_option("--gamma", sa.gamma, "grouping exponent for graph formulas");

  ApproxArgs aa;
  auto* approx_cmd = app.add_subcommand("approx", "approximate optimum");
  add_common(approx_cmd, common);
  approx_cmd->add_option("input", aa.input, "instance file")->required();
  approx_cmd->add_option("--algo", aa.algo)->required();
  approx_cmd->add_option("--objective", aa.objective)->check(CLI::IsMember({"max", "min"}));
  approx_cmd->add_option("--eps", aa.eps);
  approx_cmd->add_option("--c", aa.c);
  approx_cmd->add_option("--gamma", aa.gamma);
  approx_cmd->add_option("--hash-buckets", aa.hash_buckets, "OR-hash disagreement coordinates (max-scheme)");

  ReduceArgs ra;
  auto* reduce_cmd = app.add_subcommand("reduce", "compile a source problem into a vector instance");
  add_common(reduce_cmd, common);
  reduce_cmd->add_option("input", ra.input, "source file")->required();
  reduce_cmd->add_option("--from", ra.from)->required()->check(CLI::IsMember({"ov", "hyperclique", "cnf", "k3maxip"}));
  add_function_options(reduce_cmd, ra.fn);

  GenArgs ga;
  auto* gen_cmd = app.add_subcommand("gen", "random instance");
  add_common(gen_cmd, common);
  add_function_options(gen_cmd, ga.fn);
  gen_cmd->add_option("--n", ga.n, "vectors per side");
  gen_cmd->add_option("--d", ga.d, "dimension");
  gen_cmd->add_option("--p", ga.p, "density")->check(CLI::Range(0.0, 1.0));
  gen_cmd->add_option("--objective", ga.objective)->check(CLI::IsMember({"max", "min"}));

  VerifyArgs va;
  auto* verify_cmd = app.add_subcommand("verify", "oracle optimum, or check result records against it");
  add_common(verify_cmd, common);
  verify_cmd->add_option("input", va.input, "instance file");
  verify_cmd->add_option("--formula", va.formula, "graph formula text or file");
  verify_cmd->add_option("--structure", va.structure, "graph structure file");
  verify_cmd->add_option("--result", va.result, "file of solve/approx records");
  verify_cmd->add_option("--objective", va.objective)->check(CLI::IsMember({"max", "min"}));

  BenchArgs ba;
  auto* bench_cmd = app.add_subcommand("bench", "run a JSON suite and write CSV");
  add_common(bench_cmd, common);
  bench_cmd->add_option("config", ba.config, "suite config")->required();
  bench_cmd->add_flag("--timing", ba.timing, "fill the micros column");

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  std::ostringstream buf;
  int code = kExitOk;
  try {
    if (*classify_cmd) {
      cmd_classify(ca, buf);
    } else if (*solve_cmd) {
      cmd_solve(sa, common, buf);
    } else if (*approx_cmd) {
      cmd_approx(aa, approx_params(aa, approx_cmd, common), buf);
    } else if (*reduce_cmd) {
      cmd_reduce(ra, buf);
    } else if (*gen_cmd) {
      cmd_gen(ga, seed_of(gen_cmd, common), buf);
    } else if (*verify_cmd) {
      cmd_verify(va, common, buf);
    } else if (*bench_cmd) {
      cmd_bench(ba, common, buf);
    }
  } catch (const UsageError& e) {
    err << "usage: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Mismatch& e) {
    err << "mismatch: " << e.what() << '\n';
    code = kExitMismatch;
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << '\n';
    return kExitParse;
  } catch (const RangeError& e) {
    err << "bad argument: " << e.what() << '\n';
    return kExitUsage;
  } catch (const PreconditionError& e) {
    err << "precondition: " << e.what() << '\n';
    return kExitPrecondition;
  } catch (const BudgetError& e) {
    err << "budget: " << e.what() << '\n';
    return kExitBudget;
  }

  if (common.out.empty()) {
    out << buf.str();
  } else {
    std::ofstream f(common.out, std::ios::binary);
    if (!f) {
      err << "cannot write " << common.out << '\n';
      return kExitUsage;
    }
    f << buf.str();
  }
  return code;
}

}  // namespace optsp::cli
