#include "optsp/graphformula.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <cmath>
#include <map>
#include <optional>
#include <sstream>

#include "optsp/error.hpp"
#include "optsp/exact.hpp"
#include "optsp/oracle.hpp"

namespace optsp {

int pair_count(int k) { return k * (k - 1) / 2; }

int pair_index(int k, int i, int j) {
  if (i > j) std::swap(i, j);
  int p = 0;
  for (int a = 0; a < i; ++a) p += k - 1 - a;
  return p + (j - i - 1);
}

std::pair<int, int> pair_at(int k, int p) {
  for (int i = 0; i < k; ++i)
    for (int j = i + 1; j < k; ++j)
      if (p-- == 0) return {i, j};
  throw RangeError("pair index out of range");
}

bool GraphFormula::eval(std::uint32_t xx, std::uint32_t xy) const {
  const auto rec = [&](const auto& self, int n) -> bool {
    const auto& node = nodes[n];
    switch (node.kind) {
      case FormulaNode::Kind::True: return true;
      case FormulaNode::Kind::False: return false;
      case FormulaNode::Kind::EdgeXX: return xx >> pair_index(k, node.a, node.b) & 1U;
      case FormulaNode::Kind::EdgeXY: return xy >> node.a & 1U;
      case FormulaNode::Kind::Not: return !self(self, node.left);
      case FormulaNode::Kind::And: return self(self, node.left) && self(self, node.right);
      case FormulaNode::Kind::Or: return self(self, node.left) || self(self, node.right);
    }
    return false;
  };
  return rec(rec, root);
}

namespace {

class FormulaParser {
 public:
  explicit FormulaParser(std::string_view text) : text_(text) {}

  GraphFormula run() {
    const auto head = word();
    if (head != "max" && head != "min") fail("expected max or min");
    f_.objective = parse_objective(head);
    while (true) {
      const auto w = word();
      if (w == "count") break;
      if (w != "x" + std::to_string(f_.k + 1)) fail("expected x" + std::to_string(f_.k + 1) + " or count");
      ++f_.k;
    }
    if (f_.k < 1 || f_.k > kMaxArity) fail("number of variables out of range");
    if (word() != "y") fail("expected the counting variable y");
    expect(':');
    f_.root = disjunction();
    skip();
    if (pos_ != text_.size()) fail("trailing input");
    return std::move(f_);
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError("formula, column " + std::to_string(pos_ + 1) + ": " + msg);
  }
  void skip() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  bool peek(char c) {
    skip();
    return pos_ < text_.size() && text_[pos_] == c;
  }
  void expect(char c) {
    if (!peek(c)) fail(std::string("expected '") + c + "'");
    ++pos_;
  }
  std::string word() {
    skip();
    std::size_t start = pos_;
    while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) ++pos_;
    if (start == pos_) fail("expected a word");
    return std::string(text_.substr(start, pos_ - start));
  }
  int add(FormulaNode n) {
    f_.nodes.push_back(n);
    return static_cast<int>(f_.nodes.size()) - 1;
  }
  // variable: 0-based x index, or -1 for y
  int variable() {
    const auto w = word();
    if (w == "y") return -1;
    if (w.size() < 2 || w[0] != 'x' || !std::all_of(w.begin() + 1, w.end(), ::isdigit)) fail("bad variable '" + w + "'");
    const long idx = std::stol(w.substr(1));
    if (idx < 1 || idx > f_.k) fail("variable '" + w + "' out of range");
    return static_cast<int>(idx - 1);
  }
  int disjunction() {
    int left = conjunction();
    while (peek('|')) {
      ++pos_;
      const int right = conjunction();
      left = add({FormulaNode::Kind::Or, 0, 0, left, right});
    }
    return left;
  }
  int conjunction() {
    int left = unary();
    while (peek('&')) {
      ++pos_;
      const int right = unary();
      left = add({FormulaNode::Kind::And, 0, 0, left, right});
    }
    return left;
  }
  int unary() {
    if (peek('!')) {
      ++pos_;
      const int child = unary();
      return add({FormulaNode::Kind::Not, 0, 0, child, -1});
    }
    if (peek('(')) {
      ++pos_;
      const int inner = disjunction();
      expect(')');
      return inner;
    }
    const auto w = word();
    if (w == "true") return add({FormulaNode::Kind::True});
    if (w == "false") return add({FormulaNode::Kind::False});
    if (w != "E") fail("unknown atom '" + w + "'");
    expect('(');
    int a = variable();
    expect(',');
    int b = variable();
    expect(')');
    if (a == -1 && b == -1) fail("E(y,y) is not allowed");
    if (a == b) fail("E with the same variable twice");
    if (a == -1 || b == -1) return add({FormulaNode::Kind::EdgeXY, std::max(a, b), 0});
    return add({FormulaNode::Kind::EdgeXX, std::min(a, b), std::max(a, b)});
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  GraphFormula f_;
};

int precedence(FormulaNode::Kind k) {
  switch (k) {
    case FormulaNode::Kind::Or: return 1;
    case FormulaNode::Kind::And: return 2;
    case FormulaNode::Kind::Not: return 3;
    default: return 4;
  }
}

void print_node(const GraphFormula& f, int n, std::string& out) {
  const auto& node = f.nodes[n];
  auto child = [&](int c, bool paren) {
    if (paren) out += '(';
    print_node(f, c, out);
    if (paren) out += ')';
  };
  const int p = precedence(node.kind);
  switch (node.kind) {
    case FormulaNode::Kind::True: out += "true"; break;
    case FormulaNode::Kind::False: out += "false"; break;
    case FormulaNode::Kind::EdgeXX:
      out += "E(x" + std::to_string(node.a + 1) + ",x" + std::to_string(node.b + 1) + ")";
      break;
    case FormulaNode::Kind::EdgeXY: out += "E(x" + std::to_string(node.a + 1) + ",y)"; break;
    case FormulaNode::Kind::Not:
      out += '!';
      child(node.left, precedence(f.nodes[node.left].kind) < p);
      break;
    case FormulaNode::Kind::And:
    case FormulaNode::Kind::Or:
      // right operands of equal precedence keep their parentheses so the tree survives
      child(node.left, precedence(f.nodes[node.left].kind) < p);
      out += node.kind == FormulaNode::Kind::And ? " & " : " | ";
      child(node.right, precedence(f.nodes[node.right].kind) <= p);
      break;
  }
}

}  // namespace

GraphFormula parse_formula(std::string_view text) { return FormulaParser(text).run(); }

std::string print_formula(const GraphFormula& f) {
  std::string out(to_string(f.objective));
  for (int i = 1; i <= f.k; ++i) out += " x" + std::to_string(i);
  out += " count y : ";
  print_node(f, f.root, out);
  return out;
}

BooleanFunction restrict_pattern(const GraphFormula& f, std::uint32_t pattern) {
  return BooleanFunction::from_predicate(f.k, [&](std::uint32_t b) { return f.eval(pattern, b); });
}

BooleanFunction derive_psi0(const GraphFormula& f) { return restrict_pattern(f, 0); }

GraphStructure::GraphStructure(std::vector<std::size_t> parts, std::size_t y_size)
    : parts_(std::move(parts)), y_size_(y_size) {
  if (parts_.empty()) throw RangeError("structure needs at least one part besides Y");
  for (auto n : parts_) degree_.emplace_back(n, 0);
}

void GraphStructure::add_xx(int s, std::size_t i, int t, std::size_t j) {
  if (s == t) throw RangeError("edge inside one part");
  if (s < 0 || t < 0 || s >= k() || t >= k() || i >= parts_[s] || j >= parts_[t]) throw RangeError("edge out of range");
  if (s > t) {
    std::swap(s, t);
    std::swap(i, j);
  }
  if (!xx_.emplace(s, i, t, j).second) throw RangeError("duplicate edge");
  ++degree_[s][i];
  ++degree_[t][j];
}

void GraphStructure::add_xy(int s, std::size_t i, std::size_t y) {
  if (s < 0 || s >= k() || i >= parts_[s] || y >= y_size_) throw RangeError("edge out of range");
  if (!xy_set_.emplace(s, i, y).second) throw RangeError("duplicate edge");
  xy_.emplace_back(s, i, y);
  ++xy_count_;
}

bool GraphStructure::has_xx(int s, std::size_t i, int t, std::size_t j) const {
  if (s > t) {
    std::swap(s, t);
    std::swap(i, j);
  }
  return xx_.contains({s, i, t, j});
}

std::uint32_t GraphStructure::pattern(std::span<const std::size_t> tuple) const {
  std::uint32_t p = 0;
  int idx = 0;
  for (int i = 0; i < k(); ++i)
    for (int j = i + 1; j < k(); ++j, ++idx)
      if (has_xx(i, tuple[i], j, tuple[j])) p |= 1U << idx;
  return p;
}

VectorInstance GraphStructure::vectors() const {
  std::vector<OneEntry> ones;
  for (const auto& [s, i, y] : xy_) ones.push_back({s, i, y});
  return VectorInstance::from_ones(parts_, y_size_, ones);
}

GraphStructure parse_structure(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  std::optional<GraphStructure> g;
  auto fail = [&](const std::string& msg) -> void {
    throw ParseError("line " + std::to_string(line_no) + ": " + msg);
  };
  auto number = [&](const std::string& tok) -> std::size_t {
    if (tok.empty() || !std::all_of(tok.begin(), tok.end(), ::isdigit)) fail("expected a number, got '" + tok + "'");
    return std::stoull(tok);
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    std::istringstream ls(line);
    std::vector<std::string> tok;
    for (std::string t; ls >> t;) tok.push_back(t);
    if (tok.empty()) continue;
    if (tok[0] == "parts") {
      if (g) fail("second parts line");
      if (tok.size() < 3) fail("parts needs at least one part and the size of Y");
      std::vector<std::size_t> parts;
      for (std::size_t j = 1; j + 1 < tok.size(); ++j) parts.push_back(number(tok[j]));
      if (parts.size() > static_cast<std::size_t>(kMaxArity)) fail("too many parts");
      g.emplace(std::move(parts), number(tok.back()));
      continue;
    }
    if (tok[0] != "edge") fail("unknown record '" + tok[0] + "'");
    if (!g) fail("edge before the parts line");
    if (tok.size() != 5) fail("edge needs four fields");
    std::string s = tok[1], t = tok[3];
    std::size_t i = number(tok[2]), j = number(tok[4]);
    if (s == "Y" && t == "Y") fail("edge inside Y");
    if (s == "Y") {
      std::swap(s, t);
      std::swap(i, j);
    }
    const auto side = number(s);
    try {
      if (t == "Y") {
        g->add_xy(static_cast<int>(side), i, j);
      } else {
        g->add_xx(static_cast<int>(side), i, static_cast<int>(number(t)), j);
      }
    } catch (const RangeError& e) {
      fail(e.what());
    }
  }
  if (!g) throw ParseError("missing parts line");
  return std::move(*g);
}

std::string serialize_structure(const GraphStructure& g) {
  std::ostringstream out;
  out << "parts";
  for (auto n : g.parts()) out << ' ' << n;
  out << ' ' << g.y_size() << '\n';
  for (const auto& [s, i, t, j] : g.xx_edges()) out << "edge " << s << ' ' << i << ' ' << t << ' ' << j << '\n';
  auto xy = g.xy_edges();
  std::sort(xy.begin(), xy.end());
  for (const auto& [s, i, y] : xy) out << "edge " << s << ' ' << i << " Y " << y << '\n';
  return out.str();
}

namespace {

void check_shapes(const GraphFormula& f, const GraphStructure& g) {
  if (f.k != g.k()) throw PreconditionError("formula and structure disagree on k");
  for (auto n : g.parts())
    if (n == 0) throw PreconditionError("some part has no vertices");
}

class Best {
 public:
  explicit Best(Objective o) : o_(o) {}
  void offer(std::int64_t v, const Tuple& t) {
    if (!r_.witness || better(o_, v, r_.value) || (v == r_.value && t < *r_.witness)) r_ = {v, t};
  }
  // nothing at value v can change the answer
  bool beats(std::int64_t v) const { return r_.witness && better(o_, r_.value, v); }
  SolveResult take() { return std::move(r_); }

 private:
  Objective o_;
  SolveResult r_;
};

class Charge {
 public:
  Charge(std::uint64_t budget, std::size_t d) : budget_(budget), per_(std::max<std::size_t>(d, 1)) {}
  void operator()() {
    used_ += per_;
    if (used_ > budget_) throw BudgetError("decomposition exceeded its budget");
  }

 private:
  std::uint64_t budget_;
  std::uint64_t per_;
  std::uint64_t used_ = 0;
};

// Visit every tuple over the given vertex lists.
template <class Fn>
void for_each_tuple(const std::vector<std::vector<std::size_t>>& lists, Fn fn) {
  std::vector<std::size_t> sizes;
  for (const auto& l : lists) {
    if (l.empty()) return;
    sizes.push_back(l.size());
  }
  Tuple t(lists.size(), 0), full(lists.size());
  do {
    for (std::size_t i = 0; i < lists.size(); ++i) full[i] = lists[i][t[i]];
    fn(full);
  } while (next_tuple(sizes, t));
}

std::vector<std::size_t> iota_list(std::size_t n) {
  std::vector<std::size_t> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = i;
  return v;
}

}  // namespace

SolveResult baseline_graph_solve(const GraphFormula& f, const GraphStructure& g, std::uint64_t budget) {
  check_shapes(f, g);
  check_budget(g.parts(), g.y_size(), budget);
  const auto V = g.vectors();
  std::map<std::uint32_t, HybridInstance> by_pattern;
  Best best(f.objective);
  Tuple t(f.k, 0);
  do {
    const auto p = g.pattern(t);
    auto it = by_pattern.find(p);
    if (it == by_pattern.end()) it = by_pattern.emplace(p, HybridInstance(V, restrict_pattern(f, p))).first;
    best.offer(tuple_value(it->second, t), t);
  } while (next_tuple(g.parts(), t));
  return best.take();
}

SolveResult decompose_graph_solve(const GraphFormula& f, const GraphStructure& g, const VectorSolver& solver,
                                  const DecomposeOptions& options, DecomposeStats* stats) {
  check_shapes(f, g);
  const int k = f.k;
  const auto V = g.vectors();
  const auto o = f.objective;
  const auto ny = static_cast<std::int64_t>(g.y_size());
  DecomposeStats local;
  DecomposeStats& st = stats ? *stats : local;
  Best best(o);
  Charge charge(options.budget, g.y_size());

  // Patterns with at least one x-x edge: anchor on the first pair, value from the expansion.
  for (std::uint32_t I = 1; I < (1U << pair_count(k)); ++I) {
    const auto poly = fourier(restrict_pattern(f, I));
    const auto [a, b] = pair_at(k, std::countr_zero(I));
    for (const auto& [s, i, t, j] : g.xx_edges()) {
      if (s != a || t != b) continue;
      std::vector<std::vector<std::size_t>> lists;
      for (int side = 0; side < k; ++side)
        lists.push_back(side == a ? std::vector<std::size_t>{i} : side == b ? std::vector<std::size_t>{j}
                                                                            : iota_list(g.parts()[side]));
      for_each_tuple(lists, [&](const Tuple& x) {
        charge();
        if (g.pattern(x) != I) return;
        std::int64_t v = poly.coefficient(0) * ny;
        for (std::uint32_t S = 1; S < (1U << k); ++S)
          if (poly.coefficient(S) != 0) v += poly.coefficient(S) * generalized_ip(V, x, S);
        best.offer(v, x);
      });
    }
  }

  // Tuples without x-x edges.
  const HybridInstance inst0(V, derive_psi0(f), o);
  const double m = static_cast<double>(std::max<std::size_t>(g.sparsity(), 1));
  const double gamma = options.gamma.value_or(1.0 / (2.0 * k));
  const auto heavy_at = static_cast<std::size_t>(std::ceil(std::pow(m, gamma)));
  const auto group_cap = static_cast<std::size_t>(std::ceil(std::pow(m, 1.0 - gamma)));
  std::vector<std::vector<std::size_t>> light(k);
  std::vector<std::vector<std::size_t>> heavy(k);
  for (int s = 0; s < k; ++s)
    for (std::size_t v = 0; v < g.parts()[s]; ++v) {
      const auto deg = g.xx_degree(s, v);
      (deg > 0 && deg >= heavy_at ? heavy : light)[s].push_back(v);
    }
  // heavy vertices: exhaustive over their completions, first heavy side only
  for (int s = 0; s < k; ++s)
    for (auto v : heavy[s]) {
      ++st.heavy_vertices;
      std::vector<std::vector<std::size_t>> lists;
      for (int side = 0; side < k; ++side)
        lists.push_back(side < s ? light[side] : side == s ? std::vector<std::size_t>{v} : iota_list(g.parts()[side]));
      for_each_tuple(lists, [&](const Tuple& x) {
        charge();
        if (g.pattern(x) == 0) best.offer(tuple_value(inst0, x), x);
      });
    }
  // light vertices: groups of bounded total degree, one vector solve per box
  std::vector<std::vector<std::vector<std::size_t>>> groups(k);
  for (int s = 0; s < k; ++s) {
    std::vector<std::size_t> cur;
    std::size_t deg = 0;
    for (auto v : light[s]) {
      cur.push_back(v);
      deg += g.xx_degree(s, v);
      if (deg >= group_cap) {
        groups[s].push_back(std::move(cur));
        cur.clear();
        deg = 0;
      }
    }
    if (!cur.empty()) groups[s].push_back(std::move(cur));
  }
  struct Box {
    std::vector<std::vector<std::size_t>> lists;
    SolveResult r;  // witness in original indices
  };
  std::vector<Box> boxes;
  std::vector<std::size_t> counts;
  for (const auto& gs : groups) counts.push_back(gs.size());
  if (std::all_of(counts.begin(), counts.end(), [](std::size_t c) { return c > 0; })) {
    Tuple pick(k, 0);
    do {
      Box box;
      for (int s = 0; s < k; ++s) box.lists.push_back(groups[s][pick[s]]);
      const auto sub = select_vectors(inst0, box.lists);
      box.r = solver ? solver(sub, o) : solve_exact_auto(sub, o).result;
      for (int s = 0; s < k; ++s) (*box.r.witness)[s] = box.lists[s][(*box.r.witness)[s]];
      boxes.push_back(std::move(box));
    } while (next_tuple(counts, pick));
  }
  st.boxes = boxes.size();
  std::stable_sort(boxes.begin(), boxes.end(),
                   [o](const Box& x, const Box& y) { return better(o, x.r.value, y.r.value); });
  for (const auto& box : boxes) {
    // the box value bounds every tuple in it
    if (best.beats(box.r.value)) break;
    ++st.boxes_solved;
    if (g.pattern(*box.r.witness) == 0) {
      best.offer(box.r.value, *box.r.witness);
      continue;
    }
    ++st.fallback_boxes;
    for_each_tuple(box.lists, [&](const Tuple& x) {
      charge();
      if (g.pattern(x) == 0) best.offer(tuple_value(inst0, x), x);
    });
  }
  return best.take();
}

}  // namespace optsp
