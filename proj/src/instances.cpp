#include "optsp/instances.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <sstream>
#include <unordered_map>

#include "optsp/error.hpp"
#include "optsp/rng.hpp"

namespace optsp {

VectorInstance::VectorInstance(std::vector<std::size_t> sizes, std::size_t dim)
    : sizes_(std::move(sizes)), dim_(dim), support_(sizes_.size()) {
  if (dim_ > 0xffffffffULL) throw RangeError("dimension too large");
  for (std::size_t i = 0; i < sizes_.size(); ++i) support_[i].resize(sizes_[i]);
}

VectorInstance VectorInstance::from_ones(std::vector<std::size_t> sizes, std::size_t dim,
                                         std::span<const OneEntry> ones) {
  VectorInstance v(std::move(sizes), dim);
  for (const auto& e : ones) {
    if (e.side < 0 || e.side >= v.k()) throw RangeError("side index out of range");
    if (e.index >= v.sizes_[e.side]) throw RangeError("vector index out of range");
    if (e.coord >= dim) throw RangeError("coordinate out of range");
    v.support_[e.side][e.index].push_back(static_cast<std::uint32_t>(e.coord));
  }
  for (auto& side : v.support_)
    for (auto& s : side) {
      std::sort(s.begin(), s.end());
      if (std::adjacent_find(s.begin(), s.end()) != s.end()) throw RangeError("duplicate one-entry");
      v.m_ += s.size();
    }
  return v;
}

VectorInstance VectorInstance::from_supports(std::size_t dim,
                                             std::vector<std::vector<std::vector<std::uint32_t>>> supports) {
  std::vector<std::size_t> sizes;
  for (const auto& side : supports) sizes.push_back(side.size());
  VectorInstance v(std::move(sizes), dim);
  v.support_ = std::move(supports);
  for (auto& side : v.support_)
    for (auto& s : side) {
      std::sort(s.begin(), s.end());
      s.erase(std::unique(s.begin(), s.end()), s.end());
      if (!s.empty() && s.back() >= dim) throw RangeError("coordinate out of range");
      v.m_ += s.size();
    }
  return v;
}

std::size_t VectorInstance::side_weight(int side) const {
  std::size_t w = 0;
  for (const auto& s : support_[side]) w += s.size();
  return w;
}

bool VectorInstance::entry(int side, std::size_t index, std::size_t coord) const {
  const auto& s = support_[side][index];
  return std::binary_search(s.begin(), s.end(), static_cast<std::uint32_t>(coord));
}

std::vector<OneEntry> VectorInstance::ones() const {
  std::vector<OneEntry> out;
  out.reserve(m_);
  for (int i = 0; i < k(); ++i)
    for (std::size_t x = 0; x < sizes_[i]; ++x)
      for (auto y : support_[i][x]) out.push_back({i, x, y});
  return out;
}

HybridInstance::HybridInstance(VectorInstance vectors, BooleanFunction shared, Objective objective)
    : HybridInstance(std::move(vectors), std::vector<BooleanFunction>{std::move(shared)}, {}, objective) {}

HybridInstance::HybridInstance(VectorInstance vectors, std::vector<BooleanFunction> palette,
                               std::vector<std::uint32_t> coord_fn, Objective objective)
    : vectors_(std::move(vectors)), objective_(objective) {
  if (palette.empty()) throw RangeError("palette must contain a default function");
  if (coord_fn.empty()) coord_fn.assign(vectors_.dim(), 0);
  if (coord_fn.size() != vectors_.dim()) throw RangeError("one function index per coordinate required");
  for (const auto& f : palette)
    if (f.arity() != vectors_.k()) throw RangeError("function arity does not match the number of sides");
  // normalize: default first, then distinct functions in order of first use
  palette_.push_back(palette[0]);
  std::map<BooleanFunction, std::uint32_t> index{{palette[0], 0}};
  std::vector<std::int64_t> remap(palette.size(), -1);
  coord_fn_.resize(coord_fn.size());
  for (std::size_t y = 0; y < coord_fn.size(); ++y) {
    const auto p = coord_fn[y];
    if (p >= palette.size()) throw RangeError("function index out of range");
    if (remap[p] < 0) {
      auto [it, inserted] = index.emplace(palette[p], static_cast<std::uint32_t>(palette_.size()));
      if (inserted) palette_.push_back(palette[p]);
      remap[p] = it->second;
    }
    coord_fn_[y] = static_cast<std::uint32_t>(remap[p]);
  }
}

HybridInstance HybridInstance::per_coordinate(VectorInstance vectors, std::span<const BooleanFunction> fns,
                                              Objective objective) {
  if (fns.size() != vectors.dim()) throw RangeError("one function per coordinate required");
  if (fns.empty()) return HybridInstance(std::move(vectors), BooleanFunction::constant(vectors.k(), false), objective);
  std::vector<BooleanFunction> palette;
  std::map<BooleanFunction, std::uint32_t> index;
  std::vector<std::uint32_t> coord_fn(fns.size());
  for (std::size_t y = 0; y < fns.size(); ++y) {
    auto [it, inserted] = index.emplace(fns[y], static_cast<std::uint32_t>(palette.size()));
    if (inserted) palette.push_back(fns[y]);
    coord_fn[y] = it->second;
  }
  return HybridInstance(std::move(vectors), std::move(palette), std::move(coord_fn), objective);
}

HybridInstance HybridInstance::with_objective(Objective o) const {
  HybridInstance h = *this;
  h.objective_ = o;
  return h;
}

bool HybridInstance::uniform() const {
  return std::all_of(coord_fn_.begin(), coord_fn_.end(), [](std::uint32_t p) { return p == 0; });
}

const BooleanFunction& HybridInstance::shared_function() const {
  if (!uniform()) throw PreconditionError("instance uses different functions on different coordinates");
  return palette_[0];
}

std::vector<std::uint32_t> HybridInstance::used_palette() const {
  std::vector<std::uint8_t> used(palette_.size(), 0);
  for (auto p : coord_fn_) used[p] = 1;
  std::vector<std::uint32_t> out;
  for (std::uint32_t p = 0; p < used.size(); ++p)
    if (used[p]) out.push_back(p);
  return out;
}

std::int64_t HybridInstance::zero_value() const {
  std::int64_t v = 0;
  for (auto p : coord_fn_) v += palette_[p].at(0);
  return v;
}

HybridInstance HybridInstance::negated() const {
  std::vector<BooleanFunction> pal;
  for (const auto& f : palette_) pal.push_back(f.negated());
  return HybridInstance(vectors_, std::move(pal), coord_fn_, objective_);
}

bool better(Objective o, std::int64_t a, std::int64_t b) { return o == Objective::Max ? a > b : a < b; }

std::int64_t tuple_value(const HybridInstance& inst, std::span<const std::size_t> tuple) {
  const auto& V = inst.vectors();
  if (tuple.size() != static_cast<std::size_t>(V.k())) throw RangeError("tuple length does not match k");
  std::vector<std::pair<std::uint32_t, int>> hits;
  for (int i = 0; i < V.k(); ++i) {
    if (tuple[i] >= V.size(i)) throw RangeError("tuple index out of range");
    for (auto y : V.support(i, tuple[i])) hits.emplace_back(y, i);
  }
  std::sort(hits.begin(), hits.end());
  std::int64_t v = inst.zero_value();
  for (std::size_t a = 0; a < hits.size();) {
    std::size_t b = a;
    std::uint32_t pattern = 0;
    while (b < hits.size() && hits[b].first == hits[a].first) pattern |= 1U << hits[b++].second;
    const auto& f = inst.function_at(hits[a].first);
    v += static_cast<std::int64_t>(f.at(pattern)) - f.at(0);
    a = b;
  }
  return v;
}

std::int64_t generalized_ip(const VectorInstance& inst, std::span<const std::size_t> tuple, std::uint32_t side_mask) {
  if (side_mask == 0) throw RangeError("generalized inner product needs a nonempty side set");
  const auto sides = mask_indices(side_mask);
  int smallest = sides[0];
  for (int i : sides)
    if (inst.weight(i, tuple[i]) < inst.weight(smallest, tuple[smallest])) smallest = i;
  std::int64_t count = 0;
  for (auto y : inst.support(smallest, tuple[smallest])) {
    bool all = true;
    for (int i : sides)
      if (i != smallest && !inst.entry(i, tuple[i], y)) {
        all = false;
        break;
      }
    count += all;
  }
  return count;
}

ComplementTranslation complement_translate(const HybridInstance& inst) {
  auto neg = inst.negated().with_objective(flip(inst.objective()));
  return {std::move(neg), static_cast<std::int64_t>(inst.dim())};
}

namespace {

struct PairHash {
  std::size_t operator()(std::uint64_t v) const { return std::hash<std::uint64_t>()(v * 0x9e3779b97f4a7c15ULL); }
};

}  // namespace

HybridInstance fix_sides(const HybridInstance& inst, std::span<const std::optional<std::size_t>> choice) {
  const auto& V = inst.vectors();
  const int k = V.k();
  if (choice.size() != static_cast<std::size_t>(k)) throw RangeError("one choice per side required");
  std::uint32_t fixed_mask = 0;
  std::vector<std::vector<std::vector<std::uint32_t>>> kept;
  for (int i = 0; i < k; ++i) {
    if (choice[i]) {
      if (*choice[i] >= V.size(i)) throw RangeError("fixed vector index out of range");
      fixed_mask |= 1U << i;
    } else {
      kept.push_back(V.supports()[i]);
    }
  }
  const std::size_t d = V.dim();
  std::vector<std::uint32_t> pattern(d, 0);
  for (int i = 0; i < k; ++i)
    if (choice[i])
      for (auto y : V.support(i, *choice[i])) pattern[y] |= 1U << i;

  std::vector<BooleanFunction> palette{restrict_mask(inst.palette()[0], fixed_mask, 0)};
  std::map<BooleanFunction, std::uint32_t> index{{palette[0], 0}};
  std::unordered_map<std::uint64_t, std::uint32_t, PairHash> memo;
  std::vector<std::uint32_t> coord_fn(d);
  for (std::size_t y = 0; y < d; ++y) {
    const std::uint64_t key = (static_cast<std::uint64_t>(inst.palette_index(y)) << 32) | pattern[y];
    auto it = memo.find(key);
    if (it == memo.end()) {
      auto g = restrict_mask(inst.function_at(y), fixed_mask, pattern[y]);
      auto [jt, inserted] = index.emplace(g, static_cast<std::uint32_t>(palette.size()));
      if (inserted) palette.push_back(std::move(g));
      it = memo.emplace(key, jt->second).first;
    }
    coord_fn[y] = it->second;
  }
  return HybridInstance(VectorInstance::from_supports(d, std::move(kept)), std::move(palette), std::move(coord_fn),
                        inst.objective());
}

HybridInstance select_vectors(const HybridInstance& inst, const std::vector<std::vector<std::size_t>>& keep) {
  const auto& V = inst.vectors();
  if (keep.size() != static_cast<std::size_t>(V.k())) throw RangeError("one selection per side required");
  std::vector<std::vector<std::vector<std::uint32_t>>> sup(V.k());
  for (int i = 0; i < V.k(); ++i)
    for (auto x : keep[i]) {
      if (x >= V.size(i)) throw RangeError("selected vector out of range");
      sup[i].push_back(V.supports()[i][x]);
    }
  return HybridInstance(VectorInstance::from_supports(V.dim(), std::move(sup)), inst.palette(), inst.coord_fn(),
                        inst.objective());
}

HybridInstance project_coordinates(const HybridInstance& inst, std::span<const std::size_t> coords) {
  const auto& V = inst.vectors();
  std::vector<std::vector<std::uint32_t>> positions(V.dim());
  std::vector<std::uint32_t> coord_fn(coords.size());
  for (std::size_t j = 0; j < coords.size(); ++j) {
    if (coords[j] >= V.dim()) throw RangeError("projected coordinate out of range");
    positions[coords[j]].push_back(static_cast<std::uint32_t>(j));
    coord_fn[j] = inst.palette_index(coords[j]);
  }
  std::vector<std::vector<std::vector<std::uint32_t>>> sup(V.k());
  for (int i = 0; i < V.k(); ++i) {
    sup[i].resize(V.size(i));
    for (std::size_t x = 0; x < V.size(i); ++x)
      for (auto y : V.support(i, x))
        for (auto j : positions[y]) sup[i][x].push_back(j);
  }
  return HybridInstance(VectorInstance::from_supports(coords.size(), std::move(sup)), inst.palette(),
                        std::move(coord_fn), inst.objective());
}

std::uint64_t tuple_count(const std::vector<std::size_t>& sizes) {
  std::uint64_t c = 1;
  for (auto n : sizes) {
    if (n != 0 && c > ~std::uint64_t{0} / n) throw BudgetError("tuple count overflows");
    c *= n;
  }
  return c;
}

Tuple tuple_unrank(const std::vector<std::size_t>& sizes, std::uint64_t rank) {
  Tuple t(sizes.size());
  for (std::size_t i = sizes.size(); i-- > 0;) {
    t[i] = rank % sizes[i];
    rank /= sizes[i];
  }
  return t;
}

std::uint64_t tuple_rank(const std::vector<std::size_t>& sizes, std::span<const std::size_t> tuple) {
  std::uint64_t r = 0;
  for (std::size_t i = 0; i < sizes.size(); ++i) r = r * sizes[i] + tuple[i];
  return r;
}

bool next_tuple(const std::vector<std::size_t>& sizes, Tuple& t) {
  for (std::size_t i = sizes.size(); i-- > 0;) {
    if (++t[i] < sizes[i]) return true;
    t[i] = 0;
  }
  return false;
}

std::string format_tuple(std::span<const std::size_t> t) {
  std::string s;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(t[i]);
  }
  return s;
}

VectorInstance gen_random(const std::vector<std::size_t>& sizes, std::size_t d, double p, std::uint64_t seed) {
  if (p < 0.0 || p > 1.0) throw RangeError("density must lie in [0, 1]");
  SplitMix64 rng(seed);
  std::vector<std::vector<std::vector<std::uint32_t>>> sup(sizes.size());
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    sup[i].resize(sizes[i]);
    for (std::size_t x = 0; x < sizes[i]; ++x)
      for (std::size_t y = 0; y < d; ++y)
        if (rng.uniform() < p) sup[i][x].push_back(static_cast<std::uint32_t>(y));
  }
  return VectorInstance::from_supports(d, std::move(sup));
}

VectorInstance gen_random(int k, std::size_t n, std::size_t d, double p, std::uint64_t seed) {
  return gen_random(std::vector<std::size_t>(k, n), d, p, seed);
}

// ---- text format ----

namespace {

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

std::uint64_t parse_uint(std::string_view tok, std::size_t line_no) {
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size())
    throw ParseError("line " + std::to_string(line_no) + ": expected a non-negative integer, got '" +
                     std::string(tok) + "'");
  return v;
}

[[noreturn]] void fail(std::size_t line_no, const std::string& msg) {
  throw ParseError("line " + std::to_string(line_no) + ": " + msg);
}

}  // namespace

HybridInstance parse_instance(std::string_view text) {
  enum Stage { K, Sizes, Dim, Function, Obj, Body } stage = K;
  int k = 0;
  std::vector<std::size_t> sizes;
  std::size_t dim = 0;
  BooleanFunction shared;
  Objective objective = Objective::Max;
  std::map<std::size_t, BooleanFunction> overrides;
  std::vector<OneEntry> ones;

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (auto h = line.find('#'); h != std::string_view::npos) line = line.substr(0, h);
    const auto tok = split_ws(line);
    if (tok.empty()) continue;
    try {
      switch (stage) {
        case K:
          if (tok[0] != "k" || tok.size() != 2) fail(line_no, "expected 'k <int>'");
          k = static_cast<int>(parse_uint(tok[1], line_no));
          if (k < 1 || k > kMaxArity) fail(line_no, "k out of range");
          stage = Sizes;
          break;
        case Sizes:
          if (tok[0] != "sizes" || tok.size() != static_cast<std::size_t>(k) + 1)
            fail(line_no, "expected 'sizes' followed by k integers");
          for (std::size_t i = 1; i < tok.size(); ++i) sizes.push_back(parse_uint(tok[i], line_no));
          stage = Dim;
          break;
        case Dim:
          if (tok[0] != "dim" || tok.size() != 2) fail(line_no, "expected 'dim <int>'");
          dim = parse_uint(tok[1], line_no);
          if (dim > 0xffffffffULL) fail(line_no, "dimension too large");
          stage = Function;
          break;
        case Function:
          if (tok[0] != "function" || tok.size() != 2) fail(line_no, "expected 'function <bits>'");
          shared = BooleanFunction::from_bits(tok[1]);
          if (shared.arity() != k) fail(line_no, "function arity does not match k");
          stage = Obj;
          break;
        case Obj:
          if (tok[0] != "objective" || tok.size() != 2) fail(line_no, "expected 'objective max|min'");
          objective = parse_objective(tok[1]);
          stage = Body;
          break;
        case Body:
          if (tok[0] == "coordfun") {
            if (tok.size() != 3) fail(line_no, "expected 'coordfun <y> <bits>'");
            const auto y = parse_uint(tok[1], line_no);
            if (y >= dim) fail(line_no, "coordinate out of range");
            auto f = BooleanFunction::from_bits(tok[2]);
            if (f.arity() != k) fail(line_no, "function arity does not match k");
            if (!overrides.emplace(y, std::move(f)).second) fail(line_no, "coordinate function given twice");
          } else {
            if (tok.size() != 3) fail(line_no, "expected '<side> <index> <coord>'");
            const auto i = parse_uint(tok[0], line_no);
            const auto x = parse_uint(tok[1], line_no);
            const auto y = parse_uint(tok[2], line_no);
            if (i >= static_cast<std::uint64_t>(k)) fail(line_no, "side out of range");
            if (x >= sizes[i]) fail(line_no, "vector index out of range");
            if (y >= dim) fail(line_no, "coordinate out of range");
            ones.push_back({static_cast<int>(i), x, y});
          }
          break;
      }
    } catch (const ParseError&) {
      throw;
    } catch (const Error& e) {
      fail(line_no, e.what());
    }
  }
  if (stage != Body) throw ParseError("incomplete header");
  VectorInstance v;
  try {
    v = VectorInstance::from_ones(sizes, dim, ones);
  } catch (const Error& e) {
    throw ParseError(e.what());
  }
  std::vector<BooleanFunction> palette{shared};
  std::vector<std::uint32_t> coord_fn(dim, 0);
  for (auto& [y, f] : overrides) {
    coord_fn[y] = static_cast<std::uint32_t>(palette.size());
    palette.push_back(f);
  }
  return HybridInstance(std::move(v), std::move(palette), std::move(coord_fn), objective);
}

std::string serialize_instance(const HybridInstance& inst) {
  std::ostringstream os;
  const auto& V = inst.vectors();
  os << "k " << V.k() << '\n' << "sizes";
  for (auto n : V.sizes()) os << ' ' << n;
  os << '\n' << "dim " << V.dim() << '\n';
  os << "function " << inst.palette()[0].to_bits() << '\n';
  os << "objective " << to_string(inst.objective()) << '\n';
  for (std::size_t y = 0; y < V.dim(); ++y)
    if (inst.palette_index(y) != 0) os << "coordfun " << y << ' ' << inst.function_at(y).to_bits() << '\n';
  for (const auto& e : V.ones()) os << e.side << ' ' << e.index << ' ' << e.coord << '\n';
  return os.str();
}

HybridInstance read_instance_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_instance(ss.str());
}

}  // namespace optsp
