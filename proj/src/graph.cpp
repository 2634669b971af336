#include "drclosure/graph.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

namespace drclosure {

bool Report::has(std::string_view code) const {
  return std::any_of(errors.begin(), errors.end(), [&](const Diagnostic& d) { return d.code == code; });
}

std::optional<std::size_t> MarkedDualGraph::find_vertex(std::string_view id) const {
  for (std::size_t v = 0; v < vertices.size(); ++v) {
    if (vertices[v].id == id) return v;
  }
  return std::nullopt;
}

std::size_t MarkedDualGraph::vertex_index(std::string_view id) const {
  auto v = find_vertex(id);
  if (!v) throw InputError(std::string(id), "unknown vertex");
  return *v;
}

int MarkedDualGraph::total_genus() const {
  int g = 0;
  for (const auto& v : vertices) g += v.genus;
  return g + static_cast<int>(edges.size()) - static_cast<int>(vertices.size()) + 1;
}

std::vector<int> MarkedDualGraph::valence(bool count_critical) const {
  std::vector<int> val(vertices.size(), 0);
  for (const auto& e : edges) {
    ++val[e.ends[0]];
    ++val[e.ends[1]];
  }
  for (const auto& l : legs) {
    if (count_critical || !l.is_critical()) ++val[l.vertex];
  }
  return val;
}

bool MarkedDualGraph::is_connected() const {
  if (vertices.empty()) return false;
  std::vector<std::size_t> parent(vertices.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  std::size_t components = vertices.size();
  for (const auto& e : edges) {
    auto a = find(e.ends[0]);
    auto b = find(e.ends[1]);
    if (a != b) {
      parent[a] = b;
      --components;
    }
  }
  return components == 1;
}

bool MarkedDualGraph::vertex_stable(std::size_t v, bool count_critical) const {
  return 2 * vertices[v].genus - 2 + valence(count_critical)[v] > 0;
}

std::string MarkedDualGraph::half_edge_id(std::size_t edge, int side) const {
  return edges[edge].id + (side == 0 ? "+" : "-");
}

std::string MarkedDualGraph::point_id(const PointRef& p) const {
  return p.kind == PointRef::Kind::Leg ? legs[p.index].id : half_edge_id(p.index, p.side);
}

std::optional<PointRef> MarkedDualGraph::find_point(std::string_view id) const {
  for (std::size_t l = 0; l < legs.size(); ++l) {
    if (legs[l].id == id) return PointRef{PointRef::Kind::Leg, l, 0};
  }
  if (id.size() >= 2 && (id.back() == '+' || id.back() == '-')) {
    std::string_view stem = id.substr(0, id.size() - 1);
    for (std::size_t e = 0; e < edges.size(); ++e) {
      if (edges[e].id == stem) return PointRef{PointRef::Kind::HalfEdge, e, id.back() == '+' ? 0 : 1};
    }
  }
  return std::nullopt;
}

std::size_t MarkedDualGraph::point_vertex(const PointRef& p) const {
  return p.kind == PointRef::Kind::Leg ? legs[p.index].vertex
                                       : edges[p.index].ends[static_cast<std::size_t>(p.side)];
}

std::vector<PointRef> MarkedDualGraph::points_on(std::size_t v) const {
  std::vector<PointRef> out;
  for (std::size_t e = 0; e < edges.size(); ++e) {
    for (int s = 0; s < 2; ++s) {
      if (edges[e].ends[static_cast<std::size_t>(s)] == v) out.push_back({PointRef::Kind::HalfEdge, e, s});
    }
  }
  for (std::size_t l = 0; l < legs.size(); ++l) {
    if (legs[l].vertex == v) out.push_back({PointRef::Kind::Leg, l, 0});
  }
  return out;
}

std::vector<PointRef> MarkedDualGraph::all_points() const {
  std::vector<PointRef> out;
  for (std::size_t e = 0; e < edges.size(); ++e) {
    out.push_back({PointRef::Kind::HalfEdge, e, 0});
    out.push_back({PointRef::Kind::HalfEdge, e, 1});
  }
  for (std::size_t l = 0; l < legs.size(); ++l) out.push_back({PointRef::Kind::Leg, l, 0});
  return out;
}

PointRef MarkedDualGraph::opposite(const PointRef& half_edge) const {
  return {PointRef::Kind::HalfEdge, half_edge.index, 1 - half_edge.side};
}

GraphDiagnostics validate(const MarkedDualGraph& g) {
  GraphDiagnostics d;
  std::set<std::string> seen_v, seen_e, seen_l;
  for (const auto& v : g.vertices) {
    if (!seen_v.insert(v.id).second) d.report.error("duplicate-id", v.id, "duplicate vertex id");
    if (v.genus < 0) d.report.error("negative-genus", v.id, "vertex genus must be nonnegative");
  }
  for (const auto& e : g.edges) {
    if (!seen_e.insert(e.id).second) d.report.error("duplicate-id", e.id, "duplicate edge id");
    for (auto end : e.ends) {
      if (end >= g.vertices.size()) d.report.error("dangling-half-edge", e.id, "edge end has no vertex");
    }
  }
  for (const auto& l : g.legs) {
    if (!seen_l.insert(l.id).second) d.report.error("duplicate-id", l.id, "duplicate leg id");
    if (l.vertex >= g.vertices.size()) d.report.error("dangling-leg", l.id, "leg has no vertex");
  }
  if (!d.report.ok()) return d;

  d.connected = g.is_connected();
  if (!d.connected) d.report.error("disconnected", "", "graph is not connected");
  d.genus = g.total_genus();
  if (d.genus < 0) d.report.error("negative-genus", "", "total genus is negative");
  d.stable = true;
  for (std::size_t v = 0; v < g.vertices.size(); ++v) {
    if (!g.vertex_stable(v)) {
      d.stable = false;
      d.unstable_vertices.push_back(g.vertices[v].id);
      d.report.warn("unstable-vertex", g.vertices[v].id, "2g-2+valence <= 0 (prestable)");
    }
  }
  for (const auto& l : g.legs) {
    if (!l.is_critical()) d.mu_sum += l.mu;
  }
  return d;
}

// ---------------------------------------------------------------------------

int LevelStructure::depth() const {
  if (level.empty()) return 0;
  return -*std::min_element(level.begin(), level.end());
}

bool LevelStructure::normalized() const {
  if (level.empty()) return true;
  std::set<int> attained(level.begin(), level.end());
  if (*attained.rbegin() != 0) return false;
  int expect = 0;
  for (auto it = attained.rbegin(); it != attained.rend(); ++it, --expect) {
    if (*it != expect) return false;
  }
  return true;
}

bool LevelStructure::horizontal(const MarkedDualGraph& g, std::size_t edge) const {
  const auto& e = g.edges[edge];
  return level[e.ends[0]] == level[e.ends[1]];
}

int LevelStructure::upper_side(const MarkedDualGraph& g, std::size_t edge) const {
  const auto& e = g.edges[edge];
  int a = level[e.ends[0]], b = level[e.ends[1]];
  if (a != b) return a > b ? 0 : 1;
  if (e.ends[0] == e.ends[1]) return 0;
  return g.vertices[e.ends[0]].id <= g.vertices[e.ends[1]].id ? 0 : 1;
}

int LevelStructure::level_of(const MarkedDualGraph& g, const PointRef& p) const {
  return level[g.point_vertex(p)];
}

LevelStructure normalize_levels(std::vector<int> raw) {
  std::set<int> attained(raw.begin(), raw.end());
  std::map<int, int> rank;
  int next = 0;
  for (auto it = attained.rbegin(); it != attained.rend(); ++it) rank[*it] = next--;
  for (auto& x : raw) x = rank[x];
  return LevelStructure{std::move(raw)};
}

LevelSubcomplex subcomplex_leq(const MarkedDualGraph& g, const LevelStructure& levels, int i) {
  LevelSubcomplex c;
  c.level = i;
  for (std::size_t v = 0; v < g.vertices.size(); ++v) {
    if (levels.level[v] <= i) c.vertices.push_back(v);
  }
  for (std::size_t e = 0; e < g.edges.size(); ++e) {
    const auto& ed = g.edges[e];
    if (levels.level[ed.ends[0]] <= i && levels.level[ed.ends[1]] <= i) c.edges.push_back(e);
  }
  for (std::size_t l = 0; l < g.legs.size(); ++l) {
    if (levels.level[g.legs[l].vertex] <= i) c.legs.push_back(l);
  }
  return c;
}

LevelSubcomplex subcomplex_eq(const MarkedDualGraph& g, const LevelStructure& levels, int i) {
  LevelSubcomplex c;
  c.level = i;
  for (std::size_t v = 0; v < g.vertices.size(); ++v) {
    if (levels.level[v] == i) c.vertices.push_back(v);
  }
  for (std::size_t e = 0; e < g.edges.size(); ++e) {
    int a = levels.level[g.edges[e].ends[0]], b = levels.level[g.edges[e].ends[1]];
    if (a == i && b == i) {
      c.edges.push_back(e);
    } else if ((a == i && b < i) || (b == i && a < i)) {
      c.cut_edges.push_back(e);
    }
  }
  for (std::size_t l = 0; l < g.legs.size(); ++l) {
    if (levels.level[g.legs[l].vertex] == i) c.legs.push_back(l);
  }
  return c;
}

// ---------------------------------------------------------------------------

namespace {

std::string vertex_color(const MarkedDualGraph& g, const LevelStructure* levels, std::size_t v) {
  std::vector<std::string> labels;
  for (const auto& l : g.legs) {
    if (l.vertex != v) continue;
    labels.push_back(l.critical ? "c" + std::to_string(*l.critical) : "m" + std::to_string(l.mu) + "#" + l.id);
  }
  std::sort(labels.begin(), labels.end());
  std::ostringstream out;
  out << "g" << g.vertices[v].genus << "L" << (levels ? levels->level[v] : 0) << "{";
  for (const auto& s : labels) out << s << ",";
  out << "}";
  return out.str();
}

}  // namespace

std::string canonical_form(const MarkedDualGraph& g, const LevelStructure* levels) {
  const std::size_t n = g.vertices.size();
  std::vector<std::string> color(n);
  for (std::size_t v = 0; v < n; ++v) color[v] = vertex_color(g, levels, v);

  // Vertices sorted by color; only permutations inside color classes matter.
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return color[a] < color[b]; });
  std::vector<std::pair<std::size_t, std::size_t>> blocks;  // [begin, end) in order
  double work = 1;
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j < n && color[order[j]] == color[order[i]]) ++j;
    blocks.emplace_back(i, j);
    for (std::size_t k = 2; k <= j - i; ++k) work *= static_cast<double>(k);
    i = j;
  }
  if (work > 5e6) throw ResourceLimit("isomorphism test needs " + std::to_string(work) + " permutations");

  std::string prefix;
  for (auto v : order) prefix += color[v] + "|";

  std::vector<std::size_t> position(n);
  std::string best;
  bool have = false;
  auto encode = [&]() {
    for (std::size_t p = 0; p < n; ++p) position[order[p]] = p;
    std::vector<std::pair<std::size_t, std::size_t>> es;
    es.reserve(g.edges.size());
    for (const auto& e : g.edges) {
      auto a = position[e.ends[0]], b = position[e.ends[1]];
      es.emplace_back(std::min(a, b), std::max(a, b));
    }
    std::sort(es.begin(), es.end());
    std::string code = prefix;
    for (auto [a, b] : es) code += std::to_string(a) + "-" + std::to_string(b) + ";";
    if (!have || code < best) {
      best = std::move(code);
      have = true;
    }
  };
  // Odometer over per-block permutations.
  for (auto& [b, e] : blocks) std::sort(order.begin() + static_cast<long>(b), order.begin() + static_cast<long>(e));
  while (true) {
    encode();
    std::size_t k = 0;
    for (; k < blocks.size(); ++k) {
      auto [b, e] = blocks[k];
      if (std::next_permutation(order.begin() + static_cast<long>(b), order.begin() + static_cast<long>(e))) break;
    }
    if (k == blocks.size()) break;
  }
  return best;
}

bool isomorphic(const MarkedDualGraph& a, const LevelStructure* la, const MarkedDualGraph& b,
                const LevelStructure* lb) {
  if (a.vertices.size() != b.vertices.size() || a.edges.size() != b.edges.size() ||
      a.legs.size() != b.legs.size()) {
    return false;
  }
  return canonical_form(a, la) == canonical_form(b, lb);
}

unsigned long long count_level_functions(std::size_t n, std::optional<int> max_levels) {
  // Surjections onto k ordered levels: k! S(n,k).
  std::vector<std::vector<unsigned long long>> s(n + 1, std::vector<unsigned long long>(n + 1, 0));
  s[0][0] = 1;
  for (std::size_t i = 1; i <= n; ++i) {
    for (std::size_t k = 1; k <= i; ++k) s[i][k] = k * s[i - 1][k] + s[i - 1][k - 1];
  }
  unsigned long long total = 0, fact = 1;
  for (std::size_t k = 1; k <= n; ++k) {
    fact *= k;
    if (max_levels && static_cast<int>(k) > *max_levels) break;
    total += fact * s[n][k];
  }
  return total;
}

std::vector<LevelStructure> enumerate_level_structures(const MarkedDualGraph& g,
                                                       const EnumerationOptions& options) {
  const std::size_t n = g.vertices.size();
  std::vector<LevelStructure> out;
  if (n == 0) return out;
  auto total = count_level_functions(n, options.max_levels);
  if (total > options.max_candidates) {
    throw ResourceLimit("level enumeration would examine " + std::to_string(total) +
                        " level functions (cap " + std::to_string(options.max_candidates) + ")");
  }
  std::set<std::string> seen;
  std::vector<int> depth(n, 0);
  std::vector<int> count(n, 0);  // vertices per depth value
  // Lexicographic depth vectors whose image is an interval {0..L}.
  auto recurse = [&](auto&& self, std::size_t k, int max_depth, int distinct) -> void {
    if (k == n) {
      if (distinct != max_depth + 1) return;
      if (options.max_levels && distinct > *options.max_levels) return;
      LevelStructure ls;
      ls.level.resize(n);
      for (std::size_t v = 0; v < n; ++v) ls.level[v] = -depth[v];
      if (seen.insert(canonical_form(g, &ls)).second) out.push_back(std::move(ls));
      return;
    }
    const int remaining = static_cast<int>(n - k);
    for (int d = 0; d < static_cast<int>(n); ++d) {
      int new_max = std::max(max_depth, d);
      int new_distinct = distinct + (count[static_cast<std::size_t>(d)] == 0 ? 1 : 0);
      if ((new_max + 1) - new_distinct > remaining - 1) continue;
      if (options.max_levels && new_max + 1 > *options.max_levels) continue;
      depth[k] = d;
      ++count[static_cast<std::size_t>(d)];
      self(self, k + 1, new_max, new_distinct);
      --count[static_cast<std::size_t>(d)];
    }
  };
  recurse(recurse, 0, -1, 0);
  return out;
}

}  // namespace drclosure
