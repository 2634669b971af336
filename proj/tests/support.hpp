#pragma once

// Shared helpers for the unit and acceptance tests: fixture loading, small
// graph builders, random generators and oracles that do not go through the
// library's own code paths.

#include <algorithm>
#include <cstdlib>
#include <deque>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "drclosure/cli.hpp"
#include "drclosure/closure.hpp"
#include "drclosure/covers.hpp"
#include "drclosure/graph.hpp"
#include "drclosure/homology.hpp"
#include "drclosure/hurwitz.hpp"
#include "drclosure/json_io.hpp"
#include "drclosure/linear.hpp"
#include "drclosure/twist.hpp"
#include "drclosure/twr.hpp"

namespace drtest {

using namespace drclosure;
using json_io::Json;

struct Doc {
  Json json;
  MarkedDualGraph graph;
  LevelStructure levels;
  Decoration decoration;
  std::vector<int> mu;
};

inline Json fixture(const std::string& name) {
  return cli::load_json(std::string(DRCLOSURE_FIXTURE_DIR) + "/" + name + ".json");
}

inline Json case_json(const Json& f, const std::string& name) {
  Json doc = f;
  doc.erase("cases");
  doc.erase("expected");
  if (name.empty()) return doc;
  for (const auto& c : f["cases"]) {
    if (c["name"] != name) continue;
    for (const auto& [k, v] : c.items()) {
      if (k != "name" && k != "expected") doc[k] = v;
    }
    return doc;
  }
  throw std::invalid_argument("no case " + name);
}

inline Doc parse(const Json& j) {
  Doc d;
  d.json = j;
  d.graph = json_io::graph_from_json(j);
  if (j.contains("levels")) d.levels = json_io::levels_from_json(j["levels"], d.graph);
  if (j.contains("decoration")) d.decoration = json_io::decoration_from_json(j["decoration"]);
  d.mu = j.contains("mu") ? json_io::mu_from_json(j["mu"]) : mu_of(d.graph);
  return d;
}

inline Doc load(const std::string& name, const std::string& case_name = "") {
  return parse(case_json(fixture(name), case_name));
}

struct E {
  std::string id, a, b;
};
struct L {
  std::string id, vertex;
  int mu;
};

inline MarkedDualGraph make_graph(const std::vector<std::pair<std::string, int>>& vertices, const std::vector<E>& edges,
                                  const std::vector<L>& legs) {
  MarkedDualGraph g;
  for (const auto& [id, genus] : vertices) g.vertices.push_back({id, genus});
  for (const auto& e : edges) {
    Edge edge;
    edge.id = e.id;
    edge.ends = {*g.find_vertex(e.a), *g.find_vertex(e.b)};
    g.edges.push_back(edge);
  }
  for (const auto& l : legs) {
    Leg leg;
    leg.id = l.id;
    leg.vertex = *g.find_vertex(l.vertex);
    leg.mu = l.mu;
    g.legs.push_back(leg);
  }
  return g;
}

inline LevelStructure levels_of(const MarkedDualGraph& g, const std::map<std::string, int>& by_id) {
  LevelStructure l;
  for (const auto& v : g.vertices) l.level.push_back(by_id.at(v.id));
  return l;
}

inline LinearForm x(const std::string& name) { return LinearForm::unknown(name); }

inline AffineSpace space(const std::vector<LinearForm>& forms) { return AffineSpace::solve(forms); }

inline int uniform(std::mt19937_64& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }
inline bool coin(std::mt19937_64& rng, double p) { return std::bernoulli_distribution(p)(rng); }

/// Connected graph on 1..max_vertices vertices: a random tree plus extra
/// edges (loops allowed), legs with mu in {-2..2}.
inline MarkedDualGraph random_graph(std::mt19937_64& rng, int max_vertices, int max_extra_edges, int max_legs) {
  MarkedDualGraph g;
  int n = uniform(rng, 1, max_vertices);
  for (int v = 0; v < n; ++v) g.vertices.push_back({"v" + std::to_string(v), uniform(rng, 0, 1)});
  auto add_edge = [&](std::size_t a, std::size_t b) {
    Edge e;
    e.id = "e" + std::to_string(g.edges.size());
    e.ends = coin(rng, 0.5) ? std::array<std::size_t, 2>{a, b} : std::array<std::size_t, 2>{b, a};
    g.edges.push_back(e);
  };
  for (int v = 1; v < n; ++v) add_edge(static_cast<std::size_t>(uniform(rng, 0, v - 1)), static_cast<std::size_t>(v));
  int extra = uniform(rng, 0, max_extra_edges);
  for (int k = 0; k < extra; ++k) {
    add_edge(static_cast<std::size_t>(uniform(rng, 0, n - 1)), static_cast<std::size_t>(uniform(rng, 0, n - 1)));
  }
  int legs = uniform(rng, 0, max_legs);
  for (int k = 0; k < legs; ++k) {
    Leg l;
    l.id = "m" + std::to_string(k);
    l.vertex = static_cast<std::size_t>(uniform(rng, 0, n - 1));
    l.mu = uniform(rng, -2, 2);
    g.legs.push_back(l);
  }
  return g;
}

inline LevelStructure random_levels(std::mt19937_64& rng, std::size_t n, int depth) {
  std::vector<int> raw(n);
  for (auto& r : raw) r = -uniform(rng, 0, depth);
  return normalize_levels(raw);
}

/// Random valid TWR on a stable graph with at most six vertices and
/// |ord(df)| <= 6, built constructively and then checked by validate_twr.
inline Doc random_twr(std::mt19937_64& rng) {
  for (;;) {
    Doc d;
    MarkedDualGraph& g = d.graph;
    int n = uniform(rng, 1, 6);
    for (int v = 0; v < n; ++v) g.vertices.push_back({"v" + std::to_string(v), 0});
    auto add_edge = [&](std::size_t a, std::size_t b) {
      Edge e;
      e.id = "e" + std::to_string(g.edges.size());
      e.ends = coin(rng, 0.5) ? std::array<std::size_t, 2>{a, b} : std::array<std::size_t, 2>{b, a};
      g.edges.push_back(e);
    };
    for (int v = 1; v < n; ++v) add_edge(static_cast<std::size_t>(uniform(rng, 0, v - 1)), static_cast<std::size_t>(v));
    int extra = uniform(rng, 0, 2);
    for (int k = 0; k < extra; ++k) {
      add_edge(static_cast<std::size_t>(uniform(rng, 0, n - 1)), static_cast<std::size_t>(uniform(rng, 0, n - 1)));
    }
    d.levels = random_levels(rng, g.vertices.size(), 2);
    auto lv = [&](std::size_t v) { return d.levels.level[v]; };

    std::map<std::string, PointOrder>& orders = d.decoration.orders;
    auto nonpole = [](int mult) { return PointOrder{mult - 1, false, false}; };
    for (std::size_t e = 0; e < g.edges.size(); ++e) {
      auto [a, b] = g.edges[e].ends;
      std::string plus = g.half_edge_id(e, 0), minus = g.half_edge_id(e, 1);
      if (lv(a) == lv(b) || coin(rng, 0.25)) {
        orders[plus] = nonpole(uniform(rng, 1, 3));
        orders[minus] = nonpole(uniform(rng, 1, 3));
        continue;
      }
      bool a_upper = lv(a) > lv(b);
      int m = uniform(rng, 1, 3);
      PointOrder lower{-m - 1, true, false};
      PointOrder upper = nonpole(uniform(rng, m, 3));
      orders[a_upper ? plus : minus] = upper;
      orders[a_upper ? minus : plus] = lower;
    }

    int leg_count = 0;
    auto add_leg = [&](std::size_t v, int mu) {
      Leg l;
      l.id = "m" + std::to_string(leg_count++);
      l.vertex = v;
      l.mu = mu;
      g.legs.push_back(l);
    };
    for (std::size_t v = 0; v < g.vertices.size(); ++v) {
      int degree = 0, max_mult = 0;
      std::vector<std::string> free_points;
      for (const auto& p : g.points_on(v)) {
        const PointOrder& o = orders.at(g.point_id(p));
        if (o.pole) degree += o.multiplicity();
        max_mult = std::max(max_mult, o.multiplicity());
        if (!o.pole) free_points.push_back(g.point_id(p));
      }
      if (degree == 0 || coin(rng, 0.3)) {
        int m = uniform(rng, 1, 3);
        add_leg(v, -m);
        degree += m;
      }
      if (max_mult > degree) {
        add_leg(v, -(max_mult - degree));
        degree = max_mult;
      }
      bool marked = coin(rng, 0.5);
      int budget = marked ? degree - 1 : degree;
      int mass = 0;
      std::shuffle(free_points.begin(), free_points.end(), rng);
      for (const auto& id : free_points) {
        PointOrder& o = orders[id];
        if (coin(rng, 0.4) && mass + o.multiplicity() <= budget) {
          o.zero = true;
          mass += o.multiplicity();
        }
      }
      if (marked) {
        int rest = degree - mass;
        if (rest >= 2 && coin(rng, 0.5)) {
          int first = uniform(rng, 1, rest - 1);
          add_leg(v, first);
          add_leg(v, rest - first);
        } else {
          add_leg(v, rest);
        }
      }
      if (coin(rng, 0.2)) add_leg(v, 0);
    }

    // Genus large enough for the critical deficit, then stability.
    bool ord_ok = true;
    for (std::size_t v = 0; v < g.vertices.size(); ++v) {
      int df = 0;
      for (const auto& p : g.points_on(v)) {
        PointOrder o = order_at(g, d.decoration, p);
        df += o.ord_df;
        if (std::abs(o.ord_df) > 6) ord_ok = false;
      }
      int genus = std::max(0, (df + 3) / 2);
      while (2 * genus - 2 < df) ++genus;
      if (coin(rng, 0.2)) ++genus;
      g.vertices[v].genus = genus;
      while (!g.vertex_stable(v)) add_leg(v, 0);
    }
    if (!ord_ok) continue;
    d.mu = mu_of(g);
    if (!validate_twr(g, d.levels, d.decoration).ok()) continue;
    return d;
  }
}

/// A walk in the graph: optionally from a Z-leg, a sequence of edge
/// traversals (edge, side it leaves from), optionally into a Z-leg. Without
/// legs the walk is closed.
struct Walk {
  std::optional<std::size_t> start_leg, end_leg;
  std::size_t start_vertex = 0;
  std::vector<std::pair<std::size_t, int>> steps;
};

inline Chain walk_chain(const MarkedDualGraph& g, const Walk& w) {
  CellComplex cx(g);
  Chain c(cx.cell_count(), 0);
  auto leg_cell = [&](std::size_t leg) {
    const auto& z = cx.z_legs();
    return cx.leg_cell(static_cast<std::size_t>(std::find(z.begin(), z.end(), leg) - z.begin()));
  };
  if (w.start_leg) c[leg_cell(*w.start_leg)] -= 1;
  for (auto [e, side] : w.steps) c[e] += side == 0 ? 1 : -1;
  if (w.end_leg) c[leg_cell(*w.end_leg)] += 1;
  return c;
}

/// Evaluation by walking: every visit of a level-i vertex contributes
/// f(branch it leaves by) - f(branch it arrived by); values keyed by point id.
inline Rational walk_ev(const MarkedDualGraph& g, const LevelStructure& levels, const Walk& w, int i,
                        const std::map<std::string, Rational>& values) {
  auto val = [&](std::size_t, const std::string& point) { return values.at(point); };
  Rational total = 0;
  std::size_t v = w.start_vertex;
  std::string arrived;
  if (w.start_leg) {
    arrived = g.legs[*w.start_leg].id;
  } else if (!w.steps.empty()) {
    auto [e, side] = w.steps.back();
    arrived = g.half_edge_id(e, 1 - side);
  }
  for (auto [e, side] : w.steps) {
    std::string leave = g.half_edge_id(e, side);
    if (levels.level[v] == i) total += val(v, leave) - val(v, arrived);
    v = g.edges[e].ends[static_cast<std::size_t>(1 - side)];
    arrived = g.half_edge_id(e, 1 - side);
  }
  if (w.end_leg && levels.level[v] == i) total += val(v, g.legs[*w.end_leg].id) - val(v, arrived);
  return total;
}

/// Random walk inside the vertices of level <= i, closed or between Z-legs.
inline std::optional<Walk> random_walk(std::mt19937_64& rng, const MarkedDualGraph& g, const LevelStructure& levels,
                                       int i) {
  CellComplex cx(g);
  std::vector<std::size_t> inside, zlegs;
  for (std::size_t v = 0; v < g.vertices.size(); ++v) {
    if (levels.level[v] <= i) inside.push_back(v);
  }
  if (inside.empty()) return std::nullopt;
  for (auto l : cx.z_legs()) {
    if (levels.level[g.legs[l].vertex] <= i) zlegs.push_back(l);
  }
  Walk w;
  bool open = zlegs.size() >= 2 && coin(rng, 0.5);
  if (open) {
    w.start_leg = zlegs[static_cast<std::size_t>(uniform(rng, 0, static_cast<int>(zlegs.size()) - 1))];
    w.start_vertex = g.legs[*w.start_leg].vertex;
  } else {
    w.start_vertex = inside[static_cast<std::size_t>(uniform(rng, 0, static_cast<int>(inside.size()) - 1))];
  }
  auto moves = [&](std::size_t v) {
    std::vector<std::pair<std::size_t, int>> out;
    for (std::size_t e = 0; e < g.edges.size(); ++e) {
      for (int s = 0; s < 2; ++s) {
        if (g.edges[e].ends[static_cast<std::size_t>(s)] != v) continue;
        if (levels.level[g.edges[e].ends[static_cast<std::size_t>(1 - s)]] <= i) out.push_back({e, s});
      }
    }
    return out;
  };
  std::size_t v = w.start_vertex;
  int length = uniform(rng, 0, 8);
  for (int k = 0; k < length; ++k) {
    auto m = moves(v);
    if (m.empty()) break;
    auto step = m[static_cast<std::size_t>(uniform(rng, 0, static_cast<int>(m.size()) - 1))];
    w.steps.push_back(step);
    v = g.edges[step.first].ends[static_cast<std::size_t>(1 - step.second)];
  }
  // Return to the start vertex, or to the vertex of a Z-leg, by BFS.
  std::size_t target = w.start_vertex;
  if (open) {
    w.end_leg = zlegs[static_cast<std::size_t>(uniform(rng, 0, static_cast<int>(zlegs.size()) - 1))];
    target = g.legs[*w.end_leg].vertex;
  }
  std::map<std::size_t, std::pair<std::size_t, std::pair<std::size_t, int>>> parent;
  std::deque<std::size_t> queue{v};
  parent[v] = {v, {0, -1}};
  while (!queue.empty() && !parent.count(target)) {
    std::size_t u = queue.front();
    queue.pop_front();
    for (auto step : moves(u)) {
      std::size_t next = g.edges[step.first].ends[static_cast<std::size_t>(1 - step.second)];
      if (parent.count(next)) continue;
      parent[next] = {u, step};
      queue.push_back(next);
    }
  }
  if (!parent.count(target)) return std::nullopt;
  std::vector<std::pair<std::size_t, int>> back;
  for (std::size_t u = target; u != v; u = parent[u].first) back.push_back(parent[u].second);
  w.steps.insert(w.steps.end(), back.rbegin(), back.rend());
  return w;
}

/// Independent Hurwitz oracle: tries every tuple of permutations with the
/// given cycle types (the last one forced by the product).
inline bool brute_force_factorization(int d, const std::vector<Partition>& profiles) {
  std::vector<std::vector<int>> all;
  std::vector<int> p(static_cast<std::size_t>(d));
  for (int k = 0; k < d; ++k) p[static_cast<std::size_t>(k)] = k;
  do {
    all.push_back(p);
  } while (std::next_permutation(p.begin(), p.end()));
  auto type = [&](const std::vector<int>& s) {
    std::vector<int> seen(s.size(), 0), parts;
    for (std::size_t k = 0; k < s.size(); ++k) {
      if (seen[k]) continue;
      int len = 0;
      for (std::size_t j = k; !seen[j]; j = static_cast<std::size_t>(s[j])) {
        seen[j] = 1;
        ++len;
      }
      parts.push_back(len);
    }
    std::sort(parts.rbegin(), parts.rend());
    return parts;
  };
  std::vector<std::vector<std::vector<int>>> options;
  for (const auto& prof : profiles) {
    Partition want = prof;
    std::sort(want.rbegin(), want.rend());
    std::vector<std::vector<int>> with;
    for (const auto& s : all) {
      if (type(s) == want) with.push_back(s);
    }
    options.push_back(with);
  }
  if (profiles.empty()) return d == 1;
  std::size_t r = profiles.size();
  std::vector<int> prod(static_cast<std::size_t>(d));
  auto compose = [&](const std::vector<int>& a, const std::vector<int>& b) {
    std::vector<int> c(a.size());
    for (std::size_t k = 0; k < a.size(); ++k) c[k] = b[static_cast<std::size_t>(a[k])];
    return c;
  };
  std::vector<const std::vector<int>*> chosen(r);
  std::function<bool(std::size_t, const std::vector<int>&)> rec = [&](std::size_t k, const std::vector<int>& acc) {
    if (k + 1 == r) {
      std::vector<int> last(acc.size());
      for (std::size_t j = 0; j < acc.size(); ++j) last[static_cast<std::size_t>(acc[j])] = static_cast<int>(j);
      Partition want = profiles[k];
      std::sort(want.rbegin(), want.rend());
      if (type(last) != want) return false;
      // Transitivity of the generated group.
      std::vector<int> seen(acc.size(), 0);
      std::deque<int> q{0};
      seen[0] = 1;
      while (!q.empty()) {
        int u = q.front();
        q.pop_front();
        for (std::size_t j = 0; j + 1 < r; ++j) {
          int w = (*chosen[j])[static_cast<std::size_t>(u)];
          if (!seen[static_cast<std::size_t>(w)]) {
            seen[static_cast<std::size_t>(w)] = 1;
            q.push_back(w);
          }
        }
        int w = last[static_cast<std::size_t>(u)];
        if (!seen[static_cast<std::size_t>(w)]) {
          seen[static_cast<std::size_t>(w)] = 1;
          q.push_back(w);
        }
      }
      return std::all_of(seen.begin(), seen.end(), [](int s) { return s; });
    }
    for (const auto& s : options[k]) {
      chosen[k] = &s;
      if (rec(k + 1, compose(acc, s))) return true;
    }
    return false;
  };
  std::vector<int> id(static_cast<std::size_t>(d));
  for (int k = 0; k < d; ++k) id[static_cast<std::size_t>(k)] = k;
  return rec(0, id);
}

/// All partitions of d, descending.
inline std::vector<Partition> partitions(int d, int max_part = -1) {
  if (max_part < 0) max_part = d;
  if (d == 0) return {{}};
  std::vector<Partition> out;
  for (int first = std::min(d, max_part); first >= 1; --first) {
    for (auto rest : partitions(d - first, first)) {
      rest.insert(rest.begin(), first);
      out.push_back(rest);
    }
  }
  return out;
}

}  // namespace drtest
