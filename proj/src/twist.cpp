#include "drclosure/twist.hpp"

#include <algorithm>
#include <deque>
#include <set>

namespace drclosure {

namespace {

std::string fresh(std::set<std::string>& used, std::string base) {
  while (used.count(base)) base += "'";
  used.insert(base);
  return base;
}

[[noreturn]] void reject(const Report& r, const std::string& what) {
  const Diagnostic& d = r.errors.front();
  throw InputError(d.location, what + " (" + d.code + ": " + d.message + ")");
}

// Order at the bridge branch facing a node branch of order `x`.
PointOrder bridge_order(const PointOrder& x) {
  int d = -x.ord_df - 2;
  if (d <= -2) return {d, true, false};
  return {d, false, x.pole};
}

}  // namespace

TwistResult twist(const MarkedDualGraph& g, const LevelStructure& levels, const Decoration& dec) {
  Report r = validate_twr(g, levels, dec);
  if (!r.ok()) reject(r, "not a valid TWR");

  TwistResult out;
  MarkedDualGraph& G = out.graph;
  Decoration& D = out.decoration;
  ContractionMap& map = out.contraction;
  std::set<std::string> vertex_ids, edge_ids, leg_ids;
  for (const auto& v : g.vertices) vertex_ids.insert(v.id);
  for (const auto& e : g.edges) edge_ids.insert(e.id);
  for (const auto& l : g.legs) leg_ids.insert(l.id);

  G.vertices = g.vertices;
  G.legs = g.legs;
  D.marked_zero_vertices = dec.marked_zero_vertices;
  std::vector<int> raw;
  for (int l : levels.level) raw.push_back(2 * l);
  for (std::size_t v = 0; v < g.vertices.size(); ++v) {
    map.vertex_to.push_back(v);
    map.vertex_contracted.push_back(false);
  }
  for (std::size_t l = 0; l < g.legs.size(); ++l) {
    map.leg_to.push_back(l);
    map.point_to[g.legs[l].id] = g.legs[l].id;
  }
  for (const auto& [id, o] : dec.orders) {
    if (g.find_point(id)->kind == PointRef::Kind::Leg) D.orders[id] = o;
  }
  for (const auto& [id, value] : dec.values) {
    if (g.find_point(id)->kind == PointRef::Kind::Leg) D.values[id] = value;
  }
  auto copy_value = [&](const std::string& from, const std::string& to) {
    if (auto it = dec.values.find(from); it != dec.values.end()) D.values[to] = it->second;
  };
  auto add_critical = [&](std::size_t v, int count, std::vector<std::string>& names) {
    for (int k = 1; k <= count; ++k) {
      Leg leg;
      leg.id = fresh(leg_ids, "c_" + G.vertices[v].id + "_" + std::to_string(k));
      leg.vertex = v;
      leg.critical = 1;
      G.legs.push_back(leg);
      map.leg_to.push_back(std::nullopt);
      names.push_back(leg.id);
    }
  };

  for (std::size_t e = 0; e < g.edges.size(); ++e) {
    const Edge& edge = g.edges[e];
    const std::string plus = g.half_edge_id(e, 0), minus = g.half_edge_id(e, 1);
    PointOrder a = dec.orders.at(plus), b = dec.orders.at(minus);
    int s = a.ord_df + b.ord_df;
    if (s == -2) {
      G.edges.push_back(edge);
      D.orders[plus] = a;
      D.orders[minus] = b;
      copy_value(plus, plus);
      copy_value(minus, minus);
      map.edge_to.push_back(e);
      map.edge_sign.push_back(1);
      map.point_to[plus] = plus;
      map.point_to[minus] = minus;
      continue;
    }
    std::size_t A = edge.ends[0], B = edge.ends[1];
    int la = levels.level[A], lb = levels.level[B];
    std::size_t bv = G.vertices.size();
    G.vertices.push_back({fresh(vertex_ids, "b_" + edge.id), 0});
    if (a.pole) {
      raw.push_back(2 * la + 1);
    } else if (b.pole) {
      raw.push_back(2 * lb + 1);
    } else {
      raw.push_back(2 * std::min(la, lb) - 1);
    }
    map.vertex_to.push_back(B);
    map.vertex_contracted.push_back(true);

    std::string ea = fresh(edge_ids, edge.id + ".a"), eb = fresh(edge_ids, edge.id + ".b");
    G.edges.push_back({ea, {A, bv}});
    G.edges.push_back({eb, {bv, B}});
    D.orders[ea + "+"] = a;
    D.orders[ea + "-"] = bridge_order(a);
    D.orders[eb + "+"] = bridge_order(b);
    D.orders[eb + "-"] = b;
    copy_value(plus, ea + "+");
    copy_value(minus, eb + "-");
    map.edge_to.push_back(e);
    map.edge_sign.push_back(1);
    map.edge_to.push_back(std::nullopt);
    map.edge_sign.push_back(0);
    map.point_to[ea + "+"] = plus;
    map.point_to[eb + "-"] = minus;

    Insertion ins{edge.id, G.vertices[bv].id, {}};
    add_critical(bv, s + 2, ins.critical_legs);
    map.bridges.push_back({edge.id, {G.vertices[bv].id}, {ea, eb}});
    out.insertions.push_back(std::move(ins));
  }
  for (std::size_t v = 0; v < g.vertices.size(); ++v) {
    add_critical(v, vertex_balance(g, dec, v).critical_deficit, out.critical_legs);
  }
  out.levels = normalize_levels(raw);
  return out;
}

Report check_local_max(const MarkedDualGraph& g, const LevelStructure& levels, const Decoration&) {
  Report r;
  if (levels.level.size() != g.vertices.size()) {
    r.error("levels", "", "level map does not cover every vertex");
    return r;
  }
  std::vector<int> ends(g.vertices.size(), 0), marked(g.vertices.size(), 0);
  for (const auto& e : g.edges) {
    ++ends[e.ends[0]];
    ++ends[e.ends[1]];
  }
  for (const auto& l : g.legs) {
    if (!l.is_critical()) ++marked[l.vertex];
  }
  for (std::size_t v = 0; v < g.vertices.size(); ++v) {
    if (g.vertices[v].genus != 0 || ends[v] + marked[v] > 2) continue;
    const std::string& id = g.vertices[v].id;
    if (marked[v] > 0) r.error("marked-point-on-unstable", id, "unstable component carries a marked point");
    if (ends[v] == 2) {
      bool has_upper = false;
      for (const auto& e : g.edges) {
        for (int s = 0; s < 2; ++s) {
          if (e.ends[s] == v && levels.level[e.ends[1 - s]] > levels.level[v]) has_upper = true;
        }
      }
      if (!has_upper) r.error("unstable-local-max", id, "two-valent unstable component is a local maximum of the level order");
    }
  }
  return r;
}

Stabilization stabilize(const MarkedDualGraph& g, const LevelStructure& levels, const Decoration& dec) {
  Report r = validate_twdr(g, levels, dec);
  if (!r.ok()) reject(r, "not a valid TWDR");
  r = check_local_max(g, levels, dec);
  if (!r.ok()) reject(r, "not the twist of a stable curve");

  const std::size_t n = g.vertices.size();
  std::vector<int> degree(n, 0);
  std::vector<bool> has_marked(n, false), removed(n, false), edge_removed(g.edges.size(), false);
  std::vector<std::size_t> attach(n);
  for (const auto& e : g.edges) {
    ++degree[e.ends[0]];
    ++degree[e.ends[1]];
  }
  for (const auto& l : g.legs) {
    if (!l.is_critical()) {
      ++degree[l.vertex];
      has_marked[l.vertex] = true;
    }
  }

  // Rational tails, peeled off repeatedly.
  std::deque<std::size_t> queue;
  for (std::size_t v = 0; v < n; ++v) {
    if (g.vertices[v].genus == 0 && degree[v] <= 1) queue.push_back(v);
  }
  std::vector<std::size_t> tails;
  while (!queue.empty()) {
    std::size_t v = queue.front();
    queue.pop_front();
    if (removed[v]) continue;
    removed[v] = true;
    tails.push_back(v);
    attach[v] = v;
    for (std::size_t e = 0; e < g.edges.size(); ++e) {
      if (edge_removed[e]) continue;
      const auto& ends = g.edges[e].ends;
      if (ends[0] != v && ends[1] != v) continue;
      edge_removed[e] = true;
      std::size_t u = ends[0] == v ? ends[1] : ends[0];
      attach[v] = u;
      --degree[u];
      if (!removed[u] && g.vertices[u].genus == 0 && degree[u] <= 1) queue.push_back(u);
    }
  }
  if (tails.size() == n) throw InputError("", "stabilization is empty: every component is an unstable rational tail");

  std::vector<bool> bridge(n, false);
  bool any_stable = false;
  for (std::size_t v = 0; v < n; ++v) {
    if (removed[v]) continue;
    bridge[v] = g.vertices[v].genus == 0 && degree[v] == 2 && !has_marked[v];
    if (!bridge[v]) any_stable = true;
  }
  if (!any_stable) throw InputError("", "stabilization is empty: the curve is a cycle of rational components");

  Stabilization out;
  MarkedDualGraph& G = out.graph;
  Decoration& D = out.decoration;
  ContractionMap& map = out.contraction;
  std::vector<std::size_t> new_index(n, 0);
  std::vector<int> raw;
  for (std::size_t v = 0; v < n; ++v) {
    if (removed[v] || bridge[v]) continue;
    new_index[v] = G.vertices.size();
    G.vertices.push_back(g.vertices[v]);
    raw.push_back(levels.level[v]);
  }
  map.vertex_to.assign(n, 0);
  map.vertex_contracted.assign(n, false);
  map.edge_to.assign(g.edges.size(), std::nullopt);
  map.edge_sign.assign(g.edges.size(), 0);

  // Bridge chains, walked from a stable half-edge.
  struct Chain {
    std::vector<std::size_t> edges, vertices;
    std::size_t u = 0, w = 0;
    int u_side = 0, w_side = 0;
  };
  std::vector<Chain> chains;
  std::vector<long> chain_of(g.edges.size(), -1);
  for (std::size_t e0 = 0; e0 < g.edges.size(); ++e0) {
    if (edge_removed[e0] || chain_of[e0] >= 0) continue;
    const auto& ends0 = g.edges[e0].ends;
    if (!bridge[ends0[0]] && !bridge[ends0[1]]) continue;
    int start = bridge[ends0[0]] ? 1 : 0;  // a stable end exists: bridges never form a closed cycle here
    if (bridge[ends0[start]]) continue;    // both ends bridges: reached from a stable end later
    Chain c;
    c.u = ends0[start];
    c.u_side = start;
    std::size_t e = e0;
    int in_side = 1 - start;  // side of e at the vertex we walk into
    while (true) {
      c.edges.push_back(e);
      chain_of[e] = static_cast<long>(chains.size());
      std::size_t x = g.edges[e].ends[in_side];
      if (!bridge[x]) {
        c.w = x;
        c.w_side = in_side;
        break;
      }
      c.vertices.push_back(x);
      std::size_t next = g.edges.size();
      for (std::size_t f = 0; f < g.edges.size(); ++f) {
        if (f == e || edge_removed[f] || chain_of[f] >= 0) continue;
        const auto& ends = g.edges[f].ends;
        if (ends[0] == x) {
          next = f;
          in_side = 1;
          break;
        }
        if (ends[1] == x) {
          next = f;
          in_side = 0;
          break;
        }
      }
      if (next == g.edges.size()) throw InputError(g.vertices[x].id, "rational bridge chain does not continue");
      e = next;
    }
    const std::string& first = g.edges[c.edges.front()].id;
    const std::string& last = g.edges[c.edges.back()].id;
    if (last < first) {
      std::reverse(c.edges.begin(), c.edges.end());
      std::reverse(c.vertices.begin(), c.vertices.end());
      std::swap(c.u, c.w);
      std::swap(c.u_side, c.w_side);
    }
    chains.push_back(std::move(c));
  }
  for (std::size_t e = 0; e < g.edges.size(); ++e) {
    if (!edge_removed[e] && (bridge[g.edges[e].ends[0]] || bridge[g.edges[e].ends[1]]) && chain_of[e] < 0) {
      throw InputError(g.edges[e].id, "rational bridge chain without stable end");
    }
  }

  auto carry = [&](const std::string& from, const std::string& to) {
    if (auto it = dec.orders.find(from); it != dec.orders.end()) D.orders[to] = it->second;
    if (auto it = dec.values.find(from); it != dec.values.end()) D.values[to] = it->second;
    map.point_to[from] = to;
  };
  std::vector<bool> chain_done(chains.size(), false);
  for (std::size_t e = 0; e < g.edges.size(); ++e) {
    if (edge_removed[e]) continue;
    if (chain_of[e] < 0) {
      std::size_t target = G.edges.size();
      const Edge& src = g.edges[e];
      G.edges.push_back({src.id, {new_index[src.ends[0]], new_index[src.ends[1]]}});
      map.edge_to[e] = target;
      map.edge_sign[e] = 1;
      carry(g.half_edge_id(e, 0), G.half_edge_id(target, 0));
      carry(g.half_edge_id(e, 1), G.half_edge_id(target, 1));
      continue;
    }
    std::size_t ci = static_cast<std::size_t>(chain_of[e]);
    if (chain_done[ci]) continue;
    chain_done[ci] = true;
    const Chain& c = chains[ci];
    const std::string& first = g.edges[c.edges.front()].id;
    const std::string& last = g.edges[c.edges.back()].id;
    std::string id;
    if (c.edges.size() == 2 && first.size() > 2 && first.ends_with(".a") &&
        last == first.substr(0, first.size() - 2) + ".b") {
      id = first.substr(0, first.size() - 2);
    } else {
      for (std::size_t k = 0; k < c.edges.size(); ++k) id += (k ? "~" : "") + g.edges[c.edges[k]].id;
    }
    std::size_t target = G.edges.size();
    G.edges.push_back({id, {new_index[c.u], new_index[c.w]}});
    carry(g.half_edge_id(c.edges.front(), c.u_side), G.half_edge_id(target, 0));
    carry(g.half_edge_id(c.edges.back(), c.w_side), G.half_edge_id(target, 1));
    map.edge_to[c.edges.front()] = target;
    map.edge_sign[c.edges.front()] = c.u_side == 0 ? 1 : -1;
    ContractionMap::Bridge b{id, {}, {}};
    for (std::size_t v : c.vertices) {
      map.vertex_to[v] = new_index[c.w];
      map.vertex_contracted[v] = true;
      b.vertices.push_back(g.vertices[v].id);
    }
    for (std::size_t f : c.edges) b.edges.push_back(g.edges[f].id);
    map.bridges.push_back(std::move(b));
  }
  for (std::size_t v = 0; v < n; ++v) {
    if (!removed[v] && !bridge[v]) map.vertex_to[v] = new_index[v];
  }
  for (auto it = tails.rbegin(); it != tails.rend(); ++it) {
    // Tails are removed leaf-first, so the attaching vertex is resolved before.
    std::size_t a = attach[*it];
    map.vertex_to[*it] = a == *it ? 0 : map.vertex_to[a];
    map.vertex_contracted[*it] = true;
    map.tails.push_back(g.vertices[*it].id);
  }
  std::reverse(map.tails.begin(), map.tails.end());

  for (std::size_t l = 0; l < g.legs.size(); ++l) {
    const Leg& leg = g.legs[l];
    if (leg.is_critical()) {
      map.leg_to.push_back(std::nullopt);
      continue;
    }
    map.leg_to.push_back(G.legs.size());
    G.legs.push_back({leg.id, new_index[leg.vertex], leg.mu, std::nullopt});
    carry(leg.id, leg.id);
  }
  for (const auto& vid : dec.marked_zero_vertices) {
    if (G.find_vertex(vid)) D.marked_zero_vertices.insert(vid);
  }
  out.levels = normalize_levels(raw);
  return out;
}

Chain pushforward(const MarkedDualGraph& source, const MarkedDualGraph& target, const ContractionMap& map,
                  const Chain& c) {
  CellComplex sx(source), tx(target);
  Chain out(tx.cell_count(), 0);
  std::vector<long> target_cell(target.legs.size(), -1);
  for (std::size_t k = 0; k < tx.z_legs().size(); ++k) target_cell[tx.z_legs()[k]] = static_cast<long>(tx.leg_cell(k));
  for (std::size_t cell = 0; cell < c.size(); ++cell) {
    if (c[cell] == 0) continue;
    if (sx.is_edge_cell(cell)) {
      if (map.edge_to[cell]) out[*map.edge_to[cell]] += map.edge_sign[cell] * c[cell];
    } else if (auto to = map.leg_to[sx.cell_leg(cell)]; to && target_cell[*to] >= 0) {
      out[static_cast<std::size_t>(target_cell[*to])] += c[cell];
    }
  }
  return out;
}

PushforwardReport pushforward_check(const MarkedDualGraph& g, const LevelStructure& levels, const Decoration& dec) {
  PushforwardReport out;
  Stabilization st;
  try {
    st = stabilize(g, levels, dec);
  } catch (const InputError& e) {
    out.report.error("stabilization", e.where(), e.what());
    return out;
  }
  ValueAssignment tv = symbolic_values(st.graph, st.decoration);
  ValueAssignment sv = symbolic_values(g, dec);
  for (const auto& [from, to] : st.contraction.point_to) {
    auto t = tv.find(to);
    if (t == tv.end()) continue;
    auto s = dec.values.find(from);
    auto d = st.decoration.values.find(to);
    if (s != dec.values.end() && d != st.decoration.values.end() && !(s->second == d->second)) {
      out.report.error("incompatible-values", from, "value differs from the value at " + to);
    }
    sv[from] = t->second;
  }

  LevelFiltration sf = level_filtration(g, levels), tf = level_filtration(st.graph, st.levels);
  EvaluationSystem ss, ts;
  try {
    ss = evaluation_system(g, levels, sv);
    ts = evaluation_system(st.graph, st.levels, tv);
  } catch (const InputError& e) {
    out.report.error("missing-value", e.where(), e.what());
    return out;
  }
  for (int i = 0; i >= -levels.depth(); --i) {
    PushforwardLevel pl;
    pl.source_level = i;
    std::optional<int> below;
    for (std::size_t v = 0; v < g.vertices.size(); ++v) {
      if (st.contraction.vertex_contracted[v] || levels.level[v] > i) continue;
      int t = st.levels.level[st.contraction.vertex_to[v]];
      if (levels.level[v] == i) pl.target_level = t;
      below = below ? std::max(*below, t) : t;
    }
    const std::vector<Chain> none;
    const std::vector<Chain>& target_gens = below ? tf.at(*below) : none;
    std::vector<Chain> images;
    const auto& le = ss.at(i);
    pl.vanishes_source = le.vanishing == Vanishing::Yes;
    for (std::size_t k = 0; k < le.generators.size(); ++k) {
      Chain p = pushforward(g, st.graph, st.contraction, le.generators[k]);
      bool inside = target_gens.empty() ? std::all_of(p.begin(), p.end(), [](long x) { return x == 0; })
                                        : in_rational_span(target_gens, p);
      if (!inside) {
        pl.inclusion = false;
        continue;
      }
      images.push_back(p);
      if (pl.target_level) {
        LinearForm image = evaluate(st.graph, st.levels, restrict_to_level(st.graph, st.levels, p, *pl.target_level), tv);
        if (!(image == le.forms[k])) pl.commutes = false;
      }
    }
    auto with = images;
    with.insert(with.end(), target_gens.begin(), target_gens.end());
    pl.surjective = rational_rank(with) == rational_rank(images);
    if (pl.target_level) pl.vanishes_target = ts.at(*pl.target_level).vanishing == Vanishing::Yes;
    std::string where = "level " + std::to_string(i);
    if (!pl.inclusion) out.report.error("inclusion", where, "pushforward leaves the level filtration");
    if (!pl.commutes) out.report.error("ev-mismatch", where, "evaluation differs after pushforward");
    if (pl.target_level && pl.vanishes_source != pl.vanishes_target) {
      out.report.error("vanishing-mismatch", where, "identical vanishing differs across stabilization");
    }
    out.levels.push_back(pl);
  }
  auto sforms = ss.all_forms(), tforms = ts.all_forms();
  out.same_solution_space = AffineSpace::solve(sforms).same_solution_set(AffineSpace::solve(tforms));
  if (!out.same_solution_space) out.report.error("solution-space", "", "constraint solution spaces differ");
  return out;
}

}  // namespace drclosure
