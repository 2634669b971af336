#include "drclosure/covers.hpp"

#include <algorithm>
#include <array>
#include <optional>

#include "drclosure/twr.hpp"

namespace drclosure {

namespace {

std::optional<std::size_t> find_edge(const MarkedDualGraph& g, const std::string& id) {
  for (std::size_t e = 0; e < g.edges.size(); ++e) {
    if (g.edges[e].id == id) return e;
  }
  return std::nullopt;
}

std::optional<std::size_t> find_leg(const MarkedDualGraph& g, const std::string& id) {
  for (std::size_t l = 0; l < g.legs.size(); ++l) {
    if (g.legs[l].id == id) return l;
  }
  return std::nullopt;
}

void check_target(const MarkedDualGraph& t, Report& r) {
  if (t.edges.size() + 1 != t.vertices.size()) r.error("target-tree", "", "target graph is not a tree");
  for (const auto& v : t.vertices) {
    if (v.genus != 0) r.error("target-genus", v.id, "target components have genus 0");
  }
  int zero = 0, inf = 0;
  for (const auto& l : t.legs) {
    if (l.is_critical() || l.mu < -1 || l.mu > 1) {
      r.error("target-leg", l.id, "target legs carry mu = 1 (0), -1 (infinity) or 0 (branch point)");
    }
    zero += l.mu == 1;
    inf += l.mu == -1;
  }
  if (zero != 1 || inf != 1) r.error("target-legs", "", "target needs exactly one leg over 0 and one over infinity");
}

}  // namespace

CoverReport validate_cover(const CombinatorialCover& c) {
  CoverReport out;
  Report& r = out.report;
  const MarkedDualGraph& S = c.source;
  const MarkedDualGraph& T = c.target;
  for (const auto& d : validate(S).report.errors) r.error("source-" + d.code, d.location, d.message);
  for (const auto& d : validate(T).report.errors) r.error("target-" + d.code, d.location, d.message);
  if (!r.ok()) return out;
  check_target(T, r);
  if (!r.ok()) return out;

  auto image = [&](const std::string& id) -> const std::string* {
    auto it = c.map.find(id);
    if (it == c.map.end()) {
      r.error("unmapped", id, "no image given");
      return nullptr;
    }
    return &it->second;
  };
  std::vector<std::size_t> vmap(S.vertices.size(), 0);
  for (std::size_t v = 0; v < S.vertices.size(); ++v) {
    const std::string* t = image(S.vertices[v].id);
    if (!t) continue;
    auto tv = T.find_vertex(*t);
    if (!tv) {
      r.error("bad-image", S.vertices[v].id, "image " + *t + " is not a target vertex");
      continue;
    }
    vmap[v] = *tv;
  }
  if (!r.ok()) return out;

  // Target half-edge (edge, side) over each source half-edge.
  std::vector<std::array<std::pair<std::size_t, int>, 2>> hmap(S.edges.size());
  for (std::size_t e = 0; e < S.edges.size(); ++e) {
    const Edge& se = S.edges[e];
    const std::string* t = image(se.id);
    if (!t) continue;
    auto te = find_edge(T, *t);
    if (!te) {
      r.error("bad-image", se.id, "image " + *t + " is not a target edge");
      continue;
    }
    const Edge& tedge = T.edges[*te];
    std::size_t a = vmap[se.ends[0]], b = vmap[se.ends[1]];
    if (a == b) {
      r.error("node-not-over-node", se.id, "both branches map to the same target component");
    } else if (tedge.ends[0] == a && tedge.ends[1] == b) {
      hmap[e] = {std::make_pair(*te, 0), std::make_pair(*te, 1)};
    } else if (tedge.ends[0] == b && tedge.ends[1] == a) {
      hmap[e] = {std::make_pair(*te, 1), std::make_pair(*te, 0)};
    } else {
      r.error("incidence", se.id, "image edge " + *t + " does not join the images of its ends");
    }
  }
  std::vector<std::size_t> lmap(S.legs.size(), 0);
  for (std::size_t l = 0; l < S.legs.size(); ++l) {
    const Leg& sl = S.legs[l];
    const std::string* t = image(sl.id);
    if (!t) continue;
    auto tl = find_leg(T, *t);
    if (!tl) {
      r.error("bad-image", sl.id, "image " + *t + " is not a target leg");
      continue;
    }
    lmap[l] = *tl;
    if (T.legs[*tl].vertex != vmap[sl.vertex]) {
      r.error("incidence", sl.id, "leg does not lie over a point of the image component");
    }
  }
  if (!r.ok()) return out;

  auto mult_of = [&](const std::string& id, std::optional<int> fallback) -> int {
    auto it = c.mults.find(id);
    if (it == c.mults.end()) {
      if (fallback) return *fallback;
      r.error("missing-mult", id, "no multiplicity given");
      return 1;
    }
    if (it->second < 1) r.error("mult", id, "multiplicities are positive");
    return it->second;
  };
  std::vector<std::array<int, 2>> hm(S.edges.size());
  for (std::size_t e = 0; e < S.edges.size(); ++e) {
    for (int s = 0; s < 2; ++s) hm[e][static_cast<std::size_t>(s)] = mult_of(S.half_edge_id(e, s), std::nullopt);
    if (hm[e][0] != hm[e][1]) r.error("node-mult", S.edges[e].id, "branch multiplicities of a node differ");
  }
  std::vector<int> lm(S.legs.size(), 1);
  for (std::size_t l = 0; l < S.legs.size(); ++l) {
    const Leg& sl = S.legs[l];
    int tmu = T.legs[lmap[l]].mu;
    std::optional<int> fallback;
    if (tmu != 0 && !sl.is_critical()) fallback = std::abs(sl.mu);
    lm[l] = mult_of(sl.id, fallback);
    if (tmu != 0 && (sl.is_critical() || sl.mu != tmu * lm[l])) {
      r.error("leg-order", sl.id, std::string("leg over ") + (tmu > 0 ? "0" : "infinity") +
                                      " must carry mu = " + std::to_string(tmu * lm[l]));
    }
  }
  if (!r.ok()) return out;

  // Local degrees from complete fibers over nodes, 0 and infinity.
  for (std::size_t v = 0; v < S.vertices.size(); ++v) {
    const std::string& vid = S.vertices[v].id;
    std::size_t t = vmap[v];
    std::map<std::string, int> fiber;
    for (std::size_t e = 0; e < T.edges.size(); ++e) {
      for (int s = 0; s < 2; ++s) {
        if (T.edges[e].ends[static_cast<std::size_t>(s)] == t) fiber[T.half_edge_id(e, s)] = 0;
      }
    }
    std::map<std::string, int> other;
    for (std::size_t l = 0; l < T.legs.size(); ++l) {
      if (T.legs[l].vertex != t) continue;
      (T.legs[l].mu != 0 ? fiber : other)[T.legs[l].id] = 0;
    }
    for (std::size_t e = 0; e < S.edges.size(); ++e) {
      for (int s = 0; s < 2; ++s) {
        if (S.edges[e].ends[static_cast<std::size_t>(s)] != v) continue;
        auto [te, ts] = hmap[e][static_cast<std::size_t>(s)];
        fiber[T.half_edge_id(te, ts)] += hm[e][static_cast<std::size_t>(s)];
      }
    }
    for (std::size_t l = 0; l < S.legs.size(); ++l) {
      if (S.legs[l].vertex != v) continue;
      const Leg& tl = T.legs[lmap[l]];
      (tl.mu != 0 ? fiber : other)[tl.id] += lm[l];
    }
    std::optional<int> d;
    if (auto it = c.local_degree.find(vid); it != c.local_degree.end()) d = it->second;
    for (const auto& [point, sum] : fiber) {
      if (!d) d = sum;
      if (sum != *d) {
        r.error("fiber-degree", vid, "fiber over " + point + " has degree " + std::to_string(sum) + ", expected " +
                                         std::to_string(*d));
      }
    }
    if (!d || *d < 1) {
      r.error("local-degree", vid, "local degree undetermined or not positive");
      continue;
    }
    for (const auto& [point, sum] : other) {
      if (sum > *d) r.error("fiber-degree", vid, "fiber over " + point + " exceeds the local degree");
    }
    out.local_degree[vid] = *d;
    int ram = 0;
    for (std::size_t e = 0; e < S.edges.size(); ++e) {
      for (int s = 0; s < 2; ++s) {
        if (S.edges[e].ends[static_cast<std::size_t>(s)] == v) ram += hm[e][static_cast<std::size_t>(s)] - 1;
      }
    }
    for (std::size_t l = 0; l < S.legs.size(); ++l) {
      if (S.legs[l].vertex == v) ram += lm[l] - 1;
    }
    if (2 * S.vertices[v].genus - 2 != -2 * *d + ram) {
      r.error("riemann-hurwitz", vid, "2g-2 = " + std::to_string(2 * S.vertices[v].genus - 2) + " but -2d + ramification = " +
                                          std::to_string(-2 * *d + ram));
    }
  }
  if (!r.ok()) return out;

  std::vector<int> over(T.vertices.size(), 0);
  for (std::size_t v = 0; v < S.vertices.size(); ++v) over[vmap[v]] += out.local_degree[S.vertices[v].id];
  out.degree = over[0];
  for (std::size_t t = 0; t < T.vertices.size(); ++t) {
    if (over[t] != out.degree) {
      r.error("global-degree", T.vertices[t].id, "degree " + std::to_string(over[t]) + " over this component, expected " +
                                                     std::to_string(out.degree));
    }
  }
  for (std::size_t t = 0; t < T.legs.size(); ++t) {
    if (T.legs[t].mu != 0) continue;
    int ram = 0;
    for (std::size_t l = 0; l < S.legs.size(); ++l) {
      if (lmap[l] == t) ram += lm[l] - 1;
    }
    if (ram != 1) r.error("non-simple-branching", T.legs[t].id, "branch point away from 0 and infinity must be simple");
  }
  for (std::size_t l = 0; l < S.legs.size(); ++l) {
    if (T.legs[lmap[l]].mu != 0) out.type.push_back(S.legs[l].mu);
  }
  return out;
}

MarkedDualGraph stabilize_graph(const MarkedDualGraph& input) {
  MarkedDualGraph g = input;
  while (true) {
    std::vector<int> edge_ends(g.vertices.size(), 0), legs(g.vertices.size(), 0);
    for (const auto& e : g.edges) {
      ++edge_ends[e.ends[0]];
      ++edge_ends[e.ends[1]];
    }
    for (const auto& l : g.legs) ++legs[l.vertex];
    std::optional<std::size_t> victim;
    for (std::size_t v = 0; v < g.vertices.size() && !victim; ++v) {
      if (g.vertices[v].genus == 0 && edge_ends[v] + legs[v] <= 2) victim = v;
    }
    if (!victim) return g;
    std::size_t v = *victim;
    std::vector<std::size_t> incident;
    for (std::size_t e = 0; e < g.edges.size(); ++e) {
      if (g.edges[e].ends[0] == v || g.edges[e].ends[1] == v) incident.push_back(e);
    }
    bool loop = incident.size() == 1 && g.edges[incident[0]].ends[0] == g.edges[incident[0]].ends[1];
    if (incident.empty() || loop) throw InputError(g.vertices[v].id, "stabilization is empty");
    auto other = [&](std::size_t e) { return g.edges[e].ends[0] == v ? g.edges[e].ends[1] : g.edges[e].ends[0]; };
    std::vector<bool> drop(g.edges.size(), false);
    if (incident.size() == 1) {
      std::size_t u = other(incident[0]);
      for (auto& l : g.legs) {
        if (l.vertex == v) l.vertex = u;
      }
      drop[incident[0]] = true;
    } else {
      std::size_t e1 = incident[0], e2 = incident[1];
      g.edges[e1].ends = {other(e1), other(e2)};
      drop[e2] = true;
    }
    MarkedDualGraph next;
    std::vector<std::size_t> index(g.vertices.size(), 0);
    for (std::size_t w = 0; w < g.vertices.size(); ++w) {
      if (w == v) continue;
      index[w] = next.vertices.size();
      next.vertices.push_back(g.vertices[w]);
    }
    for (std::size_t e = 0; e < g.edges.size(); ++e) {
      if (drop[e]) continue;
      next.edges.push_back({g.edges[e].id, {index[g.edges[e].ends[0]], index[g.edges[e].ends[1]]}});
    }
    for (auto l : g.legs) {
      l.vertex = index[l.vertex];
      next.legs.push_back(l);
    }
    g = std::move(next);
  }
}

CoverVerdict closure_via_covers(const MarkedDualGraph& stable, const std::vector<int>& mu,
                                const CombinatorialCover& c) {
  CoverVerdict v;
  v.cover = validate_cover(c);
  auto reject = [&](std::string reason) {
    v.accepted = false;
    v.reason = std::move(reason);
    return v;
  };
  if (!v.cover.report.ok()) {
    const auto& d = v.cover.report.errors.front();
    return reject("invalid cover: " + d.code + " at " + d.location + ": " + d.message);
  }
  if (!mu.empty() && mu_of(stable) != mu) return reject("mu does not match the legs of the stable curve");

  MarkedDualGraph reduced = c.source;
  reduced.legs.clear();
  for (const auto& l : c.source.legs) {
    const std::string& t = c.map.at(l.id);
    auto tl = find_leg(c.target, t);
    if (c.target.legs[*tl].mu != 0) reduced.legs.push_back(l);
  }
  try {
    v.stabilized = stabilize_graph(reduced);
  } catch (const InputError& e) {
    return reject(e.what());
  }
  if (v.stabilized.total_genus() != stable.total_genus()) {
    return reject("stabilization has genus " + std::to_string(v.stabilized.total_genus()) + ", expected " +
                  std::to_string(stable.total_genus()));
  }
  std::map<std::string, int> a, b;
  for (const auto& l : v.stabilized.legs) a[l.id] = l.mu;
  for (const auto& l : stable.legs) {
    if (!l.is_critical()) b[l.id] = l.mu;
  }
  if (a != b) return reject("marked points of the stabilization differ from the stable curve");
  // Legs are matched by id: relabel mu by the rank of the id.
  auto relabel = [](MarkedDualGraph g, const std::map<std::string, int>& ids) {
    std::vector<Leg> legs;
    for (auto l : g.legs) {
      if (l.is_critical()) continue;
      l.mu = static_cast<int>(std::distance(ids.begin(), ids.find(l.id)));
      legs.push_back(l);
    }
    g.legs = std::move(legs);
    return g;
  };
  if (!isomorphic(relabel(v.stabilized, a), nullptr, relabel(stable, b), nullptr)) {
    return reject("stabilization is not isomorphic to the stable curve");
  }
  v.accepted = true;
  return v;
}

}  // namespace drclosure
