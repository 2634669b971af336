#include "drclosure/twr.hpp"

#include <numeric>
#include <stdexcept>

namespace drclosure {

int ord_df(int mult, bool at_pole) {
  if (mult < 1) throw std::invalid_argument("multiplicity must be positive");
  return at_pole ? -mult - 1 : mult - 1;
}

std::vector<int> associated_partition(std::span<const int> mu) {
  long sum = std::accumulate(mu.begin(), mu.end(), 0L);
  if (sum != 0) throw std::invalid_argument("mu must sum to zero, got " + std::to_string(sum));
  std::vector<int> out(mu.begin(), mu.end());
  for (auto& x : out) x -= 1;
  return out;
}

bool check_extension(std::span<const int> hat, std::span<const int> mu, int genus) {
  if (std::accumulate(mu.begin(), mu.end(), 0L) != 0) return false;
  if (hat.size() < mu.size()) return false;
  auto assoc = associated_partition(mu);
  for (std::size_t k = 0; k < mu.size(); ++k) {
    if (hat[k] != assoc[k]) return false;
  }
  for (std::size_t k = mu.size(); k < hat.size(); ++k) {
    if (hat[k] <= 0) return false;
  }
  return std::accumulate(hat.begin(), hat.end(), 0L) == 2L * genus - 2;
}

PointOrder leg_order(const Leg& leg) {
  if (leg.critical) return {*leg.critical, false, false};
  if (leg.mu > 0) return {leg.mu - 1, false, true};
  if (leg.mu < 0) return {leg.mu - 1, true, false};
  // mu = 0: an unramified marked point with finite nonzero value.
  return {0, false, false};
}

PointOrder order_at(const MarkedDualGraph& g, const Decoration& dec, const PointRef& p) {
  auto it = dec.orders.find(g.point_id(p));
  if (it != dec.orders.end()) return it->second;
  if (p.kind == PointRef::Kind::Leg) return leg_order(g.legs[p.index]);
  throw InputError(g.point_id(p), "no order given for half-edge");
}

std::string value_key(const MarkedDualGraph& g, const PointRef& p) {
  return g.vertices[g.point_vertex(p)].id + ":" + g.point_id(p);
}

VertexBalance vertex_balance(const MarkedDualGraph& g, const Decoration& dec, std::size_t v) {
  VertexBalance b;
  for (const auto& p : g.points_on(v)) {
    PointOrder o = order_at(g, dec, p);
    b.df_sum += o.ord_df;
    if (o.pole) b.degree += o.multiplicity();
    if (o.zero) b.zero_mass += o.multiplicity();
    b.max_multiplicity = std::max(b.max_multiplicity, o.multiplicity());
    if (p.kind == PointRef::Kind::Leg && g.legs[p.index].is_zero() && g.legs[p.index].mu > 0) {
      b.marked_zero = true;
    }
  }
  b.critical_deficit = 2 * g.vertices[v].genus - 2 - b.df_sum;
  return b;
}

std::vector<int> mu_of(const MarkedDualGraph& g) {
  std::vector<int> mu;
  for (const auto& l : g.legs) {
    if (!l.is_critical()) mu.push_back(l.mu);
  }
  return mu;
}

std::vector<int> extended_partition(const MarkedDualGraph& g, const Decoration& dec) {
  std::vector<int> out;
  for (int pass = 0; pass < 2; ++pass) {
    for (std::size_t l = 0; l < g.legs.size(); ++l) {
      if (g.legs[l].is_critical() != (pass == 1)) continue;
      out.push_back(order_at(g, dec, {PointRef::Kind::Leg, l, 0}).ord_df);
    }
  }
  return out;
}

namespace {

// Checks shared by both flavours: well-formed order entries, leg orders
// matching mu, per-component degree data, values.
void check_common(const MarkedDualGraph& g, const LevelStructure& levels, const Decoration& dec,
                  bool fully_marked, Report& r) {
  if (levels.level.size() != g.vertices.size()) {
    r.error("levels", "", "level map does not cover every vertex");
    return;
  }
  if (!levels.normalized()) r.error("levels", "", "levels are not normalized to {0,...,-L}");

  for (const auto& [id, o] : dec.orders) {
    if (!g.find_point(id)) r.error("unknown-point", id, "order given for unknown point");
  }
  for (std::size_t e = 0; e < g.edges.size(); ++e) {
    for (int s = 0; s < 2; ++s) {
      if (!dec.orders.count(g.half_edge_id(e, s))) {
        r.error("missing-order", g.half_edge_id(e, s), "no order given for half-edge");
      }
    }
  }
  if (!r.ok()) return;

  for (const auto& p : g.all_points()) {
    PointOrder o = order_at(g, dec, p);
    std::string where = g.point_id(p);
    if (o.ord_df == -1) r.error("simple-pole-df", where, "ord(df) = -1 is impossible for exact differentials");
    if (o.pole && o.ord_df > -2) r.error("pole-order", where, "a pole of f has ord(df) <= -2");
    if (!o.pole && o.ord_df < 0 && o.ord_df != -1) {
      r.error("holomorphic", where, "negative ord(df) only at poles of f");
    }
    if (o.pole && o.zero) r.error("zero-and-pole", where, "point flagged both zero and pole");
    if (p.kind == PointRef::Kind::Leg) {
      const Leg& leg = g.legs[p.index];
      if (leg.is_critical()) {
        if (!fully_marked) r.error("critical-leg", where, "extra critical legs only occur in fully marked decorations");
        if (o.pole || o.zero || o.ord_df <= 0) {
          r.error("critical-order", where, "extra critical points have positive ord(df) and are neither zeros nor poles");
        }
      } else if (!(o == leg_order(leg))) {
        r.error("leg-order", where, "ord of f at a marked point must equal mu = " + std::to_string(leg.mu));
      }
    }
  }

  std::set<std::string> declared;
  for (std::size_t v = 0; v < g.vertices.size(); ++v) {
    const auto& vid = g.vertices[v].id;
    VertexBalance b = vertex_balance(g, dec, v);
    if (b.marked_zero) declared.insert(vid);
    if (b.degree < 1) {
      r.error("constant-component", vid, "f is constant on this component (no poles)");
      continue;
    }
    if (b.max_multiplicity > b.degree) {
      r.error("mult-exceeds-degree", vid, "a multiplicity exceeds the degree " + std::to_string(b.degree));
    }
    if (b.zero_mass > b.degree) {
      r.error("zero-excess", vid, "zeros of total multiplicity " + std::to_string(b.zero_mass) +
                                      " exceed the degree " + std::to_string(b.degree));
    }
    if (b.marked_zero && b.zero_mass != b.degree) {
      r.error("unmarked-zero", vid, "component with a marked zero must have all zeros at marked points or nodes");
    }
    if (fully_marked) {
      if (b.critical_deficit != 0) {
        r.error("canonical-degree", vid, "sum of ord(df) is " + std::to_string(b.df_sum) + ", expected 2g-2 = " +
                                             std::to_string(2 * g.vertices[v].genus - 2));
      }
    } else if (b.critical_deficit < 0) {
      r.error("canonical-excess", vid, "sum of ord(df) exceeds 2g-2");
    } else if (b.critical_deficit > 0 && b.degree < 2) {
      r.error("critical-degree", vid, "a function of degree 1 has no further critical points");
    }
  }
  if (!dec.marked_zero_vertices.empty() && dec.marked_zero_vertices != declared) {
    r.error("marked-zero-vertices", "", "declared marked-zero vertices disagree with the legs");
  }

  for (const auto& [id, value] : dec.values) {
    auto p = g.find_point(id);
    if (!p) {
      r.error("unknown-point", id, "value given for unknown point");
      continue;
    }
    PointOrder o = order_at(g, dec, *p);
    if (o.pole) r.error("value-at-pole", id, "f has a pole here");
    if (o.zero && !(value.is_constant() && value.constant() == 0)) {
      r.error("value-at-zero", id, "f vanishes here; value must be 0");
    }
  }
}

}  // namespace

Report validate_twr(const MarkedDualGraph& g, const LevelStructure& levels, const Decoration& dec) {
  Report r;
  check_common(g, levels, dec, false, r);
  if (!r.ok()) return r;
  for (std::size_t e = 0; e < g.edges.size(); ++e) {
    const auto& id = g.edges[e].id;
    PointOrder a = order_at(g, dec, {PointRef::Kind::HalfEdge, e, 0});
    PointOrder b = order_at(g, dec, {PointRef::Kind::HalfEdge, e, 1});
    if (a.ord_df + b.ord_df < -2) {
      r.error("node-order-sum", id, "ord(df) sum " + std::to_string(a.ord_df + b.ord_df) + " < -2");
    }
    int la = levels.level[g.edges[e].ends[0]], lb = levels.level[g.edges[e].ends[1]];
    if (a.pole && !(lb > la)) r.error("pole-level", g.half_edge_id(e, 0), "pole of f must lie strictly below the other branch");
    if (b.pole && !(la > lb)) r.error("pole-level", g.half_edge_id(e, 1), "pole of f must lie strictly below the other branch");
    if (a.pole != b.pole) {
      const PointOrder& upper = a.pole ? b : a;
      const PointOrder& lower = a.pole ? a : b;
      if (upper.multiplicity() < lower.multiplicity()) {
        r.error("mult-inequality", id, "mult on the upper branch is below mult at the pole");
      }
    }
  }
  return r;
}

Report validate_twdr(const MarkedDualGraph& g, const LevelStructure& levels, const Decoration& dec) {
  Report r;
  check_common(g, levels, dec, true, r);
  if (!r.ok()) return r;
  for (std::size_t e = 0; e < g.edges.size(); ++e) {
    const auto& id = g.edges[e].id;
    if (levels.horizontal(g, e)) r.error("horizontal-edge", id, "fully marked decorations have no horizontal edges");
    PointOrder a = order_at(g, dec, {PointRef::Kind::HalfEdge, e, 0});
    PointOrder b = order_at(g, dec, {PointRef::Kind::HalfEdge, e, 1});
    if (a.ord_df + b.ord_df != -2) {
      r.error("node-order-sum", id, "ord(df) sum " + std::to_string(a.ord_df + b.ord_df) + " != -2");
    }
    int la = levels.level[g.edges[e].ends[0]], lb = levels.level[g.edges[e].ends[1]];
    if ((la > lb) != (b.ord_df < 0) || (lb > la) != (a.ord_df < 0)) {
      r.error("level-compatibility", id, "the lower branch must be exactly the branch where df has a pole");
    }
  }
  // Type check: mu-legs carry mu-1 (0 for mu = 0), critical legs are positive,
  // and the total is 2g-2.
  long total = 0;
  for (const auto& x : extended_partition(g, dec)) total += x;
  if (total != 2L * g.total_genus() - 2) {
    r.error("extension-type", "", "extended partition sums to " + std::to_string(total) + ", expected 2g-2 = " +
                                      std::to_string(2 * g.total_genus() - 2));
  }
  return r;
}

}  // namespace drclosure
