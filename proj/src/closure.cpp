#include "drclosure/closure.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <set>
#include <sstream>

namespace drclosure {

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::AcceptedExact: return "accepted-exact";
    case Verdict::AcceptedModuloGenericity: return "accepted-modulo-genericity";
    case Verdict::Rejected: return "rejected";
  }
  return "?";
}

ValueAssignment point_unknowns(const MarkedDualGraph& g, const Decoration& dec, std::vector<LinearForm>& zero_equations) {
  ValueAssignment values;
  for (const auto& p : g.all_points()) {
    std::string id = g.point_id(p);
    if (p.kind == PointRef::Kind::HalfEdge && !dec.orders.count(id)) continue;
    PointOrder o = order_at(g, dec, p);
    if (o.pole) continue;
    LinearForm x = LinearForm::unknown(value_key(g, p));
    if (o.zero) {
      zero_equations.push_back(x);
      values[id] = x;
    } else if (auto it = dec.values.find(id); it != dec.values.end()) {
      values[id] = it->second;
    } else {
      values[id] = x;
    }
  }
  return values;
}

AffineSpace constraint_space(const MarkedDualGraph& g, const LevelStructure& levels, const Decoration& dec) {
  std::vector<LinearForm> forms;
  ValueAssignment values = point_unknowns(g, dec, forms);
  auto sys = evaluation_system(g, levels, values);
  for (auto& f : sys.all_forms()) forms.push_back(std::move(f));
  return AffineSpace::solve(forms);
}

namespace {

using Poly = std::vector<Rational>;  // low degree first

Poly multiply(const Poly& a, const Poly& b) {
  Poly out(a.size() + b.size() - 1, Rational(0));
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  }
  return out;
}

void trim(Poly& p) {
  while (p.size() > 1 && p.back() == 0) p.pop_back();
}

Rational eval(const Poly& p, const Rational& z) {
  Rational out = 0;
  for (auto it = p.rbegin(); it != p.rend(); ++it) out = out * z + *it;
  return out;
}

bool is_zero(const Poly& p) {
  return std::all_of(p.begin(), p.end(), [](const Rational& x) { return x == 0; });
}

// Divides by (z - a), assuming p(a) = 0.
Poly deflate(const Poly& p, const Rational& a) {
  Poly q(p.size() - 1);
  Rational carry = 0;
  for (std::size_t k = p.size() - 1; k >= 1; --k) {
    carry = p[k] + carry * a;
    q[k - 1] = carry;
  }
  return q;
}

// Multiplicity of f = c*N/D at a non-zero, non-pole point.
int local_multiplicity(const Poly& n, const Poly& d, const std::optional<Rational>& z) {
  if (!z) {
    Poly diff(std::max(n.size(), d.size()), Rational(0));
    for (std::size_t i = 0; i < n.size(); ++i) diff[i] += n[i];
    for (std::size_t i = 0; i < d.size(); ++i) diff[i] -= d[i];
    trim(diff);
    if (is_zero(diff)) return 0;
    return static_cast<int>(d.size()) - static_cast<int>(diff.size());
  }
  Rational t = eval(n, *z) / eval(d, *z);
  Poly p(std::max(n.size(), d.size()), Rational(0));
  for (std::size_t i = 0; i < n.size(); ++i) p[i] += n[i];
  for (std::size_t i = 0; i < d.size(); ++i) p[i] -= t * d[i];
  trim(p);
  if (is_zero(p)) return 0;
  int m = 0;
  while (p.size() > 1 && eval(p, *z) == 0) {
    p = deflate(p, *z);
    ++m;
  }
  return m;
}

struct WitnessValues {
  std::map<std::string, LinearForm> values;
  std::string scale_unknown;
};

WitnessValues apply_witness(const MarkedDualGraph& g, const Decoration& dec, std::size_t v, const VertexWitness& w) {
  const std::string& vid = g.vertices[v].id;
  if (g.vertices[v].genus != 0) throw InputError(vid, "genus-0 witness on a component of positive genus");
  VertexBalance b = vertex_balance(g, dec, v);
  std::vector<DivisorPoint> divisor;
  std::set<std::optional<Rational>> used;
  struct Finite {
    std::string id;
    std::optional<Rational> at;
    int mult;
  };
  std::vector<Finite> finite;
  for (const auto& p : g.points_on(v)) {
    std::string id = g.point_id(p);
    auto it = w.coordinates.find(id);
    if (it == w.coordinates.end()) throw InputError(vid, "witness gives no coordinate for " + id);
    if (!used.insert(it->second).second) throw InputError(id, "coordinate collision");
    PointOrder o = order_at(g, dec, p);
    if (o.pole) {
      divisor.push_back({it->second, -o.multiplicity()});
    } else if (o.zero) {
      divisor.push_back({it->second, o.multiplicity()});
    } else {
      finite.push_back({id, it->second, o.multiplicity()});
    }
  }
  int extra = 0;
  for (const auto& z : w.extra_zeros) {
    if (z.order <= 0) throw InputError(vid, "extra zeros have positive order");
    if (!used.insert(z.at).second) throw InputError(vid, "extra zero collides with a point");
    extra += z.order;
    divisor.push_back(z);
  }
  if (extra > 0 && b.marked_zero) throw InputError(vid, "unmarked zeros on a component with marked zeros");
  std::string scale_name = "scale:" + vid;
  Genus0Realization f = realize_genus0(divisor, w.scale, scale_name);

  Poly num{Rational(1)}, den{Rational(1)};
  for (const auto& p : divisor) {
    if (!p.at) continue;
    Poly lin{-*p.at, Rational(1)};
    for (int k = 0; k < std::abs(p.order); ++k) (p.order > 0 ? num : den) = multiply(p.order > 0 ? num : den, lin);
  }
  WitnessValues out;
  out.scale_unknown = w.scale ? "" : scale_name;
  for (const auto& pt : finite) {
    int m = local_multiplicity(num, den, pt.at);
    if (m != pt.mult) {
      throw InputError(pt.id, "witness has multiplicity " + std::to_string(m) + ", decoration requires " +
                                  std::to_string(pt.mult));
    }
    out.values[pt.id] = f.value(pt.at);
  }
  return out;
}

std::string describe(const Diagnostic& d) {
  return d.code + (d.location.empty() ? "" : " at " + d.location) + ": " + d.message;
}

}  // namespace

VerificationResult verify_certificate(const MarkedDualGraph& g, const std::vector<int>& mu, ClosureCertificate cert) {
  VerificationResult res;
  res.certificate = std::move(cert);
  ClosureCertificate& c = res.certificate;
  c.vertices.clear();
  c.notes.clear();
  c.constraints.clear();
  auto reject = [&](std::string reason) {
    res.verdict = Verdict::Rejected;
    res.reason = std::move(reason);
    return res;
  };

  auto gd = validate(g);
  if (!gd.report.ok()) return reject("graph: " + describe(gd.report.errors.front()));
  if (!mu.empty() && mu_of(g) != mu) return reject("mu does not match the legs");
  Report tw = validate_twr(g, c.levels, c.decoration);
  if (!tw.ok()) return reject("not a TWR: " + describe(tw.errors.front()));

  std::vector<LinearForm> forms;
  ValueAssignment values = point_unknowns(g, c.decoration, forms);
  std::vector<std::string> scales;
  for (const auto& [vid, w] : c.witnesses) {
    auto v = g.find_vertex(vid);
    if (!v) return reject("witness for unknown vertex " + vid);
    try {
      WitnessValues wv = apply_witness(g, c.decoration, *v, w);
      for (auto& [id, val] : wv.values) values[id] = std::move(val);
      if (!wv.scale_unknown.empty()) scales.push_back(wv.scale_unknown);
    } catch (const InputError& e) {
      return reject(std::string("witness: ") + e.what());
    }
  }
  try {
    res.system = evaluation_system(g, c.levels, values);
  } catch (const InputError& e) {
    return reject(e.what());
  }
  std::vector<LinearForm> cumulative = forms;
  for (const auto& le : res.system.levels) {
    cumulative.insert(cumulative.end(), le.forms.begin(), le.forms.end());
    if (!AffineSpace::solve(cumulative).consistent()) {
      return reject("evaluation morphism cannot vanish at level " + std::to_string(le.level));
    }
  }
  AffineSpace space = AffineSpace::solve(cumulative);
  if (!c.solution.empty()) {
    std::vector<LinearForm> substituted;
    for (const auto& f : cumulative) substituted.push_back(f.substitute(c.solution));
    if (!AffineSpace::solve(substituted).consistent()) return reject("recorded solution violates the constraints");
  }
  for (const auto& s : scales) {
    if (auto v = space.constant_value(LinearForm::unknown(s)); v && *v == 0) {
      return reject("constraints force the scale " + s + " to vanish");
    }
  }
  c.constraints = space.equations();

  bool exact = true;
  std::optional<int> cap;
  for (std::size_t v = 0; v < g.vertices.size(); ++v) {
    VertexCheck vc;
    vc.vertex = g.vertices[v].id;
    vc.problem = component_problem(g, c.decoration, v, values, space);
    vc.witnessed = c.witnesses.count(vc.vertex) > 0;
    if (!vc.problem.feasible) return reject("component " + vc.vertex + ": " + vc.problem.reason);
    vc.verdict = decide(vc.problem.problem, cap);
    if (!vc.verdict.rh) return reject("component " + vc.vertex + ": Riemann-Hurwitz count fails");
    if (vc.verdict.cap_hit) {
      c.notes.push_back("component " + vc.vertex + ": degree above the Hurwitz cap, existence not decided");
    } else if (!vc.verdict.exists) {
      return reject("component " + vc.vertex + ": no cover with the required ramification");
    }
    if (vc.witnessed) {
      c.notes.push_back("component " + vc.vertex + ": exact genus-0 witness");
    } else {
      exact = false;
      c.notes.push_back("component " + vc.vertex + ": realizable modulo genericity of values");
    }
    c.vertices.push_back(std::move(vc));
  }
  res.verdict = exact ? Verdict::AcceptedExact : Verdict::AcceptedModuloGenericity;
  return res;
}

namespace {

struct SideState {
  int degree = 0, zero_mass = 0, df_sum = 0, max_mult = 0;
};

std::string order_code(const PointOrder& o) {
  return std::to_string(o.ord_df) + (o.pole ? "p" : (o.zero ? "z" : "n"));
}

}  // namespace

SearchResult search(const MarkedDualGraph& g, const std::vector<int>& mu, const SearchBounds& bounds) {
  auto gd = validate(g);
  if (!gd.report.ok()) throw InputError(gd.report.errors.front().location, gd.report.errors.front().message);
  if (!mu.empty() && mu_of(g) != mu) throw InputError("mu", "mu does not match the legs of the graph");
  if (gd.mu_sum != 0) throw InputError("mu", "mu must sum to zero");

  SearchResult out;
  int positive = 0;
  for (const auto& l : g.legs) {
    if (!l.is_critical() && l.mu > 0) positive += l.mu;
  }
  const int B = bounds.max_multiplicity ? *bounds.max_multiplicity : std::max(positive, 1);
  out.max_multiplicity = B;
  EnumerationOptions eo;
  eo.max_levels = bounds.max_levels;
  eo.max_candidates = bounds.max_level_candidates;
  out.level_structures = enumerate_level_structures(g, eo);

  const std::size_t n = g.vertices.size(), E = g.edges.size();
  std::vector<SideState> base(n);
  std::vector<bool> marked_zero(n, false);
  for (const auto& l : g.legs) {
    if (l.is_critical()) continue;
    PointOrder o = leg_order(l);
    SideState& s = base[l.vertex];
    s.df_sum += o.ord_df;
    if (o.pole) s.degree += o.multiplicity();
    if (o.zero) s.zero_mass += o.multiplicity();
    s.max_mult = std::max(s.max_mult, o.multiplicity());
    if (l.mu > 0) marked_zero[l.vertex] = true;
  }
  std::vector<long> last_edge(n, -1);
  for (std::size_t e = 0; e < E; ++e) {
    last_edge[g.edges[e].ends[0]] = static_cast<long>(e);
    last_edge[g.edges[e].ends[1]] = static_cast<long>(e);
  }
  auto complete_ok = [&](const SideState& s, std::size_t v) {
    if (s.degree < 1 || s.zero_mass > s.degree || s.max_mult > s.degree) return false;
    if (marked_zero[v] && s.zero_mass != s.degree) return false;
    int deficit = 2 * g.vertices[v].genus - 2 - s.df_sum;
    return deficit >= 0 && (deficit == 0 || s.degree >= 2);
  };

  std::map<std::string, AffineSpace> space_cache;
  std::map<std::string, std::pair<ComponentProblem, HurwitzVerdict>> vertex_cache;
  std::map<std::pair<std::size_t, std::string>, std::size_t> family_index;
  bool cert_cap = false;

  for (std::size_t li = 0; li < out.level_structures.size() && !cert_cap; ++li) {
    const LevelStructure& L = out.level_structures[li];
    std::vector<std::vector<std::array<PointOrder, 2>>> options(E);
    for (std::size_t e = 0; e < E; ++e) {
      int la = L.level[g.edges[e].ends[0]], lb = L.level[g.edges[e].ends[1]];
      std::array<std::vector<PointOrder>, 2> sides;
      for (int s = 0; s < 2; ++s) {
        bool below = (s == 0 ? la < lb : lb < la);
        auto& list = sides[static_cast<std::size_t>(s)];
        for (int k = 0; k < B; ++k) {
          list.push_back({k, false, false});
          list.push_back({k, false, true});
        }
        if (below) {
          for (int m = 1; m <= B; ++m) list.push_back({-m - 1, true, false});
        }
      }
      for (const auto& a : sides[0]) {
        for (const auto& b : sides[1]) {
          if (a.ord_df + b.ord_df < -2 || (a.pole && b.pole)) continue;
          if (a.pole && b.multiplicity() < a.multiplicity()) continue;
          if (b.pole && a.multiplicity() < b.multiplicity()) continue;
          options[e].push_back({a, b});
        }
      }
    }

    std::vector<SideState> state = base;
    std::vector<std::size_t> choice(E, 0);
    bool vertices_ok = true;
    for (std::size_t v = 0; v < n; ++v) {
      if (last_edge[v] < 0 && !complete_ok(state[v], v)) vertices_ok = false;
    }
    if (!vertices_ok) continue;
    bool bound_attained = false;

    std::function<void(std::size_t)> recurse = [&](std::size_t e) {
      if (cert_cap) return;
      if (e == E) {
        ++out.decorations_examined;
        Decoration dec;
        std::string pattern = std::to_string(li) + "|";
        bool at_bound = false;
        for (std::size_t k = 0; k < E; ++k) {
          const auto& opt = options[k][choice[k]];
          for (int s = 0; s < 2; ++s) {
            const PointOrder& o = opt[static_cast<std::size_t>(s)];
            dec.orders[g.half_edge_id(k, s)] = o;
            pattern += o.pole ? 'p' : (o.zero ? 'z' : 'n');
            if (o.multiplicity() == B) at_bound = true;
          }
        }
        auto it = space_cache.find(pattern);
        if (it == space_cache.end()) it = space_cache.emplace(pattern, constraint_space(g, L, dec)).first;
        const AffineSpace& space = it->second;
        if (!space.consistent()) return;
        std::vector<LinearForm> zero_eqs;
        ValueAssignment values = point_unknowns(g, dec, zero_eqs);
        ClosureCertificate cert;
        cert.levels = L;
        cert.decoration = dec;
        cert.constraints = space.equations();
        for (std::size_t v = 0; v < n; ++v) {
          std::string key = pattern + "|" + std::to_string(v);
          for (const auto& p : g.points_on(v)) key += "," + order_code(order_at(g, dec, p));
          auto vc = vertex_cache.find(key);
          if (vc == vertex_cache.end()) {
            ComponentProblem cp = component_problem(g, dec, v, values, space);
            HurwitzVerdict hv;
            if (cp.feasible) hv = decide(cp.problem, bounds.hurwitz_cap);
            vc = vertex_cache.emplace(key, std::make_pair(std::move(cp), hv)).first;
          }
          const auto& [cp, hv] = vc->second;
          if (!cp.feasible || !hv.rh || (!hv.cap_hit && !hv.exists)) return;
          cert.vertices.push_back({g.vertices[v].id, cp, hv, false});
          cert.notes.push_back("component " + g.vertices[v].id +
                               (hv.cap_hit ? ": degree above the Hurwitz cap, existence not decided"
                                           : ": realizable modulo genericity of values"));
        }
        if (at_bound) bound_attained = true;
        std::ostringstream fkey;
        for (const auto& eq : cert.constraints) fkey << eq.to_string() << ";";
        auto [fit, inserted] = family_index.try_emplace({li, fkey.str()}, out.families.size());
        if (inserted) out.families.push_back({li, cert.constraints, {}});
        out.families[fit->second].members.push_back(out.certificates.size());
        out.certificates.push_back(std::move(cert));
        out.verdicts.push_back(Verdict::AcceptedModuloGenericity);
        if (out.certificates.size() >= bounds.max_certificates) cert_cap = true;
        return;
      }
      const auto& ends = g.edges[e].ends;
      for (std::size_t k = 0; k < options[e].size(); ++k) {
        choice[e] = k;
        const auto& opt = options[e][k];
        for (int s = 0; s < 2; ++s) {
          const PointOrder& o = opt[static_cast<std::size_t>(s)];
          SideState& st = state[ends[static_cast<std::size_t>(s)]];
          st.df_sum += o.ord_df;
          if (o.pole) st.degree += o.multiplicity();
          if (o.zero) st.zero_mass += o.multiplicity();
        }
        SideState saved0 = state[ends[0]], saved1 = state[ends[1]];
        for (int s = 0; s < 2; ++s) {
          SideState& st = state[ends[static_cast<std::size_t>(s)]];
          st.max_mult = std::max(st.max_mult, opt[static_cast<std::size_t>(s)].multiplicity());
        }
        bool ok = true;
        for (int s = 0; s < 2 && ok; ++s) {
          std::size_t v = ends[static_cast<std::size_t>(s)];
          if (last_edge[v] == static_cast<long>(e) && !complete_ok(state[v], v)) ok = false;
        }
        if (ok) recurse(e + 1);
        state[ends[0]] = saved0;
        state[ends[1]] = saved1;
        for (int s = 0; s < 2; ++s) {
          const PointOrder& o = opt[static_cast<std::size_t>(s)];
          SideState& st = state[ends[static_cast<std::size_t>(s)]];
          st.df_sum -= o.ord_df;
          if (o.pole) st.degree -= o.multiplicity();
          if (o.zero) st.zero_mass -= o.multiplicity();
        }
      }
    };
    recurse(0);
    if (bound_attained) {
      out.exhausted.push_back("level structure " + std::to_string(li) + ": certificates use multiplicity " +
                              std::to_string(B) + " (the bound); larger bounds may add more");
    }
  }
  if (cert_cap) out.exhausted.push_back("certificate cap " + std::to_string(bounds.max_certificates) + " reached");
  return out;
}

}  // namespace drclosure
