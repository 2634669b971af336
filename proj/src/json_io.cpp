#include "drclosure/json_io.hpp"

#include <algorithm>
#include <set>

namespace drclosure::json_io {

namespace {

const Json& member(const Json& j, const char* key, const std::string& ptr) {
  if (!j.is_object()) throw InputError(ptr.empty() ? "/" : ptr, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) throw InputError(ptr + "/" + key, "missing member");
  return *it;
}

std::string get_string(const Json& j, const std::string& ptr) {
  if (!j.is_string()) throw InputError(ptr, "expected a string");
  return j.get<std::string>();
}

int get_int(const Json& j, const std::string& ptr) {
  if (!j.is_number_integer()) throw InputError(ptr, "expected an integer");
  return j.get<int>();
}

bool get_bool(const Json& j, const std::string& ptr) {
  if (!j.is_boolean()) throw InputError(ptr, "expected a boolean");
  return j.get<bool>();
}

const Json& array_member(const Json& j, const char* key, const std::string& ptr) {
  const Json& a = member(j, key, ptr);
  if (!a.is_array()) throw InputError(ptr + "/" + key, "expected an array");
  return a;
}

std::size_t vertex_ref(const MarkedDualGraph& g, const Json& j, const std::string& ptr) {
  std::string id = get_string(j, ptr);
  auto v = g.find_vertex(id);
  if (!v) throw InputError(ptr, "unknown vertex '" + id + "'");
  return *v;
}

std::optional<Rational> coordinate_from_json(const Json& j, const std::string& ptr) {
  if (j.is_string() && (j.get<std::string>() == "inf" || j.get<std::string>() == "infinity")) return std::nullopt;
  return rational_from_json(j, ptr);
}

Json coordinate_to_json(const std::optional<Rational>& z) { return z ? to_json(*z) : Json("inf"); }

Json strings(const std::vector<std::string>& v) {
  Json a = Json::array();
  for (const auto& s : v) a.push_back(s);
  return a;
}

Json equations(const std::vector<LinearForm>& v) {
  Json a = Json::array();
  for (const auto& f : v) a.push_back(f.to_string() + " = 0");
  return a;
}

}  // namespace

void check_version(const Json& j, const std::string& ptr) {
  const Json& v = member(j, "version", ptr);
  if (!v.is_number_integer() || v.get<int>() != kSchemaVersion) {
    throw InputError(ptr + "/version", "unsupported schema version (expected " + std::to_string(kSchemaVersion) + ")");
  }
}

MarkedDualGraph graph_from_json(const Json& j, const std::string& ptr) {
  MarkedDualGraph g;
  const Json& vs = array_member(j, "vertices", ptr);
  for (std::size_t k = 0; k < vs.size(); ++k) {
    std::string p = ptr + "/vertices/" + std::to_string(k);
    Vertex v;
    v.id = get_string(member(vs[k], "id", p), p + "/id");
    if (vs[k].contains("genus")) v.genus = get_int(vs[k]["genus"], p + "/genus");
    if (v.genus < 0) throw InputError(p + "/genus", "genus must be nonnegative");
    g.vertices.push_back(v);
  }
  if (j.contains("edges")) {
    const Json& es = array_member(j, "edges", ptr);
    for (std::size_t k = 0; k < es.size(); ++k) {
      std::string p = ptr + "/edges/" + std::to_string(k);
      Edge e;
      e.id = get_string(member(es[k], "id", p), p + "/id");
      const Json& ends = member(es[k], "ends", p);
      if (!ends.is_array() || ends.size() != 2) throw InputError(p + "/ends", "expected two vertex ids");
      e.ends = {vertex_ref(g, ends[0], p + "/ends/0"), vertex_ref(g, ends[1], p + "/ends/1")};
      g.edges.push_back(e);
    }
  }
  if (j.contains("legs")) {
    const Json& ls = array_member(j, "legs", ptr);
    for (std::size_t k = 0; k < ls.size(); ++k) {
      std::string p = ptr + "/legs/" + std::to_string(k);
      Leg l;
      l.id = get_string(member(ls[k], "id", p), p + "/id");
      l.vertex = vertex_ref(g, member(ls[k], "vertex", p), p + "/vertex");
      if (ls[k].contains("critical")) {
        l.critical = get_int(ls[k]["critical"], p + "/critical");
      } else {
        l.mu = get_int(member(ls[k], "mu", p), p + "/mu");
      }
      g.legs.push_back(l);
    }
  }
  return g;
}

Json to_json(const MarkedDualGraph& g) {
  Json j;
  j["version"] = kSchemaVersion;
  Json vs = Json::array(), es = Json::array(), ls = Json::array();
  for (const auto& v : g.vertices) vs.push_back({{"id", v.id}, {"genus", v.genus}});
  for (const auto& e : g.edges) {
    es.push_back({{"id", e.id}, {"ends", {g.vertices[e.ends[0]].id, g.vertices[e.ends[1]].id}}});
  }
  for (const auto& l : g.legs) {
    Json leg = {{"id", l.id}, {"vertex", g.vertices[l.vertex].id}};
    if (l.critical) {
      leg["critical"] = *l.critical;
    } else {
      leg["mu"] = l.mu;
    }
    ls.push_back(leg);
  }
  j["vertices"] = vs;
  j["edges"] = es;
  j["legs"] = ls;
  return j;
}

LevelStructure levels_from_json(const Json& j, const MarkedDualGraph& g, const std::string& ptr) {
  if (!j.is_object()) throw InputError(ptr, "expected an object mapping vertex ids to levels");
  LevelStructure levels;
  levels.level.assign(g.vertices.size(), 0);
  std::vector<bool> seen(g.vertices.size(), false);
  for (const auto& [id, value] : j.items()) {
    auto v = g.find_vertex(id);
    if (!v) throw InputError(ptr + "/" + id, "unknown vertex");
    levels.level[*v] = get_int(value, ptr + "/" + id);
    seen[*v] = true;
  }
  for (std::size_t v = 0; v < g.vertices.size(); ++v) {
    if (!seen[v]) throw InputError(ptr, "no level for vertex '" + g.vertices[v].id + "'");
  }
  return levels;
}

Json levels_to_json(const MarkedDualGraph& g, const LevelStructure& levels) {
  Json j = Json::object();
  for (std::size_t v = 0; v < g.vertices.size(); ++v) j[g.vertices[v].id] = levels.level[v];
  return j;
}

Rational rational_from_json(const Json& j, const std::string& ptr) {
  if (j.is_number_integer()) return Rational(j.get<long>());
  if (!j.is_string()) throw InputError(ptr, "expected a rational \"p/q\"");
  try {
    return parse_rational(j.get<std::string>());
  } catch (const std::invalid_argument& e) {
    throw InputError(ptr, e.what());
  }
}

Json to_json(const Rational& q) { return to_string(q); }

LinearForm form_from_json(const Json& j, const std::string& ptr) {
  if (j.is_string() && !j.get<std::string>().empty() && j.get<std::string>()[0] == '?') {
    std::string name = j.get<std::string>().substr(1);
    if (name.empty()) throw InputError(ptr, "empty unknown name");
    return LinearForm::unknown(name);
  }
  if (j.is_object()) {
    LinearForm f;
    if (j.contains("constant")) f = LinearForm(rational_from_json(j["constant"], ptr + "/constant"));
    if (j.contains("terms")) {
      if (!j["terms"].is_object()) throw InputError(ptr + "/terms", "expected an object");
      for (const auto& [name, c] : j["terms"].items()) {
        f += LinearForm::unknown(name) * rational_from_json(c, ptr + "/terms/" + name);
      }
    }
    return f;
  }
  return LinearForm(rational_from_json(j, ptr));
}

Json to_json(const LinearForm& f) {
  if (f.is_constant()) return to_json(f.constant());
  if (f.constant() == 0 && f.terms().size() == 1 && f.terms().begin()->second == 1) {
    return "?" + f.terms().begin()->first;
  }
  Json terms = Json::object();
  for (const auto& [name, c] : f.terms()) terms[name] = to_json(c);
  return {{"constant", to_json(f.constant())}, {"terms", terms}};
}

Decoration decoration_from_json(const Json& j, const std::string& ptr) {
  if (!j.is_object()) throw InputError(ptr, "expected an object");
  Decoration d;
  if (j.contains("orders")) {
    if (!j["orders"].is_object()) throw InputError(ptr + "/orders", "expected an object");
    for (const auto& [id, o] : j["orders"].items()) {
      std::string p = ptr + "/orders/" + id;
      PointOrder po;
      if (o.is_number_integer()) {
        po.ord_df = o.get<int>();
        po.pole = po.ord_df <= -2;
      } else {
        po.ord_df = get_int(member(o, "ord_df", p), p + "/ord_df");
        if (o.contains("pole")) po.pole = get_bool(o["pole"], p + "/pole");
        if (o.contains("zero")) po.zero = get_bool(o["zero"], p + "/zero");
      }
      d.orders[id] = po;
    }
  }
  if (j.contains("values")) {
    if (!j["values"].is_object()) throw InputError(ptr + "/values", "expected an object");
    for (const auto& [id, v] : j["values"].items()) d.values[id] = form_from_json(v, ptr + "/values/" + id);
  }
  if (j.contains("marked_zero_vertices")) {
    const Json& m = array_member(j, "marked_zero_vertices", ptr);
    for (std::size_t k = 0; k < m.size(); ++k) {
      d.marked_zero_vertices.insert(get_string(m[k], ptr + "/marked_zero_vertices/" + std::to_string(k)));
    }
  }
  return d;
}

Json to_json(const Decoration& d) {
  Json orders = Json::object(), values = Json::object();
  for (const auto& [id, o] : d.orders) orders[id] = {{"ord_df", o.ord_df}, {"pole", o.pole}, {"zero", o.zero}};
  for (const auto& [id, v] : d.values) values[id] = to_json(v);
  Json j = {{"orders", orders}};
  if (!d.values.empty()) j["values"] = values;
  if (!d.marked_zero_vertices.empty()) {
    j["marked_zero_vertices"] = strings({d.marked_zero_vertices.begin(), d.marked_zero_vertices.end()});
  }
  return j;
}

std::vector<int> mu_from_json(const Json& j, const std::string& ptr) {
  if (!j.is_array()) throw InputError(ptr, "expected an array of integers");
  std::vector<int> mu;
  for (std::size_t k = 0; k < j.size(); ++k) mu.push_back(get_int(j[k], ptr + "/" + std::to_string(k)));
  return mu;
}

CombinatorialCover cover_from_json(const Json& j, const std::string& ptr) {
  CombinatorialCover c;
  c.source = graph_from_json(member(j, "source", ptr), ptr + "/source");
  c.target = graph_from_json(member(j, "target", ptr), ptr + "/target");
  const Json& m = member(j, "map", ptr);
  if (!m.is_object()) throw InputError(ptr + "/map", "expected an object");
  for (const auto& [k, v] : m.items()) c.map[k] = get_string(v, ptr + "/map/" + k);
  if (j.contains("mults")) {
    for (const auto& [k, v] : j["mults"].items()) c.mults[k] = get_int(v, ptr + "/mults/" + k);
  }
  if (j.contains("local_degree")) {
    for (const auto& [k, v] : j["local_degree"].items()) c.local_degree[k] = get_int(v, ptr + "/local_degree/" + k);
  }
  return c;
}

Json to_json(const CombinatorialCover& c) {
  Json source = to_json(c.source), target = to_json(c.target);
  source.erase("version");
  target.erase("version");
  Json j = {{"version", kSchemaVersion}, {"source", source}, {"target", target}};
  j["map"] = Json(c.map);
  j["mults"] = Json(c.mults);
  if (!c.local_degree.empty()) j["local_degree"] = Json(c.local_degree);
  return j;
}

std::map<std::string, VertexWitness> witnesses_from_json(const Json& j, const std::string& ptr) {
  if (!j.is_object()) throw InputError(ptr, "expected an object");
  std::map<std::string, VertexWitness> out;
  for (const auto& [vid, w] : j.items()) {
    std::string p = ptr + "/" + vid;
    VertexWitness vw;
    const Json& coords = member(w, "coordinates", p);
    if (!coords.is_object()) throw InputError(p + "/coordinates", "expected an object");
    for (const auto& [id, z] : coords.items()) vw.coordinates[id] = coordinate_from_json(z, p + "/coordinates/" + id);
    if (w.contains("extra_zeros")) {
      const Json& ez = array_member(w, "extra_zeros", p);
      for (std::size_t k = 0; k < ez.size(); ++k) {
        std::string q = p + "/extra_zeros/" + std::to_string(k);
        vw.extra_zeros.push_back({coordinate_from_json(member(ez[k], "at", q), q + "/at"),
                                  get_int(member(ez[k], "order", q), q + "/order")});
      }
    }
    if (w.contains("scale")) vw.scale = rational_from_json(w["scale"], p + "/scale");
    out[vid] = std::move(vw);
  }
  return out;
}

Json to_json(const std::map<std::string, VertexWitness>& w) {
  Json j = Json::object();
  for (const auto& [vid, vw] : w) {
    Json coords = Json::object();
    for (const auto& [id, z] : vw.coordinates) coords[id] = coordinate_to_json(z);
    Json e = {{"coordinates", coords}};
    if (!vw.extra_zeros.empty()) {
      Json ez = Json::array();
      for (const auto& z : vw.extra_zeros) ez.push_back({{"at", coordinate_to_json(z.at)}, {"order", z.order}});
      e["extra_zeros"] = ez;
    }
    if (vw.scale) e["scale"] = to_json(*vw.scale);
    j[vid] = e;
  }
  return j;
}

ClosureCertificate certificate_from_json(const Json& j, const MarkedDualGraph& g, const std::string& ptr) {
  ClosureCertificate c;
  c.levels = levels_from_json(member(j, "levels", ptr), g, ptr + "/levels");
  c.decoration = decoration_from_json(member(j, "decoration", ptr), ptr + "/decoration");
  if (j.contains("solution")) {
    if (!j["solution"].is_object()) throw InputError(ptr + "/solution", "expected an object");
    for (const auto& [name, q] : j["solution"].items()) c.solution[name] = rational_from_json(q, ptr + "/solution/" + name);
  }
  if (j.contains("witnesses")) c.witnesses = witnesses_from_json(j["witnesses"], ptr + "/witnesses");
  return c;
}

Json to_json(const MarkedDualGraph& g, const ClosureCertificate& c) {
  Json j = {{"levels", levels_to_json(g, c.levels)}, {"decoration", to_json(c.decoration)}};
  if (!c.solution.empty()) {
    Json s = Json::object();
    for (const auto& [name, q] : c.solution) s[name] = to_json(q);
    j["solution"] = s;
  }
  if (!c.witnesses.empty()) j["witnesses"] = to_json(c.witnesses);
  j["constraints"] = equations(c.constraints);
  Json vs = Json::array();
  for (const auto& v : c.vertices) {
    vs.push_back({{"vertex", v.vertex}, {"problem", to_json(v.problem)}, {"hurwitz", to_json(v.verdict)},
                  {"witnessed", v.witnessed}});
  }
  j["vertices"] = vs;
  j["notes"] = strings(c.notes);
  return j;
}

Json to_json(const Report& r) {
  auto list = [](const std::vector<Diagnostic>& ds) {
    Json a = Json::array();
    for (const auto& d : ds) a.push_back({{"code", d.code}, {"location", d.location}, {"message", d.message}});
    return a;
  };
  return {{"ok", r.ok()}, {"errors", list(r.errors)}, {"warnings", list(r.warnings)}};
}

Json to_json(const GraphDiagnostics& d) {
  Json j = to_json(d.report);
  j["connected"] = d.connected;
  j["genus"] = d.genus;
  j["stable"] = d.stable;
  j["unstable_vertices"] = strings(d.unstable_vertices);
  j["mu_sum"] = d.mu_sum;
  return j;
}

Json to_json(const HurwitzProblem& p) {
  return {{"degree", p.degree}, {"genus", p.genus}, {"profiles", Json(p.profiles)}};
}

Json to_json(const HurwitzVerdict& v) { return {{"rh", v.rh}, {"exists", v.exists}, {"cap_hit", v.cap_hit}}; }

Json to_json(const ComponentProblem& p) {
  Json j = {{"vertex", p.vertex}, {"feasible", p.feasible}};
  if (!p.feasible) j["reason"] = p.reason;
  j["problem"] = to_json(p.problem);
  j["fibers"] = Json(p.fibers);
  return j;
}

Json to_json(const AffineSpace& s) {
  return {{"consistent", s.consistent()}, {"dimension", s.dimension()}, {"unknowns", strings(s.unknowns())},
          {"equations", equations(s.equations())}};
}

Json to_json(const MarkedDualGraph& g, const EvaluationSystem& sys) {
  CellComplex cx(g);
  Json j = Json::object();
  for (const auto& le : sys.levels) {
    Json vanishes = le.vanishing == Vanishing::Conditional ? Json("conditional") : Json(le.vanishing == Vanishing::Yes);
    Json constraints = Json::array(), gens = Json::array();
    for (std::size_t k = 0; k < le.generators.size(); ++k) {
      std::string text = le.forms[k].to_string() + " = 0";
      if (!le.forms[k].is_zero() && std::find(constraints.begin(), constraints.end(), text) == constraints.end()) {
        constraints.push_back(text);
      }
      gens.push_back({{"chain", cx.describe(g, le.generators[k])},
                      {"coefficients", Json(le.generators[k])},
                      {"ev", to_json(le.forms[k])}});
    }
    j[std::to_string(le.level)] = {{"vanishes", vanishes},
                                   {"constraints", constraints},
                                   {"solution_dim", le.space.dimension()},
                                   {"generators", gens}};
  }
  return j;
}

Json to_json(const ContractionMap& m) {
  Json bridges = Json::array();
  for (const auto& b : m.bridges) {
    bridges.push_back({{"edge", b.target_edge}, {"vertices", strings(b.vertices)}, {"edges", strings(b.edges)}});
  }
  return {{"bridges", bridges}, {"tails", strings(m.tails)}, {"points", Json(m.point_to)}};
}

Json document(const MarkedDualGraph& g, const LevelStructure& levels, const Decoration& dec) {
  Json j = to_json(g);
  j["levels"] = levels_to_json(g, levels);
  j["decoration"] = to_json(dec);
  return j;
}

Json to_json(const TwistResult& t) {
  Json ins = Json::array();
  for (const auto& i : t.insertions) {
    ins.push_back({{"edge", i.edge}, {"bridge_vertex", i.bridge_vertex}, {"critical_legs", strings(i.critical_legs)}});
  }
  return {{"version", kSchemaVersion},
          {"twdr", document(t.graph, t.levels, t.decoration)},
          {"insertions", ins},
          {"critical_legs", strings(t.critical_legs)},
          {"contraction", to_json(t.contraction)}};
}

Json to_json(const Stabilization& s) {
  return {{"version", kSchemaVersion},
          {"twr", document(s.graph, s.levels, s.decoration)},
          {"contraction", to_json(s.contraction)}};
}

Json to_json(const PushforwardReport& p) {
  Json levels = Json::array();
  for (const auto& l : p.levels) {
    Json e = {{"source_level", l.source_level}};
    e["target_level"] = l.target_level ? Json(*l.target_level) : Json(nullptr);
    e["inclusion"] = l.inclusion;
    e["surjective"] = l.surjective;
    e["commutes"] = l.commutes;
    e["vanishes_source"] = l.vanishes_source;
    e["vanishes_target"] = l.vanishes_target;
    levels.push_back(e);
  }
  Json j = to_json(p.report);
  j["levels"] = levels;
  j["same_solution_space"] = p.same_solution_space;
  return j;
}

Json to_json(const CoverReport& r) {
  Json j = to_json(r.report);
  j["degree"] = r.degree;
  j["local_degree"] = Json(r.local_degree);
  j["type"] = Json(r.type);
  return j;
}

Json to_json(const CoverVerdict& v) {
  Json j = {{"accepted", v.accepted}};
  if (!v.accepted) j["reason"] = v.reason;
  j["cover"] = to_json(v.cover);
  if (v.accepted) j["stabilized"] = to_json(v.stabilized);
  return j;
}

Json to_json(const MarkedDualGraph& g, const VerificationResult& r) {
  Json j = {{"version", kSchemaVersion}, {"verdict", to_string(r.verdict)}};
  if (r.verdict == Verdict::Rejected) j["reason"] = r.reason;
  j["certificate"] = to_json(g, r.certificate);
  return j;
}

Json to_json(const MarkedDualGraph& g, const SearchResult& r) {
  Json j = {{"version", kSchemaVersion}, {"member", r.member() ? "yes" : "no-within-bounds"}};
  j["max_multiplicity"] = r.max_multiplicity;
  Json ls = Json::array();
  for (const auto& l : r.level_structures) ls.push_back(levels_to_json(g, l));
  j["level_structures"] = ls;
  Json fams = Json::array();
  for (const auto& f : r.families) {
    fams.push_back({{"level_structure", f.level_structure},
                    {"constraints", equations(f.constraints)},
                    {"size", f.members.size()},
                    {"representative", f.members.front()}});
  }
  j["families"] = fams;
  Json certs = Json::array();
  for (std::size_t k = 0; k < r.certificates.size(); ++k) {
    Json c = to_json(g, r.certificates[k]);
    c["verdict"] = to_string(r.verdicts[k]);
    certs.push_back(c);
  }
  j["certificates"] = certs;
  j["exhausted"] = strings(r.exhausted);
  j["decorations_examined"] = r.decorations_examined;
  return j;
}

}  // namespace drclosure::json_io
