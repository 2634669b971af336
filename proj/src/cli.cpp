#include "drclosure/cli.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

namespace drclosure::cli {

using json_io::Json;

namespace {

Json read_input(const std::string& path) {
  try {
    if (path == "-") return Json::parse(std::cin);
    return load_json(path);
  } catch (const Json::parse_error& e) {
    throw InputError("", std::string("malformed JSON: ") + e.what());
  }
}

struct Document {
  Json json;
  MarkedDualGraph graph;
  std::optional<LevelStructure> levels;
  std::optional<Decoration> decoration;
};

Document read_document(const std::string& path) {
  Document d;
  d.json = read_input(path);
  json_io::check_version(d.json);
  d.graph = json_io::graph_from_json(d.json);
  if (d.json.contains("levels")) d.levels = json_io::levels_from_json(d.json["levels"], d.graph);
  if (d.json.contains("decoration")) d.decoration = json_io::decoration_from_json(d.json["decoration"]);
  return d;
}

const LevelStructure& need_levels(const Document& d) {
  if (!d.levels) throw InputError("/levels", "missing member");
  return *d.levels;
}

const Decoration& need_decoration(const Document& d) {
  if (!d.decoration) throw InputError("/decoration", "missing member");
  return *d.decoration;
}

std::vector<int> parse_ints(const std::string& s, const std::string& where) {
  std::vector<int> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stoi(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw InputError(where, "expected comma-separated integers, got '" + s + "'");
    }
  }
  if (out.empty()) throw InputError(where, "empty list");
  return out;
}

SearchBounds parse_bounds(const std::string& s) {
  SearchBounds b;
  if (s.empty()) return b;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    auto eq = item.find('=');
    if (eq == std::string::npos) throw InputError("--bounds", "expected key=value, got '" + item + "'");
    std::string key = item.substr(0, eq);
    int value = parse_ints(item.substr(eq + 1), "--bounds")[0];
    if (value < 1) throw InputError("--bounds", key + " must be positive");
    if (key == "mult") {
      b.max_multiplicity = value;
    } else if (key == "levels") {
      b.max_levels = value;
    } else if (key == "cap") {
      b.hurwitz_cap = value;
    } else if (key == "certificates") {
      b.max_certificates = static_cast<std::size_t>(value);
    } else if (key == "candidates") {
      b.max_level_candidates = static_cast<std::size_t>(value);
    } else {
      throw InputError("--bounds", "unknown bound '" + key + "'");
    }
  }
  return b;
}

Json ev_json(const MarkedDualGraph& g, const LevelStructure& levels, const Decoration& dec, std::optional<int> only) {
  auto sys = evaluation_system(g, levels, symbolic_values(g, dec));
  Json all = json_io::to_json(g, sys);
  if (!only) return all;
  std::string key = std::to_string(*only);
  if (!all.contains(key)) throw InputError("--level", "no level " + key);
  Json j = Json::object();
  j[key] = all[key];
  return j;
}

bool any_nonvanishing(const Json& ev) {
  for (const auto& [level, e] : ev.items()) {
    if (e.is_object() && e["vanishes"] == Json(false)) return true;
  }
  return false;
}

std::size_t horizontal_edges(const MarkedDualGraph& g, const LevelStructure& levels) {
  std::size_t n = 0;
  for (std::size_t e = 0; e < g.edges.size(); ++e) n += levels.horizontal(g, e);
  return n;
}

void compare(const Json& expected, const Json& actual, const std::string& ptr, std::vector<std::string>& out) {
  if (expected.is_object()) {
    if (!actual.is_object()) {
      out.push_back(ptr);
      return;
    }
    for (const auto& [k, v] : expected.items()) {
      if (!actual.contains(k)) {
        out.push_back(ptr + "/" + k);
      } else {
        compare(v, actual[k], ptr + "/" + k, out);
      }
    }
    return;
  }
  if (expected != actual) out.push_back(ptr);
}

void render(const Json& j, int indent, std::ostream& os) {
  std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
  if (j.is_object()) {
    for (const auto& [k, v] : j.items()) {
      if (v.is_structured() && !v.empty()) {
        os << pad << k << ":\n";
        render(v, indent + 1, os);
      } else {
        os << pad << k << ": " << (v.is_string() ? v.get<std::string>() : v.dump()) << "\n";
      }
    }
  } else if (j.is_array()) {
    for (const auto& v : j) {
      if (v.is_structured() && !v.empty()) {
        os << pad << "-\n";
        render(v, indent + 1, os);
      } else {
        os << pad << "- " << (v.is_string() ? v.get<std::string>() : v.dump()) << "\n";
      }
    }
  } else {
    os << pad << (j.is_string() ? j.get<std::string>() : j.dump()) << "\n";
  }
}

}  // namespace

Json load_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError(path.string(), "cannot open file");
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw InputError(path.string(), std::string("malformed JSON: ") + e.what());
  }
}

std::vector<std::filesystem::path> fixture_files(const std::filesystem::path& dir) {
  std::vector<std::filesystem::path> out;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".json") out.push_back(entry.path());
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::string render_text(const Json& j) {
  std::ostringstream os;
  render(j, 0, os);
  return os.str();
}

Json fixture_summary(const Json& fixture) {
  json_io::check_version(fixture);
  auto g = json_io::graph_from_json(fixture);
  Json s = Json::object();
  auto diag = validate(g);
  s["valid"] = diag.report.ok();
  s["stable"] = diag.stable;
  s["level_structures"] = enumerate_level_structures(g).size();
  if (fixture.contains("levels") && fixture.contains("decoration")) {
    auto levels = json_io::levels_from_json(fixture["levels"], g);
    auto dec = json_io::decoration_from_json(fixture["decoration"]);
    bool twr = validate_twr(g, levels, dec).ok();
    bool twdr = validate_twdr(g, levels, dec).ok();
    s["twr"] = twr;
    s["twdr"] = twdr;
    if (twr) {
      Json ev = ev_json(g, levels, dec, std::nullopt);
      for (auto& [level, e] : ev.items()) e.erase("generators");
      s["ev"] = ev;
      auto space = constraint_space(g, levels, dec);
      Json eqs = Json::array();
      for (const auto& f : space.equations()) eqs.push_back(f.to_string() + " = 0");
      s["constraints"] = eqs;
      auto t = twist(g, levels, dec);
      auto back = stabilize(t.graph, t.levels, t.decoration);
      s["round_trip"] = json_io::document(back.graph, back.levels, back.decoration) == json_io::document(g, levels, dec);
      s["pushforward"] = pushforward_check(t.graph, t.levels, t.decoration).report.ok();
    }
    if (twdr) {
      auto st = stabilize(g, levels, dec);
      s["stabilized"] = {{"vertices", st.graph.vertices.size()},
                         {"levels", st.levels.depth() + 1},
                         {"horizontal_edges", horizontal_edges(st.graph, st.levels)}};
    }
  }
  if (fixture.contains("mu")) {
    auto mu = json_io::mu_from_json(fixture["mu"]);
    SearchBounds bounds;
    if (fixture.contains("bounds")) bounds = parse_bounds(fixture["bounds"].get<std::string>());
    auto r = search(g, mu, bounds);
    std::set<std::size_t> structures;
    for (const auto& f : r.families) structures.insert(f.level_structure);
    s["member"] = r.member() ? "yes" : "no-within-bounds";
    s["families"] = r.families.size();
    s["accepted_level_structures"] = structures.size();
    if (fixture.contains("cover")) {
      auto cover = json_io::cover_from_json(fixture["cover"], "/cover");
      auto v = closure_via_covers(g, mu, cover);
      s["cover_valid"] = v.cover.report.ok();
      s["cover_accepted"] = v.accepted;
    }
  }
  return s;
}

FixtureCheck check_fixture(const Json& fixture) {
  FixtureCheck c;
  c.name = fixture.value("name", std::string("?"));
  if (!fixture.contains("cases")) {
    c.summary = fixture_summary(fixture);
    if (!fixture.contains("expected")) {
      c.mismatches.push_back("/expected");
    } else {
      compare(fixture["expected"], c.summary, "/expected", c.mismatches);
    }
    c.passed = c.mismatches.empty();
    return c;
  }
  Json base = fixture;
  base.erase("cases");
  base.erase("expected");
  c.summary = Json::array();
  const Json& cases = fixture["cases"];
  for (std::size_t k = 0; k < cases.size(); ++k) {
    std::string ptr = "/cases/" + std::to_string(k);
    Json doc = base;
    for (const auto& [key, value] : cases[k].items()) {
      if (key != "name" && key != "expected") doc[key] = value;
    }
    Json summary;
    try {
      summary = fixture_summary(doc);
    } catch (const InputError& e) {
      throw InputError(ptr + e.where(), e.what());
    }
    if (!cases[k].contains("expected")) {
      c.mismatches.push_back(ptr + "/expected");
    } else {
      compare(cases[k]["expected"], summary, ptr + "/expected", c.mismatches);
    }
    c.summary.push_back({{"name", cases[k].value("name", std::to_string(k))}, {"summary", summary}});
  }
  c.passed = c.mismatches.empty();
  return c;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Decide membership of a stable curve in the closure of a double ramification locus."};
  app.require_subcommand(1);
  bool pretty = false;
  app.add_flag("--pretty", pretty, "Human-readable summary instead of JSON");

  std::string input = "-";
  auto add_input = [&](CLI::App* sub) { sub->add_option("input", input, "Graph document (- for stdin)"); };

  auto* validate_cmd = app.add_subcommand("validate", "Check a graph document, and its TWR/TWDR if decorated");
  add_input(validate_cmd);

  auto* levels_cmd = app.add_subcommand("levels", "Enumerate level structures up to isomorphism");
  add_input(levels_cmd);
  std::optional<int> max_levels;
  levels_cmd->add_option("--max-levels", max_levels, "Bound on the number of distinct levels");

  auto* ev_cmd = app.add_subcommand("ev", "Evaluation morphism per level");
  add_input(ev_cmd);
  std::optional<int> level;
  bool all = false;
  auto* level_opt = ev_cmd->add_option("--level", level, "Single level (0, -1, ...)");
  ev_cmd->add_flag("--all", all, "Every level")->excludes(level_opt);

  auto* constraints_cmd = app.add_subcommand("constraints", "Solution space of all evaluation constraints");
  add_input(constraints_cmd);

  auto* twist_cmd = app.add_subcommand("twist", "Canonical twist of a TWR");
  add_input(twist_cmd);
  auto* stabilize_cmd = app.add_subcommand("stabilize", "Stabilization of a TWDR");
  add_input(stabilize_cmd);

  auto* hurwitz_cmd = app.add_subcommand("hurwitz", "Existence of a branched cover of P^1");
  int degree = 1, genus = 0;
  std::vector<std::string> profiles;
  int count = 1;
  hurwitz_cmd->add_option("--degree", degree)->required();
  hurwitz_cmd->add_option("--genus", genus);
  hurwitz_cmd->add_option("--profile", profiles, "Partition such as 2,1 (repeatable)")->required();
  hurwitz_cmd->add_option("--count", count, "Number of copies of the last profile")->check(CLI::PositiveNumber);

  auto* cover_cmd = app.add_subcommand("cover", "Validate an admissible cover, optionally against a stable graph");
  add_input(cover_cmd);
  std::string cover_graph;
  std::string mu_text;
  cover_cmd->add_option("--graph", cover_graph, "Stable graph document");
  cover_cmd->add_option("--mu", mu_text, "Comma-separated mu (default: from the graph legs)");

  auto* closure_cmd = app.add_subcommand("check-closure", "Search for closure certificates");
  std::string graph_path, bounds_text, certificate_path;
  closure_cmd->add_option("--graph", graph_path, "Stable graph document")->required();
  closure_cmd->add_option("--mu", mu_text, "Comma-separated mu (default: from the graph legs)");
  closure_cmd->add_option("--bounds", bounds_text, "mult=B,levels=L,cap=D,certificates=N,candidates=N");
  closure_cmd->add_option("--certificate", certificate_path, "Verify this certificate instead of searching");

  auto* fixtures_cmd = app.add_subcommand("fixtures", "List or check the fixture corpus");
  bool check = false;
  std::string dir = DRCLOSURE_FIXTURE_DIR;
  fixtures_cmd->add_flag("--check", check, "Compare every fixture with its expected summary");
  fixtures_cmd->add_option("--dir", dir, "Fixture directory");

  for (auto* sub : app.get_subcommands([](CLI::App*) { return true; })) sub->fallthrough();

  std::vector<const char*> argv;
  argv.push_back("drclosure");
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? 0 : 2;
  }

  auto emit = [&](const Json& j) {
    if (pretty) {
      out << render_text(j);
    } else {
      out << j.dump() << "\n";
    }
  };
  auto mu_for = [&](const MarkedDualGraph& g) { return mu_text.empty() ? mu_of(g) : parse_ints(mu_text, "--mu"); };

  try {
    if (*validate_cmd) {
      auto d = read_document(input);
      Json j = {{"version", json_io::kSchemaVersion}, {"graph", json_io::to_json(validate(d.graph))}};
      bool ok = j["graph"]["ok"].get<bool>();
      if (d.levels && d.decoration) {
        auto twr = validate_twr(d.graph, *d.levels, *d.decoration);
        auto twdr = validate_twdr(d.graph, *d.levels, *d.decoration);
        j["twr"] = json_io::to_json(twr);
        j["twdr"] = json_io::to_json(twdr);
        ok = ok && twr.ok();
      }
      emit(j);
      return ok ? 0 : 1;
    }
    if (*levels_cmd) {
      auto d = read_document(input);
      EnumerationOptions opts;
      opts.max_levels = max_levels;
      auto ls = enumerate_level_structures(d.graph, opts);
      Json arr = Json::array();
      for (const auto& l : ls) arr.push_back(json_io::levels_to_json(d.graph, l));
      emit({{"version", json_io::kSchemaVersion}, {"count", ls.size()}, {"level_structures", arr}});
      return 0;
    }
    if (*ev_cmd) {
      auto d = read_document(input);
      std::optional<int> only;
      if (!all && level) only = *level;
      Json ev = ev_json(d.graph, need_levels(d), need_decoration(d), only);
      Json j = {{"version", json_io::kSchemaVersion}};
      j.update(ev);
      emit(j);
      return any_nonvanishing(ev) ? 1 : 0;
    }
    if (*constraints_cmd) {
      auto d = read_document(input);
      auto space = constraint_space(d.graph, need_levels(d), need_decoration(d));
      Json j = {{"version", json_io::kSchemaVersion}};
      j.update(json_io::to_json(space));
      emit(j);
      return space.consistent() ? 0 : 1;
    }
    if (*twist_cmd) {
      auto d = read_document(input);
      emit(json_io::to_json(twist(d.graph, need_levels(d), need_decoration(d))));
      return 0;
    }
    if (*stabilize_cmd) {
      auto d = read_document(input);
      emit(json_io::to_json(stabilize(d.graph, need_levels(d), need_decoration(d))));
      return 0;
    }
    if (*hurwitz_cmd) {
      HurwitzProblem p;
      p.degree = degree;
      p.genus = genus;
      for (const auto& s : profiles) p.profiles.push_back(parse_ints(s, "--profile"));
      for (int k = 1; k < count; ++k) p.profiles.push_back(p.profiles.back());
      for (auto& prof : p.profiles) {
        try {
          prof = normalized(prof);
        } catch (const std::invalid_argument& e) {
          throw InputError("--profile", e.what());
        }
      }
      auto v = decide(p);
      Json j = {{"version", json_io::kSchemaVersion}};
      j.update(json_io::to_json(v));
      emit(j);
      return v.exists ? 0 : 1;
    }
    if (*cover_cmd) {
      Json cj = read_input(input);
      json_io::check_version(cj);
      auto cover = json_io::cover_from_json(cj);
      if (cover_graph.empty()) {
        auto r = validate_cover(cover);
        Json j = {{"version", json_io::kSchemaVersion}};
        j.update(json_io::to_json(r));
        emit(j);
        return r.report.ok() ? 0 : 1;
      }
      auto d = read_document(cover_graph);
      auto v = closure_via_covers(d.graph, mu_for(d.graph), cover);
      Json j = {{"version", json_io::kSchemaVersion}};
      j.update(json_io::to_json(v));
      emit(j);
      return v.accepted ? 0 : 1;
    }
    if (*closure_cmd) {
      auto d = read_document(graph_path);
      auto mu = mu_for(d.graph);
      if (!certificate_path.empty()) {
        Json cj = read_input(certificate_path);
        auto r = verify_certificate(d.graph, mu, json_io::certificate_from_json(cj, d.graph));
        emit(json_io::to_json(d.graph, r));
        return r.verdict == Verdict::Rejected ? 1 : 0;
      }
      auto r = search(d.graph, mu, parse_bounds(bounds_text));
      emit(json_io::to_json(d.graph, r));
      return r.member() ? 0 : 1;
    }
    if (*fixtures_cmd) {
      Json list = Json::array();
      bool ok = true;
      for (const auto& path : fixture_files(dir)) {
        Json f = load_json(path);
        Json e = {{"file", path.filename().string()}, {"name", f.value("name", std::string("?"))}};
        if (f.contains("description")) e["description"] = f["description"];
        if (check) {
          try {
            auto c = check_fixture(f);
            e["passed"] = c.passed;
            if (!c.passed) {
              e["mismatches"] = c.mismatches;
              e["summary"] = c.summary;
            }
            ok = ok && c.passed;
          } catch (const InputError& ex) {
            throw InputError(path.filename().string() + ex.where(), ex.what());
          }
        }
        list.push_back(e);
      }
      emit({{"version", json_io::kSchemaVersion}, {"fixtures", list}});
      return ok ? 0 : 1;
    }
  } catch (const InputError& e) {
    Json j = {{"error", {{"pointer", e.where()}, {"message", e.what()}}}};
    out << j.dump() << "\n";
    return 2;
  } catch (const ResourceLimit& e) {
    Json j = {{"error", {{"pointer", ""}, {"message", std::string("resource limit: ") + e.what()}}}};
    out << j.dump() << "\n";
    return 2;
  } catch (const std::exception& e) {
    Json j = {{"error", {{"pointer", ""}, {"message", e.what()}}}};
    out << j.dump() << "\n";
    return 2;
  }
  return 2;
}

int run(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(args, std::cout, std::cerr);
}

}  // namespace drclosure::cli
