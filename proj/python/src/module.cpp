#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "drclosure/cli.hpp"
#include "drclosure/json_io.hpp"

namespace py = pybind11;
using namespace drclosure;
using json_io::Json;

namespace {

struct Doc {
  MarkedDualGraph graph;
  std::optional<LevelStructure> levels;
  std::optional<Decoration> decoration;
};

Json parse(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw InputError("", std::string("malformed JSON: ") + e.what());
  }
}

Doc document(const std::string& text) {
  Json j = parse(text);
  json_io::check_version(j);
  Doc d;
  d.graph = json_io::graph_from_json(j);
  if (j.contains("levels")) d.levels = json_io::levels_from_json(j["levels"], d.graph);
  if (j.contains("decoration")) d.decoration = json_io::decoration_from_json(j["decoration"]);
  return d;
}

const LevelStructure& levels(const Doc& d) {
  if (!d.levels) throw InputError("/levels", "missing member");
  return *d.levels;
}

const Decoration& decoration(const Doc& d) {
  if (!d.decoration) throw InputError("/decoration", "missing member");
  return *d.decoration;
}

std::string versioned(const Json& body) {
  Json j = {{"version", json_io::kSchemaVersion}};
  j.update(body);
  return j.dump();
}

std::string validate_doc(const std::string& text) {
  Doc d = document(text);
  Json j = {{"graph", json_io::to_json(validate(d.graph))}};
  if (d.levels && d.decoration) {
    j["twr"] = json_io::to_json(validate_twr(d.graph, *d.levels, *d.decoration));
    j["twdr"] = json_io::to_json(validate_twdr(d.graph, *d.levels, *d.decoration));
  }
  return versioned(j);
}

std::string level_structures(const std::string& text, std::optional<int> max_levels) {
  Doc d = document(text);
  EnumerationOptions opts;
  opts.max_levels = max_levels;
  auto ls = enumerate_level_structures(d.graph, opts);
  Json arr = Json::array();
  for (const auto& l : ls) arr.push_back(json_io::levels_to_json(d.graph, l));
  return versioned({{"count", ls.size()}, {"level_structures", arr}});
}

std::string evaluation(const std::string& text) {
  Doc d = document(text);
  const auto& dec = decoration(d);
  auto sys = evaluation_system(d.graph, levels(d), symbolic_values(d.graph, dec));
  return versioned(json_io::to_json(d.graph, sys));
}

std::string constraints(const std::string& text) {
  Doc d = document(text);
  return versioned(json_io::to_json(constraint_space(d.graph, levels(d), decoration(d))));
}

std::string twist_doc(const std::string& text) {
  Doc d = document(text);
  return json_io::to_json(twist(d.graph, levels(d), decoration(d))).dump();
}

std::string stabilize_doc(const std::string& text) {
  Doc d = document(text);
  return json_io::to_json(stabilize(d.graph, levels(d), decoration(d))).dump();
}

std::string hurwitz(int degree, int genus, const std::vector<std::vector<int>>& profiles) {
  HurwitzProblem p{degree, genus, {}};
  for (const auto& prof : profiles) {
    try {
      p.profiles.push_back(normalized(prof));
    } catch (const std::invalid_argument& e) {
      throw InputError("profiles", e.what());
    }
  }
  HurwitzVerdict v;
  {
    py::gil_scoped_release release;
    v = decide(p);
  }
  return versioned(json_io::to_json(v));
}

std::string check_closure(const std::string& text, std::optional<std::vector<int>> mu,
                          std::optional<int> max_multiplicity, std::optional<int> max_levels) {
  Doc d = document(text);
  SearchBounds b;
  b.max_multiplicity = max_multiplicity;
  b.max_levels = max_levels;
  SearchResult r;
  {
    py::gil_scoped_release release;
    r = search(d.graph, mu ? *mu : mu_of(d.graph), b);
  }
  return json_io::to_json(d.graph, r).dump();
}

std::string verify(const std::string& text, const std::string& certificate, std::optional<std::vector<int>> mu) {
  Doc d = document(text);
  auto cert = json_io::certificate_from_json(parse(certificate), d.graph);
  auto r = verify_certificate(d.graph, mu ? *mu : mu_of(d.graph), cert);
  return versioned(json_io::to_json(d.graph, r));
}

std::string summary(const std::string& text) { return cli::fixture_summary(parse(text)).dump(); }

py::tuple run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  int code = cli::run(args, out, err);
  return py::make_tuple(code, out.str(), err.str());
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Closure of double ramification loci: JSON-in, JSON-out bindings";

  py::register_exception<InputError>(m, "InputError", PyExc_ValueError);
  py::register_exception<ResourceLimit>(m, "ResourceLimit", PyExc_RuntimeError);

  m.attr("schema_version") = json_io::kSchemaVersion;
  m.attr("fixture_dir") = DRCLOSURE_FIXTURE_DIR;

  m.def("validate", &validate_doc, py::arg("document"));
  m.def("level_structures", &level_structures, py::arg("document"), py::arg("max_levels") = py::none());
  m.def("evaluation", &evaluation, py::arg("document"));
  m.def("constraints", &constraints, py::arg("document"));
  m.def("twist", &twist_doc, py::arg("document"));
  m.def("stabilize", &stabilize_doc, py::arg("document"));
  m.def("hurwitz", &hurwitz, py::arg("degree"), py::arg("genus"), py::arg("profiles"));
  m.def("check_closure", &check_closure, py::arg("document"), py::arg("mu") = py::none(),
        py::arg("max_multiplicity") = py::none(), py::arg("max_levels") = py::none());
  m.def("verify", &verify, py::arg("document"), py::arg("certificate"), py::arg("mu") = py::none());
  m.def("summary", &summary, py::arg("fixture"));
  m.def("run", &run, py::arg("args"), "Run the command-line front end; returns (exit code, stdout, stderr).");
}
