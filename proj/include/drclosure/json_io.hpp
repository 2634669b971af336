#pragma once

// JSON documents shared by the CLI and the Python bindings. Every document
// carries "version": 1. Rationals are "p/q" strings (plain integers are also
// accepted on input); symbolic values are "?name".

#include "json.hpp"

#include "drclosure/closure.hpp"
#include "drclosure/covers.hpp"
#include "drclosure/graph.hpp"
#include "drclosure/homology.hpp"
#include "drclosure/hurwitz.hpp"
#include "drclosure/twist.hpp"
#include "drclosure/twr.hpp"

namespace drclosure::json_io {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

/// Throws InputError unless j is an object with "version": 1.
void check_version(const Json& j, const std::string& ptr = "");

MarkedDualGraph graph_from_json(const Json& j, const std::string& ptr = "");
Json to_json(const MarkedDualGraph& g);

/// {"<vertex>": level, ...}; every vertex must be listed.
LevelStructure levels_from_json(const Json& j, const MarkedDualGraph& g, const std::string& ptr = "/levels");
Json levels_to_json(const MarkedDualGraph& g, const LevelStructure& levels);

Rational rational_from_json(const Json& j, const std::string& ptr);
Json to_json(const Rational& q);
/// A rational, "?name", or {"constant": q, "terms": {"name": q}}.
LinearForm form_from_json(const Json& j, const std::string& ptr);
Json to_json(const LinearForm& f);

Decoration decoration_from_json(const Json& j, const std::string& ptr = "/decoration");
Json to_json(const Decoration& d);

std::vector<int> mu_from_json(const Json& j, const std::string& ptr = "/mu");

CombinatorialCover cover_from_json(const Json& j, const std::string& ptr = "");
Json to_json(const CombinatorialCover& c);

std::map<std::string, VertexWitness> witnesses_from_json(const Json& j, const std::string& ptr = "/witnesses");
Json to_json(const std::map<std::string, VertexWitness>& w);

/// Certificate: {"levels", "decoration", "solution"?, "witnesses"?}.
ClosureCertificate certificate_from_json(const Json& j, const MarkedDualGraph& g, const std::string& ptr = "");
Json to_json(const MarkedDualGraph& g, const ClosureCertificate& c);

Json to_json(const Report& r);
Json to_json(const GraphDiagnostics& d);
Json to_json(const HurwitzProblem& p);
Json to_json(const HurwitzVerdict& v);
Json to_json(const ComponentProblem& p);
Json to_json(const MarkedDualGraph& g, const EvaluationSystem& sys);
Json to_json(const AffineSpace& s);
Json to_json(const ContractionMap& m);
Json to_json(const TwistResult& t);
Json to_json(const Stabilization& s);
Json to_json(const PushforwardReport& p);
Json to_json(const CoverReport& r);
Json to_json(const CoverVerdict& v);
Json to_json(const MarkedDualGraph& g, const VerificationResult& r);
Json to_json(const MarkedDualGraph& g, const SearchResult& r);

/// Graph document with "levels" and "decoration" members.
Json document(const MarkedDualGraph& g, const LevelStructure& levels, const Decoration& dec);

}  // namespace drclosure::json_io
