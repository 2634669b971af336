#pragma once

// Certificates that a marked stable curve lies in the closure of the double
// ramification locus: a level structure, a TWR decoration whose evaluation
// system is solvable, and realizable components.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "drclosure/graph.hpp"
#include "drclosure/homology.hpp"
#include "drclosure/hurwitz.hpp"
#include "drclosure/linear.hpp"
#include "drclosure/twr.hpp"

namespace drclosure {

/// Explicit genus-0 data for one component: coordinates of its points on
/// P^1, any unmarked zeros, and optionally the scale of f.
struct VertexWitness {
  std::map<std::string, std::optional<Rational>> coordinates;  // point id -> coordinate (nullopt: infinity)
  std::vector<DivisorPoint> extra_zeros;
  std::optional<Rational> scale;
};

struct VertexCheck {
  std::string vertex;
  ComponentProblem problem;
  HurwitzVerdict verdict;
  bool witnessed = false;
};

enum class Verdict { AcceptedExact, AcceptedModuloGenericity, Rejected };
std::string to_string(Verdict v);

struct ClosureCertificate {
  LevelStructure levels;
  Decoration decoration;
  std::map<std::string, Rational> solution;  // optional recorded values of unknowns
  std::map<std::string, VertexWitness> witnesses;

  // Filled in by verification.
  std::vector<LinearForm> constraints;  // canonical equations over point values
  std::vector<VertexCheck> vertices;
  std::vector<std::string> notes;
};

struct VerificationResult {
  Verdict verdict = Verdict::Rejected;
  std::string reason;
  ClosureCertificate certificate;
  EvaluationSystem system;
};

/// Values of f with one unknown per non-pole point, zero points included, and
/// the equations "value = 0" at the zeros of f.
ValueAssignment point_unknowns(const MarkedDualGraph& g, const Decoration& dec, std::vector<LinearForm>& zero_equations);

/// Solution space of the evaluation system over the point values.
AffineSpace constraint_space(const MarkedDualGraph& g, const LevelStructure& levels, const Decoration& dec);

/// Re-runs every check. Accepted-exact needs a genus-0 witness on every
/// component; otherwise acceptance is modulo the genericity of the values.
VerificationResult verify_certificate(const MarkedDualGraph& g, const std::vector<int>& mu, ClosureCertificate cert);

struct SearchBounds {
  std::optional<int> max_multiplicity;  // default: total positive mu
  std::optional<int> max_levels;
  std::optional<int> hurwitz_cap;
  std::size_t max_level_candidates = 1000000;
  std::size_t max_certificates = 100000;
};

struct Family {
  std::size_t level_structure = 0;
  std::vector<LinearForm> constraints;
  std::vector<std::size_t> members;  // certificate indices
};

struct SearchResult {
  int max_multiplicity = 0;
  std::vector<LevelStructure> level_structures;
  std::vector<ClosureCertificate> certificates;
  std::vector<Verdict> verdicts;
  std::vector<Family> families;
  std::vector<std::string> exhausted;  // bounds reached, per branch
  std::size_t decorations_examined = 0;

  bool member() const { return !certificates.empty(); }
};

/// Exhaustive within the bounds: every level structure, every node-order
/// assignment with multiplicities up to the bound, kept when the TWR checks,
/// the evaluation system and the component oracles pass.
SearchResult search(const MarkedDualGraph& g, const std::vector<int>& mu, const SearchBounds& bounds = {});

}  // namespace drclosure
