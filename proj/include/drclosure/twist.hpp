#pragma once

// The canonical twist (TWR -> TWDR) and stabilization (TWDR -> TWR).

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "drclosure/graph.hpp"
#include "drclosure/homology.hpp"
#include "drclosure/twr.hpp"

namespace drclosure {

/// Graph morphism Gamma' -> Gamma of a stabilization. Each contracted bridge
/// chain maps its first edge (counted from the target edge's ends[0] side)
/// onto the target edge and collapses the rest; contracted vertices go to the
/// far end of their chain, tails go to their attaching vertex.
struct ContractionMap {
  std::vector<std::size_t> vertex_to;             // every source vertex
  std::vector<bool> vertex_contracted;
  std::vector<std::optional<std::size_t>> edge_to;  // nullopt: collapsed
  std::vector<int> edge_sign;                     // orientation of the image
  std::vector<std::optional<std::size_t>> leg_to;   // nullopt: forgotten
  std::map<std::string, std::string> point_to;      // surviving points by id

  struct Bridge {
    std::string target_edge;
    std::vector<std::string> vertices;  // contracted chain, from ends[0] side
    std::vector<std::string> edges;
  };
  std::vector<Bridge> bridges;
  std::vector<std::string> tails;  // contracted tail vertices
};

struct Insertion {
  std::string edge;           // source edge that received a bridge
  std::string bridge_vertex;
  std::vector<std::string> critical_legs;
};

struct TwistResult {
  MarkedDualGraph graph;
  LevelStructure levels;
  Decoration decoration;
  std::vector<Insertion> insertions;
  std::vector<std::string> critical_legs;  // added on stable vertices
  ContractionMap contraction;              // back onto the source graph
};

/// Inserts a rational bridge at every edge with ord(df) sum > -2 and marks the
/// remaining critical points. Bridge levels sit on intermediate levels: the
/// source levels are doubled, i+ = 2i+1 and i- = 2i-1, then normalized.
/// Throws InputError if the input is not a valid TWR.
TwistResult twist(const MarkedDualGraph& g, const LevelStructure& levels, const Decoration& dec);

struct Stabilization {
  MarkedDualGraph graph;
  LevelStructure levels;
  Decoration decoration;
  ContractionMap contraction;
};

/// Forgets the critical legs and contracts unstable rational chains.
/// Throws InputError if the input is not a valid TWDR or violates the
/// local-maximum conditions.
Stabilization stabilize(const MarkedDualGraph& g, const LevelStructure& levels, const Decoration& dec);

/// Unstable components (genus 0, at most two nodes and marked points once
/// critical legs are forgotten) carry no marked zero or pole, and those with
/// two nodes are not local maxima of the level order.
Report check_local_max(const MarkedDualGraph& g, const LevelStructure& levels, const Decoration& dec);

/// Image of a relative cycle of Gamma' under the contraction.
Chain pushforward(const MarkedDualGraph& source, const MarkedDualGraph& target, const ContractionMap& map,
                  const Chain& c);

struct PushforwardLevel {
  int source_level = 0;  // level in Gamma'
  std::optional<int> target_level;  // nullopt for intermediate levels
  bool inclusion = true;  // p(L'_{<=i'}) inside L_{<=i}
  bool surjective = true;
  bool commutes = true;   // ev agrees generator by generator
  bool vanishes_source = false;
  bool vanishes_target = false;
};

struct PushforwardReport {
  Report report;
  std::vector<PushforwardLevel> levels;
  bool same_solution_space = false;
};

/// Compares the evaluation morphisms of a TWDR and of its stabilization.
PushforwardReport pushforward_check(const MarkedDualGraph& g, const LevelStructure& levels, const Decoration& dec);

}  // namespace drclosure
