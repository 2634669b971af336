#pragma once

// Combinatorial admissible covers C -> T onto genus-0 trees.

#include <map>
#include <string>
#include <vector>

#include "drclosure/graph.hpp"

namespace drclosure {

/// Target legs carry mu = +1 (the point 0), mu = -1 (infinity) or 0 (a
/// simple branch point). Source legs over 0 or infinity carry their mu; other
/// source legs mark ramification points over further branch points.
struct CombinatorialCover {
  MarkedDualGraph source;
  MarkedDualGraph target;
  std::map<std::string, std::string> map;  // source vertex/edge/leg id -> target id
  std::map<std::string, int> mults;        // source half-edge or leg id -> multiplicity
  std::map<std::string, int> local_degree; // optional, per source vertex
};

struct CoverReport {
  Report report;
  int degree = 0;
  std::map<std::string, int> local_degree;
  std::vector<int> type;  // mu of source legs over 0 and infinity, in leg order
};

CoverReport validate_cover(const CombinatorialCover& c);

/// Contracts genus-0 components with at most two special points, forgetting
/// nothing else. Throws InputError if nothing stable remains.
MarkedDualGraph stabilize_graph(const MarkedDualGraph& g);

struct CoverVerdict {
  bool accepted = false;
  std::string reason;
  CoverReport cover;
  MarkedDualGraph stabilized;  // source with only the legs over 0 and infinity
};

/// Keeps only the source legs over 0 and infinity, stabilizes, and compares
/// with the stable graph (leg ids and mu must match).
CoverVerdict closure_via_covers(const MarkedDualGraph& stable, const std::vector<int>& mu,
                                const CombinatorialCover& c);

}  // namespace drclosure
