#pragma once

// Marked dual graphs of nodal curves, level structures and level subcomplexes.

#include <array>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace drclosure {

/// Raised for malformed input; `where` points into the offending document
/// (a JSON pointer or an id).
class InputError : public std::runtime_error {
 public:
  InputError(std::string where, const std::string& what)
      : std::runtime_error(where.empty() ? what : where + ": " + what), where_(std::move(where)) {}
  const std::string& where() const { return where_; }

 private:
  std::string where_;
};

/// Raised when an enumeration or search would exceed a configured cap.
class ResourceLimit : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Diagnostic {
  std::string code;      // short machine-readable clause name
  std::string location;  // vertex/edge/leg id
  std::string message;
};

struct Report {
  std::vector<Diagnostic> errors;
  std::vector<Diagnostic> warnings;

  bool ok() const { return errors.empty(); }
  void error(std::string code, std::string location, std::string message) {
    errors.push_back({std::move(code), std::move(location), std::move(message)});
  }
  void warn(std::string code, std::string location, std::string message) {
    warnings.push_back({std::move(code), std::move(location), std::move(message)});
  }
  bool has(std::string_view code) const;
};

struct Vertex {
  std::string id;
  int genus = 0;
};

/// An edge is an ordered pair of half-edges. The half-edge at ends[0] is
/// named "<id>+" and the one at ends[1] "<id>-"; these names are labels of
/// the two branches and carry no level information.
struct Edge {
  std::string id;
  std::array<std::size_t, 2> ends{};
};

/// A leg is either a marked point carrying a mu label, or an extra critical
/// point of a fully marked decoration carrying its order of df.
struct Leg {
  std::string id;
  std::size_t vertex = 0;
  int mu = 0;
  std::optional<int> critical;

  bool is_critical() const { return critical.has_value(); }
  bool is_zero() const { return !critical && mu >= 0; }
  bool is_pole() const { return !critical && mu < 0; }
};

/// A point of a component's normalization that a decoration talks about:
/// a branch of a node or the point of a leg.
struct PointRef {
  enum class Kind { HalfEdge, Leg };
  Kind kind = Kind::Leg;
  std::size_t index = 0;  // edge or leg index
  int side = 0;           // 0/1 for half-edges

  friend bool operator==(const PointRef&, const PointRef&) = default;
};

struct MarkedDualGraph {
  std::vector<Vertex> vertices;
  std::vector<Edge> edges;
  std::vector<Leg> legs;

  std::optional<std::size_t> find_vertex(std::string_view id) const;
  std::size_t vertex_index(std::string_view id) const;  // throws InputError

  /// sum of genera + |E| - |V| + 1
  int total_genus() const;
  /// Edge ends plus legs; critical legs only when `count_critical`.
  std::vector<int> valence(bool count_critical = true) const;
  bool is_connected() const;
  bool vertex_stable(std::size_t v, bool count_critical = true) const;

  std::string half_edge_id(std::size_t edge, int side) const;
  std::string point_id(const PointRef& p) const;
  std::optional<PointRef> find_point(std::string_view id) const;
  std::size_t point_vertex(const PointRef& p) const;
  /// All points (half-edges then legs) sitting on vertex v.
  std::vector<PointRef> points_on(std::size_t v) const;
  std::vector<PointRef> all_points() const;
  /// The other branch of the node for a half-edge.
  PointRef opposite(const PointRef& half_edge) const;
};

struct GraphDiagnostics {
  Report report;
  bool connected = false;
  int genus = 0;
  bool stable = false;
  std::vector<std::string> unstable_vertices;
  long mu_sum = 0;
};

/// Structural checks plus connectivity, genus, stability and mu balance.
GraphDiagnostics validate(const MarkedDualGraph& graph);

/// Levels are kept normalized: max level 0, attained levels {0,-1,...,-L}.
struct LevelStructure {
  std::vector<int> level;

  int depth() const;  // L
  bool normalized() const;
  bool horizontal(const MarkedDualGraph& g, std::size_t edge) const;
  /// Side (0/1) of the branch on the upper vertex; at horizontal edges the
  /// branch on the lexicographically smaller vertex id, ends[0] for loops.
  int upper_side(const MarkedDualGraph& g, std::size_t edge) const;
  int level_of(const MarkedDualGraph& g, const PointRef& p) const;

  friend bool operator==(const LevelStructure&, const LevelStructure&) = default;
};

/// Order-preserving relabeling of arbitrary integer levels onto {0,...,-L}.
LevelStructure normalize_levels(std::vector<int> raw);

/// Cells of Gamma_{<=i} or Gamma_{=i}, as indices into the ambient graph.
struct LevelSubcomplex {
  int level = 0;
  std::vector<std::size_t> vertices;
  std::vector<std::size_t> edges;      // edges with both ends in the complex
  std::vector<std::size_t> legs;       // legs of those vertices
  std::vector<std::size_t> cut_edges;  // Gamma_{=i} only: one half-leg h(q_e^+) each
};

LevelSubcomplex subcomplex_leq(const MarkedDualGraph& g, const LevelStructure& levels, int i);
LevelSubcomplex subcomplex_eq(const MarkedDualGraph& g, const LevelStructure& levels, int i);

/// Canonical form of the colored incidence structure (genus, level, marked
/// legs by id and mu, critical legs by order); equal strings iff isomorphic.
/// Pass nullptr for unleveled graphs.
std::string canonical_form(const MarkedDualGraph& g, const LevelStructure* levels);
bool isomorphic(const MarkedDualGraph& a, const LevelStructure* la, const MarkedDualGraph& b,
                const LevelStructure* lb);

struct EnumerationOptions {
  std::optional<int> max_levels;        // number of distinct levels
  std::size_t max_candidates = 1000000;  // raw level functions examined
};

/// Every normalized level structure on g up to isomorphism, in the order of
/// first occurrence when level vectors are listed lexicographically
/// (by -level, vertex by vertex). Throws ResourceLimit above the cap.
std::vector<LevelStructure> enumerate_level_structures(const MarkedDualGraph& g,
                                                       const EnumerationOptions& options = {});

/// Number of raw normalized level functions on n vertices (ordered Bell number).
unsigned long long count_level_functions(std::size_t n, std::optional<int> max_levels = {});

}  // namespace drclosure
