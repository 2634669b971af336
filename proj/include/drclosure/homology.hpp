#pragma once

// Relative homology H_1(Gamma, Z; Z) of a marked dual graph viewed as a
// 1-dimensional cell complex, its level filtration, and the evaluation
// morphism as exact linear algebra.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "drclosure/graph.hpp"
#include "drclosure/linear.hpp"
#include "drclosure/twr.hpp"

namespace drclosure {

/// Integer chain on 1-cells. Cells are the edges in graph order (oriented
/// ends[0] -> ends[1]) followed by the legs in Z (oriented from the vertex to
/// the marked point). Z consists of the marked zeros, including mu = 0 legs.
/// Pole legs and critical legs are not cells of the relative complex.
using Chain = std::vector<long>;

class CellComplex {
 public:
  explicit CellComplex(const MarkedDualGraph& g);

  std::size_t cell_count() const { return edge_count_ + z_legs_.size(); }
  std::size_t edge_count() const { return edge_count_; }
  const std::vector<std::size_t>& z_legs() const { return z_legs_; }
  std::size_t leg_cell(std::size_t z_index) const { return edge_count_ + z_index; }
  /// Leg index of a leg cell.
  std::size_t cell_leg(std::size_t cell) const { return z_legs_[cell - edge_count_]; }
  bool is_edge_cell(std::size_t cell) const { return cell < edge_count_; }

  /// Boundary in C_0 / <Z>, one coefficient per vertex.
  std::vector<long> boundary(const MarkedDualGraph& g, const Chain& c) const;
  /// Human-readable chain, e.g. "q1 - q2 + z1".
  std::string describe(const MarkedDualGraph& g, const Chain& c) const;

 private:
  std::size_t edge_count_ = 0;
  std::vector<std::size_t> z_legs_;
};

/// Basis of { x in Z^n : M x = 0 } for an m x n integer matrix given by rows,
/// computed by unimodular column reduction. Throws std::overflow_error if an
/// intermediate entry leaves the 64-bit range.
std::vector<std::vector<long>> integer_kernel(const std::vector<std::vector<long>>& rows, std::size_t columns);

/// Basis of H_1(Gamma, Z; Z); rank |E| - |V| + 1 + max(|Z| - 1, 0) when connected.
std::vector<Chain> relative_h1(const MarkedDualGraph& g);

/// Rank of a set of chains over Q.
std::size_t rational_rank(const std::vector<Chain>& chains);
bool in_rational_span(const std::vector<Chain>& generators, const Chain& c);

struct LevelFiltration {
  std::vector<Chain> ambient_basis;
  std::vector<int> top_level;  // per ambient basis element
  /// Generators of L_{<=i} for i = 0, -1, ..., -L (index k holds level -k).
  std::vector<std::vector<Chain>> generators;

  const std::vector<Chain>& at(int level) const;
  std::size_t rank_at(int level) const;
};

/// L_{<=i} is the image of H_1(Gamma_{<=i}, Z) in H_1(Gamma, Z). The image of
/// a subcomplex in the relative homology of a graph is saturated, so rational
/// span membership decides lattice membership.
LevelFiltration level_filtration(const MarkedDualGraph& g, const LevelStructure& levels);

/// Restriction of a chain on Gamma_{<=i} to Gamma_{=i}: full edges at level i,
/// half-legs h(q_e^+) of edges cut below level i (oriented from the level-i
/// vertex to the cut point) and Z-legs at level i.
struct LevelChain {
  int level = 0;
  std::map<std::size_t, long> edges;      // edge -> coefficient
  std::map<std::size_t, long> half_legs;  // cut edge -> coefficient
  std::map<std::size_t, long> legs;       // leg index -> coefficient

  bool empty() const { return edges.empty() && half_legs.empty() && legs.empty(); }
};

/// Throws std::invalid_argument if c is not supported on Gamma_{<=i}.
LevelChain restrict_to_level(const MarkedDualGraph& g, const LevelStructure& levels, const Chain& c, int i);

/// Values of f at points, keyed by point id.
using ValueAssignment = std::map<std::string, LinearForm>;

/// Values for every non-pole point: 0 at zeros, the decoration's value if
/// given, otherwise the unknown "<vertex>:<point>".
ValueAssignment symbolic_values(const MarkedDualGraph& g, const Decoration& dec);

/// Sum over maximal single-vertex segments of f_v(end) - f_v(start). A level
/// chain leaves its vertex through each cell: through an edge a -> b it ends
/// a segment at the branch on a and starts one at the branch on b.
/// Throws InputError naming the point if a required value is missing.
LinearForm evaluate(const MarkedDualGraph& g, const LevelStructure& levels, const LevelChain& chain,
                    const ValueAssignment& values);

enum class Vanishing { Yes, No, Conditional };
std::string to_string(Vanishing v);

struct LevelEvaluation {
  int level = 0;
  std::vector<Chain> generators;
  std::vector<LinearForm> forms;  // ev^{(i)} of each generator
  AffineSpace space;
  Vanishing vanishing = Vanishing::Yes;
};

struct EvaluationSystem {
  std::vector<LevelEvaluation> levels;  // level 0 first

  const LevelEvaluation& at(int level) const;
  /// All levels together.
  std::vector<LinearForm> all_forms() const;
};

EvaluationSystem evaluation_system(const MarkedDualGraph& g, const LevelStructure& levels,
                                   const ValueAssignment& values);

/// Affine solution space of all level constraints together.
AffineSpace solve_constraints(const EvaluationSystem& sys);

}  // namespace drclosure
