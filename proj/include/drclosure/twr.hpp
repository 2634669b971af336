#pragma once

// Partition arithmetic and validation of twistable rational functions (TWR)
// and their fully marked refinements (TWDR).

#include <map>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "drclosure/graph.hpp"
#include "drclosure/linear.hpp"

namespace drclosure {

/// Order data of f at one point of a component.
///
/// `ord_df` is the vanishing order of df; `pole` marks poles of f. A non-pole
/// point can additionally be flagged `zero` (f vanishes there); otherwise f
/// takes a finite nonzero value. ord_df = -1 never occurs.
struct PointOrder {
  int ord_df = 0;
  bool pole = false;
  bool zero = false;

  /// mult_x f, i.e. one more than the ramification index.
  int multiplicity() const { return pole ? -ord_df - 1 : ord_df + 1; }
  /// ord_x f: +mult at zeros, -mult at poles, 0 elsewhere.
  int ord_f() const { return zero ? multiplicity() : (pole ? -multiplicity() : 0); }

  friend bool operator==(const PointOrder&, const PointOrder&) = default;
};

/// Decoration of a marked dual graph by orders of f (and optionally values).
///
/// Orders of marked legs may be omitted; they are then derived from mu.
/// Values are keyed by point id; a value is a rational constant or a linear
/// form over named unknowns ("?name" in JSON).
struct Decoration {
  std::map<std::string, PointOrder> orders;
  std::map<std::string, LinearForm> values;
  std::set<std::string> marked_zero_vertices;  // optional declaration, checked against legs

  friend bool operator==(const Decoration&, const Decoration&) = default;
};

/// ord_df of a point of multiplicity `mult`: mult-1, or -mult-1 at a pole.
int ord_df(int mult, bool at_pole);

/// (mu_1-1, ..., mu_n-1). Throws std::invalid_argument unless sum(mu) = 0.
std::vector<int> associated_partition(std::span<const int> mu);

/// True iff hat = (associated(mu), tail) with tail > 0 entrywise and
/// sum(hat) = 2g-2.
bool check_extension(std::span<const int> hat, std::span<const int> mu, int genus);

/// Order data a leg carries by itself (from mu or its critical order).
PointOrder leg_order(const Leg& leg);

/// Order at a point: the decoration entry if present, else the leg default.
/// Throws InputError for a half-edge without an entry.
PointOrder order_at(const MarkedDualGraph& g, const Decoration& dec, const PointRef& p);

struct VertexBalance {
  int degree = 0;          // sum of pole multiplicities
  int zero_mass = 0;       // marked and nodal zero multiplicities
  int df_sum = 0;          // sum of ord_df over listed points
  int critical_deficit = 0;  // 2g_v - 2 - df_sum
  bool marked_zero = false;
  int max_multiplicity = 0;
};

VertexBalance vertex_balance(const MarkedDualGraph& g, const Decoration& dec, std::size_t v);

/// Unknown name used for the value of f at a point: "<vertex>:<point>".
std::string value_key(const MarkedDualGraph& g, const PointRef& p);

Report validate_twr(const MarkedDualGraph& g, const LevelStructure& levels, const Decoration& dec);
Report validate_twdr(const MarkedDualGraph& g, const LevelStructure& levels, const Decoration& dec);

/// ord_df at the marked legs, mu-legs first (graph order), then critical legs.
std::vector<int> extended_partition(const MarkedDualGraph& g, const Decoration& dec);
std::vector<int> mu_of(const MarkedDualGraph& g);

}  // namespace drclosure
