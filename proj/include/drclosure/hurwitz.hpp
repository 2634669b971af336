#pragma once

// Existence of branched covers of P^1 with prescribed ramification, decided
// by transitive factorizations of the identity in S_d, and explicit rational
// functions on P^1.

#include <optional>
#include <string>
#include <vector>

#include "drclosure/graph.hpp"
#include "drclosure/homology.hpp"
#include "drclosure/linear.hpp"
#include "drclosure/twr.hpp"

namespace drclosure {

using Partition = std::vector<int>;
using Permutation = std::vector<int>;

struct HurwitzProblem {
  int degree = 1;
  int genus = 0;
  std::vector<Partition> profiles;
};

/// Every profile is a partition of d and sum (d - #parts) = 2d - 2 + 2g.
bool rh_check(const HurwitzProblem& p);

/// Degree cap of the permutation search: $DRCLOSURE_HURWITZ_CAP, default 6.
int degree_cap();

/// Permutations s_1, ..., s_r with the given cycle types, s_1 ... s_r = 1,
/// generating a transitive subgroup; nullopt if none exist. The genus is not
/// constrained. Throws ResourceLimit if degree > cap.
std::optional<std::vector<Permutation>> find_factorization(int degree, const std::vector<Partition>& profiles,
                                                           std::optional<int> cap = {});

/// rh_check and a transitive factorization exists. Throws ResourceLimit above the cap.
bool exists(const HurwitzProblem& p, std::optional<int> cap = {});

struct HurwitzVerdict {
  bool rh = false;
  bool exists = false;
  bool cap_hit = false;
};

HurwitzVerdict decide(const HurwitzProblem& p, std::optional<int> cap = {});

/// Cycle type of a permutation, sorted descending.
Partition cycle_type(const Permutation& s);
/// Partition with entries sorted descending; throws std::invalid_argument for
/// nonpositive parts.
Partition normalized(Partition p);

/// Hurwitz data of one component of a decorated curve.
struct ComponentProblem {
  std::string vertex;
  HurwitzProblem problem;
  bool feasible = true;
  std::string reason;
  /// Points forced into a common finite nonzero fiber, one list per extra profile.
  std::vector<std::vector<std::string>> fibers;
};

/// Profiles over infinity (poles) and 0 (zeros, padded with 1s), one profile
/// per group of points whose values the solution space forces to coincide, and
/// simple profiles for the remaining ramification.
ComponentProblem component_problem(const MarkedDualGraph& g, const Decoration& dec, std::size_t vertex,
                                   const ValueAssignment& values, const AffineSpace& solutions);

/// A point of P^1: a rational coordinate or infinity.
struct DivisorPoint {
  std::optional<Rational> at;  // nullopt: infinity
  int order = 0;               // > 0 zero, < 0 pole
};

/// f = c * prod (z - a)^m over the finite points of a degree-zero divisor.
struct Genus0Realization {
  std::vector<DivisorPoint> divisor;
  std::optional<Rational> scale;  // nullopt: c stays a free symbol
  std::string scale_name = "c";

  int degree() const;
  /// Value at z (nullopt for infinity). Throws std::domain_error at a pole.
  LinearForm value(const std::optional<Rational>& z) const;
};

/// Throws InputError on coordinate collisions, zero orders or a divisor of
/// nonzero degree.
Genus0Realization realize_genus0(std::vector<DivisorPoint> divisor, std::optional<Rational> scale = {},
                                 std::string scale_name = "c");

}  // namespace drclosure
