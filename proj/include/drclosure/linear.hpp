#pragma once

// Exact rational linear forms and affine solution spaces.

#include <gmpxx.h>

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace drclosure {

using Rational = mpq_class;

/// Parses "p/q", "p" or "-p/q" into a canonical rational. Throws std::invalid_argument.
Rational parse_rational(const std::string& text);
std::string to_string(const Rational& value);

/// An affine form  c + sum_j a_j * x_j  over named unknowns.
class LinearForm {
 public:
  LinearForm() = default;
  explicit LinearForm(Rational constant) : constant_(std::move(constant)) {}

  static LinearForm unknown(const std::string& name);

  const Rational& constant() const { return constant_; }
  const std::map<std::string, Rational>& terms() const { return terms_; }
  Rational coefficient(const std::string& name) const;

  bool is_constant() const { return terms_.empty(); }
  bool is_zero() const { return terms_.empty() && constant_ == 0; }

  LinearForm& operator+=(const LinearForm& other);
  LinearForm& operator-=(const LinearForm& other);
  LinearForm& operator*=(const Rational& scalar);

  friend LinearForm operator+(LinearForm a, const LinearForm& b) { return a += b; }
  friend LinearForm operator-(LinearForm a, const LinearForm& b) { return a -= b; }
  friend LinearForm operator*(LinearForm a, const Rational& s) { return a *= s; }
  friend LinearForm operator*(const Rational& s, LinearForm a) { return a *= s; }
  friend bool operator==(const LinearForm& a, const LinearForm& b) {
    return a.constant_ == b.constant_ && a.terms_ == b.terms_;
  }

  /// Substitutes known values; unknowns missing from `values` stay symbolic.
  LinearForm substitute(const std::map<std::string, Rational>& values) const;

  /// Renders e.g. "[v1:q2+] - [v1:q1+]" or "2*[a] + 1/2"; the zero form is "0".
  std::string to_string() const;

  /// Integer coefficient vector over `unknowns` followed by the constant.
  /// Throws std::domain_error if any coefficient is not integral.
  std::vector<long> integer_coefficients(std::span<const std::string> unknowns) const;

 private:
  void prune(const std::string& name);

  std::map<std::string, Rational> terms_;
  Rational constant_{0};
};

/// Solution set of a system { form = 0 } over the rationals, kept in reduced
/// row echelon form so that two systems with the same solution set over the
/// same unknowns have identical canonical rows.
class AffineSpace {
 public:
  struct Row {
    std::size_t pivot;                 // index into unknowns()
    std::vector<Rational> coefficients;  // over unknowns(); pivot coefficient 1
    Rational rhs;
  };

  static AffineSpace solve(std::span<const LinearForm> equations,
                           std::vector<std::string> extra_unknowns = {});

  bool consistent() const { return consistent_; }
  const std::vector<std::string>& unknowns() const { return unknowns_; }
  const std::vector<Row>& rows() const { return rows_; }
  std::size_t rank() const { return rows_.size(); }
  /// Dimension of the solution set; -1 when empty.
  long dimension() const;

  /// A particular solution (free unknowns set to zero). Empty if inconsistent.
  std::vector<Rational> particular() const;
  /// Basis of the homogeneous solution space, one vector per free unknown.
  std::vector<std::vector<Rational>> directions() const;

  /// If `form` takes a single value on the whole solution set, returns it.
  /// Unknowns not in unknowns() are treated as free.
  std::optional<Rational> constant_value(const LinearForm& form) const;

  /// Canonical equations (one per row) as linear forms equal to zero.
  std::vector<LinearForm> equations() const;

  /// True iff both describe the same subset of Q^(union of unknowns).
  bool same_solution_set(const AffineSpace& other) const;

 private:
  std::vector<std::string> unknowns_;
  std::vector<Row> rows_;
  bool consistent_ = true;
};

}  // namespace drclosure
