#include "drclosure/linear.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <stdexcept>

namespace drclosure {

Rational parse_rational(const std::string& text) {
  if (text.empty()) throw std::invalid_argument("empty rational");
  std::size_t start = (text[0] == '-' || text[0] == '+') ? 1 : 0;
  std::size_t slash = text.find('/');
  auto digits = [&](std::size_t from, std::size_t to) {
    if (from >= to) return false;
    return std::all_of(text.begin() + static_cast<long>(from), text.begin() + static_cast<long>(to),
                       [](char c) { return c >= '0' && c <= '9'; });
  };
  std::size_t num_end = slash == std::string::npos ? text.size() : slash;
  if (!digits(start, num_end) || (slash != std::string::npos && !digits(slash + 1, text.size()))) {
    throw std::invalid_argument("malformed rational '" + text + "'");
  }
  std::string body = text[0] == '+' ? text.substr(1) : text;
  Rational value;
  if (value.set_str(body, 10) != 0) throw std::invalid_argument("malformed rational '" + text + "'");
  if (value.get_den() == 0) throw std::invalid_argument("zero denominator in '" + text + "'");
  value.canonicalize();
  return value;
}

std::string to_string(const Rational& value) { return value.get_str(); }

LinearForm LinearForm::unknown(const std::string& name) {
  LinearForm form;
  form.terms_[name] = 1;
  return form;
}

Rational LinearForm::coefficient(const std::string& name) const {
  auto it = terms_.find(name);
  return it == terms_.end() ? Rational(0) : it->second;
}

void LinearForm::prune(const std::string& name) {
  auto it = terms_.find(name);
  if (it != terms_.end() && it->second == 0) terms_.erase(it);
}

LinearForm& LinearForm::operator+=(const LinearForm& other) {
  constant_ += other.constant_;
  for (const auto& [name, c] : other.terms_) {
    terms_[name] += c;
    prune(name);
  }
  return *this;
}

LinearForm& LinearForm::operator-=(const LinearForm& other) {
  constant_ -= other.constant_;
  for (const auto& [name, c] : other.terms_) {
    terms_[name] -= c;
    prune(name);
  }
  return *this;
}

LinearForm& LinearForm::operator*=(const Rational& scalar) {
  if (scalar == 0) {
    terms_.clear();
    constant_ = 0;
    return *this;
  }
  constant_ *= scalar;
  for (auto& [name, c] : terms_) c *= scalar;
  return *this;
}

LinearForm LinearForm::substitute(const std::map<std::string, Rational>& values) const {
  LinearForm out(constant_);
  for (const auto& [name, c] : terms_) {
    auto it = values.find(name);
    if (it == values.end()) {
      out.terms_[name] = c;
    } else {
      out.constant_ += c * it->second;
    }
  }
  return out;
}

std::string LinearForm::to_string() const {
  if (is_zero()) return "0";
  std::ostringstream out;
  bool first = true;
  auto emit = [&](const Rational& c, const std::string& symbol) {
    Rational magnitude = abs(c);
    if (first) {
      if (c < 0) out << "-";
    } else {
      out << (c < 0 ? " - " : " + ");
    }
    first = false;
    if (symbol.empty()) {
      out << magnitude.get_str();
    } else {
      if (magnitude != 1) out << magnitude.get_str() << "*";
      out << "[" << symbol << "]";
    }
  };
  for (const auto& [name, c] : terms_) emit(c, name);
  if (constant_ != 0) emit(constant_, "");
  return out.str();
}

std::vector<long> LinearForm::integer_coefficients(std::span<const std::string> unknowns) const {
  std::vector<long> out;
  out.reserve(unknowns.size() + 1);
  auto as_long = [](const Rational& c) {
    if (c.get_den() != 1 || !c.get_num().fits_slong_p()) {
      throw std::domain_error("coefficient " + c.get_str() + " is not a machine integer");
    }
    return c.get_num().get_si();
  };
  for (const auto& name : unknowns) out.push_back(as_long(coefficient(name)));
  out.push_back(as_long(constant_));
  return out;
}

// ---------------------------------------------------------------------------

AffineSpace AffineSpace::solve(std::span<const LinearForm> equations,
                               std::vector<std::string> extra_unknowns) {
  std::set<std::string> names(extra_unknowns.begin(), extra_unknowns.end());
  for (const auto& eq : equations) {
    for (const auto& [name, c] : eq.terms()) names.insert(name);
  }
  AffineSpace space;
  space.unknowns_.assign(names.begin(), names.end());
  const std::size_t n = space.unknowns_.size();

  // Augmented rows [a | rhs] for a.x = -c.
  std::vector<std::vector<Rational>> m;
  m.reserve(equations.size());
  for (const auto& eq : equations) {
    std::vector<Rational> row(n + 1);
    for (std::size_t j = 0; j < n; ++j) row[j] = eq.coefficient(space.unknowns_[j]);
    row[n] = -eq.constant();
    m.push_back(std::move(row));
  }

  std::size_t r = 0;
  std::vector<std::size_t> pivots;
  for (std::size_t col = 0; col < n && r < m.size(); ++col) {
    std::size_t sel = r;
    while (sel < m.size() && m[sel][col] == 0) ++sel;
    if (sel == m.size()) continue;
    std::swap(m[sel], m[r]);
    Rational inv = 1 / m[r][col];
    for (auto& x : m[r]) x *= inv;
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (i == r || m[i][col] == 0) continue;
      Rational factor = m[i][col];
      for (std::size_t j = col; j <= n; ++j) m[i][j] -= factor * m[r][j];
    }
    pivots.push_back(col);
    ++r;
  }
  for (std::size_t i = r; i < m.size(); ++i) {
    if (m[i][n] != 0) space.consistent_ = false;
  }
  if (!space.consistent_) return space;
  for (std::size_t i = 0; i < r; ++i) {
    Row row;
    row.pivot = pivots[i];
    row.rhs = m[i][n];
    row.coefficients.assign(m[i].begin(), m[i].begin() + static_cast<long>(n));
    space.rows_.push_back(std::move(row));
  }
  return space;
}

long AffineSpace::dimension() const {
  if (!consistent_) return -1;
  return static_cast<long>(unknowns_.size() - rows_.size());
}

std::vector<Rational> AffineSpace::particular() const {
  if (!consistent_) return {};
  std::vector<Rational> x(unknowns_.size());
  for (const auto& row : rows_) x[row.pivot] = row.rhs;
  return x;
}

std::vector<std::vector<Rational>> AffineSpace::directions() const {
  std::vector<std::vector<Rational>> basis;
  if (!consistent_) return basis;
  std::vector<bool> is_pivot(unknowns_.size(), false);
  for (const auto& row : rows_) is_pivot[row.pivot] = true;
  for (std::size_t free = 0; free < unknowns_.size(); ++free) {
    if (is_pivot[free]) continue;
    std::vector<Rational> v(unknowns_.size());
    v[free] = 1;
    for (const auto& row : rows_) v[row.pivot] = -row.coefficients[free];
    basis.push_back(std::move(v));
  }
  return basis;
}

std::optional<Rational> AffineSpace::constant_value(const LinearForm& form) const {
  if (!consistent_) return std::nullopt;
  LinearForm rest = form;
  for (const auto& row : rows_) {
    Rational a = rest.coefficient(unknowns_[row.pivot]);
    if (a == 0) continue;
    // On the solution set x_p = rhs - sum_{j != p} c_j x_j.
    LinearForm sub(row.rhs);
    for (std::size_t j = 0; j < unknowns_.size(); ++j) {
      if (j == row.pivot || row.coefficients[j] == 0) continue;
      sub -= LinearForm::unknown(unknowns_[j]) * row.coefficients[j];
    }
    rest -= LinearForm::unknown(unknowns_[row.pivot]) * a;
    rest += sub * a;
  }
  if (!rest.is_constant()) return std::nullopt;
  return rest.constant();
}

std::vector<LinearForm> AffineSpace::equations() const {
  std::vector<LinearForm> out;
  if (!consistent_) {
    out.emplace_back(Rational(1));
    return out;
  }
  for (const auto& row : rows_) {
    LinearForm eq(-row.rhs);
    for (std::size_t j = 0; j < unknowns_.size(); ++j) {
      if (row.coefficients[j] != 0) eq += LinearForm::unknown(unknowns_[j]) * row.coefficients[j];
    }
    out.push_back(std::move(eq));
  }
  return out;
}

bool AffineSpace::same_solution_set(const AffineSpace& other) const {
  if (consistent_ != other.consistent_) return false;
  if (!consistent_) return true;
  auto implied_by = [](const AffineSpace& a, const AffineSpace& b) {
    for (const auto& eq : a.equations()) {
      auto v = b.constant_value(eq);
      if (!v || *v != 0) return false;
    }
    return true;
  };
  return implied_by(*this, other) && implied_by(other, *this);
}

}  // namespace drclosure
