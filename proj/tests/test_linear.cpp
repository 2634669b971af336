#include "doctest.h"
#include "support.hpp"

using namespace drtest;

TEST_CASE("rationals parse canonically") {
  CHECK(parse_rational("6/4") == Rational(3, 2));
  CHECK(parse_rational("-2") == Rational(-2));
  CHECK(parse_rational("+1/3") == Rational(1, 3));
  CHECK(to_string(parse_rational("-10/5")) == "-2");
  CHECK_THROWS_AS(parse_rational(""), std::invalid_argument);
  CHECK_THROWS_AS(parse_rational("1/0"), std::invalid_argument);
  CHECK_THROWS_AS(parse_rational("1.5"), std::invalid_argument);
  CHECK_THROWS_AS(parse_rational("a/2"), std::invalid_argument);
}

TEST_CASE("linear forms cancel and render") {
  LinearForm f = x("a") + x("b") * Rational(2) - x("a");
  CHECK(f.terms().size() == 1);
  CHECK(f.coefficient("a") == 0);
  CHECK(f.coefficient("b") == 2);
  CHECK((x("a") - x("a")).is_zero());
  CHECK(LinearForm().to_string() == "0");
  CHECK((x("u") - x("v")).to_string() == "[u] - [v]");
  LinearForm g = x("a") * Rational(1, 2) + LinearForm(Rational(3));
  CHECK(g.substitute({{"a", Rational(4)}}) == LinearForm(Rational(5)));
  CHECK(g.substitute({}).coefficient("a") == Rational(1, 2));
  std::vector<std::string> names{"a"};
  CHECK_THROWS_AS(g.integer_coefficients(names), std::domain_error);
  CHECK((g * Rational(2)).integer_coefficients(names) == std::vector<long>{1, 6});
  CHECK((g * Rational(0)).is_zero());
}

TEST_CASE("affine spaces are canonical") {
  std::vector<LinearForm> a{x("p") - x("q"), x("q") - x("r")};
  std::vector<LinearForm> b{x("p") - x("r"), x("r") - x("q") + x("p") - x("q")};
  AffineSpace sa = space(a), sb = space(b);
  CHECK(sa.consistent());
  CHECK(sa.rank() == 2);
  CHECK(sa.dimension() == 1);
  CHECK(sa.same_solution_set(sb));
  CHECK(sa.equations().size() == sb.equations().size());
  for (std::size_t k = 0; k < sa.equations().size(); ++k) CHECK(sa.equations()[k] == sb.equations()[k]);
  CHECK(sa.constant_value(x("p") - x("r")) == Rational(0));
  CHECK_FALSE(sa.constant_value(x("p")).has_value());
  CHECK(sa.directions().size() == 1);
}

TEST_CASE("inconsistent systems and extra unknowns") {
  std::vector<LinearForm> bad{x("a") - LinearForm(Rational(1)), x("a") - LinearForm(Rational(2))};
  AffineSpace s = space(bad);
  CHECK_FALSE(s.consistent());
  CHECK(s.dimension() == -1);
  CHECK(s.particular().empty());

  std::vector<LinearForm> one{x("a") - LinearForm(Rational(1))};
  AffineSpace wide = AffineSpace::solve(one, {"b"});
  CHECK(wide.dimension() == 1);
  CHECK(wide.particular() == std::vector<Rational>{1, 0});
  // Free unknowns absent on one side are free in the comparison.
  CHECK(space(one).same_solution_set(wide));
  std::vector<LinearForm> pinned{x("a") - LinearForm(Rational(1)), x("b")};
  CHECK_FALSE(space(pinned).same_solution_set(wide));
}

TEST_CASE("random systems: particular solutions satisfy every equation") {
  std::mt19937_64 rng(7);
  const std::vector<std::string> names{"a", "b", "c", "d", "e"};
  for (int round = 0; round < 200; ++round) {
    std::vector<LinearForm> eqs;
    int m = uniform(rng, 1, 5);
    for (int k = 0; k < m; ++k) {
      LinearForm f(Rational(uniform(rng, -3, 3)));
      for (const auto& n : names) {
        if (coin(rng, 0.5)) f += x(n) * Rational(uniform(rng, -3, 3));
      }
      eqs.push_back(f);
    }
    AffineSpace s = AffineSpace::solve(eqs, names);
    if (!s.consistent()) continue;
    std::map<std::string, Rational> at;
    auto p = s.particular();
    for (std::size_t j = 0; j < s.unknowns().size(); ++j) at[s.unknowns()[j]] = p[j];
    for (const auto& f : eqs) CHECK(f.substitute(at).is_zero());
    CHECK(s.dimension() == static_cast<long>(s.unknowns().size() - s.rank()));
    for (const auto& dir : s.directions()) {
      std::map<std::string, Rational> moved = at;
      for (std::size_t j = 0; j < dir.size(); ++j) moved[s.unknowns()[j]] += dir[j];
      for (const auto& f : eqs) CHECK(f.substitute(moved).is_zero());
    }
    CHECK(s.same_solution_set(space(s.equations())));
  }
}
