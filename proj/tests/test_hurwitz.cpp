#include "doctest.h"
#include "support.hpp"

using namespace drtest;

namespace {

bool is_identity_product(const std::vector<Permutation>& s, int d) {
  std::vector<int> acc(static_cast<std::size_t>(d));
  for (int k = 0; k < d; ++k) acc[static_cast<std::size_t>(k)] = k;
  for (const auto& p : s) {
    for (auto& a : acc) a = p[static_cast<std::size_t>(a)];
  }
  for (int k = 0; k < d; ++k) {
    if (acc[static_cast<std::size_t>(k)] != k) return false;
  }
  return true;
}

// All multisets of r partitions of d.
void profile_tuples(const std::vector<Partition>& parts, std::size_t r, std::size_t from, std::vector<Partition>& cur,
                    std::vector<std::vector<Partition>>& out) {
  if (cur.size() == r) {
    out.push_back(cur);
    return;
  }
  for (std::size_t k = from; k < parts.size(); ++k) {
    cur.push_back(parts[k]);
    profile_tuples(parts, r, k, cur, out);
    cur.pop_back();
  }
}

int genus_from_rh(int d, const std::vector<Partition>& profiles) {
  int ram = 0;
  for (const auto& p : profiles) ram += d - static_cast<int>(p.size());
  return (ram - 2 * d + 2) / 2;
}

}  // namespace

TEST_CASE("Riemann-Hurwitz bookkeeping") {
  CHECK(rh_check({2, 0, {{2}, {2}}}));
  CHECK_FALSE(rh_check({2, 0, {{2}, {1, 1}}}));
  CHECK_FALSE(rh_check({3, 0, {{2}, {3}}}));
  CHECK(rh_check({3, 1, {{3}, {1, 1, 1}, {2, 1}, {2, 1}, {2, 1}, {2, 1}}}));
  CHECK(normalized({1, 3, 2}) == Partition{3, 2, 1});
  CHECK_THROWS_AS(normalized({2, 0}), std::invalid_argument);
  CHECK(cycle_type({1, 2, 0, 4, 3}) == Partition{3, 2});
}

TEST_CASE("classical non-realizable data") {
  HurwitzProblem p{4, 0, {{2, 2}, {2, 2}, {3, 1}}};
  CHECK(rh_check(p));
  auto v = decide(p);
  CHECK(v.rh);
  CHECK_FALSE(v.exists);
  CHECK_FALSE(brute_force_factorization(4, p.profiles));
}

TEST_CASE("factorizations are genuine witnesses") {
  HurwitzProblem p{3, 1, {{3}, {1, 1, 1}, {2, 1}, {2, 1}, {2, 1}, {2, 1}}};
  auto w = find_factorization(3, p.profiles);
  REQUIRE(w);
  REQUIRE(w->size() == p.profiles.size());
  for (std::size_t k = 0; k < w->size(); ++k) CHECK(cycle_type((*w)[k]) == normalized(p.profiles[k]));
  CHECK(is_identity_product(*w, 3));
  CHECK(exists(p));
}

TEST_CASE("degree cap") {
  HurwitzProblem big{8, 0, {{8}, {8}}};
  CHECK_THROWS_AS(find_factorization(8, big.profiles, 6), ResourceLimit);
  auto v = decide(big, 6);
  CHECK(v.cap_hit);
  CHECK(v.rh);
}

TEST_CASE("exhaustive agreement with the brute-force oracle for d <= 4") {
  int checked = 0;
  for (int d = 1; d <= 4; ++d) {
    auto parts = partitions(d);
    for (std::size_t r = 1; r <= 4; ++r) {
      std::vector<std::vector<Partition>> tuples;
      std::vector<Partition> cur;
      profile_tuples(parts, r, 0, cur, tuples);
      for (const auto& t : tuples) {
        bool oracle = brute_force_factorization(d, t);
        auto w = find_factorization(d, t);
        CHECK(w.has_value() == oracle);
        if (w) CHECK(is_identity_product(*w, d));
        HurwitzProblem p{d, std::max(0, genus_from_rh(d, t)), t};
        if (exists(p)) CHECK(rh_check(p));
        ++checked;
      }
    }
  }
  CHECK(checked > 100);
}

TEST_CASE("genus-0 realizations") {
  auto f = realize_genus0({{Rational(0), 2}, {Rational(1), -1}, {std::nullopt, -1}}, Rational(3));
  CHECK(f.degree() == 2);
  CHECK(f.value(Rational(2)) == LinearForm(Rational(12)));
  CHECK(f.value(Rational(0)).is_zero());
  CHECK_THROWS_AS(f.value(Rational(1)), std::domain_error);
  CHECK_THROWS_AS(realize_genus0({{Rational(0), 1}, {Rational(0), -1}}), InputError);
  CHECK_THROWS_AS(realize_genus0({{Rational(0), 1}}), InputError);
  auto symbolic = realize_genus0({{Rational(0), 1}, {std::nullopt, -1}});
  CHECK(symbolic.value(Rational(5)) == x("c") * Rational(5));
}
