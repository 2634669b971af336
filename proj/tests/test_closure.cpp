#include "doctest.h"
#include "support.hpp"

using namespace drtest;

namespace {

VertexWitness linear_witness(const std::map<std::string, std::optional<Rational>>& coords) {
  VertexWitness w;
  w.coordinates = coords;
  w.scale = Rational(1);
  return w;
}

std::size_t accepted_level_structures(const SearchResult& r) {
  std::set<std::size_t> seen;
  for (const auto& f : r.families) seen.insert(f.level_structure);
  return seen.size();
}

}  // namespace

TEST_CASE("point unknowns pin zeros") {
  auto d = load("unmarked_zeros");
  std::vector<LinearForm> zeros;
  auto values = point_unknowns(d.graph, d.decoration, zeros);
  CHECK(zeros.size() == 3);
  CHECK(values.at("z1") == x("X2:z1"));
  CHECK(values.count("q1-") == 0);
  auto s = constraint_space(d.graph, d.levels, d.decoration);
  std::vector<LinearForm> expected{x("X1:q1+") - x("X1:q3+"), x("X1:q2+") - x("X1:q3+"), x("X2:z1"), x("X2:z2"),
                                   x("X2:z3")};
  CHECK(s.same_solution_set(space(expected)));
}

TEST_CASE("explicit genus-0 witnesses give an exact verdict") {
  auto d = load("dollar", "G1");
  ClosureCertificate cert;
  cert.levels = d.levels;
  cert.decoration = d.decoration;
  cert.witnesses["X1"] =
      linear_witness({{"z1", Rational(0)}, {"p1", std::nullopt}, {"q1+", Rational(1)}, {"q2+", Rational(2)}, {"q3+", Rational(3)}});
  cert.witnesses["X2"] =
      linear_witness({{"z2", Rational(0)}, {"p2", std::nullopt}, {"q1-", Rational(1)}, {"q2-", Rational(2)}, {"q3-", Rational(3)}});
  auto r = verify_certificate(d.graph, d.mu, cert);
  CHECK_MESSAGE(r.verdict == Verdict::AcceptedExact, r.reason);
  CHECK(r.certificate.vertices.size() == 2);

  auto skew = cert;
  skew.witnesses["X2"].coordinates["q3-"] = Rational(4);
  auto rs = verify_certificate(d.graph, d.mu, skew);
  CHECK(rs.verdict == Verdict::Rejected);

  auto wrong_mult = cert;
  wrong_mult.witnesses["X1"].coordinates["q1+"] = Rational(0);
  CHECK(verify_certificate(d.graph, d.mu, wrong_mult).verdict == Verdict::Rejected);

  auto partial = cert;
  partial.witnesses.erase("X2");
  CHECK(verify_certificate(d.graph, d.mu, partial).verdict == Verdict::AcceptedModuloGenericity);
}

TEST_CASE("certificates that break the TWR conditions are rejected") {
  auto d = load("dollar", "G2");
  ClosureCertificate cert;
  cert.levels = d.levels;
  cert.decoration = d.decoration;
  CHECK(verify_certificate(d.graph, d.mu, cert).verdict == Verdict::AcceptedModuloGenericity);
  cert.levels.level = {-1, 0};
  auto r = verify_certificate(d.graph, d.mu, cert);
  CHECK(r.verdict == Verdict::Rejected);
  CHECK(r.reason.rfind("not a TWR", 0) == 0);
  CHECK(verify_certificate(d.graph, {2, -2}, cert).verdict == Verdict::Rejected);
}

TEST_CASE("search on the dollar curve in DR(1,1,1,-3)") {
  auto d = load("dollar", "G2");
  auto r = search(d.graph, d.mu);
  CHECK(r.member());
  CHECK(r.level_structures.size() == 3);
  CHECK(r.families.size() == 2);
  CHECK(accepted_level_structures(r) == 1);
  for (const auto& c : r.certificates) {
    auto v = verify_certificate(d.graph, d.mu, c);
    CHECK(v.verdict != Verdict::Rejected);
  }
  SearchBounds one;
  one.max_certificates = 1;
  auto capped = search(d.graph, d.mu, one);
  CHECK(capped.certificates.size() == 1);
  CHECK_FALSE(capped.exhausted.empty());
}

TEST_CASE("cherry: both orderings of the lower components are accepted") {
  auto d = load("cherry", "G1");
  auto r = search(d.graph, d.mu);
  CHECK(r.member());
  CHECK(accepted_level_structures(r) == 3);
}

TEST_CASE("search rejects malformed input") {
  auto d = load("dollar", "G2");
  CHECK_THROWS_AS(search(d.graph, {1, -1}), InputError);
  auto g = d.graph;
  g.legs.pop_back();
  CHECK_THROWS_AS(search(g, {}), InputError);
}
