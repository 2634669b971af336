#include "doctest.h"
#include "support.hpp"

using namespace drtest;

namespace {

// Components of Gamma_{<=i} by union-find; rank of H_1(Gamma_{<=i}, Z).
std::size_t subgraph_rank(const MarkedDualGraph& g, const LevelStructure& lv, int i) {
  std::vector<std::size_t> parent(g.vertices.size());
  for (std::size_t v = 0; v < parent.size(); ++v) parent[v] = v;
  std::function<std::size_t(std::size_t)> root = [&](std::size_t v) {
    return parent[v] == v ? v : parent[v] = root(parent[v]);
  };
  long edges = 0;
  for (const auto& e : g.edges) {
    if (lv.level[e.ends[0]] > i || lv.level[e.ends[1]] > i) continue;
    ++edges;
    parent[root(e.ends[0])] = root(e.ends[1]);
  }
  std::map<std::size_t, long> vertices, zeros;
  for (std::size_t v = 0; v < g.vertices.size(); ++v) {
    if (lv.level[v] <= i) ++vertices[root(v)];
  }
  for (const auto& l : g.legs) {
    if (l.is_zero() && lv.level[l.vertex] <= i) ++zeros[root(l.vertex)];
  }
  long rank = edges;
  for (const auto& [r, n] : vertices) rank += 1 - n + std::max(zeros[r] - 1, 0L);
  return static_cast<std::size_t>(rank);
}

ValueAssignment random_values(std::mt19937_64& rng, const MarkedDualGraph& g) {
  ValueAssignment out;
  for (const auto& p : g.all_points()) out[g.point_id(p)] = LinearForm(Rational(uniform(rng, -9, 9)));
  return out;
}

}  // namespace

TEST_CASE("integer kernel") {
  std::vector<std::vector<long>> m{{1, 2, 3}, {2, 4, 6}};
  auto k = integer_kernel(m, 3);
  CHECK(k.size() == 2);
  for (const auto& v : k) CHECK(v[0] + 2 * v[1] + 3 * v[2] == 0);
  CHECK(integer_kernel({}, 2).size() == 2);
  std::vector<std::vector<long>> full{{1, 0}, {0, 1}};
  CHECK(integer_kernel(full, 2).empty());
  // Primitive generator for 2x = 3y.
  std::vector<std::vector<long>> r{{2, -3}};
  auto p = integer_kernel(r, 2);
  REQUIRE(p.size() == 1);
  CHECK(std::abs(p[0][0]) == 3);
  CHECK(std::abs(p[0][1]) == 2);
}

TEST_CASE("relative homology of the dollar curve with three zeros") {
  auto d = load("unmarked_zeros");
  CellComplex cx(d.graph);
  CHECK(cx.z_legs().size() == 3);
  CHECK(cx.cell_count() == 6);
  auto h = relative_h1(d.graph);
  CHECK(h.size() == 3 - 2 + 1 + 2);
  for (const auto& c : h) {
    auto b = cx.boundary(d.graph, c);
    CHECK(std::all_of(b.begin(), b.end(), [](long x) { return x == 0; }));
  }
  CHECK(rational_rank(h) == 4);
  Chain loop{1, -1, 0, 0, 0, 0};
  CHECK(in_rational_span(h, loop));
  CHECK(cx.describe(d.graph, loop) == "q1 - q2");
  Chain half{1, 0, 0, 0, 0, 0};
  CHECK_FALSE(in_rational_span(h, half));
}

TEST_CASE("evaluation on the unmarked zeros fixture") {
  auto d = load("unmarked_zeros");
  auto values = symbolic_values(d.graph, d.decoration);
  CHECK(values.count("q1-") == 0);
  CHECK(values.at("z1").is_zero());
  auto sys = evaluation_system(d.graph, d.levels, values);
  REQUIRE(sys.levels.size() == 2);
  const auto& top = sys.at(0);
  CHECK(top.vanishing == Vanishing::Conditional);
  std::vector<LinearForm> expected{x("X1:q1+") - x("X1:q2+"), x("X1:q2+") - x("X1:q3+")};
  CHECK(top.space.same_solution_set(space(expected)));
  for (const auto& f : sys.at(-1).forms) CHECK(f.is_zero());
  CHECK(sys.at(-1).vanishing == Vanishing::Yes);
  CHECK(solve_constraints(sys).dimension() == 1);
  CHECK_THROWS_AS(sys.at(-2), std::out_of_range);
}

TEST_CASE("restriction requires support below the level") {
  auto d = load("unmarked_zeros");
  Chain top_loop{1, -1, 0, 0, 0, 0};
  auto lc = restrict_to_level(d.graph, d.levels, top_loop, 0);
  CHECK(lc.half_legs.size() == 2);
  CHECK(lc.edges.empty());
  CHECK_THROWS_AS(restrict_to_level(d.graph, d.levels, top_loop, -1), std::invalid_argument);
  auto low = restrict_to_level(d.graph, d.levels, top_loop, 0);
  ValueAssignment partial;
  CHECK_THROWS_AS(evaluate(d.graph, d.levels, low, partial), InputError);
}

TEST_CASE("random graphs: rank formula, filtration ranks and walk evaluation") {
  std::mt19937_64 rng(99);
  int walks = 0;
  for (int round = 0; round < 150; ++round) {
    auto g = random_graph(rng, 5, 3, 4);
    auto lv = random_levels(rng, g.vertices.size(), 2);
    CellComplex cx(g);
    std::size_t z = cx.z_legs().size();
    std::size_t expected = g.edges.size() - g.vertices.size() + 1 + (z > 0 ? z - 1 : 0);
    auto h = relative_h1(g);
    CHECK(h.size() == expected);
    CHECK(rational_rank(h) == expected);

    auto filt = level_filtration(g, lv);
    CHECK(filt.rank_at(0) == expected);
    for (int i = 0; i >= -lv.depth(); --i) {
      CHECK(filt.rank_at(i) == subgraph_rank(g, lv, i));
      if (i < 0) {
        for (const auto& c : filt.at(i)) CHECK(in_rational_span(filt.at(i + 1), c));
      }
    }
    auto values = random_values(rng, g);
    std::map<std::string, Rational> numeric;
    for (const auto& [k, f] : values) numeric[k] = f.constant();
    for (int i = 0; i >= -lv.depth(); --i) {
      for (int k = 0; k < 3; ++k) {
        auto w = random_walk(rng, g, lv, i);
        if (!w) continue;
        ++walks;
        Chain c = walk_chain(g, *w);
        CHECK(in_rational_span(filt.at(i), c));
        LinearForm ev = evaluate(g, lv, restrict_to_level(g, lv, c, i), values);
        CHECK(ev == LinearForm(walk_ev(g, lv, *w, i, numeric)));
      }
    }
  }
  CHECK(walks > 300);
}
