#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "helpers.hpp"
#include "oracles.hpp"

using namespace roadcolor;
using testutil::mp;

namespace {

DirectedGraph triangle_graph() {
  return DirectedGraph({{0, 1, 1}, {1, 0, 1}, {1, 1, 0}});
}

DirectedGraph pentagon_graph() {
  return DirectedGraph({{0, 0, 0, 1, 0},
                        {2, 0, 0, 1, 0},
                        {0, 1, 0, 0, 0},
                        {0, 0, 1, 0, 1},
                        {0, 1, 1, 0, 1}});
}

DirectedGraph two_cycle() { return DirectedGraph({{0, 1}, {1, 0}}); }

}  // namespace

TEST_CASE("graph construction validates the table") {
  CHECK_THROWS_AS(DirectedGraph({{0, 1}, {1, 0}, {0, 0}}), input_error);
  CHECK_THROWS_AS(DirectedGraph({{0, -1}, {1, 0}}), input_error);
  CHECK_THROWS_AS(DirectedGraph({}), input_error);
}

TEST_CASE("validate_outdegree") {
  CHECK(validate_outdegree(triangle_graph()) == 2);
  CHECK(validate_outdegree(DirectedGraph({{1, 0, 0}, {0, 1, 0}, {0, 0, 1}})) == 1);
  CHECK(validate_outdegree(pentagon_graph()) == 2);
  CHECK_FALSE(validate_outdegree(DirectedGraph({{1, 1}, {1, 0}})).has_value());
}

TEST_CASE("validate_outdegree is invariant under site relabeling") {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    auto colors = oracle::random_sc_coloring(rng, 5, 2);
    std::vector<std::vector<long>> a(5, std::vector<long>(5, 0));
    for (const auto& c : colors)
      for (int x = 0; x < 5; ++x) a[c[x]][x] += 1;
    std::vector<int> perm{0, 1, 2, 3, 4};
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<std::vector<long>> b(5, std::vector<long>(5, 0));
    for (int y = 0; y < 5; ++y)
      for (int x = 0; x < 5; ++x) b[perm[y]][perm[x]] = a[y][x];
    CHECK(validate_outdegree(DirectedGraph(a)) == validate_outdegree(DirectedGraph(b)));
  }
}

TEST_CASE("strong connectivity") {
  CHECK(is_strongly_connected(triangle_graph()));
  CHECK(is_strongly_connected(pentagon_graph()));
  CHECK_FALSE(is_strongly_connected(DirectedGraph({{1, 0}, {0, 1}})));  // two self-loops
}

TEST_CASE("period") {
  CHECK(period(triangle_graph()) == 1);
  CHECK(period(pentagon_graph()) == 1);
  CHECK(period(two_cycle()) == 2);
  CHECK_THROWS_AS(period(DirectedGraph({{1, 0}, {0, 1}})), structure_error);
}

TEST_CASE("period agrees with the edge-gcd method and is site independent") {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const int m = 2 + static_cast<int>(rng() % 5);  // m <= 6
    auto colors = oracle::random_sc_coloring(rng, m, 2);
    std::vector<std::vector<long>> a(m, std::vector<long>(m, 0));
    for (const auto& c : colors)
      for (int x = 0; x < m; ++x) a[c[x]][x] += 1;
    DirectedGraph g(a);
    const int p = period(g);
    CHECK(p == oracle::period_edge_gcd(a));
    for (int site = 0; site < m; ++site)
      CHECK(oracle::period_return_times(a, site, 2 * m) == p);
  }
}

TEST_CASE("analyze_graph on the reference graphs") {
  auto tri = analyze_graph(triangle_graph());
  CHECK(tri.outdegree == 2);
  CHECK(tri.strongly_connected);
  CHECK(tri.period == 1);
  CHECK(tri.aperiodic);
  CHECK(tri.positivity_exponent == 2);
  CHECK(is_primitive(tri));

  auto cyc = analyze_graph(two_cycle());
  CHECK(cyc.outdegree == 1);
  CHECK(cyc.strongly_connected);
  CHECK(cyc.period == 2);
  CHECK_FALSE(cyc.aperiodic);
  CHECK_FALSE(cyc.positivity_exponent.has_value());
  CHECK_FALSE(is_primitive(cyc));

  auto pent = analyze_graph(pentagon_graph());
  CHECK(pent.outdegree == 2);
  CHECK(pent.positivity_exponent == 5);
  CHECK(oracle::positivity_exponent(pentagon_graph().adjacency(), 30) == 5);
}

TEST_CASE("primitivity iff some power is entrywise positive") {
  std::mt19937 rng(23);
  for (int trial = 0; trial < 100; ++trial) {
    const int m = 2 + static_cast<int>(rng() % 5);
    auto colors = oracle::random_sc_coloring(rng, m, 2);
    std::vector<std::vector<long>> a(m, std::vector<long>(m, 0));
    for (const auto& c : colors)
      for (int x = 0; x < m; ++x) a[c[x]][x] += 1;
    auto props = analyze_graph(DirectedGraph(a));
    const int r = oracle::positivity_exponent(a, m * m + m);
    CHECK(is_primitive(props) == (r > 0));
    if (props.positivity_exponent) CHECK(*props.positivity_exponent == r);
  }
}
