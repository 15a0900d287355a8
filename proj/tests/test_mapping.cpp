#include <catch2/catch_amalgamated.hpp>

#include <array>
#include <random>

#include "helpers.hpp"
#include "oracles.hpp"

using namespace roadcolor;
using testutil::mp;
using testutil::st;

TEST_CASE("mapping basics") {
  CHECK_THROWS_AS(Mapping({0, 3}), input_error);
  CHECK(Mapping::identity(3).constant_target() == std::nullopt);
  CHECK(Mapping::constant(3, 2).constant_target() == 2);
  CHECK(mp({3, 1, 2}).is_permutation());
  CHECK_FALSE(mp({3, 3, 1}).is_permutation());
}

TEST_CASE("composition on the reference colorings") {
  auto tri = testutil::triangle_sync();
  // first color after second color collapses everything onto site 3
  CHECK(compose(tri.color(0), tri.color(1)) == Mapping::constant(3, 2));
  CHECK(compose(Mapping::identity(3), tri.color(0)) == tri.color(0));

  auto perm = testutil::triangle_perm();
  CHECK(compose(perm.color(0), perm.color(1)) == Mapping::identity(3));
  CHECK(compose(perm.color(1), perm.color(0)) == Mapping::identity(3));

  CHECK_THROWS_AS(compose(Mapping::identity(2), Mapping::identity(3)), input_error);
}

TEST_CASE("composition is associative, exhaustively for 3 sites") {
  std::vector<Mapping> all;
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b)
      for (int c = 0; c < 3; ++c) all.push_back(Mapping({a, b, c}));
  for (const auto& f : all)
    for (const auto& g : all)
      for (const auto& h : all)
        REQUIRE(compose(compose(f, g), h) == compose(f, compose(g, h)));
}

TEST_CASE("composition is associative, exhaustively for 4 sites via raw oracle") {
  // Raw arrays keep the full 256^3 scan cheap; the library compose is then
  // checked against the oracle on every pair.
  std::vector<std::array<int, 4>> all;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      for (int c = 0; c < 4; ++c)
        for (int d = 0; d < 4; ++d) all.push_back({a, b, c, d});
  auto comp = [](const std::array<int, 4>& f, const std::array<int, 4>& g) {
    return std::array<int, 4>{f[g[0]], f[g[1]], f[g[2]], f[g[3]]};
  };
  long long violations = 0;
  for (const auto& f : all)
    for (const auto& g : all) {
      auto fg = comp(f, g);
      for (const auto& h : all)
        if (comp(fg, h) != comp(f, comp(g, h))) ++violations;
    }
  REQUIRE(violations == 0);
  std::mt19937 rng(3);
  for (int trial = 0; trial < 2000; ++trial) {
    const auto& f = all[rng() % all.size()];
    const auto& g = all[rng() % all.size()];
    auto lib = compose(Mapping({f[0], f[1], f[2], f[3]}), Mapping({g[0], g[1], g[2], g[3]}));
    auto raw = comp(f, g);
    REQUIRE(lib.image() == std::vector<int>(raw.begin(), raw.end()));
  }
}

TEST_CASE("constant maps absorb") {
  for (int m = 1; m <= 4; ++m) {
    std::vector<Mapping> all;
    std::vector<int> img(m, 0);
    for (;;) {
      all.push_back(Mapping(img));
      int i = m - 1;
      while (i >= 0 && ++img[i] == m) img[i--] = 0;
      if (i < 0) break;
    }
    for (int target = 0; target < m; ++target)
      for (const auto& sigma : all) {
        CHECK(compose(Mapping::constant(m, target), sigma) == Mapping::constant(m, target));
        CHECK(compose(sigma, Mapping::constant(m, target)) ==
              Mapping::constant(m, sigma(target)));
      }
  }
}

TEST_CASE("apply_word") {
  auto tri = testutil::triangle_sync();
  Word w = tri.word({0, 1});  // newest-first: color 1 applied after color 2
  CHECK(apply_word(w, st({1, 2, 3})) == st({3}));
  CHECK(apply_word(w, std::set<int>{}) == std::set<int>{});

  auto pent = testutil::pentagon();
  Word single = pent.word({0});
  CHECK(apply_word(single, st({1, 3, 5})) == st({2, 4, 5}));
  CHECK(w.composition().constant_target() == 2);
}

TEST_CASE("word application order is newest-first storage, oldest-first action") {
  auto pent = testutil::pentagon();
  std::mt19937 rng(17);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<int> colors;
    for (int i = 0; i < 1 + static_cast<int>(rng() % 6); ++i)
      colors.push_back(static_cast<int>(rng() % 2));
    Word whole = pent.word(colors);
    // split: the back part of the stored letters acts first
    const int cut = static_cast<int>(rng() % colors.size());
    std::set<int> subset;
    for (int x = 0; x < 5; ++x)
      if (rng() % 2) subset.insert(x);
    std::set<int> via_split = subset;
    std::vector<int> older_part(colors.begin() + cut, colors.end());
    std::vector<int> newer_part(colors.begin(), colors.begin() + cut);
    if (!older_part.empty()) via_split = apply_word(pent.word(older_part), via_split);
    if (!newer_part.empty()) via_split = apply_word(pent.word(newer_part), via_split);
    CHECK(apply_word(whole, subset) == via_split);
  }
}

TEST_CASE("induced graph round trip") {
  auto tri = testutil::triangle_sync();
  CHECK(tri.graph() == DirectedGraph({{0, 1, 1}, {1, 0, 1}, {1, 1, 0}}));
  CHECK(induced_graph({Mapping::identity(3)}) ==
        DirectedGraph({{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}));
  auto pent = testutil::pentagon();
  CHECK(pent.graph() == DirectedGraph({{0, 0, 0, 1, 0},
                                       {2, 0, 0, 1, 0},
                                       {0, 1, 0, 0, 0},
                                       {0, 0, 1, 0, 1},
                                       {0, 1, 1, 0, 1}}));
}

TEST_CASE("coloring enumeration") {
  auto tri_graph = testutil::triangle_sync().graph();
  CHECK(ordered_coloring_count(tri_graph) == 8);
  auto colorings = decompose_colorings(tri_graph);
  REQUIRE(colorings.size() == 4);

  auto contains = [&](const RoadColoring& c) {
    std::vector<Mapping> sorted = c.colors();
    std::sort(sorted.begin(), sorted.end());
    for (const auto& candidate : colorings)
      if (candidate.colors() == sorted) return true;
    return false;
  };
  CHECK(contains(testutil::triangle_sync()));
  CHECK(contains(testutil::triangle_perm()));

  for (const auto& c : colorings) CHECK(induced_graph(c.colors()) == tri_graph);

  auto identity_graph = DirectedGraph({{1, 0}, {0, 1}});
  auto only = decompose_colorings(identity_graph);
  REQUIRE(only.size() == 1);
  CHECK(only[0].colors() == std::vector<Mapping>{Mapping::identity(2)});

  auto pent_graph = testutil::pentagon().graph();
  CHECK(ordered_coloring_count(pent_graph) == 16);
  auto pent_colorings = decompose_colorings(pent_graph);
  CHECK(pent_colorings.size() == 8);
  std::vector<Mapping> pair = testutil::pentagon().colors();
  std::sort(pair.begin(), pair.end());
  bool found = false;
  for (const auto& c : pent_colorings) found = found || c.colors() == pair;
  CHECK(found);

  CHECK_THROWS_AS(decompose_colorings(DirectedGraph({{1, 1}, {1, 0}})), structure_error);
}
