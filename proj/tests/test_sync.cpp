#include <catch2/catch_amalgamated.hpp>

#include "helpers.hpp"
#include "oracles.hpp"

using namespace roadcolor;
using testutil::mp;
using testutil::st;

namespace {

std::vector<oracle::Map> raw_colors(const RoadColoring& c) {
  std::vector<oracle::Map> out;
  for (const auto& color : c.colors()) out.push_back(color.image());
  return out;
}

}  // namespace

TEST_CASE("shortest synchronizing word") {
  auto tri = testutil::triangle_sync();
  auto w = shortest_synchronizing_word(tri);
  REQUIRE(w.has_value());
  CHECK(w->length() == 2);
  CHECK(w->composition() == Mapping::constant(3, 2));  // collapses onto site 3
  CHECK(w->colors == std::vector<int>{0, 1});          // newest-first
  CHECK(oracle::shortest_length_to_card(raw_colors(tri), 1, 4) == 2);
  // no single color is constant, so length 1 is impossible
  CHECK_FALSE(tri.color(0).constant_target().has_value());
  CHECK_FALSE(tri.color(1).constant_target().has_value());

  auto constant_color = RoadColoring::from_colors({Mapping::constant(3, 0), mp({2, 3, 1})});
  auto w1 = shortest_synchronizing_word(constant_color);
  REQUIRE(w1.has_value());
  CHECK(w1->length() == 1);

  CHECK_FALSE(shortest_synchronizing_word(testutil::triangle_perm()).has_value());
  CHECK_FALSE(shortest_synchronizing_word(testutil::pentagon()).has_value());
}

TEST_CASE("minimal image rank") {
  auto [rank_tri, witness_tri] = min_image_rank(testutil::triangle_sync());
  CHECK(rank_tri == 1);
  CHECK(witness_tri.composition().constant_target() == 2);

  auto [rank_perm, witness_perm] = min_image_rank(testutil::triangle_perm());
  CHECK(rank_perm == 3);
  CHECK(witness_perm.colors == std::vector<int>{0});

  auto [rank_pent, witness_pent] = min_image_rank(testutil::pentagon());
  CHECK(rank_pent == 3);
  CHECK(witness_pent.colors == std::vector<int>{1});
  CHECK(apply_word(witness_pent, st({1, 2, 3, 4, 5})) == st({2, 4, 5}));

  CHECK(oracle::min_rank(raw_colors(testutil::pentagon())) == 3);
  CHECK(oracle::min_rank(raw_colors(testutil::triangle_perm())) == 3);
}

TEST_CASE("subset classification on the 5-site coloring") {
  auto pent = testutil::pentagon();
  CHECK(classify_subset(pent, st({2, 5})).label() == "deadlock");
  CHECK(classify_subset(pent, st({1, 2})).label() == "synchronizing-but-non-stable");
  CHECK(classify_subset(pent, st({1, 4})).label() == "synchronizing-but-non-stable");
  CHECK(classify_subset(pent, st({2, 3})).label() == "synchronizing-but-non-stable");
  CHECK(classify_subset(pent, st({3, 4})).label() == "synchronizing-but-non-stable");

  auto singleton = classify_subset(pent, st({4}));
  CHECK(singleton.synchronizing);
  CHECK(singleton.stable);
  CHECK(singleton.label() == "stable");

  // contains the deadlock pair {2,5} and the synchronizing pair {1,2}
  auto mixed = classify_subset(pent, st({1, 2, 5}));
  CHECK_FALSE(mixed.synchronizing);
  CHECK_FALSE(mixed.deadlock);
  CHECK(mixed.label() == "non-synchronizing");

  CHECK_THROWS_AS(classify_subset(pent, std::set<int>{}), input_error);
}

TEST_CASE("pair collapse equivalence") {
  // all pairs synchronize iff the coloring does, across every coloring of
  // both reference graphs
  for (const auto& graph :
       {testutil::triangle_sync().graph(), testutil::pentagon().graph()}) {
    for (const auto& coloring : decompose_colorings(graph)) {
      bool all_pairs = true;
      const int m = coloring.site_count();
      for (int x = 0; x < m; ++x)
        for (int y = x + 1; y < m; ++y)
          all_pairs = all_pairs && classify_subset(coloring, {x, y}).synchronizing;
      CHECK(all_pairs == shortest_synchronizing_word(coloring).has_value());
      CHECK(shortest_synchronizing_word(coloring).has_value() ==
            (min_image_rank(coloring).first == 1));
      CHECK(oracle::has_sync_word(raw_colors(coloring)) ==
            shortest_synchronizing_word(coloring).has_value());
    }
  }
}

TEST_CASE("f_cliques") {
  CHECK(f_cliques(testutil::pentagon()) ==
        std::vector<std::set<int>>{st({1, 3, 5}), st({2, 4, 5})});
  CHECK(f_cliques(testutil::triangle_sync()) ==
        std::vector<std::set<int>>{st({1}), st({2}), st({3})});
  CHECK(f_cliques(testutil::triangle_perm()) == std::vector<std::set<int>>{st({1, 2, 3})});
}

TEST_CASE("single-color images of F-cliques are F-cliques of equal size") {
  for (const auto& coloring :
       {testutil::triangle_sync(), testutil::triangle_perm(), testutil::pentagon()}) {
    auto cliques = f_cliques(coloring);
    const int rank = min_image_rank(coloring).first;
    for (const auto& clique : cliques) {
      CHECK(static_cast<int>(clique.size()) == rank);
      for (const auto& color : coloring.colors()) {
        auto image = color.apply(clique);
        CHECK(static_cast<int>(image.size()) == rank);
        CHECK(std::find(cliques.begin(), cliques.end(), image) != cliques.end());
      }
    }
  }
}

TEST_CASE("partition from a word") {
  auto pent = testutil::pentagon();

  // colors applied 1,2,1: image {1,3,5}, fibers {5} {3,4} {1,2}
  Word w = pent.word_applied({0, 1, 0});
  CHECK(apply_word(w, st({1, 2, 3, 4, 5})) == st({1, 3, 5}));
  auto part = partition_from_word(pent, w);
  CHECK(part.anchors == std::vector<int>{0, 2, 4});
  CHECK(part.blocks == std::vector<std::set<int>>{st({5}), st({3, 4}), st({1, 2})});

  // blocks are nonempty, disjoint, and cover the sites
  std::set<int> seen;
  for (const auto& block : part.blocks) {
    CHECK_FALSE(block.empty());
    for (int x : block) CHECK(seen.insert(x).second);
  }
  CHECK(seen == st({1, 2, 3, 4, 5}));

  // a word composing to the identity splits a permutation coloring into
  // singleton fibers
  auto perm = testutil::triangle_perm();
  Word id_word = perm.word_applied({1, 0});
  CHECK(id_word.composition() == Mapping::identity(3));
  auto perm_part = partition_from_word(perm, id_word);
  CHECK(perm_part.blocks == std::vector<std::set<int>>{st({1}), st({2}), st({3})});

  // a synchronizing word yields the single full block
  auto tri = testutil::triangle_sync();
  auto tri_part = partition_from_word(tri, *shortest_synchronizing_word(tri));
  CHECK(tri_part.blocks == std::vector<std::set<int>>{st({1, 2, 3})});

  // image of a permutation color alone is all of V: not minimal rank
  CHECK_THROWS_AS(partition_from_word(pent, pent.word({0})), structure_error);
}

TEST_CASE("word padding") {
  auto pent = testutil::pentagon();
  auto [rank, witness] = min_image_rank(pent);
  const int r = *analyze_graph(pent.graph()).positivity_exponent;
  REQUIRE(r == 5);

  Word padded = pad_word(witness, pent, r);
  CHECK(padded.length() == witness.length() + 2 * r);
  CHECK(satisfies_no_overlap(padded, r));
  CHECK(padded.colors_applied_order() ==
        std::vector<int>{1, 0, 0, 0, 0, 0, 1, 1, 1, 1, 1});
  // composition fixes its image pointwise here
  Mapping comp = padded.composition();
  for (int x : {1, 3, 4}) CHECK(comp(x) == x);

  // padding is unconditional: a word that already satisfies the condition
  // still grows by 2r
  Word again = pad_word(padded, pent, r);
  CHECK(again.length() == padded.length() + 2 * r);
  CHECK(satisfies_no_overlap(again, r));

  auto single = RoadColoring::from_colors({mp({2, 3, 1})});
  CHECK_THROWS_AS(pad_word(single.word({0}), single, 2), unsupported_error);
}

TEST_CASE("padding always yields the no-overlap property") {
  for (const auto& coloring : {testutil::triangle_sync(), testutil::pentagon()}) {
    const int r = *analyze_graph(coloring.graph()).positivity_exponent;
    std::mt19937 rng(5);
    for (int trial = 0; trial < 50; ++trial) {
      std::vector<int> colors;
      for (int i = 0; i < 1 + static_cast<int>(rng() % 5); ++i)
        colors.push_back(static_cast<int>(rng() % coloring.color_count()));
      CHECK(satisfies_no_overlap(pad_word(coloring.word(colors), coloring, r), r));
    }
  }
}

TEST_CASE("synchronizing coloring search") {
  auto tri_graph = testutil::triangle_sync().graph();
  auto found = find_synchronizing_coloring(tri_graph);
  REQUIRE(found.has_value());
  CHECK(shortest_synchronizing_word(*found).has_value());
  // first canonical hit
  CHECK(found->colors() == std::vector<Mapping>{mp({2, 1, 1}), mp({3, 3, 2})});

  auto pent_found = find_synchronizing_coloring(testutil::pentagon().graph());
  REQUIRE(pent_found.has_value());
  CHECK(shortest_synchronizing_word(*pent_found).has_value());

  CHECK_FALSE(find_synchronizing_coloring(DirectedGraph({{0, 1}, {1, 0}})).has_value());
}

TEST_CASE("analyze_sync composes the pieces") {
  auto report = analyze_sync(testutil::pentagon());
  CHECK_FALSE(report.synchronizing);
  CHECK(report.min_rank == 3);
  CHECK_FALSE(report.shortest_word.has_value());
  CHECK(report.clique_list.size() == 2);
  CHECK(report.partition.anchors == std::vector<int>{1, 3, 4});
  CHECK(report.partition.blocks ==
        std::vector<std::set<int>>{st({1, 4}), st({5}), st({2, 3})});

  auto tri_report = analyze_sync(testutil::triangle_sync());
  CHECK(tri_report.synchronizing);
  CHECK(tri_report.min_rank == 1);
  REQUIRE(tri_report.shortest_word.has_value());
  CHECK(tri_report.shortest_word->composition().constant_target() == 2);
}
