#pragma once

// Self-maps of the site set, words over them, and road colorings. A Mapping
// is identified with the 1-out adjacency matrix that has a single 1 per
// column; a road coloring is a family of d mappings whose matrices sum to
// the adjacency table of a d-out graph.
//
// Word letters are stored newest-first: letters[0] is applied last and
// letters.back() is applied first. Every operation that touches a word
// documents the application order to keep the composition direction honest.

#include <algorithm>
#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "roadcolor/errors.hpp"
#include "roadcolor/graph.hpp"

namespace roadcolor {

class Mapping {
 public:
  explicit Mapping(std::vector<int> image) : image_(std::move(image)) {
    const int m = static_cast<int>(image_.size());
    if (m == 0) throw input_error("mapping must act on at least one site");
    for (int v : image_)
      if (v < 0 || v >= m) throw input_error("mapping image out of range");
  }

  static Mapping identity(int m) {
    std::vector<int> img(m);
    for (int x = 0; x < m; ++x) img[x] = x;
    return Mapping(std::move(img));
  }

  static Mapping constant(int m, int target) {
    if (target < 0 || target >= m) throw input_error("constant target out of range");
    return Mapping(std::vector<int>(m, target));
  }

  int site_count() const { return static_cast<int>(image_.size()); }
  int operator()(int x) const { return image_[x]; }
  const std::vector<int>& image() const { return image_; }

  bool is_permutation() const {
    std::vector<bool> hit(image_.size(), false);
    for (int v : image_) {
      if (hit[v]) return false;
      hit[v] = true;
    }
    return true;
  }

  // The target i if this is the constant map onto i, absent otherwise.
  std::optional<int> constant_target() const {
    for (int v : image_)
      if (v != image_[0]) return std::nullopt;
    return image_[0];
  }

  // Image of a subset given as a bitmask.
  std::uint32_t apply(std::uint32_t subset) const {
    std::uint32_t out = 0;
    while (subset) {
      int x = std::countr_zero(subset);
      subset &= subset - 1;
      out |= std::uint32_t{1} << image_[x];
    }
    return out;
  }

  std::set<int> apply(const std::set<int>& subset) const {
    std::set<int> out;
    for (int x : subset) out.insert(image_[x]);
    return out;
  }

  auto operator<=>(const Mapping&) const = default;

 private:
  std::vector<int> image_;
};

// (outer inner)(x) = outer(inner(x)); inner acts first.
inline Mapping compose(const Mapping& outer, const Mapping& inner) {
  if (outer.site_count() != inner.site_count())
    throw input_error("cannot compose mappings of different site counts");
  std::vector<int> img(outer.site_count());
  for (int x = 0; x < outer.site_count(); ++x) img[x] = outer(inner(x));
  return Mapping(std::move(img));
}

// A word (sigma_p, ..., sigma_1); letters[0] = sigma_p is applied last. The
// parallel `colors` vector carries the color index of each letter when the
// word was built from a coloring (empty for free words).
struct Word {
  std::vector<Mapping> letters;
  std::vector<int> colors;

  int length() const { return static_cast<int>(letters.size()); }

  // sigma_p ... sigma_1 with sigma_1 = letters.back() applied first.
  Mapping composition() const {
    if (letters.empty()) throw input_error("words are non-empty");
    Mapping acc = letters.back();
    for (int i = static_cast<int>(letters.size()) - 2; i >= 0; --i)
      acc = compose(letters[i], acc);
    return acc;
  }

  // Letters in the order they are applied (sigma_1 first).
  std::vector<Mapping> applied_order() const {
    return {letters.rbegin(), letters.rend()};
  }
  std::vector<int> colors_applied_order() const {
    return {colors.rbegin(), colors.rend()};
  }
};

// Image of a subset under the word, first letter applied first.
inline std::set<int> apply_word(const Word& w, const std::set<int>& subset) {
  std::set<int> cur = subset;
  for (auto it = w.letters.rbegin(); it != w.letters.rend(); ++it) cur = it->apply(cur);
  return cur;
}

inline std::uint32_t apply_word(const Word& w, std::uint32_t subset) {
  for (auto it = w.letters.rbegin(); it != w.letters.rend(); ++it) subset = it->apply(subset);
  return subset;
}

// Adjacency table obtained by summing the 1-out matrices of the colors.
inline DirectedGraph induced_graph(const std::vector<Mapping>& colors) {
  if (colors.empty()) throw input_error("a road coloring needs at least one color");
  const int m = colors.front().site_count();
  std::vector<std::vector<long>> adj(m, std::vector<long>(m, 0));
  for (const Mapping& c : colors) {
    if (c.site_count() != m) throw input_error("colors act on different site counts");
    for (int x = 0; x < m; ++x) adj[c(x)][x] += 1;
  }
  return DirectedGraph(std::move(adj));
}

class RoadColoring {
 public:
  static RoadColoring from_colors(std::vector<Mapping> colors) {
    DirectedGraph g = induced_graph(colors);
    return RoadColoring(std::move(colors), std::move(g));
  }

  const std::vector<Mapping>& colors() const { return colors_; }
  const Mapping& color(int c) const { return colors_[c]; }
  const DirectedGraph& graph() const { return graph_; }
  int color_count() const { return static_cast<int>(colors_.size()); }
  int site_count() const { return graph_.site_count(); }

  // Word from color indices listed newest-first (the stored order).
  Word word(const std::vector<int>& color_indices) const {
    Word w;
    for (int c : color_indices) {
      if (c < 0 || c >= color_count()) throw input_error("color index out of range");
      w.letters.push_back(colors_[c]);
      w.colors.push_back(c);
    }
    if (w.letters.empty()) throw input_error("words are non-empty");
    return w;
  }

  // Word from color indices listed in application order (first applied first).
  Word word_applied(std::vector<int> color_indices) const {
    std::reverse(color_indices.begin(), color_indices.end());
    return word(color_indices);
  }

  bool operator==(const RoadColoring& other) const { return colors_ == other.colors_; }

 private:
  RoadColoring(std::vector<Mapping> colors, DirectedGraph g)
      : colors_(std::move(colors)), graph_(std::move(g)) {}

  std::vector<Mapping> colors_;
  DirectedGraph graph_;
};

namespace detail {

// Distinct arrangements of the outgoing-target multiset of one site, sorted.
inline std::vector<std::vector<int>> distinct_arrangements(std::vector<int> targets) {
  std::sort(targets.begin(), targets.end());
  std::vector<std::vector<int>> out;
  do {
    out.push_back(targets);
  } while (std::next_permutation(targets.begin(), targets.end()));
  return out;
}

}  // namespace detail

// Every road coloring of a d-out graph, up to color-label order. Colorings
// are canonicalized by sorting their image sequences lexicographically and
// the list itself is sorted, so the enumeration order is stable. Parallel
// edges to the same target are indistinguishable and contribute a single
// arrangement.
inline std::vector<RoadColoring> decompose_colorings(const DirectedGraph& g) {
  auto d = validate_outdegree(g);
  if (!d) throw structure_error("graph does not have constant outdegree");
  const int m = g.site_count();

  std::vector<std::vector<std::vector<int>>> site_options(m);
  double total = 1.0;
  for (int x = 0; x < m; ++x) {
    std::vector<int> targets;
    for (int y = 0; y < m; ++y)
      for (long k = 0; k < g.roads(y, x); ++k) targets.push_back(y);
    site_options[x] = detail::distinct_arrangements(std::move(targets));
    total *= static_cast<double>(site_options[x].size());
    if (total > (1 << 20))
      throw structure_error("coloring enumeration too large for exhaustive scan");
  }

  std::set<std::vector<std::vector<int>>> canonical;
  std::vector<std::size_t> pick(m, 0);
  for (;;) {
    std::vector<std::vector<int>> images(*d, std::vector<int>(m));
    for (int x = 0; x < m; ++x)
      for (int c = 0; c < *d; ++c) images[c][x] = site_options[x][pick[x]][c];
    std::sort(images.begin(), images.end());
    canonical.insert(std::move(images));

    int x = m - 1;
    while (x >= 0 && ++pick[x] == site_options[x].size()) pick[x--] = 0;
    if (x < 0) break;
  }

  std::vector<RoadColoring> out;
  out.reserve(canonical.size());
  for (const auto& images : canonical) {
    std::vector<Mapping> colors;
    colors.reserve(images.size());
    for (const auto& img : images) colors.emplace_back(img);
    out.push_back(RoadColoring::from_colors(std::move(colors)));
  }
  return out;
}

// Number of ordered color assignments of a d-out graph (colorings counted
// with color labels); used by tests and capacity checks.
inline long ordered_coloring_count(const DirectedGraph& g) {
  if (!validate_outdegree(g)) throw structure_error("graph does not have constant outdegree");
  long total = 1;
  for (int x = 0; x < g.site_count(); ++x) {
    std::vector<int> targets;
    for (int y = 0; y < g.site_count(); ++y)
      for (long k = 0; k < g.roads(y, x); ++k) targets.push_back(y);
    total *= static_cast<long>(detail::distinct_arrangements(std::move(targets)).size());
  }
  return total;
}

}  // namespace roadcolor
