#pragma once

// Synchronization analysis of a road coloring: exact minimal image rank over
// all words, shortest reset words, F-cliques, subset classification, the
// partition induced by a word whose image is an F-clique, and no-overlap
// word padding. Everything is computed by exhaustive search over the 2^m
// image subsets, so results are exact; the site cap keeps that tractable.
//
// Canonical word tie-break: among all shortest words attaining a target,
// the one whose color tuple read newest-first (last-applied letter first)
// is lexicographically smallest. Fixture outputs depend on this order.

#include <bit>
#include <cstdint>
#include <optional>
#include <set>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "roadcolor/errors.hpp"
#include "roadcolor/mapping.hpp"

namespace roadcolor {

namespace detail {

inline std::uint32_t mask_of(const std::set<int>& subset, int m) {
  std::uint32_t mask = 0;
  for (int x : subset) {
    if (x < 0 || x >= m) throw input_error("site out of range in subset");
    mask |= std::uint32_t{1} << x;
  }
  return mask;
}

inline std::set<int> set_of(std::uint32_t mask) {
  std::set<int> out;
  while (mask) {
    out.insert(std::countr_zero(mask));
    mask &= mask - 1;
  }
  return out;
}

inline std::uint32_t full_mask(int m) {
  return m == 32 ? ~std::uint32_t{0} : (std::uint32_t{1} << m) - 1;
}

// Breadth-first exploration of every image of the full site set under
// non-empty words. dist[S] = least word length realizing S as an image.
struct ImageBfs {
  explicit ImageBfs(const RoadColoring& coloring) : c(&coloring) {
    require_within_site_cap(coloring.site_count(), "image search");
    const std::uint32_t full = full_mask(coloring.site_count());
    std::vector<std::uint32_t> frontier{full};
    int depth = 0;
    while (!frontier.empty()) {
      ++depth;
      std::vector<std::uint32_t> next;
      for (std::uint32_t s : frontier) {
        for (const Mapping& color : coloring.colors()) {
          std::uint32_t t = color.apply(s);
          if (dist.emplace(t, depth).second) next.push_back(t);
        }
      }
      frontier = std::move(next);
    }
    min_rank = coloring.site_count();
    for (const auto& [s, d] : dist) min_rank = std::min(min_rank, std::popcount(s));
    min_rank_depth = no_depth;
    singleton_depth = no_depth;
    for (const auto& [s, d] : dist) {
      if (std::popcount(s) == min_rank) min_rank_depth = std::min(min_rank_depth, d);
      if (std::popcount(s) == 1) singleton_depth = std::min(singleton_depth, d);
    }
  }

  static constexpr int no_depth = 1 << 30;

  const RoadColoring* c;
  std::unordered_map<std::uint32_t, int> dist;
  int min_rank = 0;
  int min_rank_depth = no_depth;
  int singleton_depth = no_depth;
};

// The canonical length-L word whose image of V has the target cardinality.
// Letters are fixed newest-first; at each position the smallest feasible
// color is chosen against the set of subsets reachable by the remaining
// prefix, which realizes the documented tie-break.
inline Word canonical_word(const RoadColoring& coloring, int target_card, int length) {
  const std::uint32_t full = full_mask(coloring.site_count());
  std::vector<std::unordered_set<std::uint32_t>> layers(length);
  layers[0] = {full};
  for (int j = 1; j < length; ++j)
    for (std::uint32_t s : layers[j - 1])
      for (const Mapping& color : coloring.colors()) layers[j].insert(color.apply(s));

  Mapping suffix = Mapping::identity(coloring.site_count());
  std::vector<int> colors_paper;
  for (int j = length; j >= 1; --j) {
    bool chosen = false;
    for (int c = 0; c < coloring.color_count() && !chosen; ++c) {
      Mapping candidate = compose(suffix, coloring.color(c));
      for (std::uint32_t s : layers[j - 1]) {
        if (std::popcount(candidate.apply(s)) == target_card) {
          colors_paper.push_back(c);
          suffix = std::move(candidate);
          chosen = true;
          break;
        }
      }
    }
    if (!chosen) throw internal_error("canonical word extraction lost feasibility");
  }
  return coloring.word(colors_paper);
}

// sync[x*m+y]: the pair {x,y} is collapsible by some word. Fixed point of
// backward propagation from the diagonal.
inline std::vector<bool> synchronizing_pairs(const RoadColoring& coloring) {
  const int m = coloring.site_count();
  std::vector<bool> sync(static_cast<std::size_t>(m) * m, false);
  for (int x = 0; x < m; ++x) sync[static_cast<std::size_t>(x) * m + x] = true;
  bool changed = true;
  while (changed) {
    changed = false;
    for (int x = 0; x < m; ++x)
      for (int y = x + 1; y < m; ++y) {
        if (sync[static_cast<std::size_t>(x) * m + y]) continue;
        for (const Mapping& color : coloring.colors()) {
          if (sync[static_cast<std::size_t>(color(x)) * m + color(y)]) {
            sync[static_cast<std::size_t>(x) * m + y] = true;
            sync[static_cast<std::size_t>(y) * m + x] = true;
            changed = true;
            break;
          }
        }
      }
  }
  return sync;
}

inline bool is_deadlock_mask(std::uint32_t mask, const std::vector<bool>& pair_sync, int m) {
  auto sites = set_of(mask);
  for (int x : sites)
    for (int y : sites)
      if (x < y && pair_sync[static_cast<std::size_t>(x) * m + y]) return false;
  return true;
}

// True iff some word collapses the subset to a singleton.
inline bool synchronizable_mask(const RoadColoring& coloring, std::uint32_t start) {
  if (std::popcount(start) == 1) return true;
  std::unordered_set<std::uint32_t> seen{start};
  std::vector<std::uint32_t> frontier{start};
  while (!frontier.empty()) {
    std::vector<std::uint32_t> next;
    for (std::uint32_t s : frontier)
      for (const Mapping& color : coloring.colors()) {
        std::uint32_t t = color.apply(s);
        if (std::popcount(t) == 1) return true;
        if (seen.insert(t).second) next.push_back(t);
      }
    frontier = std::move(next);
  }
  return false;
}

}  // namespace detail

// Shortest word collapsing the whole site set, absent if none exists.
inline std::optional<Word> shortest_synchronizing_word(const RoadColoring& coloring) {
  detail::ImageBfs bfs(coloring);
  if (bfs.singleton_depth == detail::ImageBfs::no_depth) return std::nullopt;
  return detail::canonical_word(coloring, 1, bfs.singleton_depth);
}

// Exact minimum of #(image of V) over all words, with a shortest witness.
inline std::pair<int, Word> min_image_rank(const RoadColoring& coloring) {
  detail::ImageBfs bfs(coloring);
  return {bfs.min_rank, detail::canonical_word(coloring, bfs.min_rank, bfs.min_rank_depth)};
}

struct SubsetClassification {
  bool synchronizing = false;
  bool deadlock = false;
  bool stable = false;

  // Display label; stable implies synchronizing, deadlock excludes it.
  std::string label() const {
    if (stable) return "stable";
    if (synchronizing) return "synchronizing-but-non-stable";
    if (deadlock) return "deadlock";
    return "non-synchronizing";
  }
};

inline SubsetClassification classify_subset(const RoadColoring& coloring,
                                            const std::set<int>& subset) {
  if (subset.empty()) throw input_error("classify_subset needs a non-empty subset");
  const int m = coloring.site_count();
  require_within_site_cap(m, "subset classification");
  const std::uint32_t mask = detail::mask_of(subset, m);

  SubsetClassification out;
  out.synchronizing = detail::synchronizable_mask(coloring, mask);
  auto pair_sync = detail::synchronizing_pairs(coloring);
  out.deadlock = subset.size() >= 2 && detail::is_deadlock_mask(mask, pair_sync, m);

  if (out.synchronizing) {
    // Stability: every image of the subset, the subset itself included,
    // must stay synchronizable.
    out.stable = true;
    std::unordered_set<std::uint32_t> seen{mask};
    std::vector<std::uint32_t> frontier{mask};
    while (!frontier.empty() && out.stable) {
      std::vector<std::uint32_t> next;
      for (std::uint32_t s : frontier) {
        if (!detail::synchronizable_mask(coloring, s)) {
          out.stable = false;
          break;
        }
        for (const Mapping& color : coloring.colors()) {
          std::uint32_t t = color.apply(s);
          if (seen.insert(t).second) next.push_back(t);
        }
      }
      frontier = std::move(next);
    }
  }
  return out;
}

// All images of the full site set with minimal cardinality. Each one is
// verified to be a deadlock, which is what makes it an F-clique.
inline std::vector<std::set<int>> f_cliques(const RoadColoring& coloring) {
  detail::ImageBfs bfs(coloring);
  auto pair_sync = detail::synchronizing_pairs(coloring);
  std::vector<std::set<int>> out;
  for (const auto& [mask, d] : bfs.dist) {
    if (std::popcount(mask) != bfs.min_rank) continue;
    if (std::popcount(mask) >= 2 &&
        !detail::is_deadlock_mask(mask, pair_sync, coloring.site_count()))
      throw internal_error("minimal-rank image is not a deadlock");
    out.push_back(detail::set_of(mask));
  }
  std::sort(out.begin(), out.end());
  return out;
}

struct InducedPartition {
  std::vector<int> anchors;              // image sites in increasing order
  std::vector<std::set<int>> blocks;     // blocks[i] = preimage of anchors[i]
  std::vector<int> block_of;             // site -> block index
};

// Partition of the site set by the fibers of the word's composition. The
// word's image must be an F-clique; anchors are enumerated in increasing
// site order so reports are deterministic.
inline InducedPartition partition_from_word(const RoadColoring& coloring, const Word& w) {
  const int m = coloring.site_count();
  detail::ImageBfs bfs(coloring);
  const std::uint32_t image = apply_word(w, detail::full_mask(m));
  if (std::popcount(image) != bfs.min_rank)
    throw structure_error("word image does not have minimal rank, not an F-clique");
  auto pair_sync = detail::synchronizing_pairs(coloring);
  if (std::popcount(image) >= 2 && !detail::is_deadlock_mask(image, pair_sync, m))
    throw structure_error("word image is not a deadlock, not an F-clique");

  InducedPartition part;
  for (int x : detail::set_of(image)) part.anchors.push_back(x);
  part.blocks.resize(part.anchors.size());
  part.block_of.assign(m, -1);
  const Mapping comp = w.composition();
  for (int x = 0; x < m; ++x) {
    auto it = std::find(part.anchors.begin(), part.anchors.end(), comp(x));
    if (it == part.anchors.end()) throw internal_error("composition leaves its own image");
    int i = static_cast<int>(it - part.anchors.begin());
    part.blocks[i].insert(x);
    part.block_of[x] = i;
  }
  return part;
}

// No proper border of length p-1 down to p-r: the word's head never
// re-matches its own tail in that range, which keeps occurrence stopping
// times cleanly separated.
inline bool satisfies_no_overlap(const Word& w, int r) {
  const int p = w.length();
  if (p <= r) return false;
  for (int q = p - r; q <= p - 1; ++q) {
    bool equal = true;
    for (int i = 0; i < q && equal; ++i)
      if (!(w.letters[i] == w.letters[p - q + i])) equal = false;
    if (equal) return false;
  }
  return true;
}

namespace detail {

inline std::vector<int> resolve_colors(const RoadColoring& coloring, const Word& w) {
  if (static_cast<int>(w.colors.size()) == w.length()) return w.colors;
  std::vector<int> out;
  for (const Mapping& letter : w.letters) {
    int found = -1;
    for (int c = 0; c < coloring.color_count(); ++c)
      if (coloring.color(c) == letter) {
        if (found >= 0) throw input_error("ambiguous color for a word letter");
        found = c;
      }
    if (found < 0) throw input_error("word letter is not a color of this coloring");
    out.push_back(found);
  }
  return out;
}

}  // namespace detail

// Extends a word by r copies of one color followed by r copies of a second,
// distinct color (both on the newest side). The result has length p + 2r and
// always satisfies the no-overlap condition, which is asserted.
inline Word pad_word(const Word& w, const RoadColoring& coloring, int r) {
  if (r < 1) throw input_error("padding length must be positive");
  int first = 0;
  int second = -1;
  for (int c = 1; c < coloring.color_count(); ++c)
    if (!(coloring.color(c) == coloring.color(first))) {
      second = c;
      break;
    }
  if (second < 0)
    throw unsupported_error("padding needs at least two distinct colors");

  std::vector<int> colors_paper;
  colors_paper.insert(colors_paper.end(), r, second);
  colors_paper.insert(colors_paper.end(), r, first);
  auto original = detail::resolve_colors(coloring, w);
  colors_paper.insert(colors_paper.end(), original.begin(), original.end());
  Word padded = coloring.word(colors_paper);
  if (!satisfies_no_overlap(padded, r))
    throw internal_error("padded word violates the no-overlap condition");
  return padded;
}

// First synchronizing coloring in canonical enumeration order, absent when
// none exists. Deliberately a brute-force scan over all colorings: it
// exercises the existence statement, not a constructive algorithm.
inline std::optional<RoadColoring> find_synchronizing_coloring(const DirectedGraph& g) {
  require_within_site_cap(g.site_count(), "coloring search");
  for (const RoadColoring& coloring : decompose_colorings(g)) {
    detail::ImageBfs bfs(coloring);
    if (bfs.singleton_depth != detail::ImageBfs::no_depth) return coloring;
  }
  return std::nullopt;
}

struct SyncReport {
  bool synchronizing = false;
  std::optional<Word> shortest_word;
  int min_rank = 0;
  Word witness_word;
  std::vector<std::set<int>> clique_list;
  InducedPartition partition;
};

inline SyncReport analyze_sync(const RoadColoring& coloring) {
  detail::ImageBfs bfs(coloring);
  SyncReport report;
  report.min_rank = bfs.min_rank;
  report.synchronizing = (bfs.min_rank == 1);
  report.witness_word = detail::canonical_word(coloring, bfs.min_rank, bfs.min_rank_depth);
  if (report.synchronizing) report.shortest_word = report.witness_word;
  report.clique_list = f_cliques(coloring);
  report.partition = partition_from_word(coloring, report.witness_word);
  return report;
}

}  // namespace roadcolor
