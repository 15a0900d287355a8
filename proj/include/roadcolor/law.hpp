#pragma once

// Exact probability layer: laws on mappings and on sites, the associated
// column-stochastic transition matrix, convolutions, the unique stationary
// law of a primitive coloring, block-mass uniformity checks, and the cyclic
// decomposition of the periodic case. All weights are exact rationals.

#include <algorithm>
#include <map>
#include <optional>
#include <queue>
#include <set>
#include <utility>
#include <vector>

#include "roadcolor/errors.hpp"
#include "roadcolor/graph.hpp"
#include "roadcolor/mapping.hpp"
#include "roadcolor/rational.hpp"
#include "roadcolor/sync.hpp"

namespace roadcolor {

// Probability law on self-maps of a fixed site set. Entries are kept sorted
// by mapping and merged, so equal mappings reached along different routes
// accumulate weight.
struct MappingLaw {
  int sites = 0;
  std::vector<std::pair<Mapping, Rat>> entries;

  static MappingLaw from_weighted(int m, std::vector<std::pair<Mapping, Rat>> weighted) {
    std::map<Mapping, Rat> acc;
    Rat total = 0;
    for (auto& [mapping, w] : weighted) {
      if (mapping.site_count() != m) throw input_error("law mixes site counts");
      if (w < 0) throw input_error("law weights must be non-negative");
      if (w == 0) continue;
      acc[mapping] += w;
      total += w;
    }
    if (total != 1) throw input_error("law weights must sum to 1");
    MappingLaw law;
    law.sites = m;
    law.entries.assign(acc.begin(), acc.end());
    return law;
  }

  std::vector<Mapping> support() const {
    std::vector<Mapping> out;
    out.reserve(entries.size());
    for (const auto& [mapping, w] : entries) out.push_back(mapping);
    return out;
  }
};

// Law put on the colors of a coloring; weights are per declared color and
// duplicate mappings merge.
inline MappingLaw law_from_coloring(const RoadColoring& coloring, const std::vector<Rat>& probs) {
  if (probs.size() != static_cast<std::size_t>(coloring.color_count()))
    throw input_error("need exactly one weight per color");
  for (const Rat& p : probs)
    if (p <= 0) throw input_error("color weights must be positive");
  std::vector<std::pair<Mapping, Rat>> weighted;
  for (int c = 0; c < coloring.color_count(); ++c) weighted.emplace_back(coloring.color(c), probs[c]);
  return MappingLaw::from_weighted(coloring.site_count(), std::move(weighted));
}

struct SiteLaw {
  std::vector<Rat> weights;

  explicit SiteLaw(std::vector<Rat> w) : weights(std::move(w)) {
    Rat total = 0;
    for (const Rat& v : weights) {
      if (v < 0) throw input_error("site law weights must be non-negative");
      total += v;
    }
    if (total != 1) throw input_error("site law weights must sum to 1");
  }

  int site_count() const { return static_cast<int>(weights.size()); }
  const Rat& operator()(int x) const { return weights[x]; }
  bool operator==(const SiteLaw&) const = default;
};

// Column-stochastic matrix: entries[y][x] is the mass moving x -> y.
struct StochasticMatrix {
  std::vector<std::vector<Rat>> entries;

  int site_count() const { return static_cast<int>(entries.size()); }

  void check_columns() const {
    for (int x = 0; x < site_count(); ++x) {
      Rat col = 0;
      for (int y = 0; y < site_count(); ++y) {
        if (entries[y][x] < 0) throw input_error("stochastic matrix entries must be >= 0");
        col += entries[y][x];
      }
      if (col != 1) throw input_error("stochastic matrix columns must sum to 1");
    }
  }

  SiteLaw apply(const SiteLaw& law) const {
    const int m = site_count();
    std::vector<Rat> out(m, 0);
    for (int x = 0; x < m; ++x)
      for (int y = 0; y < m; ++y) out[y] += entries[y][x] * law(x);
    return SiteLaw(std::move(out));
  }
};

// B(y,x) = total mass of mappings sending x to y.
inline StochasticMatrix transition_matrix(const MappingLaw& law) {
  const int m = law.sites;
  StochasticMatrix b;
  b.entries.assign(m, std::vector<Rat>(m, 0));
  for (const auto& [mapping, w] : law.entries)
    for (int x = 0; x < m; ++x) b.entries[mapping(x)][x] += w;
  b.check_columns();
  return b;
}

inline StochasticMatrix transition_matrix(const RoadColoring& coloring,
                                          const std::vector<Rat>& probs) {
  return transition_matrix(law_from_coloring(coloring, probs));
}

namespace detail {

// Exact solve of B u = u, sum(u) = 1 by Gauss-Jordan elimination. The rows
// of B - I sum to zero, so replacing the last row with the normalization
// keeps the system square and, under primitivity, nonsingular.
inline SiteLaw solve_stationary(const StochasticMatrix& b) {
  const int m = b.site_count();
  std::vector<std::vector<Rat>> a(m, std::vector<Rat>(m + 1, 0));
  for (int y = 0; y < m - 1; ++y) {
    for (int x = 0; x < m; ++x) a[y][x] = b.entries[y][x];
    a[y][y] -= 1;
  }
  for (int x = 0; x < m; ++x) a[m - 1][x] = 1;
  a[m - 1][m] = 1;

  for (int col = 0; col < m; ++col) {
    int pivot = -1;
    for (int row = col; row < m; ++row)
      if (a[row][col] != 0) {
        pivot = row;
        break;
      }
    if (pivot < 0) throw structure_error("stationary system is singular");
    std::swap(a[col], a[pivot]);
    const Rat inv = a[col][col];
    for (int j = col; j <= m; ++j) a[col][j] /= inv;
    for (int row = 0; row < m; ++row) {
      if (row == col || a[row][col] == 0) continue;
      const Rat f = a[row][col];
      for (int j = col; j <= m; ++j) a[row][j] -= f * a[col][j];
    }
  }
  std::vector<Rat> u(m);
  for (int y = 0; y < m; ++y) u[y] = a[y][m];
  return SiteLaw(std::move(u));
}

}  // namespace detail

// The unique site law with law * lambda = lambda. Requires the induced graph
// of the support to be primitive, which is what guarantees uniqueness. The
// fixed-point identity is re-checked exactly on the result.
inline SiteLaw stationary_law(const MappingLaw& law) {
  const DirectedGraph g = induced_graph(law.support());
  if (!is_primitive(analyze_graph(g)))
    throw structure_error(
        "stationary law needs a constant-outdegree, strongly connected, aperiodic graph");
  const StochasticMatrix b = transition_matrix(law);
  SiteLaw lambda = detail::solve_stationary(b);
  if (!(b.apply(lambda) == lambda)) throw internal_error("stationary law is not a fixed point");
  for (const Rat& w : lambda.weights)
    if (w <= 0) throw internal_error("stationary law must be strictly positive");
  return lambda;
}

inline SiteLaw stationary_law(const RoadColoring& coloring, const std::vector<Rat>& probs) {
  return stationary_law(law_from_coloring(coloring, probs));
}

// Pushforward of the product law under composition; the left factor acts
// last: (law1 * law2)(sigma) sums over sigma1 sigma2 = sigma.
inline MappingLaw convolve(const MappingLaw& law1, const MappingLaw& law2) {
  if (law1.sites != law2.sites) throw input_error("convolution mixes site counts");
  std::vector<std::pair<Mapping, Rat>> weighted;
  for (const auto& [s1, w1] : law1.entries)
    for (const auto& [s2, w2] : law2.entries) weighted.emplace_back(compose(s1, s2), w1 * w2);
  return MappingLaw::from_weighted(law1.sites, std::move(weighted));
}

// (law * site_law)(y) = sum of law(sigma) site_law(x) over sigma x = y.
inline SiteLaw convolve(const MappingLaw& law, const SiteLaw& site_law) {
  if (law.sites != site_law.site_count()) throw input_error("convolution mixes site counts");
  std::vector<Rat> out(law.sites, 0);
  for (const auto& [mapping, w] : law.entries)
    for (int x = 0; x < law.sites; ++x) out[mapping(x)] += w * site_law(x);
  return SiteLaw(std::move(out));
}

// n-fold convolution power; the support lives inside the finite semigroup
// generated by the support of the law.
inline MappingLaw law_power(const MappingLaw& law, int n) {
  if (n < 1) throw input_error("law_power needs n >= 1");
  MappingLaw acc = law;
  for (int i = 2; i <= n; ++i) acc = convolve(acc, law);
  return acc;
}

struct UniformityCheck {
  bool uniform = false;
  std::vector<Rat> block_masses;
};

// Exact test that every block carries mass 1/(number of blocks). The blocks
// must partition the site set.
inline UniformityCheck check_uniformity(const SiteLaw& law,
                                        const std::vector<std::set<int>>& blocks) {
  const int m = law.site_count();
  std::vector<bool> seen(m, false);
  if (blocks.empty()) throw input_error("partition must have at least one block");
  UniformityCheck out;
  for (const auto& block : blocks) {
    Rat mass = 0;
    for (int x : block) {
      if (x < 0 || x >= m) throw input_error("partition site out of range");
      if (seen[x]) throw input_error("partition blocks overlap");
      seen[x] = true;
      mass += law(x);
    }
    out.block_masses.push_back(mass);
  }
  for (int x = 0; x < m; ++x)
    if (!seen[x]) throw input_error("partition does not cover every site");
  const Rat expected = Rat(1, static_cast<long>(blocks.size()));
  out.uniform = std::all_of(out.block_masses.begin(), out.block_masses.end(),
                            [&](const Rat& v) { return v == expected; });
  return out;
}

struct CyclicDecomposition {
  int period = 0;
  std::vector<std::vector<int>> parts;     // parts[i] sorted; part 0 contains site 0
  std::vector<SiteLaw> part_laws;          // on the full site set, support = part
  std::vector<MappingLaw> restricted_laws; // on self-maps of each part (re-indexed)
  std::vector<std::vector<int>> part_site_index; // part local index -> global site
};

namespace detail {

inline std::vector<int> bfs_distance(const DirectedGraph& g, int start) {
  std::vector<int> dist(g.site_count(), -1);
  std::queue<int> q;
  dist[start] = 0;
  q.push(start);
  while (!q.empty()) {
    int x = q.front();
    q.pop();
    for (int y : g.successors(x))
      if (dist[y] < 0) {
        dist[y] = dist[x] + 1;
        q.push(y);
      }
  }
  return dist;
}

}  // namespace detail

// Cyclic parts of a strongly connected graph with period d >= 2, indexed so
// that part 0 contains site 0 and every road leaves part i for part i+1
// (mod d). Per-part laws are the stationary laws of the d-step chain
// restricted to each part.
inline CyclicDecomposition cyclic_parts(const DirectedGraph& g, const MappingLaw& mu) {
  if (induced_graph(mu.support()).adjacency() != g.adjacency())
    throw input_error("law does not induce the given graph");
  if (!is_strongly_connected(g)) throw structure_error("cyclic parts need strong connectivity");
  const int d = period(g);
  if (d < 2)
    throw structure_error("graph is aperiodic: use the stationary law directly");
  const int m = g.site_count();
  if (m > 8) throw structure_error("cyclic decomposition is capped at 8 sites");

  CyclicDecomposition out;
  out.period = d;
  out.parts.assign(d, {});
  const auto dist = detail::bfs_distance(g, 0);
  for (int x = 0; x < m; ++x) out.parts[dist[x] % d].push_back(x);
  // Every road must advance the part index by one; this is a structural
  // consequence of periodicity, so a violation is a bug.
  for (int x = 0; x < m; ++x)
    for (int y : g.successors(x))
      if ((dist[x] + 1 - dist[y]) % d != 0)
        throw internal_error("road does not advance the cyclic part index");

  const MappingLaw mu_d = law_power(mu, d);
  for (int i = 0; i < d; ++i) {
    const auto& part = out.parts[i];
    std::vector<int> local_of(m, -1);
    for (std::size_t j = 0; j < part.size(); ++j) local_of[part[j]] = static_cast<int>(j);

    Rat kept = 0;
    std::vector<std::pair<Mapping, Rat>> weighted;
    for (const auto& [mapping, w] : mu_d.entries) {
      bool preserves = true;
      std::vector<int> local_img(part.size());
      for (std::size_t j = 0; j < part.size() && preserves; ++j) {
        int target = mapping(part[j]);
        if (local_of[target] < 0) preserves = false;
        else local_img[j] = local_of[target];
      }
      if (!preserves) continue;
      kept += w;
      weighted.emplace_back(Mapping(std::move(local_img)), w);
    }
    if (kept == 0) throw internal_error("d-step law puts no mass on part-preserving maps");
    for (auto& [mapping, w] : weighted) w /= kept;
    MappingLaw restricted = MappingLaw::from_weighted(static_cast<int>(part.size()), weighted);

    SiteLaw local = stationary_law(restricted);
    std::vector<Rat> global(m, 0);
    for (std::size_t j = 0; j < part.size(); ++j) global[part[j]] = local(static_cast<int>(j));
    out.part_laws.push_back(SiteLaw(std::move(global)));
    out.restricted_laws.push_back(std::move(restricted));
    out.part_site_index.push_back(part);
  }
  return out;
}

struct PartVerdict {
  int part = 0;
  bool strong = false;                 // support of the d-step part law synchronizes
  std::optional<Word> reset_word;      // on the part's local sites
};

// Per-part strongness in the periodic case: the walk restricted to a part
// is strong exactly when the support of the d-step restricted law is a
// synchronizing coloring of that part.
inline std::vector<PartVerdict> periodic_strongness(const DirectedGraph& g, const MappingLaw& mu) {
  const CyclicDecomposition dec = cyclic_parts(g, mu);
  std::vector<PartVerdict> out;
  for (int i = 0; i < dec.period; ++i) {
    PartVerdict v;
    v.part = i;
    RoadColoring support = RoadColoring::from_colors(dec.restricted_laws[i].support());
    v.reset_word = shortest_synchronizing_word(support);
    v.strong = v.reset_word.has_value();
    out.push_back(std::move(v));
  }
  return out;
}

}  // namespace roadcolor
