#pragma once

// Finite directed multigraphs over sites {0,..,m-1}. The adjacency table is
// read column-wise: adjacency[y][x] counts roads x -> y, so column x lists
// the out-edges of x. Multiple edges are allowed and preserved.

#include <numeric>
#include <optional>
#include <queue>
#include <string>
#include <vector>

#include "roadcolor/errors.hpp"

namespace roadcolor {

class DirectedGraph {
 public:
  explicit DirectedGraph(std::vector<std::vector<long>> adjacency)
      : adj_(std::move(adjacency)) {
    const std::size_t m = adj_.size();
    if (m == 0) throw input_error("graph must have at least one site");
    for (const auto& row : adj_) {
      if (row.size() != m) throw input_error("adjacency table is not square");
      for (long v : row)
        if (v < 0) throw input_error("adjacency entries must be non-negative");
    }
  }

  int site_count() const { return static_cast<int>(adj_.size()); }

  // Number of roads x -> y.
  long roads(int y, int x) const { return adj_[y][x]; }

  long out_degree(int x) const {
    long d = 0;
    for (int y = 0; y < site_count(); ++y) d += adj_[y][x];
    return d;
  }

  const std::vector<std::vector<long>>& adjacency() const { return adj_; }

  std::vector<int> successors(int x) const {
    std::vector<int> out;
    for (int y = 0; y < site_count(); ++y)
      if (adj_[y][x] > 0) out.push_back(y);
    return out;
  }

  bool operator==(const DirectedGraph& other) const = default;

 private:
  std::vector<std::vector<long>> adj_;
};

// d if every site has exactly d >= 1 outgoing roads, absent otherwise.
inline std::optional<int> validate_outdegree(const DirectedGraph& g) {
  long d = g.out_degree(0);
  if (d < 1) return std::nullopt;
  for (int x = 1; x < g.site_count(); ++x)
    if (g.out_degree(x) != d) return std::nullopt;
  return static_cast<int>(d);
}

namespace detail {

inline std::vector<bool> reachable_from(const DirectedGraph& g, int start, bool reversed) {
  const int m = g.site_count();
  std::vector<bool> seen(m, false);
  std::queue<int> q;
  seen[start] = true;
  q.push(start);
  while (!q.empty()) {
    int x = q.front();
    q.pop();
    for (int y = 0; y < m; ++y) {
      bool edge = reversed ? g.roads(x, y) > 0 : g.roads(y, x) > 0;
      if (edge && !seen[y]) {
        seen[y] = true;
        q.push(y);
      }
    }
  }
  return seen;
}

// Boolean matrix product over the reachability semiring.
inline std::vector<std::vector<bool>> bool_multiply(const std::vector<std::vector<bool>>& a,
                                                    const std::vector<std::vector<bool>>& b) {
  const int m = static_cast<int>(a.size());
  std::vector<std::vector<bool>> c(m, std::vector<bool>(m, false));
  for (int i = 0; i < m; ++i)
    for (int k = 0; k < m; ++k)
      if (a[i][k])
        for (int j = 0; j < m; ++j)
          if (b[k][j]) c[i][j] = true;
  return c;
}

inline std::vector<std::vector<bool>> bool_adjacency(const DirectedGraph& g) {
  const int m = g.site_count();
  std::vector<std::vector<bool>> a(m, std::vector<bool>(m, false));
  for (int y = 0; y < m; ++y)
    for (int x = 0; x < m; ++x) a[y][x] = g.roads(y, x) > 0;
  return a;
}

}  // namespace detail

inline bool is_strongly_connected(const DirectedGraph& g) {
  auto fwd = detail::reachable_from(g, 0, false);
  auto bwd = detail::reachable_from(g, 0, true);
  for (int x = 0; x < g.site_count(); ++x)
    if (!fwd[x] || !bwd[x]) return false;
  return true;
}

// Gcd of the set of return times at a single site, scanned up to 2m. Under
// strong connectivity this equals the common period of every site.
inline int period(const DirectedGraph& g) {
  if (!is_strongly_connected(g))
    throw structure_error("period is only defined for strongly connected graphs");
  const int m = g.site_count();
  auto a = detail::bool_adjacency(g);
  auto power = a;
  int gcd = 0;
  for (int n = 1; n <= 2 * m; ++n) {
    if (power[0][0]) gcd = std::gcd(gcd, n);
    if (gcd == 1) return 1;
    power = detail::bool_multiply(power, a);
  }
  if (gcd == 0) throw internal_error("strongly connected graph with no return time");
  return gcd;
}

struct GraphProperties {
  std::optional<int> outdegree;             // present iff constant
  bool strongly_connected = false;
  std::optional<int> period;                // present iff strongly connected
  bool aperiodic = false;                   // period == 1
  std::optional<int> positivity_exponent;   // least r with A^r entrywise positive
};

// Constant outdegree + strong connectivity + aperiodicity is exactly
// primitivity of the adjacency matrix; the positivity exponent r is the
// least power with every entry >= 1. r is searched up to m^2 + m, which no
// primitive matrix of this size can exceed.
inline GraphProperties analyze_graph(const DirectedGraph& g) {
  GraphProperties props;
  props.outdegree = validate_outdegree(g);
  props.strongly_connected = is_strongly_connected(g);
  if (!props.strongly_connected) return props;
  props.period = period(g);
  props.aperiodic = (*props.period == 1);
  if (!props.aperiodic) return props;

  const int m = g.site_count();
  const int cap = m * m + m;
  auto a = detail::bool_adjacency(g);
  auto power = a;
  for (int r = 1; r <= cap; ++r) {
    bool all = true;
    for (int i = 0; i < m && all; ++i)
      for (int j = 0; j < m && all; ++j)
        if (!power[i][j]) all = false;
    if (all) {
      props.positivity_exponent = r;
      return props;
    }
    power = detail::bool_multiply(power, a);
  }
  throw internal_error("positivity exponent exceeded cap on an aperiodic graph");
}

inline bool is_primitive(const GraphProperties& p) {
  return p.outdegree.has_value() && p.strongly_connected && p.aperiodic;
}

}  // namespace roadcolor
