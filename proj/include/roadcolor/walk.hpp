#pragma once

// Seeded simulation of the color-driven walk and the machinery around it:
// reconstruction of the state from the color history via a reset word,
// newest-first pattern stopping times, the induced permutation walk on the
// partition blocks, Monte-Carlo estimation of the induced step law, and the
// statistical evidence commands for the non-synchronizing case.
//
// Two-sided time is emulated by a forward window whose initial state is
// drawn from the exact stationary law; stationarity makes such a window
// distributionally faithful to a walk that has been running forever.
//
// Time convention inside a trace: states[k] = X_k for k = 0..steps and
// noise[k-1] = color of step k for k = 1..steps. A pattern occurrence "at l"
// means steps l+1..l+p carry the word's letters in application order, so
// the composition acts on X_l.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "roadcolor/errors.hpp"
#include "roadcolor/law.hpp"
#include "roadcolor/mapping.hpp"
#include "roadcolor/rng.hpp"
#include "roadcolor/stats.hpp"
#include "roadcolor/sync.hpp"

namespace roadcolor {

struct WalkTrace {
  std::int64_t steps = 0;
  std::vector<int> noise;   // color index per step, steps entries
  std::vector<int> states;  // sites, steps + 1 entries
  std::uint64_t seed = 0;
  std::vector<Rat> law_used;  // stationary law of the initial state
};

inline WalkTrace simulate_walk(const RoadColoring& coloring, const std::vector<Rat>& probs,
                               std::int64_t steps, std::uint64_t seed) {
  if (steps < 1) throw input_error("simulation needs at least one step");
  const SiteLaw lambda = stationary_law(coloring, probs);
  const RationalSampler site_sampler(lambda.weights);
  const RationalSampler color_sampler(probs);

  WalkTrace trace;
  trace.steps = steps;
  trace.seed = seed;
  trace.law_used = lambda.weights;
  trace.noise.reserve(steps);
  trace.states.reserve(steps + 1);

  CounterRng rng(seed);
  int x = site_sampler.draw(rng);
  trace.states.push_back(x);
  for (std::int64_t k = 1; k <= steps; ++k) {
    const int c = color_sampler.draw(rng);
    x = coloring.color(c)(x);
    trace.noise.push_back(c);
    trace.states.push_back(x);
  }
  for (std::int64_t k = 1; k <= steps; ++k)
    if (trace.states[k] != coloring.color(trace.noise[k - 1])(trace.states[k - 1]))
      throw internal_error("trace violates the one-step evolution");
  return trace;
}

namespace detail {

// Online matcher for a word against a color stream. Letters are compared as
// mappings, so colors that share a mapping both match the letter.
struct WordMatcher {
  int length = 0;
  std::vector<std::vector<bool>> match;  // [position][color]
  std::vector<int> fail;

  WordMatcher(const RoadColoring& coloring, const std::vector<Mapping>& letters_in_order) {
    length = static_cast<int>(letters_in_order.size());
    if (length == 0) throw input_error("words are non-empty");
    match.assign(length, std::vector<bool>(coloring.color_count(), false));
    for (int i = 0; i < length; ++i)
      for (int c = 0; c < coloring.color_count(); ++c)
        match[i][c] = (coloring.color(c) == letters_in_order[i]);
    fail.assign(length, 0);
    for (int i = 1; i < length; ++i) {
      int j = fail[i - 1];
      while (j > 0 && !(letters_in_order[i] == letters_in_order[j])) j = fail[j - 1];
      if (letters_in_order[i] == letters_in_order[j]) ++j;
      fail[i] = j;
    }
  }

  // Feed one color; the returned state equals `length` exactly when an
  // occurrence ends at the fed position. Occurrences may overlap.
  int advance(int state, int color) const {
    if (state == length) state = fail[state - 1];
    while (state > 0 && !match[state][color]) state = fail[state - 1];
    if (match[state][color]) ++state;
    return state;
  }

  bool matches_at(const std::vector<int>& noise, std::int64_t start) const {
    if (start < 0 || start + length > static_cast<std::int64_t>(noise.size())) return false;
    for (int i = 0; i < length; ++i)
      if (!match[i][noise[start + i]]) return false;
    return true;
  }
};

}  // namespace detail

// State at time k read off the colors alone: the latest occurrence of the
// reset word ending at or before k pins the state to the word's constant
// target, and the trailing colors push it forward. Absent when no
// occurrence fits in the window. The word must compose to a constant map.
inline std::optional<int> reconstruct_strong(const std::vector<int>& noise,
                                             const RoadColoring& coloring, const Word& w,
                                             std::int64_t k) {
  const auto target = w.composition().constant_target();
  if (!target) throw structure_error("reconstruction needs a word composing to a constant map");
  const int p = w.length();
  if (k < 0 || k > static_cast<std::int64_t>(noise.size()))
    throw input_error("time index outside the noise window");

  detail::WordMatcher matcher(coloring, w.applied_order());
  for (std::int64_t l = k - p; l >= 0; --l) {
    if (!matcher.matches_at(noise, l)) continue;
    int v = *target;
    for (std::int64_t t = l + p + 1; t <= k; ++t) v = coloring.color(noise[t - 1])(v);
    return v;
  }
  return std::nullopt;
}

struct StrongVerification {
  std::int64_t steps = 0;
  std::int64_t reconstructable = 0;
  std::int64_t agreements = 0;

  double coverage() const { return steps ? static_cast<double>(reconstructable) / steps : 0.0; }
  double agreement_rate() const {
    return reconstructable ? static_cast<double>(agreements) / reconstructable : 0.0;
  }
};

// Streaming version of reconstruct_strong over a full trace: re-anchors at
// every occurrence of the reset word and pushes the value forward in
// between; each reconstructable step is compared against the trace.
inline StrongVerification verify_strong(const WalkTrace& trace, const RoadColoring& coloring,
                                        const Word& w) {
  const auto target = w.composition().constant_target();
  if (!target) throw structure_error("verification needs a word composing to a constant map");
  detail::WordMatcher matcher(coloring, w.applied_order());

  StrongVerification out;
  out.steps = trace.steps;
  int state = 0;
  std::optional<int> value;
  for (std::int64_t k = 1; k <= trace.steps; ++k) {
    const int c = trace.noise[k - 1];
    if (value) value = coloring.color(c)(*value);
    state = matcher.advance(state, c);
    if (state == matcher.length) {
      if (value && *value != *target)
        throw internal_error("re-anchored reconstruction disagrees with running value");
      value = *target;
    }
    if (value) {
      ++out.reconstructable;
      if (*value == trace.states[k]) ++out.agreements;
    }
  }
  return out;
}

// Greedy newest-first maximal non-overlapping occurrence times of the word
// in the noise window, anchored at the window end. An occurrence at l means
// steps l+1..l+p carry the word; matches straddling the window boundary are
// discarded. Returned newest first.
inline std::vector<std::int64_t> pattern_occurrences(const std::vector<int>& noise,
                                                     const RoadColoring& coloring,
                                                     const Word& w) {
  detail::WordMatcher matcher(coloring, w.applied_order());
  const int p = w.length();
  std::vector<std::int64_t> all;
  int state = 0;
  for (std::size_t t = 0; t < noise.size(); ++t) {
    state = matcher.advance(state, noise[t]);
    if (state == p) all.push_back(static_cast<std::int64_t>(t) + 1 - p);
  }
  std::vector<std::int64_t> chosen;
  for (auto it = all.rbegin(); it != all.rend(); ++it)
    if (chosen.empty() || *it <= chosen.back() - p) chosen.push_back(*it);
  return chosen;
}

// Permutation of the block indices induced by a mapping: block i goes to
// the block containing the image of its anchor. Well-definedness of this as
// a bijection is a structural fact about F-clique partitions and is
// asserted.
inline std::vector<int> induced_permutation(const Mapping& mapping,
                                            const InducedPartition& partition) {
  const int n = static_cast<int>(partition.anchors.size());
  std::vector<int> perm(n, -1);
  std::vector<bool> hit(n, false);
  for (int i = 0; i < n; ++i) {
    const int image = mapping(partition.anchors[i]);
    const int j = partition.block_of[image];
    if (j < 0) throw internal_error("anchor image is not covered by the partition");
    if (hit[j]) throw internal_error("induced block map is not a bijection");
    hit[j] = true;
    perm[i] = j;
  }
  return perm;
}

struct InducedTrace {
  std::vector<std::int64_t> occurrence_times;     // newest first
  std::vector<int> hat_states;                    // block index at each occurrence
  std::vector<std::vector<int>> hat_noise;        // [i] maps state i+1 (older) to state i
};

// Observes the walk at the stopping times given by occurrences of the
// padded word and composes each inter-occurrence gap into a block
// permutation. An empty gap contributes the permutation induced by the
// identity mapping, which is the identity whenever the word's composition
// fixes its image pointwise. The block-walk update is asserted at every
// step.
inline InducedTrace induced_process(const WalkTrace& trace, const RoadColoring& coloring,
                                    const Word& padded) {
  const GraphProperties props = analyze_graph(coloring.graph());
  if (!is_primitive(props))
    throw structure_error("induced process needs a primitive induced graph");
  if (!satisfies_no_overlap(padded, *props.positivity_exponent))
    throw structure_error("word does not satisfy the no-overlap padding condition");
  const InducedPartition partition = partition_from_word(coloring, padded);

  InducedTrace out;
  out.occurrence_times = pattern_occurrences(trace.noise, coloring, padded);
  if (out.occurrence_times.size() < 2)
    throw insufficient_data_error("fewer than two pattern occurrences in the window");

  const int p = padded.length();
  for (std::int64_t l : out.occurrence_times)
    out.hat_states.push_back(partition.block_of[trace.states[l]]);

  for (std::size_t i = 0; i + 1 < out.occurrence_times.size(); ++i) {
    const std::int64_t newer = out.occurrence_times[i];
    const std::int64_t older = out.occurrence_times[i + 1];
    const int n = static_cast<int>(partition.anchors.size());
    std::vector<int> perm(n, -1);
    std::vector<bool> hit(n, false);
    for (int j = 0; j < n; ++j) {
      int v = partition.anchors[j];
      for (std::int64_t t = older + p + 1; t <= newer; ++t) v = coloring.color(trace.noise[t - 1])(v);
      const int block = partition.block_of[v];
      if (hit[block]) throw internal_error("gap composition is not a block bijection");
      hit[block] = true;
      perm[j] = block;
    }
    if (out.hat_states[i] != perm[out.hat_states[i + 1]])
      throw internal_error("induced walk update violated");
    out.hat_noise.push_back(std::move(perm));
  }
  return out;
}

struct EmpiricalLaw {
  std::map<std::vector<int>, std::int64_t> counts;
  std::int64_t total = 0;
  std::int64_t dropped = 0;
  std::string outcome_tag;
};

// Monte-Carlo estimate of the law of one induced block permutation: each
// trial draws a fresh color stream, waits for the first completed
// occurrence of the padded word looking backward from the trial origin, and
// maps the pre-occurrence segment through the block partition. Trials use
// independent derived streams, so the estimate is reproducible for a fixed
// seed and order-independent.
inline EmpiricalLaw estimate_induced_law(const RoadColoring& coloring,
                                         const std::vector<Rat>& probs, const Word& padded,
                                         std::int64_t trials, std::uint64_t seed,
                                         std::int64_t max_steps_per_trial = 10'000'000) {
  const GraphProperties props = analyze_graph(coloring.graph());
  if (!is_primitive(props))
    throw structure_error("induced law estimation needs a primitive induced graph");
  if (!satisfies_no_overlap(padded, *props.positivity_exponent))
    throw structure_error("word does not satisfy the no-overlap padding condition");
  if (trials < 1) throw input_error("need at least one trial");
  const InducedPartition partition = partition_from_word(coloring, padded);
  const RationalSampler color_sampler(probs);
  // The stream is read as time running backward from the trial origin, so
  // the matcher consumes the letters newest-first.
  detail::WordMatcher matcher(coloring, padded.letters);
  const int p = padded.length();

  EmpiricalLaw law;
  law.outcome_tag = "block-permutations";
  CounterRng root(seed);
  std::vector<int> buffer;
  for (std::int64_t trial = 0; trial < trials; ++trial) {
    CounterRng rng = root.stream(static_cast<std::uint64_t>(trial));
    buffer.clear();
    int state = 0;
    std::int64_t end = -1;
    for (std::int64_t t = 1; t <= max_steps_per_trial; ++t) {
      const int c = color_sampler.draw(rng);
      buffer.push_back(c);
      state = matcher.advance(state, c);
      if (state == p) {
        end = t;
        break;
      }
    }
    if (end < 0) {
      ++law.dropped;
      continue;
    }
    const std::int64_t gap = end - p;
    const int n = static_cast<int>(partition.anchors.size());
    std::vector<int> perm(n, -1);
    std::vector<bool> hit(n, false);
    for (int j = 0; j < n; ++j) {
      int v = partition.anchors[j];
      for (std::int64_t t = gap; t >= 1; --t) v = coloring.color(buffer[t - 1])(v);
      const int block = partition.block_of[v];
      if (hit[block]) throw internal_error("sampled segment is not a block bijection");
      hit[block] = true;
      perm[j] = block;
    }
    ++law.counts[perm];
    ++law.total;
  }
  if (law.total == 0) throw insufficient_data_error("no trial produced an occurrence");
  return law;
}

struct LawConvergence {
  int power = 0;
  std::vector<std::vector<double>> marginals;  // [i][j] = mass of permutations sending i to j
  double max_deviation = 0.0;                  // from 1/(block count)
  bool converged = false;
};

// Treats the estimated law as exact on the permutation group of the block
// set, convolves it n times, and reports how far every i -> j marginal is
// from uniform. Floating point: this is a convergence diagnostic.
inline LawConvergence induced_law_convergence(const EmpiricalLaw& estimate, int n,
                                              double tolerance) {
  if (estimate.total == 0 || estimate.counts.empty())
    throw input_error("empty estimate");
  if (n < 1) throw input_error("convolution power must be >= 1");
  const int k = static_cast<int>(estimate.counts.begin()->first.size());
  if (k > 6) throw unsupported_error("block permutation groups are capped at 6 elements");

  std::vector<std::vector<int>> perms;
  std::vector<int> identity(k);
  for (int i = 0; i < k; ++i) identity[i] = i;
  std::vector<int> current = identity;
  do {
    perms.push_back(current);
  } while (std::next_permutation(current.begin(), current.end()));
  std::map<std::vector<int>, int> index;
  for (std::size_t i = 0; i < perms.size(); ++i) index[perms[i]] = static_cast<int>(i);

  std::vector<double> base(perms.size(), 0.0);
  for (const auto& [perm, count] : estimate.counts)
    base[index.at(perm)] = static_cast<double>(count) / static_cast<double>(estimate.total);

  // Composition table: (a b)(i) = a(b(i)).
  const std::size_t g = perms.size();
  std::vector<std::vector<int>> table(g, std::vector<int>(g));
  for (std::size_t a = 0; a < g; ++a)
    for (std::size_t b = 0; b < g; ++b) {
      std::vector<int> ab(k);
      for (int i = 0; i < k; ++i) ab[i] = perms[a][perms[b][i]];
      table[a][b] = index.at(ab);
    }

  std::vector<double> power = base;
  for (int step = 2; step <= n; ++step) {
    std::vector<double> next(g, 0.0);
    for (std::size_t a = 0; a < g; ++a) {
      if (power[a] == 0.0) continue;
      for (std::size_t b = 0; b < g; ++b)
        if (base[b] != 0.0) next[table[a][b]] += power[a] * base[b];
    }
    power = std::move(next);
  }

  LawConvergence out;
  out.power = n;
  out.marginals.assign(k, std::vector<double>(k, 0.0));
  for (std::size_t a = 0; a < g; ++a)
    for (int i = 0; i < k; ++i) out.marginals[i][perms[a][i]] += power[a];
  const double uniform = 1.0 / k;
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j)
      out.max_deviation = std::max(out.max_deviation, std::abs(out.marginals[i][j] - uniform));
  out.converged = out.max_deviation <= tolerance;
  return out;
}

struct NonstrongEvidence {
  std::int64_t trials_requested = 0;
  std::int64_t trials_used = 0;
  std::int64_t trials_dropped = 0;  // no occurrence inside the window
  std::int64_t window = 0;
  int tail_length = 0;
  std::vector<std::int64_t> block_counts;
  Chi2Result uniformity;
  Chi2Result independence;
  double significance = 1e-3;
  bool uniform_pass = false;
  bool independent_pass = false;
};

// Evidence that the block index observed at the latest occurrence is
// uniform and independent of the color history. Each trial simulates one
// stationary window, records the block of the state at the last completed
// occurrence, and a discretized functional of the final p + r colors (the
// outcome of a reconstruction attempt from that tail: occurrence offset and
// the anchor images under the trailing composition). Chi-square at the
// stored significance level; trials without any occurrence are dropped,
// which conditions on a colors-only event and is therefore harmless.
inline NonstrongEvidence nonstrong_evidence(const RoadColoring& coloring,
                                            const std::vector<Rat>& probs, const Word& padded,
                                            std::int64_t trials, std::int64_t window,
                                            std::uint64_t seed) {
  const GraphProperties props = analyze_graph(coloring.graph());
  if (!is_primitive(props))
    throw structure_error("nonstrong evidence needs a primitive induced graph");
  const int r = *props.positivity_exponent;
  if (!satisfies_no_overlap(padded, r))
    throw structure_error("word does not satisfy the no-overlap padding condition");
  const InducedPartition partition = partition_from_word(coloring, padded);
  const int block_count = static_cast<int>(partition.anchors.size());
  if (block_count < 2)
    throw structure_error(
        "coloring is synchronizing, clause (i) holds: use the strong reconstruction check");

  const int p = padded.length();
  const int tail = p + r;
  if (window < tail) throw input_error("window shorter than the tail functional");
  if (trials < 1) throw input_error("need at least one trial");

  const SiteLaw lambda = stationary_law(coloring, probs);
  const RationalSampler site_sampler(lambda.weights);
  const RationalSampler color_sampler(probs);
  detail::WordMatcher matcher(coloring, padded.applied_order());

  NonstrongEvidence out;
  out.trials_requested = trials;
  out.window = window;
  out.tail_length = tail;
  out.block_counts.assign(block_count, 0);

  const int m = coloring.site_count();
  std::map<std::int64_t, std::vector<std::int64_t>> joint;  // tail key -> per-block counts
  std::vector<int> state_ring(p + 1);
  std::vector<int> color_ring(tail);

  CounterRng root(seed);
  for (std::int64_t trial = 0; trial < trials; ++trial) {
    CounterRng rng = root.stream(static_cast<std::uint64_t>(trial));
    int x = site_sampler.draw(rng);
    state_ring[0] = x;
    int match_state = 0;
    int latest_block = -1;
    for (std::int64_t t = 1; t <= window; ++t) {
      const int c = color_sampler.draw(rng);
      x = coloring.color(c)(x);
      state_ring[t % (p + 1)] = x;
      color_ring[(t - 1) % tail] = c;
      match_state = matcher.advance(match_state, c);
      if (match_state == p) latest_block = partition.block_of[state_ring[(t - p) % (p + 1)]];
    }
    if (latest_block < 0) {
      ++out.trials_dropped;
      continue;
    }
    ++out.trials_used;
    ++out.block_counts[latest_block];

    // Reconstruction-attempt functional of the final `tail` colors.
    auto color_at = [&](std::int64_t t) { return color_ring[(t - 1) % tail]; };
    std::int64_t key = 0;
    for (int offset = 0; offset <= tail - p; ++offset) {
      const std::int64_t end = window - offset;
      bool ok = true;
      for (int i = 0; i < p && ok; ++i)
        if (!matcher.match[i][color_at(end - p + 1 + i)]) ok = false;
      if (!ok) continue;
      key = 1 + offset;
      for (int j = 0; j < block_count; ++j) {
        int v = partition.anchors[j];
        for (std::int64_t t = end + 1; t <= window; ++t) v = coloring.color(color_at(t))(v);
        key = key * m + v;
      }
      break;
    }
    auto [it, inserted] = joint.try_emplace(key, std::vector<std::int64_t>(block_count, 0));
    ++it->second[latest_block];
  }

  if (out.trials_used == 0) throw insufficient_data_error("no trial produced an occurrence");
  out.uniformity = chi2_uniform(out.block_counts);
  std::vector<std::vector<std::int64_t>> table(block_count,
                                               std::vector<std::int64_t>(joint.size(), 0));
  std::size_t col = 0;
  for (const auto& [key, counts] : joint) {
    for (int i = 0; i < block_count; ++i) table[i][col] = counts[i];
    ++col;
  }
  out.independence = chi2_independence(table);
  out.uniform_pass = out.uniformity.p_value > out.significance;
  out.independent_pass = out.independence.p_value > out.significance;
  return out;
}

// Total-variation distance between two empirical laws on the same outcome
// space; a reproducibility diagnostic.
inline double total_variation(const EmpiricalLaw& a, const EmpiricalLaw& b) {
  if (a.total == 0 || b.total == 0) throw input_error("empty empirical law");
  std::map<std::vector<int>, double> diff;
  for (const auto& [k, c] : a.counts) diff[k] += static_cast<double>(c) / a.total;
  for (const auto& [k, c] : b.counts) diff[k] -= static_cast<double>(c) / b.total;
  double tv = 0.0;
  for (const auto& [k, v] : diff) tv += std::abs(v);
  return tv / 2.0;
}

}  // namespace roadcolor
