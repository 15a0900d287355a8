#pragma once

// Line-oriented input format and trace export. Input files are UTF-8 with
// '#' comments. Sites and colors are 1-based on disk and 0-based in memory.
//
//   sites 5
//   colors 2
//   color 1 : 2 3 4 1 5        # image of x = 1..m under the color
//   color 2 : 2 5 5 2 4
//   prob 1 : 1/2
//   prob 2 : 1/2
//
// Graph-only files replace the color/prob lines with `matrix` followed by m
// rows of m non-negative integers (row y, column x = roads x -> y).
// Probability lines are optional as a group; when present there must be one
// per color and they must sum to 1.

#include <cstdint>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "roadcolor/errors.hpp"
#include "roadcolor/mapping.hpp"
#include "roadcolor/rational.hpp"
#include "roadcolor/walk.hpp"

namespace roadcolor {

struct InputDocument {
  DirectedGraph graph;
  std::optional<RoadColoring> coloring;       // colors in declared order
  std::optional<std::vector<Rat>> probabilities;

  bool operator==(const InputDocument& other) const {
    return graph == other.graph && coloring == other.coloring &&
           probabilities == other.probabilities;
  }
};

namespace detail {

inline std::vector<std::string> split_tokens(std::string_view line) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : line) {
    if (ch == '#') break;
    if (ch == ' ' || ch == '\t' || ch == '\r') {
      if (!cur.empty()) out.push_back(std::move(cur)), cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

inline long parse_long(const std::string& tok, int line_no, const char* what) {
  std::size_t pos = 0;
  long v = 0;
  try {
    v = std::stol(tok, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos != tok.size())
    throw input_error("line " + std::to_string(line_no) + ": malformed " + what + " '" + tok + "'");
  return v;
}

}  // namespace detail

inline InputDocument parse_input(std::string_view text) {
  std::optional<int> sites;
  std::optional<int> color_count;
  std::vector<std::optional<Mapping>> colors;
  std::vector<std::optional<Rat>> probs;
  std::vector<std::vector<long>> matrix_rows;
  bool in_matrix = false;

  std::istringstream stream{std::string(text)};
  std::string line;
  int line_no = 0;
  auto fail = [&](const std::string& msg) -> input_error {
    return input_error("line " + std::to_string(line_no) + ": " + msg);
  };

  while (std::getline(stream, line)) {
    ++line_no;
    auto tokens = detail::split_tokens(line);
    if (tokens.empty()) continue;

    if (in_matrix && static_cast<int>(matrix_rows.size()) < *sites) {
      if (static_cast<int>(tokens.size()) != *sites)
        throw fail("matrix row needs " + std::to_string(*sites) + " entries");
      std::vector<long> row;
      for (const auto& tok : tokens) {
        long v = detail::parse_long(tok, line_no, "matrix entry");
        if (v < 0) throw fail("matrix entries must be non-negative");
        row.push_back(v);
      }
      matrix_rows.push_back(std::move(row));
      continue;
    }

    const std::string& kw = tokens[0];
    if (kw == "sites") {
      if (sites) throw fail("duplicate sites line");
      if (tokens.size() != 2) throw fail("usage: sites m");
      long m = detail::parse_long(tokens[1], line_no, "site count");
      if (m < 1) throw fail("site count must be >= 1");
      if (m > max_sites())
        throw fail("site count " + std::to_string(m) + " exceeds the cap of " +
                   std::to_string(max_sites()));
      sites = static_cast<int>(m);
    } else if (kw == "colors") {
      if (!sites) throw fail("sites must come before colors");
      if (color_count) throw fail("duplicate colors line");
      if (tokens.size() != 2) throw fail("usage: colors d");
      long d = detail::parse_long(tokens[1], line_no, "color count");
      if (d < 1) throw fail("color count must be >= 1");
      color_count = static_cast<int>(d);
      colors.assign(*color_count, std::nullopt);
      probs.assign(*color_count, std::nullopt);
    } else if (kw == "color") {
      if (!color_count) throw fail("colors must come before color lines");
      if (in_matrix) throw fail("color lines cannot be mixed with a matrix section");
      if (tokens.size() != static_cast<std::size_t>(*sites) + 3 || tokens[2] != ":")
        throw fail("usage: color i : t1 .. tm");
      long idx = detail::parse_long(tokens[1], line_no, "color index");
      if (idx < 1 || idx > *color_count) throw fail("color index out of range");
      if (colors[idx - 1]) throw fail("duplicate color " + std::to_string(idx));
      std::vector<int> image;
      for (int x = 0; x < *sites; ++x) {
        long t = detail::parse_long(tokens[3 + x], line_no, "target site");
        if (t < 1 || t > *sites) throw fail("target site out of range");
        image.push_back(static_cast<int>(t) - 1);
      }
      colors[idx - 1] = Mapping(std::move(image));
    } else if (kw == "prob") {
      if (!color_count) throw fail("colors must come before prob lines");
      if (tokens.size() != 4 || tokens[2] != ":") throw fail("usage: prob i : num/den");
      long idx = detail::parse_long(tokens[1], line_no, "color index");
      if (idx < 1 || idx > *color_count) throw fail("color index out of range");
      if (probs[idx - 1]) throw fail("duplicate prob " + std::to_string(idx));
      Rat w;
      try {
        w = parse_rational(tokens[3]);
      } catch (const input_error& e) {
        throw fail(e.what());
      }
      if (w <= 0) throw fail("weights must be positive");
      probs[idx - 1] = w;
    } else if (kw == "matrix") {
      if (!sites) throw fail("sites must come before matrix");
      if (color_count) throw fail("matrix cannot be mixed with color lines");
      if (in_matrix) throw fail("duplicate matrix section");
      if (tokens.size() != 1) throw fail("matrix takes no arguments");
      in_matrix = true;
    } else {
      throw fail("unknown directive '" + kw + "'");
    }
  }

  line_no += 1;  // end-of-file diagnostics
  if (!sites) throw fail("missing sites line");
  if (in_matrix) {
    if (static_cast<int>(matrix_rows.size()) != *sites)
      throw fail("matrix needs exactly " + std::to_string(*sites) + " rows");
    return InputDocument{DirectedGraph(std::move(matrix_rows)), std::nullopt, std::nullopt};
  }
  if (!color_count) throw fail("missing colors or matrix section");
  std::vector<Mapping> color_list;
  for (int c = 0; c < *color_count; ++c) {
    if (!colors[c]) throw fail("missing color " + std::to_string(c + 1));
    color_list.push_back(*colors[c]);
  }
  RoadColoring coloring = RoadColoring::from_colors(std::move(color_list));

  const int declared = static_cast<int>(std::count_if(probs.begin(), probs.end(),
                                                      [](const auto& p) { return p.has_value(); }));
  std::optional<std::vector<Rat>> weights;
  if (declared > 0) {
    if (declared != *color_count) throw fail("weight count mismatch: need one prob per color");
    std::vector<Rat> w;
    Rat total = 0;
    for (const auto& p : probs) {
      w.push_back(*p);
      total += *p;
    }
    if (total != 1) throw fail("weights must sum to 1, got " + format_rational(total));
    weights = std::move(w);
  }
  DirectedGraph graph = coloring.graph();
  return InputDocument{std::move(graph), std::move(coloring), std::move(weights)};
}

// Canonical re-emission of a document; parse(print(doc)) == doc.
inline std::string print_input(const InputDocument& doc) {
  std::ostringstream out;
  out << "sites " << doc.graph.site_count() << "\n";
  if (doc.coloring) {
    out << "colors " << doc.coloring->color_count() << "\n";
    for (int c = 0; c < doc.coloring->color_count(); ++c) {
      out << "color " << (c + 1) << " :";
      for (int x = 0; x < doc.coloring->site_count(); ++x)
        out << " " << (doc.coloring->color(c)(x) + 1);
      out << "\n";
    }
    if (doc.probabilities)
      for (std::size_t c = 0; c < doc.probabilities->size(); ++c)
        out << "prob " << (c + 1) << " : " << format_rational((*doc.probabilities)[c]) << "\n";
  } else {
    out << "matrix\n";
    for (int y = 0; y < doc.graph.site_count(); ++y) {
      for (int x = 0; x < doc.graph.site_count(); ++x)
        out << (x ? " " : "") << doc.graph.roads(y, x);
      out << "\n";
    }
  }
  return out.str();
}

inline std::uint64_t fnv1a64(std::string_view data) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char ch : data) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  return h;
}

// Trace export: a header comment, one line per step `k<TAB>color<TAB>site`
// (1-based on disk), and a trailing frequency summary. Byte-stable for a
// fixed seed.
inline void write_trace(std::ostream& out, const WalkTrace& trace) {
  out << "# seed=" << trace.seed << " law=" << format_rational_list(trace.law_used) << "\n";
  out << "# x0=" << (trace.states[0] + 1) << "\n";
  std::vector<std::int64_t> counts(trace.law_used.size(), 0);
  for (std::int64_t k = 1; k <= trace.steps; ++k) {
    out << k << "\t" << (trace.noise[k - 1] + 1) << "\t" << (trace.states[k] + 1) << "\n";
    ++counts[trace.states[k]];
  }
  out << "# freq=";
  char buf[32];
  for (std::size_t x = 0; x < counts.size(); ++x) {
    std::snprintf(buf, sizeof buf, "%.6f",
                  static_cast<double>(counts[x]) / static_cast<double>(trace.steps));
    out << (x ? "," : "") << buf;
  }
  out << "\n";
}

}  // namespace roadcolor
