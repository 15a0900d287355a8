#pragma once

// Shared fixture plumbing for the test suites. Site and color literals in
// test code are written 1-based to match the fixture files and converted
// here.

#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "roadcolor/roadcolor.hpp"

namespace testutil {

inline std::string fixture_path(const std::string& name) {
  return std::string(ROADCOLOR_FIXTURE_DIR) + "/" + name;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("missing fixture " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline roadcolor::InputDocument load_fixture(const std::string& name) {
  return roadcolor::parse_input(read_file(fixture_path(name)));
}

// Mapping from a 1-based image list.
inline roadcolor::Mapping mp(std::vector<int> image_1based) {
  for (int& v : image_1based) --v;
  return roadcolor::Mapping(std::move(image_1based));
}

// Site set from 1-based labels.
inline std::set<int> st(const std::vector<int>& sites_1based) {
  std::set<int> out;
  for (int v : sites_1based) out.insert(v - 1);
  return out;
}

// The three walk fixtures, built in code for tests that do not go through
// the parser. Color order matches the fixture files.
inline roadcolor::RoadColoring triangle_sync() {
  return roadcolor::RoadColoring::from_colors({mp({3, 3, 1}), mp({2, 1, 2})});
}
inline roadcolor::RoadColoring triangle_perm() {
  return roadcolor::RoadColoring::from_colors({mp({3, 1, 2}), mp({2, 3, 1})});
}
inline roadcolor::RoadColoring pentagon() {
  return roadcolor::RoadColoring::from_colors({mp({2, 3, 4, 1, 5}), mp({2, 5, 5, 2, 4})});
}

inline std::vector<roadcolor::Rat> half_half() {
  return {roadcolor::Rat(1, 2), roadcolor::Rat(1, 2)};
}

}  // namespace testutil
