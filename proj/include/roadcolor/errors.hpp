#pragma once

// Error taxonomy for the library. The CLI maps these onto exit codes:
//   input_error             -> 2   (malformed or inconsistent input)
//   structure_error         -> 3   (structural precondition not met)
//   unsupported_error       -> 3   (operation undefined for this input)
//   insufficient_data_error -> 4   (a seeded run produced too few events)
// internal_error signals a broken invariant and is always a bug.

#include <cstdlib>
#include <stdexcept>
#include <string>

namespace roadcolor {

class input_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class structure_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class unsupported_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class insufficient_data_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class internal_error : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Hard cap on the number of sites. Subset searches use 2^m states, so the
// cap is enforced wherever such a search may start. ROADCOLOR_MAX_SITES may
// lower the cap (values outside [1, 20] are ignored).
inline int max_sites() {
  int cap = 20;
  if (const char* env = std::getenv("ROADCOLOR_MAX_SITES")) {
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v >= 1 && v < cap) cap = static_cast<int>(v);
  }
  return cap;
}

inline void require_within_site_cap(int m, const char* what) {
  if (m > max_sites()) {
    throw input_error(std::string(what) + ": site count " + std::to_string(m) +
                      " exceeds the cap of " + std::to_string(max_sites()));
  }
}

}  // namespace roadcolor
