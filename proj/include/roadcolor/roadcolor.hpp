#pragma once

// Umbrella header for the road-coloring toolkit.

#include "roadcolor/errors.hpp"     // IWYU pragma: export
#include "roadcolor/graph.hpp"      // IWYU pragma: export
#include "roadcolor/io.hpp"         // IWYU pragma: export
#include "roadcolor/law.hpp"        // IWYU pragma: export
#include "roadcolor/mapping.hpp"    // IWYU pragma: export
#include "roadcolor/rational.hpp"   // IWYU pragma: export
#include "roadcolor/rng.hpp"        // IWYU pragma: export
#include "roadcolor/stats.hpp"      // IWYU pragma: export
#include "roadcolor/sync.hpp"       // IWYU pragma: export
#include "roadcolor/walk.hpp"       // IWYU pragma: export

namespace roadcolor {
inline constexpr const char* version = "0.1.0";
}
