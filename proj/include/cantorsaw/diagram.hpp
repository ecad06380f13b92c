#pragma once

// Nested-interval pictures of the sets S_n built by the construction: one
// row per level, nodes G_w drawn at their estimates, separators b_{w*} as
// vertical rules from the level where they appear downwards.

#include "cantorsaw/driver.hpp"

#include <string>

namespace cantorsaw {

std::string render_ascii(const ConstructionState& state, int width = 72);
std::string render_svg(const ConstructionState& state);

} // namespace cantorsaw
