#pragma once

#include <string>

#include "precedent/scenario.hpp"

namespace precedent {

/// Renders a scenario plus its result document as a static SVG 1.1 image:
/// 1D scenarios as labeled segment bars with point glyphs, 2D scenarios as a
/// scatter with separator lines (sessions as one frame per step). Byte
/// output is deterministic for fixed inputs. Dimensions above 2 are rejected.
std::string render_svg(const Scenario& scenario, const std::string& result_json);

}  // namespace precedent
