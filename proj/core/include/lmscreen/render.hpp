#pragma once

#include <span>
#include <string>

#include "lmscreen/screening.hpp"
#include "lmscreen/variogram.hpp"

namespace lmscreen {

enum class Plane { XY, XZ, YZ };

std::string_view to_string(Plane plane);

/// SVG 1.1 scatter of (h, eps). Each point is a <circle> with class "pt",
/// plus "global" or "local" when its pair involves a flagged landmark
/// (global wins). The binned trend is drawn as one <polyline class="trend">.
/// Throws EmptyCloud.
std::string render_variogram_svg(const DisplacementField& field, const VariogramCloud& cloud,
                                 std::span<const OutlierFlag> flags, const BinnedTrend& trend);

/// Projected displacement arrows (<line class="vec">) from fixed to moving
/// point, one per landmark. A projection shorter than 1e-9 mm is drawn as a
/// <circle class="vec-dot">. Flag classes match render_variogram_svg.
std::string render_field_svg(const DisplacementField& field, std::span<const OutlierFlag> flags,
                             Plane plane);

}  // namespace lmscreen
