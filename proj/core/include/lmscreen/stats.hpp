#pragma once

#include <span>

namespace lmscreen::stats {

/// Median of `values`; the mean of the two middle elements for even sizes.
/// Precondition: non-empty.
double median(std::span<const double> values);

/// Median absolute deviation around `center` (unscaled).
double mad(std::span<const double> values, double center);

/// Linearly interpolated sample quantile (R type 7, numpy default):
/// position q * (n - 1) in the sorted sample. Precondition: non-empty,
/// 0 <= q <= 1.
double quantile(std::span<const double> values, double q);

}  // namespace lmscreen::stats
