#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "lmscreen/model.hpp"

namespace lmscreen {

/// One point of the empirical variogram cloud for the landmark pair (i, j),
/// i < j. `h` is the distance between the fixed points (mm), `eps` the squared
/// norm of the displacement difference (mm^2).
struct VariogramPoint {
  std::size_t i = 0;
  std::size_t j = 0;
  double h = 0.0;
  double eps = 0.0;

  bool operator==(const VariogramPoint&) const = default;
};

/// All K(K-1)/2 pairs of a field, sorted by h and then (i, j).
struct VariogramCloud {
  std::string case_id;
  std::size_t landmark_count = 0;
  std::vector<VariogramPoint> points;
};

VariogramCloud compute_cloud(const DisplacementField& field);

struct TrendBin {
  double h_center = 0.0;
  std::optional<double> eps_median;  // absent for empty bins
  std::size_t pair_count = 0;
};

/// Median eps over equal-width h bins spanning [0, max h].
struct BinnedTrend {
  double bin_width = 0.0;
  std::vector<TrendBin> bins;
};

/// Throws Error(EmptyCloud) for an empty cloud and Error(InvalidArgument)
/// for n_bins == 0.
BinnedTrend binned_trend(const VariogramCloud& cloud, std::size_t n_bins);

/// CSV with header `i,j,h_mm,eps_mm2`; indices are 0-based landmark
/// positions, values use 9 significant digits.
void write_cloud_csv(std::ostream& out, const VariogramCloud& cloud);
std::string cloud_to_csv(const VariogramCloud& cloud);

}  // namespace lmscreen
