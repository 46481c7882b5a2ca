#include "lmscreen/variogram.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>

#include "lmscreen/error.hpp"
#include "lmscreen/stats.hpp"
#include "text.hpp"

namespace lmscreen {

VariogramCloud compute_cloud(const DisplacementField& field) {
  const std::size_t k = field.size();
  VariogramCloud cloud;
  cloud.case_id = field.case_id();
  cloud.landmark_count = k;
  cloud.points.reserve(k * (k - 1) / 2);

  std::vector<Vec3> disp(k);
  for (std::size_t n = 0; n < k; ++n) disp[n] = field.displacement(n);

  // Explicit component sums keep the result independent of Eigen's
  // vectorisation choices.
  for (std::size_t i = 0; i < k; ++i) {
    const Vec3& xi = field[i].fixed;
    for (std::size_t j = i + 1; j < k; ++j) {
      const Vec3& xj = field[j].fixed;
      const double dx = xi.x() - xj.x();
      const double dy = xi.y() - xj.y();
      const double dz = xi.z() - xj.z();
      const double ex = disp[i].x() - disp[j].x();
      const double ey = disp[i].y() - disp[j].y();
      const double ez = disp[i].z() - disp[j].z();
      cloud.points.push_back({i, j, std::sqrt(dx * dx + dy * dy + dz * dz),
                              ex * ex + ey * ey + ez * ez});
    }
  }

  std::sort(cloud.points.begin(), cloud.points.end(),
            [](const VariogramPoint& a, const VariogramPoint& b) {
              if (a.h != b.h) return a.h < b.h;
              if (a.i != b.i) return a.i < b.i;
              return a.j < b.j;
            });
  return cloud;
}

BinnedTrend binned_trend(const VariogramCloud& cloud, std::size_t n_bins) {
  if (cloud.points.empty()) throw Error(ErrorCode::EmptyCloud, "cannot bin an empty cloud");
  if (n_bins == 0) throw Error(ErrorCode::InvalidArgument, "n_bins must be at least 1");

  double max_h = 0.0;
  for (const auto& p : cloud.points) max_h = std::max(max_h, p.h);

  BinnedTrend trend;
  trend.bin_width = max_h / static_cast<double>(n_bins);
  std::vector<std::vector<double>> members(n_bins);
  for (const auto& p : cloud.points) {
    auto b = static_cast<std::size_t>(p.h / trend.bin_width);
    members[std::min(b, n_bins - 1)].push_back(p.eps);
  }

  trend.bins.resize(n_bins);
  for (std::size_t b = 0; b < n_bins; ++b) {
    TrendBin& bin = trend.bins[b];
    bin.h_center = (static_cast<double>(b) + 0.5) * trend.bin_width;
    bin.pair_count = members[b].size();
    if (!members[b].empty()) bin.eps_median = stats::median(members[b]);
  }
  return trend;
}

void write_cloud_csv(std::ostream& out, const VariogramCloud& cloud) {
  out << "i,j,h_mm,eps_mm2\n";
  for (const auto& p : cloud.points) {
    out << p.i << ',' << p.j << ',' << text::format_sig9(p.h) << ','
        << text::format_sig9(p.eps) << '\n';
  }
}

std::string cloud_to_csv(const VariogramCloud& cloud) {
  std::ostringstream out;
  write_cloud_csv(out, cloud);
  return out.str();
}

}  // namespace lmscreen
