#include "lmscreen/synth.hpp"

#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include "lmscreen/error.hpp"
#include "lmscreen/rng.hpp"
#include "lmscreen/screening.hpp"
#include "lmscreen/variogram.hpp"

namespace lmscreen::synth {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

Vec3 normal3(CounterRng& rng) {
  const double x = rng.normal();
  const double y = rng.normal();
  const double z = rng.normal();
  return {x, y, z};
}

std::vector<Vec3> place_points(const SynthSpec& spec, CounterRng& rng) {
  std::vector<Vec3> points;
  points.reserve(spec.k);
  std::visit(
      Overloaded{
          [&](const UniformCube&) {
            for (std::size_t n = 0; n < spec.k; ++n) {
              const double x = rng.uniform(0.0, spec.extent);
              const double y = rng.uniform(0.0, spec.extent);
              const double z = rng.uniform(0.0, spec.extent);
              points.emplace_back(x, y, z);
            }
          },
          [&](const Grid&) {
            auto side = static_cast<std::size_t>(std::ceil(std::cbrt(static_cast<double>(spec.k))));
            while (side * side * side < spec.k) ++side;
            const double step = side > 1 ? spec.extent / static_cast<double>(side - 1) : 0.0;
            for (std::size_t n = 0; n < spec.k; ++n) {
              points.emplace_back(static_cast<double>(n % side) * step,
                                  static_cast<double>((n / side) % side) * step,
                                  static_cast<double>(n / (side * side)) * step);
            }
          },
          [&](const Blobs& blobs) {
            const std::size_t nb = blobs.centers.size();
            std::vector<std::size_t> owner;
            owner.reserve(spec.k);
            if (blobs.counts.empty()) {
              for (std::size_t n = 0; n < spec.k; ++n) owner.push_back(n % nb);
            } else {
              for (std::size_t b = 0; b < nb; ++b) owner.insert(owner.end(), blobs.counts[b], b);
            }
            for (std::size_t b : owner) {
              points.push_back(blobs.centers[b] + blobs.sigma * normal3(rng));
            }
          },
      },
      spec.layout);
  return points;
}

}  // namespace

void SynthSpec::validate() const {
  auto fail = [](const std::string& what) { throw Error(ErrorCode::InvalidArgument, what); };
  if (k < 2) fail("k must be at least 2");
  if (!(extent > 0)) fail("extent must be positive");
  if (!(deform_wavelength > 0)) fail("deform_wavelength must be positive");
  if (!(deform_amp >= 0)) fail("deform_amp must be non-negative");
  if (!(noise_sigma >= 0)) fail("noise_sigma must be non-negative");
  if (const auto* blobs = std::get_if<Blobs>(&layout)) {
    if (blobs->centers.empty()) fail("blob layout needs at least one center");
    if (!(blobs->sigma > 0)) fail("blob sigma must be positive");
    if (!blobs->counts.empty()) {
      if (blobs->counts.size() != blobs->centers.size()) fail("one count per blob center");
      if (std::accumulate(blobs->counts.begin(), blobs->counts.end(), std::size_t{0}) != k) {
        fail("blob counts must sum to k");
      }
    }
  }
}

DisplacementField generate(const SynthSpec& spec) {
  spec.validate();
  CounterRng rng(spec.seed);

  const std::vector<Vec3> fixed = place_points(spec, rng);

  // One plane wave per displacement axis.
  Vec3 direction[3];
  double phase[3];
  for (int a = 0; a < 3; ++a) {
    Vec3 w = normal3(rng);
    while (w.squaredNorm() == 0.0) w = normal3(rng);
    direction[a] = w / w.norm();
    phase[a] = rng.uniform(0.0, 2.0 * std::numbers::pi);
  }
  const Vec3 center = Vec3::Constant(spec.extent / 2.0);
  const double wavenumber = 2.0 * std::numbers::pi / spec.deform_wavelength;

  std::vector<Landmark> landmarks;
  landmarks.reserve(spec.k);
  for (std::size_t n = 0; n < spec.k; ++n) {
    Vec3 d;
    for (int a = 0; a < 3; ++a) {
      d[a] = spec.deform_amp * std::sin(wavenumber * direction[a].dot(fixed[n] - center) + phase[a]);
    }
    if (spec.noise_sigma > 0.0) d += spec.noise_sigma * normal3(rng);
    landmarks.push_back({std::to_string(n + 1), fixed[n], fixed[n] + d});
  }
  return DisplacementField::build("synth-" + std::to_string(spec.seed), std::move(landmarks));
}

double displacement_std(const DisplacementField& field) {
  Vec3 mean = Vec3::Zero();
  for (std::size_t n = 0; n < field.size(); ++n) mean += field.displacement(n);
  mean /= static_cast<double>(field.size());
  double ss = 0.0;
  for (std::size_t n = 0; n < field.size(); ++n) {
    ss += (field.displacement(n) - mean).squaredNorm();
  }
  return std::sqrt(ss / (3.0 * static_cast<double>(field.size())));
}

DisplacementField inject_global(const DisplacementField& field, std::size_t index,
                                const Vec3& offset_mm) {
  if (index >= field.size()) {
    throw Error(ErrorCode::IndexOutOfRange, "landmark index " + std::to_string(index) +
                                                " out of range for K=" + std::to_string(field.size()));
  }
  if (offset_mm.squaredNorm() == 0.0) {
    throw Error(ErrorCode::InvalidArgument, "global injection needs a non-zero offset");
  }
  return field.with_moving(index, field[index].moving + offset_mm);
}

namespace {

std::vector<std::size_t> neighbours_within(const VariogramCloud& cloud, std::size_t k,
                                           double radius) {
  std::vector<std::size_t> out;
  for (const auto& p : cloud.points) {
    if (p.h > radius) break;
    if (p.i == k) out.push_back(p.j);
    if (p.j == k) out.push_back(p.i);
  }
  return out;
}

}  // namespace

DisplacementField inject_local(const DisplacementField& field, std::size_t index,
                               const ScreeningConfig& config) {
  if (index >= field.size()) {
    throw Error(ErrorCode::IndexOutOfRange, "landmark index " + std::to_string(index) +
                                                " out of range for K=" + std::to_string(field.size()));
  }
  config.validate();
  const VariogramCloud cloud = compute_cloud(field);
  const double radius = local_radius(cloud, config);
  const std::vector<std::size_t> neighbours = neighbours_within(cloud, index, radius);
  if (neighbours.size() < config.local_min_pairs) {
    throw Error(ErrorCode::NoLocalNeighborhood,
                "landmark '" + field[index].id + "' has " + std::to_string(neighbours.size()) +
                    " neighbours within " + std::to_string(radius) + " mm");
  }

  Vec3 mean = Vec3::Zero();
  for (std::size_t n : neighbours) mean += field.displacement(n);
  mean /= static_cast<double>(neighbours.size());
  return field.with_moving(index, field[index].fixed - mean);
}

std::vector<std::size_t> local_candidates(const DisplacementField& field,
                                          const ScreeningConfig& config) {
  const VariogramCloud cloud = compute_cloud(field);
  const double radius = local_radius(cloud, config);
  std::vector<std::size_t> out;
  for (std::size_t n = 0; n < field.size(); ++n) {
    if (neighbours_within(cloud, n, radius).size() >= config.local_min_pairs) out.push_back(n);
  }
  return out;
}

}  // namespace lmscreen::synth
