#pragma once

#include <cstddef>
#include <cstdint>
#include <variant>
#include <vector>

#include "lmscreen/model.hpp"

namespace lmscreen::synth {

/// Fixed points uniform in the cube [0, extent]^3.
struct UniformCube {};

/// The first k nodes (x fastest) of an n x n x n lattice spanning
/// [0, extent]^3, n = ceil(cbrt(k)).
struct Grid {};

/// Isotropic Gaussian blobs. `counts[b]` points go to blob b; when `counts`
/// is empty the k points are dealt round-robin over the centers.
struct Blobs {
  std::vector<Vec3> centers;
  double sigma = 2.0;
  std::vector<std::size_t> counts;
};

using Layout = std::variant<UniformCube, Grid, Blobs>;

/// Parameters of a synthetic displacement field. Lengths are millimeters.
///
/// The displacement at fixed point x is
///   d_a(x) = deform_amp * sin(2*pi * <w_a, x - c> / deform_wavelength + phi_a) + n_a
/// for each axis a, with w_a a random unit direction, phi_a a random phase,
/// c the cube center and n_a ~ N(0, noise_sigma^2).
struct SynthSpec {
  std::uint64_t seed = 0;
  std::size_t k = 20;
  double extent = 80.0;
  double deform_amp = 5.0;
  double deform_wavelength = 60.0;
  double noise_sigma = 0.5;
  Layout layout = UniformCube{};

  /// Throws Error(InvalidArgument) on k < 2, non-positive lengths, negative
  /// amplitude/noise, or blob counts that do not sum to k.
  void validate() const;
};

/// Deterministic in `spec` (see CounterRng for the stream definition).
/// Landmark ids are "1".."k".
DisplacementField generate(const SynthSpec& spec);

/// Root-mean-square per-component deviation of the displacements from their
/// mean: sqrt(sum_k |d_k - mean(d)|^2 / (3K)).
double displacement_std(const DisplacementField& field);

/// Copy with landmark `index`'s moving point translated by `offset_mm`.
/// Throws IndexOutOfRange, or InvalidArgument for a zero offset.
DisplacementField inject_global(const DisplacementField& field, std::size_t index,
                                const Vec3& offset_mm);

/// Copy where landmark `index` takes the negated mean displacement of its
/// neighbours within the local small-h radius. Throws IndexOutOfRange, or
/// NoLocalNeighborhood when fewer than `local_min_pairs` neighbours exist.
DisplacementField inject_local(const DisplacementField& field, std::size_t index,
                               const ScreeningConfig& config);

/// Indices of the landmarks inject_local accepts under `config`.
std::vector<std::size_t> local_candidates(const DisplacementField& field,
                                          const ScreeningConfig& config);

}  // namespace lmscreen::synth
