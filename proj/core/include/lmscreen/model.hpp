#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

namespace lmscreen {

/// Patient-space position or displacement in millimeters.
using Vec3 = Eigen::Vector3d;

/// One annotated correspondence: `fixed` is the point on the fixed image,
/// `moving` the matching point on the moving image.
struct Landmark {
  std::string id;
  Vec3 fixed = Vec3::Zero();
  Vec3 moving = Vec3::Zero();

  bool operator==(const Landmark& other) const = default;
};

/// moving - fixed, component-wise.
Vec3 displacement(const Landmark& lm);

/// Two fixed points closer than this are treated as the same position.
inline constexpr double kDuplicatePositionTolerance = 1e-6;

/// A validated, immutable set of landmark displacements for one case.
///
/// Invariants: at least two landmarks, finite coordinates, non-empty unique
/// ids, pairwise distinct fixed positions. Displacements are never cached;
/// they are always recomputed from the stored points.
class DisplacementField {
 public:
  /// Validates `landmarks` and takes ownership. Throws lmscreen::Error with
  /// TooFewLandmarks, NonFiniteCoordinate, EmptyId, DuplicateId or
  /// DuplicateFixedPosition.
  static DisplacementField build(std::string case_id, std::vector<Landmark> landmarks);

  const std::string& case_id() const noexcept { return case_id_; }
  std::span<const Landmark> landmarks() const noexcept { return landmarks_; }
  const Landmark& operator[](std::size_t index) const { return landmarks_[index]; }
  std::size_t size() const noexcept { return landmarks_.size(); }

  Vec3 displacement(std::size_t index) const;

  /// Index of the landmark with `id`, or size() when absent.
  std::size_t index_of(std::string_view id) const;

  /// Copy with one landmark's moving point replaced. Fixed points are
  /// untouched so the copy needs no re-validation.
  DisplacementField with_moving(std::size_t index, const Vec3& moving) const;

  bool operator==(const DisplacementField& other) const = default;

 private:
  DisplacementField(std::string case_id, std::vector<Landmark> landmarks);

  std::string case_id_;
  std::vector<Landmark> landmarks_;
};

/// Where a case's correspondences came from.
enum class SourceFormat { Csv, MniTag, SlicerFcsvPair, Synthetic };

std::string_view to_string(SourceFormat format);
/// Inverse of to_string; nullopt for unknown names.
std::optional<SourceFormat> source_format_from_string(std::string_view name);

/// Thresholds for the automatic screening pass. Score thresholds are
/// unitless; factors multiply a distance measured on the same field.
struct ScreeningConfig {
  double tau_global = 5.0;
  double tau_local = 5.0;
  double local_h_quantile = 0.05;
  std::size_t local_min_pairs = 2;
  double cluster_link_factor = 3.0;
  std::size_t cluster_min_size = 3;
  double isolated_factor = 6.0;
  std::size_t n_bins = 10;

  /// Throws Error(InvalidConfig) when any invariant is violated.
  void validate() const;

  bool operator==(const ScreeningConfig& other) const = default;
};

}  // namespace lmscreen
