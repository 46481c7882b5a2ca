#include "lmscreen/model.hpp"

#include <cmath>
#include <unordered_set>

#include "lmscreen/error.hpp"

namespace lmscreen {

Vec3 displacement(const Landmark& lm) { return lm.moving - lm.fixed; }

namespace {

bool all_finite(const Vec3& v) {
  return std::isfinite(v.x()) && std::isfinite(v.y()) && std::isfinite(v.z());
}

}  // namespace

DisplacementField::DisplacementField(std::string case_id, std::vector<Landmark> landmarks)
    : case_id_(std::move(case_id)), landmarks_(std::move(landmarks)) {}

DisplacementField DisplacementField::build(std::string case_id,
                                           std::vector<Landmark> landmarks) {
  if (landmarks.size() < 2) {
    throw Error(ErrorCode::TooFewLandmarks,
                "a field needs at least 2 landmarks, got " + std::to_string(landmarks.size()));
  }

  std::unordered_set<std::string_view> seen;
  seen.reserve(landmarks.size());
  for (std::size_t k = 0; k < landmarks.size(); ++k) {
    const Landmark& lm = landmarks[k];
    if (lm.id.empty()) {
      throw Error(ErrorCode::EmptyId, "landmark #" + std::to_string(k + 1) + " has no id");
    }
    if (!all_finite(lm.fixed) || !all_finite(lm.moving)) {
      throw Error(ErrorCode::NonFiniteCoordinate, "landmark '" + lm.id + "'");
    }
    if (!seen.insert(lm.id).second) {
      throw Error(ErrorCode::DuplicateId, "landmark id '" + lm.id + "' appears twice");
    }
  }

  const double tol2 = kDuplicatePositionTolerance * kDuplicatePositionTolerance;
  for (std::size_t i = 0; i < landmarks.size(); ++i) {
    for (std::size_t j = i + 1; j < landmarks.size(); ++j) {
      if ((landmarks[i].fixed - landmarks[j].fixed).squaredNorm() < tol2) {
        throw Error(ErrorCode::DuplicateFixedPosition,
                    "landmarks '" + landmarks[i].id + "' and '" + landmarks[j].id +
                        "' share a fixed position");
      }
    }
  }

  return DisplacementField(std::move(case_id), std::move(landmarks));
}

Vec3 DisplacementField::displacement(std::size_t index) const {
  return lmscreen::displacement(landmarks_[index]);
}

std::size_t DisplacementField::index_of(std::string_view id) const {
  for (std::size_t k = 0; k < landmarks_.size(); ++k) {
    if (landmarks_[k].id == id) return k;
  }
  return landmarks_.size();
}

DisplacementField DisplacementField::with_moving(std::size_t index, const Vec3& moving) const {
  if (index >= landmarks_.size()) {
    throw Error(ErrorCode::IndexOutOfRange, "landmark index " + std::to_string(index));
  }
  if (!all_finite(moving)) {
    throw Error(ErrorCode::NonFiniteCoordinate, "landmark '" + landmarks_[index].id + "'");
  }
  DisplacementField copy = *this;
  copy.landmarks_[index].moving = moving;
  return copy;
}

std::string_view to_string(SourceFormat format) {
  switch (format) {
    case SourceFormat::Csv: return "csv";
    case SourceFormat::MniTag: return "mni_tag";
    case SourceFormat::SlicerFcsvPair: return "slicer_fcsv_pair";
    case SourceFormat::Synthetic: return "synthetic";
  }
  return "csv";
}

std::optional<SourceFormat> source_format_from_string(std::string_view name) {
  for (auto f : {SourceFormat::Csv, SourceFormat::MniTag, SourceFormat::SlicerFcsvPair,
                 SourceFormat::Synthetic}) {
    if (to_string(f) == name) return f;
  }
  return std::nullopt;
}

void ScreeningConfig::validate() const {
  auto fail = [](const std::string& what) { throw Error(ErrorCode::InvalidConfig, what); };
  if (!(tau_global > 0)) fail("tau_global must be positive");
  if (!(tau_local > 0)) fail("tau_local must be positive");
  if (!(local_h_quantile > 0 && local_h_quantile < 1)) fail("local_h_quantile must lie in (0,1)");
  if (local_min_pairs == 0) fail("local_min_pairs must be positive");
  if (!(cluster_link_factor > 0)) fail("cluster_link_factor must be positive");
  if (cluster_min_size < 2) fail("cluster_min_size must be at least 2");
  if (!(isolated_factor > 0)) fail("isolated_factor must be positive");
  if (n_bins == 0) fail("n_bins must be positive");
}

}  // namespace lmscreen
