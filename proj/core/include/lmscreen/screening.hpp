#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lmscreen/model.hpp"
#include "lmscreen/variogram.hpp"

namespace lmscreen {

/// Below this many landmarks the robust outlier scores are not computed.
inline constexpr std::size_t kMinLandmarksForScreening = 5;

/// Consistency constant making the MAD an estimate of the standard deviation
/// under normality.
inline constexpr double kMadScale = 1.4826;

enum class OutlierKind { Global, Local };

using PairRef = std::pair<std::size_t, std::size_t>;

struct OutlierFlag {
  std::string landmark_id;
  OutlierKind kind = OutlierKind::Global;
  double score = 0.0;
  std::vector<PairRef> contributing_pairs;

  bool operator==(const OutlierFlag&) const = default;
};

enum class FindingKind { Cluster, Isolated };

/// A cluster finding lists each qualifying component as one group; an
/// isolated finding has exactly one group holding one landmark. `metric_mm`
/// is the smallest inter-group distance for clusters and the nearest-neighbour
/// distance for an isolated landmark.
struct DistributionFinding {
  FindingKind kind = FindingKind::Cluster;
  std::vector<std::vector<std::string>> groups;
  double metric_mm = 0.0;

  bool operator==(const DistributionFinding&) const = default;
};

/// Per-landmark pair lookup into a cloud's point list.
class PairIndex {
 public:
  explicit PairIndex(const VariogramCloud& cloud);
  /// Positions in cloud.points of every pair that involves landmark k.
  const std::vector<std::size_t>& pairs_of(std::size_t k) const { return by_landmark_[k]; }

 private:
  std::vector<std::vector<std::size_t>> by_landmark_;
};

/// Robust z-score of each landmark's median eps over its K-1 pairs, floored
/// at 0. Aligned with field order. Throws TooFewLandmarksForScreening for
/// K < 5.
std::vector<double> global_scores(const DisplacementField& field, const VariogramCloud& cloud);

/// Ratio of the landmark's small-h median eps to the small-h median eps of all
/// other pairs. Small h means h <= the `local_h_quantile` quantile of all h.
/// Absent when the landmark has fewer than `local_min_pairs` small-h pairs or
/// no other small-h pair exists. May be +inf.
std::vector<std::optional<double>> local_scores(const DisplacementField& field,
                                                const VariogramCloud& cloud,
                                                const ScreeningConfig& config);

/// The small-h radius used by local_scores.
double local_radius(const VariogramCloud& cloud, const ScreeningConfig& config);

/// Global flags first (field order), then Local flags for landmarks not
/// already flagged Global.
std::vector<OutlierFlag> detect_outliers(const DisplacementField& field,
                                         const VariogramCloud& cloud,
                                         const ScreeningConfig& config);

/// Nearest-neighbour distance of each fixed point.
std::vector<double> nearest_neighbor_distances(const DisplacementField& field);

std::optional<DistributionFinding> detect_clusters(const DisplacementField& field,
                                                   const ScreeningConfig& config);

std::vector<DistributionFinding> detect_isolated(const DisplacementField& field,
                                                 const ScreeningConfig& config);

struct LandmarkScores {
  std::string landmark_id;
  std::optional<double> global;
  std::optional<double> local;

  bool operator==(const LandmarkScores&) const = default;
};

struct CloudSummary {
  std::size_t landmark_count = 0;
  std::size_t pair_count = 0;
  double h_min = 0.0;
  double h_max = 0.0;
  double eps_median = 0.0;

  bool operator==(const CloudSummary&) const = default;
};

struct ScreeningReport {
  std::string case_id;
  std::string dataset;
  SourceFormat source_format = SourceFormat::Csv;
  std::vector<std::string> warnings;
  ScreeningConfig config;
  /// Empty when outlier scoring ran; otherwise the reason it was skipped.
  std::string outliers_skipped;
  std::vector<OutlierFlag> outliers;
  std::vector<DistributionFinding> findings;
  std::vector<LandmarkScores> scores;
  CloudSummary cloud;
  /// The screened correspondences, so a report is self-contained.
  std::vector<Landmark> landmarks;

  bool operator==(const ScreeningReport&) const = default;
};

inline constexpr const char* kSkippedTooFew = "skipped: too few landmarks";

CloudSummary summarize_cloud(const VariogramCloud& cloud);

/// Runs every detector on one case. Outlier scoring is skipped (and recorded)
/// for K < 5; distribution checks still run.
ScreeningReport screen_case(const DisplacementField& field, const ScreeningConfig& config);

}  // namespace lmscreen
