#include "lmscreen/screening.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "lmscreen/error.hpp"
#include "lmscreen/stats.hpp"

namespace lmscreen {

namespace {

void require_screenable(const DisplacementField& field) {
  if (field.size() < kMinLandmarksForScreening) {
    throw Error(ErrorCode::TooFewLandmarksForScreening,
                "outlier scoring needs at least " +
                    std::to_string(kMinLandmarksForScreening) + " landmarks, got " +
                    std::to_string(field.size()));
  }
}

std::vector<PairRef> refs_of(const VariogramCloud& cloud, const std::vector<std::size_t>& pos) {
  std::vector<PairRef> refs;
  refs.reserve(pos.size());
  for (std::size_t p : pos) refs.emplace_back(cloud.points[p].i, cloud.points[p].j);
  std::sort(refs.begin(), refs.end());
  return refs;
}

double distance(const Vec3& a, const Vec3& b) { return (a - b).norm(); }

// Small-h pairs of landmark k as positions into cloud.points.
std::vector<std::size_t> local_pairs(const VariogramCloud& cloud, const PairIndex& index,
                                     std::size_t k, double radius) {
  std::vector<std::size_t> out;
  for (std::size_t p : index.pairs_of(k)) {
    if (cloud.points[p].h <= radius) out.push_back(p);
  }
  return out;
}

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n) {
    std::iota(parent_.begin(), parent_.end(), std::size_t{0});
  }
  std::size_t find(std::size_t a) {
    while (parent_[a] != a) {
      parent_[a] = parent_[parent_[a]];
      a = parent_[a];
    }
    return a;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent_[std::max(a, b)] = std::min(a, b);
  }

 private:
  std::vector<std::size_t> parent_;
};

}  // namespace

PairIndex::PairIndex(const VariogramCloud& cloud) : by_landmark_(cloud.landmark_count) {
  for (std::size_t p = 0; p < cloud.points.size(); ++p) {
    by_landmark_[cloud.points[p].i].push_back(p);
    by_landmark_[cloud.points[p].j].push_back(p);
  }
}

std::vector<double> global_scores(const DisplacementField& field, const VariogramCloud& cloud) {
  require_screenable(field);
  const PairIndex index(cloud);
  const std::size_t k = field.size();

  std::vector<double> per_landmark(k);
  std::vector<double> eps;
  for (std::size_t n = 0; n < k; ++n) {
    eps.clear();
    for (std::size_t p : index.pairs_of(n)) eps.push_back(cloud.points[p].eps);
    per_landmark[n] = stats::median(eps);
  }

  const double center = stats::median(per_landmark);
  const double spread = stats::mad(per_landmark, center);
  std::vector<double> scores(k, 0.0);
  if (spread == 0.0) return scores;
  for (std::size_t n = 0; n < k; ++n) {
    scores[n] = std::max(0.0, (per_landmark[n] - center) / (kMadScale * spread));
  }
  return scores;
}

double local_radius(const VariogramCloud& cloud, const ScreeningConfig& config) {
  if (cloud.points.empty()) throw Error(ErrorCode::EmptyCloud, "no pairs");
  std::vector<double> h;
  h.reserve(cloud.points.size());
  for (const auto& p : cloud.points) h.push_back(p.h);
  return stats::quantile(h, config.local_h_quantile);
}

std::vector<std::optional<double>> local_scores(const DisplacementField& field,
                                                const VariogramCloud& cloud,
                                                const ScreeningConfig& config) {
  require_screenable(field);
  config.validate();
  const double radius = local_radius(cloud, config);
  const std::size_t k = field.size();

  std::vector<std::optional<double>> scores(k);
  std::vector<double> mine;
  std::vector<double> others;
  for (std::size_t n = 0; n < k; ++n) {
    mine.clear();
    others.clear();
    for (const auto& p : cloud.points) {
      if (p.h > radius) break;  // cloud is sorted by h
      if (p.i == n || p.j == n) {
        mine.push_back(p.eps);
      } else {
        others.push_back(p.eps);
      }
    }
    if (mine.size() < config.local_min_pairs || others.empty()) continue;

    const double num = stats::median(mine);
    const double den = stats::median(others);
    if (den == 0.0) {
      scores[n] = num > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
    } else {
      scores[n] = num / den;
    }
  }
  return scores;
}

std::vector<OutlierFlag> detect_outliers(const DisplacementField& field,
                                         const VariogramCloud& cloud,
                                         const ScreeningConfig& config) {
  const std::vector<double> global = global_scores(field, cloud);
  const std::vector<std::optional<double>> local = local_scores(field, cloud, config);
  const PairIndex index(cloud);
  const double radius = local_radius(cloud, config);

  std::vector<OutlierFlag> flags;
  std::vector<bool> is_global(field.size(), false);
  for (std::size_t n = 0; n < field.size(); ++n) {
    if (global[n] > config.tau_global) {
      is_global[n] = true;
      flags.push_back({field[n].id, OutlierKind::Global, global[n],
                       refs_of(cloud, index.pairs_of(n))});
    }
  }
  for (std::size_t n = 0; n < field.size(); ++n) {
    if (is_global[n] || !local[n] || !(*local[n] > config.tau_local)) continue;
    flags.push_back({field[n].id, OutlierKind::Local, *local[n],
                     refs_of(cloud, local_pairs(cloud, index, n, radius))});
  }
  return flags;
}

std::vector<double> nearest_neighbor_distances(const DisplacementField& field) {
  const std::size_t k = field.size();
  std::vector<double> nn(k, std::numeric_limits<double>::infinity());
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i + 1; j < k; ++j) {
      const double d = distance(field[i].fixed, field[j].fixed);
      nn[i] = std::min(nn[i], d);
      nn[j] = std::min(nn[j], d);
    }
  }
  return nn;
}

std::optional<DistributionFinding> detect_clusters(const DisplacementField& field,
                                                   const ScreeningConfig& config) {
  config.validate();
  const std::size_t k = field.size();
  if (k < 2 * config.cluster_min_size) return std::nullopt;

  const std::vector<double> nn = nearest_neighbor_distances(field);
  const double link = config.cluster_link_factor * stats::median(nn);

  DisjointSets sets(k);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i + 1; j < k; ++j) {
      if (distance(field[i].fixed, field[j].fixed) <= link) sets.unite(i, j);
    }
  }

  // Components keyed by their smallest member, members in field order.
  std::vector<std::vector<std::size_t>> components;
  std::vector<std::size_t> slot(k, k);
  for (std::size_t n = 0; n < k; ++n) {
    const std::size_t root = sets.find(n);
    if (slot[root] == k) {
      slot[root] = components.size();
      components.emplace_back();
    }
    components[slot[root]].push_back(n);
  }
  std::erase_if(components, [&](const auto& c) { return c.size() < config.cluster_min_size; });
  if (components.size() < 2) return std::nullopt;

  DistributionFinding finding;
  finding.kind = FindingKind::Cluster;
  finding.metric_mm = std::numeric_limits<double>::infinity();
  for (std::size_t a = 0; a < components.size(); ++a) {
    std::vector<std::string> ids;
    for (std::size_t n : components[a]) ids.push_back(field[n].id);
    finding.groups.push_back(std::move(ids));
    for (std::size_t b = a + 1; b < components.size(); ++b) {
      for (std::size_t i : components[a]) {
        for (std::size_t j : components[b]) {
          finding.metric_mm =
              std::min(finding.metric_mm, distance(field[i].fixed, field[j].fixed));
        }
      }
    }
  }
  return finding;
}

std::vector<DistributionFinding> detect_isolated(const DisplacementField& field,
                                                 const ScreeningConfig& config) {
  config.validate();
  std::vector<DistributionFinding> findings;
  if (field.size() < 3) return findings;

  const std::vector<double> nn = nearest_neighbor_distances(field);
  const double limit = config.isolated_factor * stats::median(nn);
  for (std::size_t n = 0; n < field.size(); ++n) {
    if (nn[n] > limit) {
      findings.push_back({FindingKind::Isolated, {{field[n].id}}, nn[n]});
    }
  }
  return findings;
}

CloudSummary summarize_cloud(const VariogramCloud& cloud) {
  CloudSummary s;
  s.landmark_count = cloud.landmark_count;
  s.pair_count = cloud.points.size();
  if (cloud.points.empty()) return s;
  s.h_min = cloud.points.front().h;
  s.h_max = cloud.points.back().h;
  std::vector<double> eps;
  eps.reserve(cloud.points.size());
  for (const auto& p : cloud.points) eps.push_back(p.eps);
  s.eps_median = stats::median(eps);
  return s;
}

ScreeningReport screen_case(const DisplacementField& field, const ScreeningConfig& config) {
  config.validate();
  const VariogramCloud cloud = compute_cloud(field);

  ScreeningReport report;
  report.case_id = field.case_id();
  report.config = config;
  report.cloud = summarize_cloud(cloud);
  report.landmarks.assign(field.landmarks().begin(), field.landmarks().end());
  report.scores.reserve(field.size());
  for (const auto& lm : field.landmarks()) report.scores.push_back({lm.id, {}, {}});

  if (field.size() >= kMinLandmarksForScreening) {
    const auto global = global_scores(field, cloud);
    const auto local = local_scores(field, cloud, config);
    for (std::size_t n = 0; n < field.size(); ++n) {
      report.scores[n].global = global[n];
      report.scores[n].local = local[n];
    }
    report.outliers = detect_outliers(field, cloud, config);
  } else {
    report.outliers_skipped = kSkippedTooFew;
  }

  if (auto clusters = detect_clusters(field, config)) report.findings.push_back(*clusters);
  for (auto& f : detect_isolated(field, config)) report.findings.push_back(std::move(f));
  return report;
}

}  // namespace lmscreen
