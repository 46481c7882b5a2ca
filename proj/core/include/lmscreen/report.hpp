#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lmscreen/screening.hpp"

namespace lmscreen {

inline constexpr std::string_view kSchemaVersion = "1";

/// Reviewer triage categories: certainly problematic, atypical but unsure,
/// normal-looking.
enum class ReviewCategory { Certain, Unsure, Normal };

std::string_view to_string(ReviewCategory category);
std::optional<ReviewCategory> review_category_from_string(std::string_view name);

/// One reviewer's verdict on one landmark. Scores: 1 poor, 2 questionable,
/// 3 acceptable, 4 good.
struct ReviewVerdict {
  std::string case_id;
  std::string landmark_id;
  ReviewCategory category = ReviewCategory::Normal;
  int score = 0;
  std::string reviewer;

  bool operator==(const ReviewVerdict&) const = default;
};

inline bool valid_review_score(int score) { return score >= 1 && score <= 4; }

/// Flagged entries of one dataset, written "case(landmark)" (clusters: "case").
/// The review columns are filled only from verdicts.
struct DatasetSummary {
  std::string dataset;
  std::vector<std::string> global;
  std::vector<std::string> local;
  std::vector<std::string> cluster;
  std::vector<std::string> isolated;
  std::vector<std::string> certain;
  std::vector<std::string> unsure;
  std::vector<std::string> normal;

  bool operator==(const DatasetSummary&) const = default;
};

struct Summary {
  std::vector<DatasetSummary> datasets;
  /// Mean verdict score per category name; empty without verdicts.
  std::map<std::string, double> mean_score;

  bool operator==(const Summary&) const = default;
};

/// Groups flags by dataset (sorted by name; cases keep input order).
/// Throws DuplicateCaseId when two reports share a case id.
Summary summarize(std::span<const ScreeningReport> reports,
                  std::span<const ReviewVerdict> verdicts = {});

/// "case(landmark)".
std::string table_entry(std::string_view case_id, std::string_view landmark_id);

struct ReportDocument {
  std::string schema_version{kSchemaVersion};
  std::string generated_at;
  std::vector<ScreeningReport> cases;
  Summary summary;
  std::optional<std::vector<ReviewVerdict>> review;

  bool operator==(const ReportDocument&) const = default;
};

/// Builds a document and its summary. Throws DuplicateCaseId.
ReportDocument make_document(std::vector<ScreeningReport> cases, std::string generated_at,
                             std::optional<std::vector<ReviewVerdict>> review = std::nullopt);

/// Current UTC time as "YYYY-MM-DDTHH:MM:SSZ".
std::string utc_timestamp_now();

/// Canonical JSON: sorted keys, numbers rounded to 9 significant digits,
/// two-space indentation, trailing newline. An infinite local score is
/// written as the string "inf".
std::string write_report_json(const ReportDocument& doc);

/// Strict inverse of write_report_json. Throws SchemaVersionUnsupported or
/// MalformedDocument.
ReportDocument read_report_json(std::string_view bytes);

/// One case report as compact canonical JSON (same shape as in the document).
std::string write_case_json(const ScreeningReport& report);

/// Verdict (de)serialisation shared with the review log.
std::string verdict_to_json_line(const ReviewVerdict& verdict);
ReviewVerdict verdict_from_json(std::string_view json);

/// Case report lookup by id; nullptr when absent.
const ScreeningReport* find_case(const ReportDocument& doc, std::string_view case_id);

/// Rebuilds the validated field stored in a case report.
DisplacementField field_of(const ScreeningReport& report);

}  // namespace lmscreen
