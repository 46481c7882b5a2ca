#include "lmscreen/report.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <limits>
#include <set>

#include <nlohmann/json.hpp>

#include "lmscreen/error.hpp"
#include "text.hpp"

namespace lmscreen {

using nlohmann::json;

std::string_view to_string(ReviewCategory category) {
  switch (category) {
    case ReviewCategory::Certain: return "certain";
    case ReviewCategory::Unsure: return "unsure";
    case ReviewCategory::Normal: return "normal";
  }
  return "normal";
}

std::optional<ReviewCategory> review_category_from_string(std::string_view name) {
  for (auto c : {ReviewCategory::Certain, ReviewCategory::Unsure, ReviewCategory::Normal}) {
    if (to_string(c) == name) return c;
  }
  return std::nullopt;
}

std::string table_entry(std::string_view case_id, std::string_view landmark_id) {
  std::string out(case_id);
  out += '(';
  out += landmark_id;
  out += ')';
  return out;
}

Summary summarize(std::span<const ScreeningReport> reports,
                  std::span<const ReviewVerdict> verdicts) {
  std::set<std::string_view> ids;
  std::map<std::string, DatasetSummary> by_dataset;
  std::map<std::string_view, std::string_view> dataset_of;

  for (const auto& r : reports) {
    if (!ids.insert(r.case_id).second) {
      throw Error(ErrorCode::DuplicateCaseId, "case '" + r.case_id + "' appears twice");
    }
    dataset_of[r.case_id] = r.dataset;
    DatasetSummary& row = by_dataset[r.dataset];
    row.dataset = r.dataset;
    for (const auto& flag : r.outliers) {
      auto& column = flag.kind == OutlierKind::Global ? row.global : row.local;
      column.push_back(table_entry(r.case_id, flag.landmark_id));
    }
    for (const auto& finding : r.findings) {
      if (finding.kind == FindingKind::Cluster) {
        row.cluster.push_back(r.case_id);
      } else {
        row.isolated.push_back(table_entry(r.case_id, finding.groups.front().front()));
      }
    }
  }

  std::map<std::string, std::pair<double, std::size_t>> totals;
  for (const auto& v : verdicts) {
    auto& [sum, count] = totals[std::string(to_string(v.category))];
    sum += v.score;
    ++count;
    const auto ds = dataset_of.find(v.case_id);
    if (ds == dataset_of.end()) continue;
    DatasetSummary& row = by_dataset[std::string(ds->second)];
    auto& column = v.category == ReviewCategory::Certain  ? row.certain
                   : v.category == ReviewCategory::Unsure ? row.unsure
                                                          : row.normal;
    column.push_back(table_entry(v.case_id, v.landmark_id));
  }

  Summary summary;
  for (auto& [name, row] : by_dataset) summary.datasets.push_back(std::move(row));
  for (const auto& [category, total] : totals) {
    summary.mean_score[category] = total.first / static_cast<double>(total.second);
  }
  return summary;
}

ReportDocument make_document(std::vector<ScreeningReport> cases, std::string generated_at,
                             std::optional<std::vector<ReviewVerdict>> review) {
  ReportDocument doc;
  doc.generated_at = std::move(generated_at);
  doc.cases = std::move(cases);
  doc.review = std::move(review);
  doc.summary = summarize(doc.cases, doc.review ? std::span<const ReviewVerdict>(*doc.review)
                                                : std::span<const ReviewVerdict>());
  return doc;
}

std::string utc_timestamp_now() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

const ScreeningReport* find_case(const ReportDocument& doc, std::string_view case_id) {
  for (const auto& c : doc.cases) {
    if (c.case_id == case_id) return &c;
  }
  return nullptr;
}

DisplacementField field_of(const ScreeningReport& report) {
  return DisplacementField::build(report.case_id, report.landmarks);
}

// ---------------------------------------------------------------------------
// Serialisation

namespace {

json number(double v) { return text::round_sig9(v); }

json vec_json(const Vec3& v) { return json::array({number(v.x()), number(v.y()), number(v.z())}); }

json optional_score(const std::optional<double>& v) {
  if (!v) return nullptr;
  if (std::isinf(*v)) return "inf";
  return number(*v);
}

std::string_view kind_name(OutlierKind k) { return k == OutlierKind::Global ? "global" : "local"; }
std::string_view kind_name(FindingKind k) { return k == FindingKind::Cluster ? "cluster" : "isolated"; }

json config_json(const ScreeningConfig& c) {
  return {{"tau_global", number(c.tau_global)},
          {"tau_local", number(c.tau_local)},
          {"local_h_quantile", number(c.local_h_quantile)},
          {"local_min_pairs", c.local_min_pairs},
          {"cluster_link_factor", number(c.cluster_link_factor)},
          {"cluster_min_size", c.cluster_min_size},
          {"isolated_factor", number(c.isolated_factor)},
          {"n_bins", c.n_bins}};
}

json case_json(const ScreeningReport& r) {
  json outliers = json::array();
  for (const auto& f : r.outliers) {
    json pairs = json::array();
    for (const auto& [i, j] : f.contributing_pairs) pairs.push_back({i, j});
    outliers.push_back({{"landmark_id", f.landmark_id},
                        {"kind", kind_name(f.kind)},
                        {"score", optional_score(f.score)},
                        {"contributing_pairs", std::move(pairs)}});
  }
  json findings = json::array();
  for (const auto& f : r.findings) {
    findings.push_back(
        {{"kind", kind_name(f.kind)}, {"groups", f.groups}, {"metric_mm", number(f.metric_mm)}});
  }
  json scores = json::array();
  for (const auto& s : r.scores) {
    scores.push_back(
        {{"id", s.landmark_id}, {"global", optional_score(s.global)}, {"local", optional_score(s.local)}});
  }
  json landmarks = json::array();
  for (const auto& lm : r.landmarks) {
    landmarks.push_back({{"id", lm.id}, {"fixed", vec_json(lm.fixed)}, {"moving", vec_json(lm.moving)}});
  }
  return {{"case_id", r.case_id},
          {"dataset", r.dataset},
          {"source_format", to_string(r.source_format)},
          {"warnings", r.warnings},
          {"config", config_json(r.config)},
          {"outliers_skipped", r.outliers_skipped.empty() ? json(nullptr) : json(r.outliers_skipped)},
          {"outliers", std::move(outliers)},
          {"findings", std::move(findings)},
          {"scores", std::move(scores)},
          {"cloud",
           {{"landmark_count", r.cloud.landmark_count},
            {"pair_count", r.cloud.pair_count},
            {"h_min_mm", number(r.cloud.h_min)},
            {"h_max_mm", number(r.cloud.h_max)},
            {"eps_median_mm2", number(r.cloud.eps_median)}}},
          {"landmarks", std::move(landmarks)}};
}

json verdict_json(const ReviewVerdict& v) {
  return {{"case_id", v.case_id},
          {"landmark_id", v.landmark_id},
          {"category", to_string(v.category)},
          {"score", v.score},
          {"reviewer", v.reviewer}};
}

json summary_json(const Summary& s) {
  json rows = json::array();
  for (const auto& d : s.datasets) {
    rows.push_back({{"dataset", d.dataset},
                    {"global", d.global},
                    {"local", d.local},
                    {"cluster", d.cluster},
                    {"isolated", d.isolated},
                    {"certain", d.certain},
                    {"unsure", d.unsure},
                    {"normal", d.normal}});
  }
  json means = json::object();
  for (const auto& [k, v] : s.mean_score) means[k] = number(v);
  return {{"datasets", std::move(rows)}, {"mean_score", std::move(means)}};
}

// --- reading -------------------------------------------------------------

[[noreturn]] void malformed(const std::string& what) {
  throw Error(ErrorCode::MalformedDocument, what);
}

const json& field(const json& obj, const char* key) {
  if (!obj.is_object()) malformed(std::string("expected an object holding '") + key + "'");
  const auto it = obj.find(key);
  if (it == obj.end()) malformed(std::string("missing key '") + key + "'");
  return *it;
}

double get_number(const json& v, const char* what) {
  if (!v.is_number()) malformed(std::string(what) + " must be a number");
  return v.get<double>();
}

std::size_t get_count(const json& v, const char* what) {
  if (!v.is_number_unsigned()) malformed(std::string(what) + " must be a non-negative integer");
  return v.get<std::size_t>();
}

std::string get_string(const json& v, const char* what) {
  if (!v.is_string()) malformed(std::string(what) + " must be a string");
  return v.get<std::string>();
}

std::vector<std::string> get_strings(const json& v, const char* what) {
  if (!v.is_array()) malformed(std::string(what) + " must be an array");
  std::vector<std::string> out;
  for (const auto& e : v) out.push_back(get_string(e, what));
  return out;
}

const json& get_array(const json& v, const char* what) {
  if (!v.is_array()) malformed(std::string(what) + " must be an array");
  return v;
}

std::optional<double> get_optional_score(const json& v, const char* what) {
  if (v.is_null()) return std::nullopt;
  if (v.is_string() && v.get<std::string>() == "inf") return std::numeric_limits<double>::infinity();
  return get_number(v, what);
}

Vec3 get_vec(const json& v, const char* what) {
  if (!v.is_array() || v.size() != 3) malformed(std::string(what) + " must be a 3-array");
  return {get_number(v[0], what), get_number(v[1], what), get_number(v[2], what)};
}

ScreeningConfig read_config(const json& j) {
  ScreeningConfig c;
  c.tau_global = get_number(field(j, "tau_global"), "tau_global");
  c.tau_local = get_number(field(j, "tau_local"), "tau_local");
  c.local_h_quantile = get_number(field(j, "local_h_quantile"), "local_h_quantile");
  c.local_min_pairs = get_count(field(j, "local_min_pairs"), "local_min_pairs");
  c.cluster_link_factor = get_number(field(j, "cluster_link_factor"), "cluster_link_factor");
  c.cluster_min_size = get_count(field(j, "cluster_min_size"), "cluster_min_size");
  c.isolated_factor = get_number(field(j, "isolated_factor"), "isolated_factor");
  c.n_bins = get_count(field(j, "n_bins"), "n_bins");
  return c;
}

ScreeningReport read_case(const json& j) {
  ScreeningReport r;
  r.case_id = get_string(field(j, "case_id"), "case_id");
  r.dataset = get_string(field(j, "dataset"), "dataset");
  const auto fmt = source_format_from_string(get_string(field(j, "source_format"), "source_format"));
  if (!fmt) malformed("unknown source_format");
  r.source_format = *fmt;
  r.warnings = get_strings(field(j, "warnings"), "warnings");
  r.config = read_config(field(j, "config"));
  const json& skipped = field(j, "outliers_skipped");
  if (!skipped.is_null()) r.outliers_skipped = get_string(skipped, "outliers_skipped");

  for (const auto& o : get_array(field(j, "outliers"), "outliers")) {
    OutlierFlag f;
    f.landmark_id = get_string(field(o, "landmark_id"), "landmark_id");
    const std::string kind = get_string(field(o, "kind"), "kind");
    if (kind != "global" && kind != "local") malformed("unknown outlier kind '" + kind + "'");
    f.kind = kind == "global" ? OutlierKind::Global : OutlierKind::Local;
    const auto score = get_optional_score(field(o, "score"), "score");
    if (!score) malformed("outlier score missing");
    f.score = *score;
    for (const auto& p : get_array(field(o, "contributing_pairs"), "contributing_pairs")) {
      if (!p.is_array() || p.size() != 2) malformed("pair refs must be [i, j]");
      f.contributing_pairs.emplace_back(get_count(p[0], "pair index"), get_count(p[1], "pair index"));
    }
    r.outliers.push_back(std::move(f));
  }
  for (const auto& o : get_array(field(j, "findings"), "findings")) {
    DistributionFinding f;
    const std::string kind = get_string(field(o, "kind"), "kind");
    if (kind != "cluster" && kind != "isolated") malformed("unknown finding kind '" + kind + "'");
    f.kind = kind == "cluster" ? FindingKind::Cluster : FindingKind::Isolated;
    for (const auto& g : get_array(field(o, "groups"), "groups")) {
      f.groups.push_back(get_strings(g, "group"));
    }
    if (f.groups.empty() || f.groups.front().empty()) malformed("finding without members");
    f.metric_mm = get_number(field(o, "metric_mm"), "metric_mm");
    r.findings.push_back(std::move(f));
  }
  for (const auto& s : get_array(field(j, "scores"), "scores")) {
    r.scores.push_back({get_string(field(s, "id"), "id"),
                        get_optional_score(field(s, "global"), "global"),
                        get_optional_score(field(s, "local"), "local")});
  }
  const json& cloud = field(j, "cloud");
  r.cloud.landmark_count = get_count(field(cloud, "landmark_count"), "landmark_count");
  r.cloud.pair_count = get_count(field(cloud, "pair_count"), "pair_count");
  r.cloud.h_min = get_number(field(cloud, "h_min_mm"), "h_min_mm");
  r.cloud.h_max = get_number(field(cloud, "h_max_mm"), "h_max_mm");
  r.cloud.eps_median = get_number(field(cloud, "eps_median_mm2"), "eps_median_mm2");
  for (const auto& l : get_array(field(j, "landmarks"), "landmarks")) {
    r.landmarks.push_back({get_string(field(l, "id"), "id"), get_vec(field(l, "fixed"), "fixed"),
                           get_vec(field(l, "moving"), "moving")});
  }
  return r;
}

ReviewVerdict read_verdict(const json& j) {
  ReviewVerdict v;
  v.case_id = get_string(field(j, "case_id"), "case_id");
  v.landmark_id = get_string(field(j, "landmark_id"), "landmark_id");
  const auto cat = review_category_from_string(get_string(field(j, "category"), "category"));
  if (!cat) malformed("unknown review category");
  v.category = *cat;
  const json& score = field(j, "score");
  if (!score.is_number_integer()) malformed("score must be an integer");
  v.score = score.get<int>();
  if (!valid_review_score(v.score)) malformed("score must be 1..4");
  if (const auto it = j.find("reviewer"); it != j.end()) v.reviewer = get_string(*it, "reviewer");
  return v;
}

Summary read_summary(const json& j) {
  Summary s;
  for (const auto& d : get_array(field(j, "datasets"), "datasets")) {
    DatasetSummary row;
    row.dataset = get_string(field(d, "dataset"), "dataset");
    row.global = get_strings(field(d, "global"), "global");
    row.local = get_strings(field(d, "local"), "local");
    row.cluster = get_strings(field(d, "cluster"), "cluster");
    row.isolated = get_strings(field(d, "isolated"), "isolated");
    row.certain = get_strings(field(d, "certain"), "certain");
    row.unsure = get_strings(field(d, "unsure"), "unsure");
    row.normal = get_strings(field(d, "normal"), "normal");
    s.datasets.push_back(std::move(row));
  }
  const json& means = field(j, "mean_score");
  if (!means.is_object()) malformed("mean_score must be an object");
  for (const auto& [k, v] : means.items()) s.mean_score[k] = get_number(v, "mean_score");
  return s;
}

}  // namespace

std::string write_report_json(const ReportDocument& doc) {
  json cases = json::array();
  for (const auto& c : doc.cases) cases.push_back(case_json(c));
  json root = {{"schema_version", doc.schema_version},
               {"generated_at", doc.generated_at},
               {"cases", std::move(cases)},
               {"summary", summary_json(doc.summary)}};
  if (doc.review) {
    json review = json::array();
    for (const auto& v : *doc.review) review.push_back(verdict_json(v));
    root["review"] = std::move(review);
  } else {
    root["review"] = nullptr;
  }
  return root.dump(2, ' ', false, json::error_handler_t::strict) + "\n";
}

ReportDocument read_report_json(std::string_view bytes) {
  json root;
  try {
    root = json::parse(bytes.begin(), bytes.end());
  } catch (const json::exception& e) {
    malformed(e.what());
  }
  try {
    const std::string version = get_string(field(root, "schema_version"), "schema_version");
    if (version != kSchemaVersion) {
      throw Error(ErrorCode::SchemaVersionUnsupported,
                  "schema_version '" + version + "' (supported: " + std::string(kSchemaVersion) + ")");
    }
    ReportDocument doc;
    doc.schema_version = version;
    doc.generated_at = get_string(field(root, "generated_at"), "generated_at");
    for (const auto& c : get_array(field(root, "cases"), "cases")) doc.cases.push_back(read_case(c));
    doc.summary = read_summary(field(root, "summary"));
    const json& review = field(root, "review");
    if (!review.is_null()) {
      doc.review.emplace();
      for (const auto& v : get_array(review, "review")) doc.review->push_back(read_verdict(v));
    }
    std::set<std::string_view> ids;
    for (const auto& c : doc.cases) {
      if (!ids.insert(c.case_id).second) {
        throw Error(ErrorCode::DuplicateCaseId, "case '" + c.case_id + "' appears twice");
      }
    }
    return doc;
  } catch (const json::exception& e) {
    malformed(e.what());
  }
}

std::string write_case_json(const ScreeningReport& report) {
  return case_json(report).dump(-1, ' ', false, json::error_handler_t::strict);
}

std::string verdict_to_json_line(const ReviewVerdict& verdict) {
  return verdict_json(verdict).dump() + "\n";
}

ReviewVerdict verdict_from_json(std::string_view bytes) {
  try {
    return read_verdict(json::parse(bytes.begin(), bytes.end()));
  } catch (const json::exception& e) {
    malformed(e.what());
  }
}

}  // namespace lmscreen
