#include <fnmatch.h>

#include <algorithm>
#include <fstream>
#include <iostream>
#include <set>
#include <system_error>

#include "commands.hpp"
#include "lmscreen/error.hpp"
#include "lmscreen/io.hpp"
#include "lmscreen/render.hpp"
#include "lmscreen/screening.hpp"
#include "lmscreen/variogram.hpp"

namespace fs = std::filesystem;

namespace lmscreen::cli {

namespace {

bool is_landmark_file(const fs::path& p) {
  const auto ext = p.extension().string();
  return ext == ".csv" || ext == ".tag";
}

bool has_glob(const std::string& s) { return s.find_first_of("*?[") != std::string::npos; }

std::vector<fs::path> expand_glob(const fs::path& pattern) {
  fs::path dir = pattern.parent_path();
  if (dir.empty()) dir = ".";
  const std::string name = pattern.filename().string();
  std::vector<fs::path> hits;
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) return hits;
  for (const auto& entry : fs::directory_iterator(dir, ec)) {
    if (!entry.is_regular_file()) continue;
    const std::string candidate = entry.path().filename().string();
    if (fnmatch(name.c_str(), candidate.c_str(), 0) == 0) {
      hits.push_back(pattern.parent_path() / entry.path().filename());
    }
  }
  std::sort(hits.begin(), hits.end());
  return hits;
}

std::string safe_dir_name(const std::string& case_id) {
  std::string out = case_id;
  for (char& c : out) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
                    c == '.' || c == '_' || c == '-';
    if (!ok) c = '_';
  }
  if (out.empty() || out == "." || out == "..") out = "_" + out;
  return out;
}

std::string dataset_label(const fs::path& input) {
  const fs::path parent = fs::absolute(input).parent_path();
  return parent.filename().string();
}

void write_text(const fs::path& path, const std::string& bytes) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw std::runtime_error("cannot write " + path.string());
  os << bytes;
  if (!os) throw std::runtime_error("write failed for " + path.string());
}

std::string join(const std::vector<std::string>& items) {
  if (items.empty()) return "-";
  std::string out;
  for (const auto& s : items) {
    if (!out.empty()) out += ", ";
    out += s;
  }
  return out;
}

}  // namespace

std::vector<InputSpec> resolve_inputs(const std::vector<std::string>& inputs, std::ostream& err) {
  std::vector<InputSpec> out;
  for (const auto& raw : inputs) {
    if (const auto comma = raw.find(','); comma != std::string::npos) {
      out.push_back({raw.substr(0, comma), fs::path(raw.substr(comma + 1))});
      continue;
    }
    const fs::path p(raw);
    std::error_code ec;
    if (fs::is_directory(p, ec)) {
      std::vector<fs::path> files;
      for (const auto& entry : fs::recursive_directory_iterator(p, ec)) {
        if (entry.is_regular_file() && is_landmark_file(entry.path())) files.push_back(entry.path());
      }
      std::sort(files.begin(), files.end());
      if (files.empty()) err << "warning: " << raw << ": no .csv or .tag files found\n";
      for (auto& f : files) out.push_back({std::move(f), std::nullopt});
    } else if (fs::exists(p, ec)) {
      out.push_back({p, std::nullopt});
    } else if (has_glob(raw)) {
      const auto hits = expand_glob(p);
      if (hits.empty()) err << "warning: " << raw << ": pattern matched no files\n";
      for (const auto& h : hits) out.push_back({h, std::nullopt});
    } else {
      err << "error: " << raw << ": no such file or directory\n";
    }
  }
  return out;
}

int cmd_screen(const ScreenOptions& options, std::ostream& out, std::ostream& err) {
  const auto inputs = resolve_inputs(options.inputs, err);
  if (inputs.empty()) {
    err << "error: no input files resolved\n";
    return kExitUsage;
  }

  std::error_code ec;
  fs::create_directories(options.out_dir, ec);
  if (ec || !fs::is_directory(options.out_dir)) {
    err << "error: cannot create output directory " << options.out_dir.string() << "\n";
    return kExitUsage;
  }

  std::vector<ScreeningReport> reports;
  std::set<std::string> seen;
  int failures = 0;
  for (const auto& input : inputs) {
    const std::string label =
        input.moving ? input.path.string() + "," + input.moving->string() : input.path.string();
    try {
      io::ParsedCase parsed = input.moving ? io::load_fcsv_pair(input.path, *input.moving)
                                           : io::load_case(input.path, options.format);
      if (!seen.insert(parsed.case_id()).second) {
        throw Error(ErrorCode::DuplicateCaseId,
                    "case id '" + parsed.case_id() + "' already screened from another file");
      }
      ScreeningReport report = screen_case(parsed.field, options.config);
      report.dataset = options.dataset ? *options.dataset : dataset_label(input.path);
      report.source_format = parsed.source_format;
      report.warnings = parsed.warnings;
      for (const auto& w : parsed.warnings) err << "warning: " << label << ": " << w << "\n";

      const VariogramCloud cloud = compute_cloud(parsed.field);
      const BinnedTrend trend = binned_trend(cloud, options.config.n_bins);
      const fs::path case_dir = options.out_dir / safe_dir_name(report.case_id);
      fs::create_directories(case_dir);
      write_text(case_dir / "cloud.csv", cloud_to_csv(cloud));
      write_text(case_dir / "variogram.svg",
                 render_variogram_svg(parsed.field, cloud, report.outliers, trend));
      write_text(case_dir / "field_xy.svg",
                 render_field_svg(parsed.field, report.outliers, Plane::XY));
      if (!report.outliers_skipped.empty()) {
        err << "note: " << label << ": outlier scoring " << report.outliers_skipped << "\n";
      }
      reports.push_back(std::move(report));
    } catch (const std::exception& e) {
      err << "error: " << label << ": " << e.what() << "\n";
      ++failures;
    }
  }

  const ReportDocument doc =
      make_document(std::move(reports), options.timestamp ? *options.timestamp : utc_timestamp_now());
  try {
    write_file_atomic(options.out_dir / "report.json", write_report_json(doc));
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  }

  std::size_t flags = 0;
  for (const auto& row : doc.summary.datasets) {
    out << "dataset " << row.dataset << "\n"
        << "  global:   " << join(row.global) << "\n"
        << "  local:    " << join(row.local) << "\n"
        << "  cluster:  " << join(row.cluster) << "\n"
        << "  isolated: " << join(row.isolated) << "\n";
    flags += row.global.size() + row.local.size() + row.cluster.size() + row.isolated.size();
  }
  out << "screened " << doc.cases.size() << " case(s), " << flags << " flag(s), " << failures
      << " error(s) -> " << (options.out_dir / "report.json").string() << "\n";

  if (failures > 0) return kExitInputError;
  if (options.fail_on_flags && flags > 0) return kExitFlagsFound;
  return kExitOk;
}

}  // namespace lmscreen::cli
