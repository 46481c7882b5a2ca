#include <fstream>
#include <iostream>
#include <map>
#include <tuple>

#include "commands.hpp"
#include "lmscreen/io.hpp"
#include "verdict_store.hpp"

namespace fs = std::filesystem;

namespace lmscreen::cli {

fs::path default_verdict_path(const fs::path& report) {
  fs::path p = report;
  p += ".verdicts.ndjson";
  return p;
}

std::vector<ReviewVerdict> latest_verdicts(const std::vector<ReviewVerdict>& log) {
  using Key = std::tuple<std::string, std::string, std::string>;
  std::map<Key, std::size_t> slot;
  std::vector<ReviewVerdict> out;
  for (const auto& v : log) {
    const Key key{v.case_id, v.landmark_id, v.reviewer};
    const auto [it, inserted] = slot.emplace(key, out.size());
    if (inserted) {
      out.push_back(v);
    } else {
      out[it->second] = v;
    }
  }
  return out;
}

ReportDocument merge_verdicts(ReportDocument doc, const std::vector<ReviewVerdict>& log) {
  if (log.empty()) return doc;
  std::vector<ReviewVerdict> all = doc.review.value_or(std::vector<ReviewVerdict>{});
  all.insert(all.end(), log.begin(), log.end());
  const std::string generated_at = doc.generated_at;
  return make_document(std::move(doc.cases), generated_at, latest_verdicts(all));
}

void write_file_atomic(const fs::path& path, const std::string& bytes) {
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw std::runtime_error("cannot write " + tmp.string());
    os << bytes;
    os.flush();
    if (!os) throw std::runtime_error("write failed for " + tmp.string());
  }
  fs::rename(tmp, path);
}

int cmd_finalize(const fs::path& report, const fs::path& verdicts, const fs::path& output,
                 std::ostream& out, std::ostream& err) {
  try {
    ReportDocument doc = read_report_json(io::read_file(report));
    std::vector<std::string> warnings;
    const auto log = read_verdict_log(verdicts, &warnings);
    for (const auto& w : warnings) err << "warning: " << verdicts.string() << ": " << w << "\n";
    doc = merge_verdicts(std::move(doc), log);
    write_file_atomic(output, write_report_json(doc));
    out << "merged " << (doc.review ? doc.review->size() : 0) << " verdict(s) into " << output.string() << "\n";
    for (const auto& [category, mean] : doc.summary.mean_score) {
      out << "  mean score " << category << ": " << mean << "\n";
    }
    return kExitOk;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  }
}

}  // namespace lmscreen::cli
