#include "lmscreen/io.hpp"

#include <fstream>
#include <sstream>

#include "lmscreen/error.hpp"
#include "text.hpp"

namespace lmscreen::io {

namespace {

constexpr std::string_view kCsvHeader = "id,fx,fy,fz,mx,my,mz";
constexpr std::string_view kTagMagic = "MNI Tag Point File";

bool is_blank(std::string_view line) { return text::trim(line).empty(); }

std::string synthetic_ids_warning(std::size_t count) {
  return std::to_string(count) + " landmark(s) had no label; assigned 1-based index ids";
}

}  // namespace

// ---------------------------------------------------------------------------
// CSV

std::vector<Landmark> read_csv_landmarks(std::string_view input,
                                         std::vector<std::string>* warnings) {
  const auto lines = text::lines(input);
  std::vector<Landmark> landmarks;
  std::size_t unlabeled = 0;
  bool header_seen = false;

  for (std::size_t n = 0; n < lines.size(); ++n) {
    const std::string_view line = lines[n];
    const std::size_t lineno = n + 1;
    if (is_blank(line) || line.starts_with('#')) continue;

    if (!header_seen) {
      if (line != kCsvHeader) {
        throw Error(ErrorCode::BadHeader,
                    "expected '" + std::string(kCsvHeader) + "', got '" + std::string(line) + "'",
                    lineno);
      }
      header_seen = true;
      continue;
    }

    const auto fields = text::split(line, ',');
    if (fields.size() != 7) {
      throw Error(ErrorCode::WrongColumnCount,
                  "expected 7 fields, got " + std::to_string(fields.size()), lineno);
    }
    double v[6];
    for (int c = 0; c < 6; ++c) {
      const auto parsed = text::parse_double(fields[c + 1]);
      if (!parsed) {
        throw Error(ErrorCode::BadFloat, "'" + std::string(fields[c + 1]) + "'", lineno);
      }
      v[c] = *parsed;
    }
    Landmark lm{std::string(fields[0]), Vec3(v[0], v[1], v[2]), Vec3(v[3], v[4], v[5])};
    if (lm.id.empty()) {
      lm.id = std::to_string(landmarks.size() + 1);
      ++unlabeled;
    }
    landmarks.push_back(std::move(lm));
  }
  if (!header_seen) throw Error(ErrorCode::BadHeader, "missing header row", 1);
  if (unlabeled > 0 && warnings) warnings->push_back(synthetic_ids_warning(unlabeled));
  return landmarks;
}

ParsedCase parse_csv(std::string_view input, std::string case_id) {
  std::vector<std::string> warnings;
  auto landmarks = read_csv_landmarks(input, &warnings);
  return {DisplacementField::build(std::move(case_id), std::move(landmarks)), SourceFormat::Csv,
          std::move(warnings)};
}

std::string write_csv(const DisplacementField& field) {
  std::string out(kCsvHeader);
  out += '\n';
  for (const auto& lm : field.landmarks()) {
    out += lm.id;
    for (const Vec3* v : {&lm.fixed, &lm.moving}) {
      for (int c = 0; c < 3; ++c) {
        out += ',';
        out += text::format_sig9((*v)[c]);
      }
    }
    out += '\n';
  }
  return out;
}

// ---------------------------------------------------------------------------
// MNI tag points

namespace {

struct TagToken {
  enum Kind { Number, Label, Terminator } kind;
  std::string_view value;
};

// Tokens of one line of the Points block. Returns nullopt on an unterminated
// quote. '%' outside quotes starts a comment.
std::optional<std::vector<TagToken>> tokenize_tag_line(std::string_view line) {
  std::vector<TagToken> tokens;
  std::size_t pos = 0;
  while (pos < line.size()) {
    const char c = line[pos];
    if (c == ' ' || c == '\t' || c == '\r') {
      ++pos;
    } else if (c == '%') {
      break;
    } else if (c == ';') {
      tokens.push_back({TagToken::Terminator, line.substr(pos, 1)});
      ++pos;
    } else if (c == '"') {
      const std::size_t close = line.find('"', pos + 1);
      if (close == std::string_view::npos) return std::nullopt;
      tokens.push_back({TagToken::Label, line.substr(pos + 1, close - pos - 1)});
      pos = close + 1;
    } else {
      const std::size_t end = line.find_first_of(" \t\r;\"%", pos);
      const std::size_t stop = end == std::string_view::npos ? line.size() : end;
      tokens.push_back({TagToken::Number, line.substr(pos, stop - pos)});
      pos = stop;
    }
  }
  return tokens;
}

std::string_view strip_comment(std::string_view line) {
  const auto pct = line.find('%');
  return pct == std::string_view::npos ? line : line.substr(0, pct);
}

}  // namespace

ParsedCase parse_mni_tag(std::string_view input, std::string case_id) {
  const auto lines = text::lines(input);
  if (lines.empty() || text::trim(lines[0]) != kTagMagic) {
    throw Error(ErrorCode::NotTagFile, "first line must be '" + std::string(kTagMagic) + "'", 1);
  }

  std::optional<long> volumes;
  std::size_t n = 1;
  std::string_view block_start;
  bool in_block = false;

  for (; n < lines.size() && !in_block; ++n) {
    const std::string_view line = text::trim(strip_comment(lines[n]));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) continue;
    const std::string_view key = text::trim(line.substr(0, eq));
    std::string_view value = text::trim(line.substr(eq + 1));
    if (key == "Points") {
      block_start = value;
      in_block = true;
      break;
    }
    if (key == "Volumes") {
      if (value.ends_with(';')) value.remove_suffix(1);
      value = text::trim(value);
      const auto parsed = text::parse_double(value);
      if (!parsed || *parsed != static_cast<long>(*parsed)) {
        throw Error(ErrorCode::NotTagFile, "bad Volumes value '" + std::string(value) + "'", n + 1);
      }
      volumes = static_cast<long>(*parsed);
      if (*volumes != 2) {
        throw Error(ErrorCode::UnsupportedVolumes,
                    "Volumes = " + std::to_string(*volumes) + "; correspondences need 2", n + 1);
      }
    }
  }
  if (!volumes) throw Error(ErrorCode::NotTagFile, "missing 'Volumes = 2;' declaration");
  if (!in_block) throw Error(ErrorCode::UnterminatedBlock, "no 'Points =' block");

  std::vector<Landmark> landmarks;
  std::size_t unlabeled = 0;
  std::size_t with_aux = 0;
  bool terminated = false;

  auto consume = [&](std::string_view line) {
    const std::size_t ordinal = landmarks.size() + 1;
    const auto tokens = tokenize_tag_line(line);
    if (!tokens) throw Error(ErrorCode::MalformedPointRecord, "unterminated label", ordinal);

    std::vector<TagToken> record;
    for (const auto& tok : *tokens) {
      if (tok.kind == TagToken::Terminator) {
        terminated = true;
        break;
      }
      record.push_back(tok);
    }
    if (record.empty()) return;

    std::vector<double> numbers;
    std::optional<std::string> label;
    for (const auto& tok : record) {
      if (label) throw Error(ErrorCode::MalformedPointRecord, "content after label", ordinal);
      if (tok.kind == TagToken::Label) {
        label = std::string(tok.value);
        continue;
      }
      const auto v = text::parse_double(tok.value);
      if (!v) {
        throw Error(ErrorCode::MalformedPointRecord,
                    "bad number '" + std::string(tok.value) + "'", ordinal);
      }
      numbers.push_back(*v);
    }
    if (numbers.size() < 6 || numbers.size() > 9) {
      throw Error(ErrorCode::MalformedPointRecord,
                  "expected 6 coordinates (+ up to 3 auxiliary values), got " +
                      std::to_string(numbers.size()) + " numbers",
                  ordinal);
    }
    if (numbers.size() > 6) ++with_aux;

    Landmark lm{label.value_or(""), Vec3(numbers[0], numbers[1], numbers[2]),
                Vec3(numbers[3], numbers[4], numbers[5])};
    if (lm.id.empty()) {
      lm.id = std::to_string(ordinal);
      ++unlabeled;
    }
    landmarks.push_back(std::move(lm));
  };

  consume(block_start);
  for (++n; n < lines.size() && !terminated; ++n) consume(lines[n]);
  if (!terminated) {
    throw Error(ErrorCode::UnterminatedBlock, "Points block has no closing ';'");
  }

  ParsedCase out{DisplacementField::build(std::move(case_id), std::move(landmarks)),
                 SourceFormat::MniTag,
                 {}};
  if (with_aux > 0) {
    out.warnings.push_back(std::to_string(with_aux) +
                           " record(s) carried weight/structure/patient values; ignored");
  }
  if (unlabeled > 0) out.warnings.push_back(synthetic_ids_warning(unlabeled));
  return out;
}

std::string write_mni_tag(const DisplacementField& field) {
  std::string out(kTagMagic);
  out += "\nVolumes = 2;\n\nPoints =";
  for (const auto& lm : field.landmarks()) {
    out += "\n";
    for (const Vec3* v : {&lm.fixed, &lm.moving}) {
      for (int c = 0; c < 3; ++c) {
        out += ' ';
        out += text::format_sig9((*v)[c]);
      }
    }
    out += " \"" + lm.id + "\"";
  }
  out += ";\n";
  return out;
}

// ---------------------------------------------------------------------------
// Slicer fcsv

namespace {

enum class Space { Ras, Lps };

struct FcsvPoint {
  std::string label;
  Vec3 position;
};

struct FcsvFile {
  std::optional<Space> space;
  std::vector<FcsvPoint> points;
};

// Splits one CSV row, honouring double-quoted fields with "" escapes.
std::vector<std::string> split_quoted(std::string_view line) {
  std::vector<std::string> out(1);
  bool quoted = false;
  for (std::size_t n = 0; n < line.size(); ++n) {
    const char c = line[n];
    if (quoted) {
      if (c == '"' && n + 1 < line.size() && line[n + 1] == '"') {
        out.back() += '"';
        ++n;
      } else if (c == '"') {
        quoted = false;
      } else {
        out.back() += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.emplace_back();
    } else {
      out.back() += c;
    }
  }
  return out;
}

FcsvFile read_fcsv(std::string_view input) {
  // Column layout used by Slicer 4.x when no `# columns` header is present.
  std::vector<std::string> columns = {"id",  "x",   "y",    "z",     "ow",   "ox",  "oy",
                                      "oz",  "vis", "sel",  "lock",  "label", "desc",
                                      "associatedNodeID"};
  FcsvFile file;
  const auto lines = text::lines(input);
  for (std::size_t n = 0; n < lines.size(); ++n) {
    const std::string_view line = lines[n];
    const std::size_t lineno = n + 1;
    if (is_blank(line)) continue;
    if (line.starts_with('#')) {
      const std::string_view body = text::trim(line.substr(1));
      const auto eq = body.find('=');
      if (eq == std::string_view::npos) continue;
      const std::string_view key = text::trim(body.substr(0, eq));
      const std::string_view value = text::trim(body.substr(eq + 1));
      if (key == "CoordinateSystem") {
        if (value == "0" || value == "RAS") {
          file.space = Space::Ras;
        } else if (value == "1" || value == "LPS") {
          file.space = Space::Lps;
        } else {
          throw Error(ErrorCode::MalformedRow,
                      "unsupported coordinate system '" + std::string(value) + "'", lineno);
        }
      } else if (key == "columns") {
        columns.clear();
        for (auto col : text::split(value, ',')) columns.emplace_back(text::trim(col));
      }
      continue;
    }

    auto column = [&](std::string_view name) -> std::optional<std::size_t> {
      for (std::size_t c = 0; c < columns.size(); ++c) {
        if (columns[c] == name) return c;
      }
      return std::nullopt;
    };
    const auto cx = column("x");
    const auto cy = column("y");
    const auto cz = column("z");
    if (!cx || !cy || !cz) throw Error(ErrorCode::MalformedRow, "no x/y/z columns", lineno);

    const auto fields = split_quoted(line);
    Vec3 p;
    const std::size_t idx[3] = {*cx, *cy, *cz};
    for (int c = 0; c < 3; ++c) {
      if (idx[c] >= fields.size()) {
        throw Error(ErrorCode::MalformedRow,
                    "row has " + std::to_string(fields.size()) + " fields", lineno);
      }
      const auto v = text::parse_double(text::trim(fields[idx[c]]));
      if (!v) throw Error(ErrorCode::MalformedRow, "bad coordinate '" + fields[idx[c]] + "'", lineno);
      p[c] = *v;
    }
    std::string label;
    if (const auto cl = column("label"); cl && *cl < fields.size()) label = fields[*cl];
    file.points.push_back({std::move(label), p});
  }
  return file;
}

}  // namespace

ParsedCase parse_fcsv_pair(std::string_view fixed_text, std::string_view moving_text,
                           std::string case_id) {
  FcsvFile fixed = read_fcsv(fixed_text);
  FcsvFile moving = read_fcsv(moving_text);
  std::vector<std::string> warnings;

  if (fixed.space.has_value() != moving.space.has_value()) {
    throw Error(ErrorCode::CoordinateSystemMismatchUnresolvable,
                std::string("CoordinateSystem header present only in the ") +
                    (fixed.space ? "fixed" : "moving") + " file");
  }
  if (!fixed.space) {
    warnings.emplace_back("no CoordinateSystem header in either file; assuming RAS");
  }
  if (fixed.points.size() != moving.points.size()) {
    throw Error(ErrorCode::PointCountMismatch,
                "fixed file has " + std::to_string(fixed.points.size()) + " points, moving has " +
                    std::to_string(moving.points.size()));
  }

  auto to_ras = [&](FcsvFile& f, const char* which) {
    if (f.space != Space::Lps) return;
    for (auto& p : f.points) {
      p.position.x() = -p.position.x();
      p.position.y() = -p.position.y();
    }
    warnings.push_back(std::string(which) + " file converted from LPS to RAS");
  };
  to_ras(fixed, "fixed");
  to_ras(moving, "moving");

  std::vector<Landmark> landmarks;
  std::size_t unlabeled = 0;
  for (std::size_t n = 0; n < fixed.points.size(); ++n) {
    Landmark lm{fixed.points[n].label, fixed.points[n].position, moving.points[n].position};
    if (lm.id.empty()) {
      lm.id = std::to_string(n + 1);
      ++unlabeled;
    }
    landmarks.push_back(std::move(lm));
  }
  if (unlabeled > 0) warnings.push_back(synthetic_ids_warning(unlabeled));

  return {DisplacementField::build(std::move(case_id), std::move(landmarks)),
          SourceFormat::SlicerFcsvPair, std::move(warnings)};
}

// ---------------------------------------------------------------------------
// Files

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::optional<SourceFormat> format_from_extension(const std::filesystem::path& path) {
  const std::string ext = path.extension().string();
  if (ext == ".csv") return SourceFormat::Csv;
  if (ext == ".tag") return SourceFormat::MniTag;
  return std::nullopt;
}

std::string case_id_from_path(const std::filesystem::path& path) {
  return path.stem().string();
}

ParsedCase load_case(const std::filesystem::path& path, std::optional<SourceFormat> format) {
  if (!format) format = format_from_extension(path);
  if (!format) throw std::runtime_error("cannot infer the landmark format of " + path.string());
  const std::string bytes = read_file(path);
  switch (*format) {
    case SourceFormat::Csv: return parse_csv(bytes, case_id_from_path(path));
    case SourceFormat::MniTag: return parse_mni_tag(bytes, case_id_from_path(path));
    default: break;
  }
  throw std::runtime_error("format needs a file pair: " + path.string());
}

ParsedCase load_fcsv_pair(const std::filesystem::path& fixed, const std::filesystem::path& moving) {
  std::string id = case_id_from_path(fixed);
  for (std::string_view suffix : {"_fixed", "-fixed"}) {
    if (id.size() > suffix.size() && id.ends_with(suffix)) {
      id.resize(id.size() - suffix.size());
      break;
    }
  }
  return parse_fcsv_pair(read_file(fixed), read_file(moving), std::move(id));
}

}  // namespace lmscreen::io
