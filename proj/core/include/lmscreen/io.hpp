#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lmscreen/model.hpp"

namespace lmscreen::io {

/// A parsed landmark file. The field has already passed core validation.
struct ParsedCase {
  DisplacementField field;
  SourceFormat source_format = SourceFormat::Csv;
  std::vector<std::string> warnings;

  const std::string& case_id() const { return field.case_id(); }
};

/// Landmark CSV: header exactly `id,fx,fy,fz,mx,my,mz`, one landmark per row.
/// Blank lines and lines starting with '#' are skipped. An empty id is
/// replaced by the 1-based row ordinal and a warning is recorded.
///
/// Errors: BadHeader, WrongColumnCount(line), BadFloat(line), plus any
/// field validation error.
ParsedCase parse_csv(std::string_view text, std::string case_id);

/// Row-level CSV decoding without field validation; parse_csv builds on it.
std::vector<Landmark> read_csv_landmarks(std::string_view text,
                                         std::vector<std::string>* warnings = nullptr);

/// Inverse of parse_csv; numbers use 9 significant digits.
std::string write_csv(const DisplacementField& field);

/// MNI tag point file with two volumes. Each record is
///   x1 y1 z1 x2 y2 z2 [weight structure_id patient_id] ["label"]
/// on one line; the first triple is the fixed point. Auxiliary numbers are
/// skipped with a warning.
///
/// Errors: NotTagFile, UnsupportedVolumes, MalformedPointRecord(ordinal),
/// UnterminatedBlock, plus any field validation error.
ParsedCase parse_mni_tag(std::string_view text, std::string case_id);

/// Writes a two-volume MNI tag file (labels quoted).
std::string write_mni_tag(const DisplacementField& field);

/// A pair of Slicer Markups fiducial (.fcsv) files, corresponded by row
/// order. Coordinates end up in RAS; LPS inputs have x and y negated and the
/// conversion is recorded in the warnings. Ids come from the fixed file's
/// label column.
///
/// Errors: CoordinateSystemMismatchUnresolvable (header present in only one
/// file), PointCountMismatch, MalformedRow(line), plus field validation.
ParsedCase parse_fcsv_pair(std::string_view fixed_text, std::string_view moving_text,
                           std::string case_id);

/// Whole file as bytes. Throws std::runtime_error when unreadable.
std::string read_file(const std::filesystem::path& path);

/// Format implied by the extension (.csv, .tag); nullopt otherwise.
std::optional<SourceFormat> format_from_extension(const std::filesystem::path& path);

/// File stem, e.g. "Case1-US.tag" -> "Case1-US".
std::string case_id_from_path(const std::filesystem::path& path);

/// Reads and parses a single-file case (csv or tag).
ParsedCase load_case(const std::filesystem::path& path,
                     std::optional<SourceFormat> format = std::nullopt);

/// Reads and parses an fcsv pair. The case id is the fixed file's stem with
/// a trailing "_fixed" / "-fixed" removed.
ParsedCase load_fcsv_pair(const std::filesystem::path& fixed, const std::filesystem::path& moving);

}  // namespace lmscreen::io
