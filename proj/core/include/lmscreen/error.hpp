#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace lmscreen {

enum class ErrorCode {
  // field construction
  TooFewLandmarks,
  DuplicateFixedPosition,
  NonFiniteCoordinate,
  DuplicateId,
  EmptyId,
  InvalidConfig,
  // variogram / screening
  EmptyCloud,
  TooFewLandmarksForScreening,
  // synthetic generation
  InvalidArgument,
  IndexOutOfRange,
  NoLocalNeighborhood,
  // landmark file formats
  BadHeader,
  BadFloat,
  WrongColumnCount,
  NotTagFile,
  UnsupportedVolumes,
  MalformedPointRecord,
  UnterminatedBlock,
  CoordinateSystemMismatchUnresolvable,
  PointCountMismatch,
  MalformedRow,
  // report documents
  SchemaVersionUnsupported,
  MalformedDocument,
  DuplicateCaseId,
};

std::string_view to_string(ErrorCode code);

/// Every failure raised by the library carries a code. Parser errors also
/// carry the 1-based location (line number or record ordinal) they refer to.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message,
        std::optional<std::size_t> location = std::nullopt);

  ErrorCode code() const noexcept { return code_; }
  std::optional<std::size_t> location() const noexcept { return location_; }

 private:
  ErrorCode code_;
  std::optional<std::size_t> location_;
};

}  // namespace lmscreen
