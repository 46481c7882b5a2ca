#include "lmscreen/error.hpp"

namespace lmscreen {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::TooFewLandmarks: return "TooFewLandmarks";
    case ErrorCode::DuplicateFixedPosition: return "DuplicateFixedPosition";
    case ErrorCode::NonFiniteCoordinate: return "NonFiniteCoordinate";
    case ErrorCode::DuplicateId: return "DuplicateId";
    case ErrorCode::EmptyId: return "EmptyId";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::EmptyCloud: return "EmptyCloud";
    case ErrorCode::TooFewLandmarksForScreening: return "TooFewLandmarksForScreening";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::NoLocalNeighborhood: return "NoLocalNeighborhood";
    case ErrorCode::BadHeader: return "BadHeader";
    case ErrorCode::BadFloat: return "BadFloat";
    case ErrorCode::WrongColumnCount: return "WrongColumnCount";
    case ErrorCode::NotTagFile: return "NotTagFile";
    case ErrorCode::UnsupportedVolumes: return "UnsupportedVolumes";
    case ErrorCode::MalformedPointRecord: return "MalformedPointRecord";
    case ErrorCode::UnterminatedBlock: return "UnterminatedBlock";
    case ErrorCode::CoordinateSystemMismatchUnresolvable:
      return "CoordinateSystemMismatchUnresolvable";
    case ErrorCode::PointCountMismatch: return "PointCountMismatch";
    case ErrorCode::MalformedRow: return "MalformedRow";
    case ErrorCode::SchemaVersionUnsupported: return "SchemaVersionUnsupported";
    case ErrorCode::MalformedDocument: return "MalformedDocument";
    case ErrorCode::DuplicateCaseId: return "DuplicateCaseId";
  }
  return "Unknown";
}

namespace {

std::string decorate(ErrorCode code, const std::string& message,
                     std::optional<std::size_t> location) {
  std::string out(to_string(code));
  if (location) out += " at " + std::to_string(*location);
  if (!message.empty()) out += ": " + message;
  return out;
}

}  // namespace

Error::Error(ErrorCode code, const std::string& message,
             std::optional<std::size_t> location)
    : std::runtime_error(decorate(code, message, location)),
      code_(code),
      location_(location) {}

}  // namespace lmscreen
