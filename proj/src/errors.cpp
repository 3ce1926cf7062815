#include "vacuumcone/errors.hpp"

namespace vacuumcone {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::NonPhysicalIndex: return "NonPhysicalIndex";
    case ErrorKind::TooFewSamples: return "TooFewSamples";
    case ErrorKind::OutOfRange: return "OutOfRange";
    case ErrorKind::InvalidContainment: return "InvalidContainment";
    case ErrorKind::GridTooCoarse: return "GridTooCoarse";
    case ErrorKind::NonUniformSpacing: return "NonUniformSpacing";
    case ErrorKind::NoOverlap: return "NoOverlap";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::Io: return "Io";
  }
  return "Unknown";
}

}  // namespace vacuumcone
