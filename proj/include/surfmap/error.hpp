#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace surfmap {

enum class Errc {
  kCollinearPoints,
  kDuplicatePoints,
  kVerticalPlane,
  kDegenerateFrame,
  kInvalidSpec,
  kOutOfBounds,
  kNonPositiveR,
  kMaskShapeMismatch,
  kOutOfDomain,
  kNoIntersection,
  kAreaOutsideDomain,
  kNoCountedCells,
  kConfig,
  kData,
  kIo,
};

std::string_view to_string(Errc code);

/// Library-wide exception. Every failure the API reports carries one of the
/// Errc codes so callers (the CLI in particular) can map it to an exit code.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code), detail_(what) {}

  Errc code() const noexcept { return code_; }
  /// Message without the code prefix, for re-wrapping with more context.
  const std::string& detail() const noexcept { return detail_; }

 private:
  Errc code_;
  std::string detail_;
};

inline std::string_view to_string(Errc code) {
  switch (code) {
    case Errc::kCollinearPoints: return "CollinearPoints";
    case Errc::kDuplicatePoints: return "DuplicatePoints";
    case Errc::kVerticalPlane: return "VerticalPlane";
    case Errc::kDegenerateFrame: return "DegenerateFrame";
    case Errc::kInvalidSpec: return "InvalidSpec";
    case Errc::kOutOfBounds: return "OutOfBounds";
    case Errc::kNonPositiveR: return "NonPositiveR";
    case Errc::kMaskShapeMismatch: return "MaskShapeMismatch";
    case Errc::kOutOfDomain: return "OutOfDomain";
    case Errc::kNoIntersection: return "NoIntersection";
    case Errc::kAreaOutsideDomain: return "AreaOutsideDomain";
    case Errc::kNoCountedCells: return "NoCountedCells";
    case Errc::kConfig: return "ConfigError";
    case Errc::kData: return "DataError";
    case Errc::kIo: return "IoError";
  }
  return "Unknown";
}

}  // namespace surfmap
