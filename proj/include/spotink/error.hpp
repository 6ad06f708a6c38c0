#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace spotink {

enum class ErrorCode {
  // imageio
  UnsupportedFormat,
  CorruptFile,
  UnsupportedBitDepth,
  LevelOutOfRange,
  IoError,
  FormatMismatch,
  // rdh
  CapacityExceeded,
  InvalidSideInfo,
  ImageTooSmall,
  NoUsableZp,
  // layers and codec
  DimensionMismatch,
  CorruptStream,
  // container
  RoundTooSmall,
  MalformedHeader,
  BadMagic,
  BadCrc,
  BadVersion,
  // pipeline
  InsufficientCapacity,
  NotAMarkedImage,
};

constexpr std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::UnsupportedFormat: return "UnsupportedFormat";
    case ErrorCode::CorruptFile: return "CorruptFile";
    case ErrorCode::UnsupportedBitDepth: return "UnsupportedBitDepth";
    case ErrorCode::LevelOutOfRange: return "LevelOutOfRange";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::FormatMismatch: return "FormatMismatch";
    case ErrorCode::CapacityExceeded: return "CapacityExceeded";
    case ErrorCode::InvalidSideInfo: return "InvalidSideInfo";
    case ErrorCode::ImageTooSmall: return "ImageTooSmall";
    case ErrorCode::NoUsableZp: return "NoUsableZp";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::CorruptStream: return "CorruptStream";
    case ErrorCode::RoundTooSmall: return "RoundTooSmall";
    case ErrorCode::MalformedHeader: return "MalformedHeader";
    case ErrorCode::BadMagic: return "BadMagic";
    case ErrorCode::BadCrc: return "BadCrc";
    case ErrorCode::BadVersion: return "BadVersion";
    case ErrorCode::InsufficientCapacity: return "InsufficientCapacity";
    case ErrorCode::NotAMarkedImage: return "NotAMarkedImage";
  }
  return "Unknown";
}

/// Every failure in the library is reported as an Error carrying a code, so
/// callers (the CLI in particular) can map failures without parsing text.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Raised when the cover image cannot carry the payload. `shortfall_bits`
/// counts the body bits that did not fit.
class CapacityError : public Error {
 public:
  CapacityError(std::size_t shortfall_bits, const std::string& what)
      : Error(ErrorCode::InsufficientCapacity,
              what + " (shortfall: " + std::to_string(shortfall_bits) + " bits)"),
        shortfall_bits_(shortfall_bits) {}

  std::size_t shortfall_bits() const noexcept { return shortfall_bits_; }

 private:
  std::size_t shortfall_bits_;
};

}  // namespace spotink
