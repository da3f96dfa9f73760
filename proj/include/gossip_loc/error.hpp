// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace gossip_loc {

enum class Errc {
  DuplicateEdge,
  SelfLoop,
  IndexOutOfRange,
  DisconnectedGraph,
  GenerationFailed,
  SingularBeyondNullspace,
  DimensionMismatch,
  NoConvergence,
  GammaOutOfRange,
  NonZeroMeanInit,
  EmptySelection,
  ParseError,
  ValidationError,
  IoError,
};

std::string_view to_string(Errc code) noexcept;

/// Library-wide exception. `field()` names the offending config key for
/// ValidationError/ParseError and is empty otherwise.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what, std::string field = {})
      : std::runtime_error(std::string(to_string(code)) + ": " + what),
        code_(code),
        field_(std::move(field)) {}

  Errc code() const noexcept { return code_; }
  const std::string& field() const noexcept { return field_; }

 private:
  Errc code_;
  std::string field_;
};

inline std::string_view to_string(Errc code) noexcept {
  switch (code) {
    case Errc::DuplicateEdge: return "DuplicateEdge";
    case Errc::SelfLoop: return "SelfLoop";
    case Errc::IndexOutOfRange: return "IndexOutOfRange";
    case Errc::DisconnectedGraph: return "DisconnectedGraph";
    case Errc::GenerationFailed: return "GenerationFailed";
    case Errc::SingularBeyondNullspace: return "SingularBeyondNullspace";
    case Errc::DimensionMismatch: return "DimensionMismatch";
    case Errc::NoConvergence: return "NoConvergence";
    case Errc::GammaOutOfRange: return "GammaOutOfRange";
    case Errc::NonZeroMeanInit: return "NonZeroMeanInit";
    case Errc::EmptySelection: return "EmptySelection";
    case Errc::ParseError: return "ParseError";
    case Errc::ValidationError: return "ValidationError";
    case Errc::IoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace gossip_loc
