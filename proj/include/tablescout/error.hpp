#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace tablescout {

enum class Errc {
  FileNotFound,
  UnsupportedFormat,
  CorruptImage,
  OutOfBounds,
  InvalidArgument,
  EmptyBand,
  NoTextLine,
  AlphaOutOfRange,
  SpecOverflow,
  EmptyCorpus,
  Io,
};

constexpr std::string_view errc_name(Errc c) {
  switch (c) {
    case Errc::FileNotFound: return "FileNotFound";
    case Errc::UnsupportedFormat: return "UnsupportedFormat";
    case Errc::CorruptImage: return "CorruptImage";
    case Errc::OutOfBounds: return "OutOfBounds";
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::EmptyBand: return "EmptyBand";
    case Errc::NoTextLine: return "NoTextLine";
    case Errc::AlphaOutOfRange: return "AlphaOutOfRange";
    case Errc::SpecOverflow: return "SpecOverflow";
    case Errc::EmptyCorpus: return "EmptyCorpus";
    case Errc::Io: return "Io";
  }
  return "Unknown";
}

/// Every failure raised by the library carries one of the codes above; the
/// message is prefixed with the code name so CLI output stays greppable.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace tablescout
