// SPDX-License-Identifier: Apache-2.0
#include "sripipe/errors.hpp"

namespace sripipe {

const char* errc_name(Errc code) {
  switch (code) {
    case Errc::usage: return "UsageError";
    case Errc::config: return "ConfigError";
    case Errc::io: return "IoError";
    case Errc::missing_channel: return "MissingChannel";
    case Errc::dimension_mismatch: return "DimensionMismatch";
    case Errc::bad_encoding: return "BadEncoding";
    case Errc::parse: return "ParseError";
    case Errc::empty_channel: return "EmptyChannel";
    case Errc::invalid_pixel: return "InvalidPixel";
    case Errc::zero_range: return "ZeroRange";
    case Errc::degenerate_polygon: return "DegeneratePolygon";
    case Errc::bad_ratios: return "BadRatios";
    case Errc::unknown_id: return "UnknownId";
    case Errc::score_range: return "ScoreRange";
    case Errc::bad_box: return "BadBox";
    case Errc::numerical_failure: return "NumericalFailure";
    case Errc::insufficient_frames: return "InsufficientFrames";
  }
  return "Error";
}

ErrorClass error_class(Errc code) {
  switch (code) {
    case Errc::usage:
      return ErrorClass::usage;
    case Errc::io:
      return ErrorClass::io;
    default:
      return ErrorClass::data;
  }
}

const char* error_class_name(ErrorClass cls) {
  switch (cls) {
    case ErrorClass::usage: return "usage";
    case ErrorClass::data: return "data";
    case ErrorClass::io: return "io";
  }
  return "data";
}

}  // namespace sripipe
