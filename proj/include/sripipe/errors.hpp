// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace sripipe {

// Failure classes map one-to-one onto CLI exit codes:
// usage -> 64, data -> 65, io -> 74.
enum class ErrorClass { usage, data, io };

enum class Errc {
  usage,
  config,
  io,
  missing_channel,
  dimension_mismatch,
  bad_encoding,
  parse,
  empty_channel,
  invalid_pixel,
  zero_range,
  degenerate_polygon,
  bad_ratios,
  unknown_id,
  score_range,
  bad_box,
  numerical_failure,
  insufficient_frames,
};

const char* errc_name(Errc code);
ErrorClass error_class(Errc code);
const char* error_class_name(ErrorClass cls);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message)
      : std::runtime_error(std::string(errc_name(code)) + ": " + message),
        code_(code) {}

  Errc code() const { return code_; }
  ErrorClass category() const { return error_class(code_); }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace sripipe
