#pragma once

#include <stdexcept>
#include <string>

namespace needlekit {

enum class ErrorCode {
  invalid_argument = 1,
  precondition,
  infinite_mass,
  finite_mass,
  degenerate,
  parse,
  io,
  unsupported,
  internal,
};

/// Every failure raised by the library carries one of the codes above; the C
/// API maps them one-to-one onto nk_status values.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

inline void require(bool cond, const std::string& what) {
  if (!cond) fail(ErrorCode::invalid_argument, what);
}

}  // namespace needlekit
