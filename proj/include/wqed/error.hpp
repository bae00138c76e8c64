#pragma once

#include <stdexcept>
#include <string>

namespace wqed {

// Mirrors the status codes of the C API one-to-one.
enum class ErrorCode {
  InvalidArgument = 1,
  Dimension = 2,
  Domain = 3,
  Singular = 4,
  Convergence = 5,
  Io = 6,
  Config = 7,
  PartialFailure = 8,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace wqed
