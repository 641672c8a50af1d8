#pragma once

#include <stdexcept>
#include <string>

namespace robar {

// Every library failure mode carries one of these codes. The CLI maps each
// code to the process exit status, so codes must stay distinct and stable.
enum class ErrorCode : int {
  other = 1,
  invalid_fraction = 2,
  unstable_model = 3,
  degenerate_signal = 4,
  order_too_large = 5,
  invalid_order = 6,
  singular_system = 7,
  too_large = 8,
  out_of_range = 9,
  invalid_sigma = 10,
  io_error = 11,
  parse_error = 12,
  unsupported_format = 13,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }
  int exit_code() const noexcept { return static_cast<int>(code_); }

 private:
  ErrorCode code_;
};

}  // namespace robar
