#pragma once

#include <stdexcept>
#include <string>

namespace pal {

enum class ErrorCode {
  validation,
  parse,
  ordering,
  conflict,
  protocol,
  not_found,
  corruption,
  session_ended,
};

const char* to_string(ErrorCode code) noexcept;

// Single exception type for the library; callers that need to branch use code().
class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

private:
  ErrorCode code_;
};

} // namespace pal
