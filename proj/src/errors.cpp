#include "pal/errors.hpp"

namespace pal {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
  case ErrorCode::validation: return "validation";
  case ErrorCode::parse: return "parse";
  case ErrorCode::ordering: return "ordering";
  case ErrorCode::conflict: return "conflict";
  case ErrorCode::protocol: return "protocol";
  case ErrorCode::not_found: return "not_found";
  case ErrorCode::corruption: return "corruption";
  case ErrorCode::session_ended: return "session_ended";
  }
  return "unknown";
}

} // namespace pal
