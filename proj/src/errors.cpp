#include "agof/errors.hpp"

namespace agof {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::domain: return "DOMAIN_ERROR";
    case ErrorCode::degenerate_data: return "DEGENERATE_DATA";
    case ErrorCode::insufficient_data: return "INSUFFICIENT_DATA";
    case ErrorCode::degenerate_fit: return "DEGENERATE_FIT";
    case ErrorCode::unsupported: return "UNSUPPORTED";
    case ErrorCode::precision: return "PRECISION_ERROR";
    case ErrorCode::bootstrap_degeneracy: return "BOOTSTRAP_DEGENERACY";
    case ErrorCode::input: return "INPUT_ERROR";
  }
  return "UNKNOWN_ERROR";
}

bool is_numerical(ErrorCode code) {
  return code == ErrorCode::precision || code == ErrorCode::degenerate_fit ||
         code == ErrorCode::bootstrap_degeneracy;
}

}  // namespace agof
