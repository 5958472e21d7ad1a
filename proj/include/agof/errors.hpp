#ifndef AGOF_ERRORS_HPP
#define AGOF_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace agof {

enum class ErrorCode {
  domain,                // precondition or parameter-domain violation
  degenerate_data,       // e.g. zero sample variance
  insufficient_data,     // too few observations for the requested fit
  degenerate_fit,        // EM collapsed onto the variance floor everywhere
  unsupported,           // operation not defined for the family
  precision,             // quadrature could not reach the requested bound
  bootstrap_degeneracy,  // too many replicates had to be skipped
  input                  // malformed user input (CLI, JSON)
};

/// Stable machine-readable name, e.g. "DOMAIN_ERROR".
const char* to_string(ErrorCode code);

/// Numerical failures map to CLI exit code 3, everything else to 2.
bool is_numerical(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

class PrecisionError : public Error {
 public:
  PrecisionError(const std::string& what, double achieved_bound)
      : Error(ErrorCode::precision, what), achieved_bound_(achieved_bound) {}
  double achieved_bound() const noexcept { return achieved_bound_; }

 private:
  double achieved_bound_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

inline void require(bool cond, ErrorCode code, const std::string& what) {
  if (!cond) fail(code, what);
}

}  // namespace agof

#endif  // AGOF_ERRORS_HPP
