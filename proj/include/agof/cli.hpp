#ifndef AGOF_CLI_HPP
#define AGOF_CLI_HPP

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "agof/sample.hpp"

namespace agof::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 2;
inline constexpr int kExitNumerical = 3;

struct InputData {
  Sample sample;
  std::size_t dropped_nonfinite = 0;
  std::size_t dropped_nonpositive = 0;
};

/// One finite real per line; a non-numeric first line is taken as a header.
/// Throws INPUT_ERROR naming the offending line.
InputData read_input(std::istream& in, const std::string& name, bool drop_nonfinite,
                     bool drop_nonpositive);

/// Runs one invocation; `args` excludes the program name. Results go to `out`
/// (or the --out file), diagnostics to `err`. Returns the process exit code.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace agof::cli

#endif  // AGOF_CLI_HPP
