#ifndef AGOF_FORMAT_HPP
#define AGOF_FORMAT_HPP

#include <charconv>
#include <string>

namespace agof {

/// Shortest decimal text that parses back to exactly `v`.
inline std::string shortest(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

}  // namespace agof

#endif  // AGOF_FORMAT_HPP
