#include "agof/sample.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "agof/errors.hpp"

namespace agof {

Sample::Sample(std::vector<double> data, std::string provenance)
    : data_(std::move(data)), provenance_(std::move(provenance)) {
  require(!data_.empty(), ErrorCode::domain, "sample must contain at least one observation");
  for (double x : data_) {
    require(std::isfinite(x), ErrorCode::domain, "sample entries must be finite");
  }
  if (!std::is_sorted(data_.begin(), data_.end())) std::sort(data_.begin(), data_.end());
}

double Sample::mean() const {
  return std::accumulate(data_.begin(), data_.end(), 0.0) / static_cast<double>(data_.size());
}

double Sample::variance() const {
  const double m = mean();
  double ss = 0.0;
  for (double x : data_) ss += (x - m) * (x - m);
  return ss / static_cast<double>(data_.size());
}

}  // namespace agof
