#ifndef AGOF_SAMPLE_HPP
#define AGOF_SAMPLE_HPP

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace agof {

/// Ascending, finite, non-empty set of observations; the carrier of the
/// empirical distribution function.
class Sample {
 public:
  /// Sorts `data`; throws DOMAIN_ERROR when empty or when any entry is not finite.
  explicit Sample(std::vector<double> data, std::string provenance = {});

  std::span<const double> data() const noexcept { return data_; }
  const std::vector<double>& values() const noexcept { return data_; }
  std::size_t size() const noexcept { return data_.size(); }
  double operator[](std::size_t i) const { return data_[i]; }
  double min() const noexcept { return data_.front(); }
  double max() const noexcept { return data_.back(); }
  const std::string& provenance() const noexcept { return provenance_; }

  double mean() const;
  /// Variance with denominator n.
  double variance() const;
  bool has_distinct_points() const noexcept { return data_.front() < data_.back(); }

 private:
  std::vector<double> data_;
  std::string provenance_;
};

}  // namespace agof

#endif  // AGOF_SAMPLE_HPP
