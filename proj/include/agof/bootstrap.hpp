#ifndef AGOF_BOOTSTRAP_HPP
#define AGOF_BOOTSTRAP_HPP

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <vector>

#include "agof/distributions.hpp"
#include "agof/lp_metric.hpp"

namespace agof {

enum class FailurePolicy { retry_once_then_skip, abort };

struct BootstrapConfig {
  std::size_t B = 2000;
  std::uint64_t seed = 0;
  FailurePolicy failure_policy = FailurePolicy::retry_once_then_skip;
  double max_skip_fraction = 0.01;
  /// Worker threads; 0 means hardware concurrency. Results do not depend on it.
  unsigned workers = 1;

  /// B >= 2, 0 <= max_skip_fraction < 0.05.
  void validate() const;
};

struct BootstrapSummary {
  std::vector<double> norms;  // ascending, length B_eff
  double sigma_boot = 0.0;    // sample sd, denominator B_eff - 1
  std::size_t n_skipped = 0;
  std::uint64_t seed = 0;

  std::size_t effective_size() const noexcept { return norms.size(); }
  /// Lower order statistic norms[ceil(level * B_eff) - 1]; level in (0, 1).
  double quantile(double level) const;
};

/// B replicate norms ||F_n* - G(theta_n*)||_p. Replicate b resamples with the
/// stream derive_seed(seed, b, attempt) and refits the family on the resample.
BootstrapSummary run_bootstrap(const Sample& sample, const FamilyId& family,
                               const DistanceConfig& distance, const BootstrapConfig& cfg,
                               const EmConfig& em = {});

/// Single-column CSV ("norm" header) of the replicate norms.
void write_norms_csv(std::ostream& out, const BootstrapSummary& summary);

}  // namespace agof

#endif  // AGOF_BOOTSTRAP_HPP
