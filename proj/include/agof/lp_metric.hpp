#ifndef AGOF_LP_METRIC_HPP
#define AGOF_LP_METRIC_HPP

#include <cstddef>

#include "agof/distributions.hpp"
#include "agof/sample.hpp"

namespace agof {

struct DistanceConfig {
  double p = 1.0;
  /// Infinite tails are cut at the model quantiles tail_u and 1 - tail_u.
  double tail_u = 1e-10;
  double quad_rel_tol = 1e-9;
  std::size_t max_subdivisions = 1'000'000;

  /// 1 <= p < inf, 0 < tail_u < 0.01, quad_rel_tol > 0.
  void validate() const;
};

/// An L^p norm together with an absolute bound on its numerical error
/// (quadrature error plus truncated-tail remainder, propagated through the
/// 1/p power).
struct DistanceResult {
  double value = 0.0;
  double abs_error_bound = 0.0;
};

/// ||F_n - G||_p for a continuous model G.
///
/// The real line is split at the order statistics; on each gap the empirical
/// cdf is the constant i/n, and the point where G crosses that level is added
/// as a breakpoint, so every quadrature piece has a smooth integrand.
DistanceResult empirical_model_distance(const Sample& sample, const FittedModel& model,
                                        const DistanceConfig& cfg);

/// ||F - G||_p between two continuous models. Panels come from both quantile
/// grids, refined at every detected sign change of F - G.
DistanceResult analytic_distance(const FittedModel& f, const FittedModel& g,
                                 const DistanceConfig& cfg);

/// ||F_n - 1{. >= mu}||_p, an exact finite sum over step-function intervals.
DistanceResult dirac_distance(const Sample& sample, double mu, double p);

}  // namespace agof

#endif  // AGOF_LP_METRIC_HPP
