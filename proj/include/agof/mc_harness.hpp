#ifndef AGOF_MC_HARNESS_HPP
#define AGOF_MC_HARNESS_HPP

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <vector>

#include "agof/agof_test.hpp"
#include "agof/distributions.hpp"

namespace agof {

struct PowerStudyConfig {
  FittedModel true_dist = normal_model(0.0, 1.0);
  FamilyId family = FamilyId::normal();
  double p = 1.0;
  std::size_t n = 100;
  double alpha = 0.05;
  std::vector<Method> methods = {Method::bootstrap1, Method::bootstrap2};
  std::vector<double> epsilon_grid;
  std::size_t runs = 500;
  std::size_t B = 500;
  FailurePolicy failure_policy = FailurePolicy::retry_once_then_skip;
  std::uint64_t seed = 0;
  unsigned workers = 1;
  EmConfig em;

  void validate() const;
};

struct PowerRow {
  double epsilon = 0.0;
  double rejection_proportion = 0.0;
  double std_error = 0.0;
};

struct MethodCurve {
  Method method = Method::bootstrap2;
  std::vector<PowerRow> rows;
  /// min_margin of every completed run, in run order.
  std::vector<double> margins;
};

struct PowerCurve {
  PowerStudyConfig config;
  std::vector<MethodCurve> curves;  // one per configured method, same order
  std::size_t runs_completed = 0;
  std::size_t runs_skipped = 0;

  const MethodCurve& curve(Method m) const;
};

/// Monte Carlo power of the AGoF test over a grid of margins. Run r draws its
/// sample from stream derive_seed(seed, r, 0) and bootstraps with seed
/// derive_seed(seed, r, 1); one bootstrap serves every method and every eps,
/// since each decision is the threshold crossing eps > min_margin.
PowerCurve power_curve(const PowerStudyConfig& cfg);

/// Rejection proportion (and binomial standard error) among the runs of a
/// finished study at a single eps.
PowerRow rejection_at(const MethodCurve& curve, double epsilon);

/// Power curve evaluated at the single point epsilon_true, one entry per
/// configured method.
std::vector<PowerRow> size_calibration(PowerStudyConfig cfg, double epsilon_true);

/// Columns: method,epsilon,rejection_proportion,std_error,runs,B,n,p,alpha,seed
void write_power_csv(std::ostream& out, const PowerCurve& curve);

}  // namespace agof

#endif  // AGOF_MC_HARNESS_HPP
