#ifndef AGOF_AGOF_TEST_HPP
#define AGOF_AGOF_TEST_HPP

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "agof/bootstrap.hpp"
#include "agof/distributions.hpp"
#include "agof/lp_metric.hpp"

namespace agof {

inline constexpr std::string_view kEngineVersion = "agof 0.1.0";

/// bootstrap1: quantile rule 2||F_n - G|| - eps*(alpha) < eps.
/// bootstrap2: normal rule   ||F_n - G|| - sigma_boot z_alpha < eps.
enum class Method { bootstrap1, bootstrap2 };

std::string_view method_name(Method m);
Method parse_method(std::string_view name);

enum class Hypothesis {
  agof,  // H1: distance < eps (model is eps-close)
  dual   // H1: distance > eps (model deviates by more than eps)
};

namespace warning {
inline constexpr std::string_view contact_set = "CONTACT_SET_CAVEAT";
inline constexpr std::string_view heavy_tail = "HEAVY_TAIL_HEURISTIC";
inline constexpr std::string_view skipped = "BOOTSTRAP_SKIPPED_REPLICATES";
inline constexpr std::string_view clamped = "IMPROVEMENT_CLAMPED";
}  // namespace warning

struct TestConfig {
  double epsilon = 0.0;
  double alpha = 0.05;
  Method method = Method::bootstrap2;
  DistanceConfig distance;  // carries p
  BootstrapConfig bootstrap;
  EmConfig em;

  /// epsilon > 0, 0 < alpha < 0.5, plus the nested configs.
  void validate() const;
};

struct Improvement {
  double raw = 0.0;
  double clamped = 0.0;
};

struct TestReport {
  Hypothesis hypothesis = Hypothesis::agof;
  FamilyId family = FamilyId::normal();
  Params theta_hat;
  TestConfig config;
  DistanceResult observed;  // ||F_n - G(theta_n)||_p
  BootstrapSummary boot;
  bool reject_H0 = false;
  /// eps*(alpha): the AGoF null is rejected exactly when eps > min_margin.
  double min_margin = 0.0;
  /// Dual test only: its null is rejected exactly when eps < dual_margin.
  std::optional<double> dual_margin;
  double dirac_baseline = 0.0;  // ||F_n - F_{delta_mean}||_p
  Improvement improvement;
  std::vector<std::string> warnings;

  double obs_norm() const noexcept { return observed.value; }
};

/// Standard normal lower quantile z_alpha (negative for alpha < 0.5).
double lower_normal_quantile(double alpha);

/// Infimum of eps at which the AGoF null is rejected; closed form for both rules.
double min_margin(double obs_norm, const BootstrapSummary& boot, double alpha, Method method);

/// Supremum of eps at which the dual null is rejected.
double dual_margin(double obs_norm, const BootstrapSummary& boot, double alpha, Method method);

/// 1 - margin / ||F_n - F_{delta_xbar}||_p, raw and clamped to [0, 1].
/// Throws DEGENERATE_DATA when the sample has a single distinct value.
Improvement improvement_coefficient(double min_margin_value, const Sample& sample, double p);
/// Same arithmetic for a precomputed positive baseline distance.
Improvement improvement_coefficient(double min_margin_value, double dirac_baseline);

TestReport agof_test(const Sample& sample, const FamilyId& family, const TestConfig& cfg);
TestReport dual_test(const Sample& sample, const FamilyId& family, const TestConfig& cfg);

/// Both rules' minimum margins from one fit and one bootstrap; the shape of
/// one row of a model-comparison table over several families.
struct MarginSummary {
  FamilyId family = FamilyId::normal();
  Params theta_hat;
  DistanceResult observed;
  BootstrapSummary boot;
  double dirac_baseline = 0.0;
  double margin[2] = {0.0, 0.0};  // indexed by Method
  Improvement improvement[2];
  std::vector<std::string> warnings;
};

MarginSummary minimum_margins(const Sample& sample, const FamilyId& family, double alpha,
                              const DistanceConfig& distance, const BootstrapConfig& bootstrap,
                              const EmConfig& em = {});

}  // namespace agof

#endif  // AGOF_AGOF_TEST_HPP
