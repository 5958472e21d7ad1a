#ifndef AGOF_DISTRIBUTIONS_HPP
#define AGOF_DISTRIBUTIONS_HPP

#include <cstdint>
#include <string>
#include <string_view>

#include <Eigen/Dense>

#include "agof/sample.hpp"

namespace agof {

enum class Family { exponential, normal, weibull, gaussian_mixture, dirac };

/// A parametric family. Only gaussian_mixture carries an arity k >= 1.
class FamilyId {
 public:
  static FamilyId exponential() { return FamilyId(Family::exponential, 0); }
  static FamilyId normal() { return FamilyId(Family::normal, 0); }
  static FamilyId weibull() { return FamilyId(Family::weibull, 0); }
  static FamilyId dirac() { return FamilyId(Family::dirac, 0); }
  static FamilyId gaussian_mixture(int k);

  Family tag() const noexcept { return tag_; }
  int k() const noexcept { return k_; }
  Eigen::Index param_count() const noexcept;
  bool continuous() const noexcept { return tag_ != Family::dirac; }

  friend bool operator==(const FamilyId&, const FamilyId&) = default;

 private:
  FamilyId(Family tag, int k) : tag_(tag), k_(k) {}
  Family tag_;
  int k_;
};

/// "exponential", "normal", "weibull", "gaussian_mixture", "dirac".
std::string_view family_name(Family tag);
/// Parses a family name; `k` is required (>= 1) only for gaussian_mixture.
FamilyId parse_family(std::string_view name, int k = 0);
/// Human-readable id, e.g. "gaussian_mixture(3)".
std::string to_string(const FamilyId& family);

/// Parameter vector. Layout per family:
///   exponential      (theta)          scale, mean theta
///   normal           (mu, sigma)
///   weibull          (shape, scale)
///   gaussian_mixture (w_1..w_k, mu_1..mu_k, sigma_1..sigma_k)
///   dirac            (mu)
using Params = Eigen::VectorXd;

/// A family together with a validated parameter vector.
class FittedModel {
 public:
  /// Throws DOMAIN_ERROR if `params` violates the family layout or ranges.
  FittedModel(FamilyId family, Params params);

  const FamilyId& family() const noexcept { return family_; }
  const Params& params() const noexcept { return params_; }

  // Mixture views; for k = 1 these also work on a gaussian_mixture(1).
  Eigen::VectorBlock<const Params> weights() const { return params_.segment(0, family_.k()); }
  Eigen::VectorBlock<const Params> means() const { return params_.segment(family_.k(), family_.k()); }
  Eigen::VectorBlock<const Params> sds() const { return params_.segment(2 * family_.k(), family_.k()); }

 private:
  FamilyId family_;
  Params params_;
};

FittedModel exponential_model(double theta);
FittedModel normal_model(double mu, double sigma);
FittedModel weibull_model(double shape, double scale);
FittedModel dirac_model(double mu);
FittedModel mixture_model(const Eigen::VectorXd& weights, const Eigen::VectorXd& means,
                          const Eigen::VectorXd& sds);

double cdf(const FittedModel& model, double x);
/// Survival function 1 - cdf, evaluated without cancellation in the upper tail.
double sf(const FittedModel& model, double x);
/// Density; throws UNSUPPORTED for dirac.
double pdf(const FittedModel& model, double x);
/// Generalized inverse of cdf. Throws DOMAIN_ERROR unless 0 < u < 1.
double quantile(const FittedModel& model, double u);

double mean(const FittedModel& model);
double variance(const FittedModel& model);

/// Left end of the support (0 for exponential and weibull, -inf otherwise).
double support_lower(const FittedModel& model);

/// Integral of cdf over (-inf, x], i.e. E[(x - X)^+].
double lower_tail_integral(const FittedModel& model, double x);
/// Integral of sf over [x, inf), i.e. E[(X - x)^+].
double upper_tail_integral(const FittedModel& model, double x);

/// n i.i.d. draws, deterministic in (model, n, seed).
Sample draw_sample(const FittedModel& model, std::size_t n, std::uint64_t seed);

struct EmConfig {
  int restarts = 10;
  int max_iter = 500;
  double rel_tol = 1e-8;
  double variance_floor_factor = 1e-6;
  std::uint64_t seed = 0;

  void validate() const;
};

/// Maximum-likelihood fit. gaussian_mixture delegates to em_fit_mixture;
/// weibull is generator-only and throws UNSUPPORTED.
Params fit_mle(const FamilyId& family, const Sample& sample, const EmConfig& em = {});

/// Sum of log densities; -infinity if any datum lies outside the support.
/// Throws UNSUPPORTED for dirac.
double log_likelihood(const FittedModel& model, const Sample& sample);

/// Parameters of the maximum-likelihood projection of `truth` onto `family`
/// (exponential, normal or dirac; these are moment-characterized).
Params projection_params(const FittedModel& truth, const FamilyId& family);

}  // namespace agof

#endif  // AGOF_DISTRIBUTIONS_HPP
