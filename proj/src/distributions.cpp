#include "agof/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "agof/errors.hpp"
#include "agof/mixture_em.hpp"
#include "agof/rng.hpp"
#include "agof/special_functions.hpp"

namespace agof {

namespace sp = special;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_positive(double v, const char* what) {
  require(std::isfinite(v) && v > 0.0, ErrorCode::domain,
          std::string(what) + " must be finite and strictly positive");
}

// Mixture cdf / sf as weighted sums of component values.
double mixture_cdf(const FittedModel& m, double x) {
  double s = 0.0;
  for (int j = 0; j < m.family().k(); ++j)
    s += m.weights()[j] * sp::normal_cdf((x - m.means()[j]) / m.sds()[j]);
  return std::min(1.0, s);
}

double mixture_sf(const FittedModel& m, double x) {
  double s = 0.0;
  for (int j = 0; j < m.family().k(); ++j)
    s += m.weights()[j] * sp::normal_sf((x - m.means()[j]) / m.sds()[j]);
  return std::min(1.0, s);
}

// Safeguarded Newton on the monotone mixture cdf inside a bracket that holds
// the root. Solves on the survival function for upper levels.
double mixture_quantile(const FittedModel& m, double u) {
  const int k = m.family().k();
  const double z = sp::normal_quantile(u);
  double lo = kInf, hi = -kInf;
  for (int j = 0; j < k; ++j) {
    const double q = m.means()[j] + m.sds()[j] * z;
    lo = std::min(lo, q);
    hi = std::max(hi, q);
  }
  if (!(hi > lo)) return lo;
  const bool upper = u > 0.5;
  // g(x) increasing in x, root at the quantile.
  auto g = [&](double x) { return upper ? (1.0 - u) - mixture_sf(m, x) : mixture_cdf(m, x) - u; };
  double x = 0.5 * (lo + hi);
  for (int it = 0; it < 200; ++it) {
    const double gx = g(x);
    if (gx == 0.0) return x;
    if (gx < 0.0) lo = x; else hi = x;
    const double d = pdf(m, x);
    double next = d > 0.0 ? x - gx / d : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - x) <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(x)) ||
        hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(x))) {
      return next;
    }
    x = next;
  }
  return x;
}

double weibull_mean(double shape, double scale) { return scale * std::tgamma(1.0 + 1.0 / shape); }

}  // namespace

FamilyId FamilyId::gaussian_mixture(int k) {
  require(k >= 1, ErrorCode::domain, "gaussian_mixture needs k >= 1");
  return FamilyId(Family::gaussian_mixture, k);
}

Eigen::Index FamilyId::param_count() const noexcept {
  switch (tag_) {
    case Family::exponential: return 1;
    case Family::normal: return 2;
    case Family::weibull: return 2;
    case Family::gaussian_mixture: return 3 * k_;
    case Family::dirac: return 1;
  }
  return 0;
}

std::string_view family_name(Family tag) {
  switch (tag) {
    case Family::exponential: return "exponential";
    case Family::normal: return "normal";
    case Family::weibull: return "weibull";
    case Family::gaussian_mixture: return "gaussian_mixture";
    case Family::dirac: return "dirac";
  }
  return "unknown";
}

FamilyId parse_family(std::string_view name, int k) {
  if (name == "exponential") return FamilyId::exponential();
  if (name == "normal") return FamilyId::normal();
  if (name == "weibull") return FamilyId::weibull();
  if (name == "dirac") return FamilyId::dirac();
  if (name == "gaussian_mixture" || name == "mixture") return FamilyId::gaussian_mixture(k);
  fail(ErrorCode::domain, "unknown family '" + std::string(name) + "'");
}

std::string to_string(const FamilyId& family) {
  std::string s(family_name(family.tag()));
  if (family.tag() == Family::gaussian_mixture) s += "(" + std::to_string(family.k()) + ")";
  return s;
}

FittedModel::FittedModel(FamilyId family, Params params)
    : family_(family), params_(std::move(params)) {
  require(params_.size() == family_.param_count(), ErrorCode::domain,
          "parameter vector length " + std::to_string(params_.size()) + " does not match " +
              to_string(family_));
  for (Eigen::Index i = 0; i < params_.size(); ++i)
    require(std::isfinite(params_[i]), ErrorCode::domain, "parameters must be finite");
  switch (family_.tag()) {
    case Family::exponential: check_positive(params_[0], "exponential scale"); break;
    case Family::normal: check_positive(params_[1], "normal sigma"); break;
    case Family::weibull:
      check_positive(params_[0], "weibull shape");
      check_positive(params_[1], "weibull scale");
      break;
    case Family::gaussian_mixture: {
      double total = 0.0;
      for (int j = 0; j < family_.k(); ++j) {
        check_positive(weights()[j], "mixture weight");
        check_positive(sds()[j], "mixture sd");
        total += weights()[j];
      }
      require(std::abs(total - 1.0) <= 1e-12, ErrorCode::domain, "mixture weights must sum to 1");
      break;
    }
    case Family::dirac: break;
  }
}

FittedModel exponential_model(double theta) {
  return FittedModel(FamilyId::exponential(), Params::Constant(1, theta));
}

FittedModel normal_model(double mu, double sigma) {
  Params p(2);
  p << mu, sigma;
  return FittedModel(FamilyId::normal(), p);
}

FittedModel weibull_model(double shape, double scale) {
  Params p(2);
  p << shape, scale;
  return FittedModel(FamilyId::weibull(), p);
}

FittedModel dirac_model(double mu) { return FittedModel(FamilyId::dirac(), Params::Constant(1, mu)); }

FittedModel mixture_model(const Eigen::VectorXd& weights, const Eigen::VectorXd& means,
                          const Eigen::VectorXd& sds) {
  const auto k = weights.size();
  require(k >= 1 && means.size() == k && sds.size() == k, ErrorCode::domain,
          "mixture weights, means and sds must have equal non-zero length");
  Params p(3 * k);
  p << weights, means, sds;
  return FittedModel(FamilyId::gaussian_mixture(static_cast<int>(k)), p);
}

double cdf(const FittedModel& m, double x) {
  const auto& t = m.params();
  switch (m.family().tag()) {
    case Family::exponential: return x <= 0.0 ? 0.0 : -std::expm1(-x / t[0]);
    case Family::normal: return sp::normal_cdf((x - t[0]) / t[1]);
    case Family::weibull: return x <= 0.0 ? 0.0 : -std::expm1(-std::pow(x / t[1], t[0]));
    case Family::gaussian_mixture: return mixture_cdf(m, x);
    case Family::dirac: return x >= t[0] ? 1.0 : 0.0;
  }
  return 0.0;
}

double sf(const FittedModel& m, double x) {
  const auto& t = m.params();
  switch (m.family().tag()) {
    case Family::exponential: return x <= 0.0 ? 1.0 : std::exp(-x / t[0]);
    case Family::normal: return sp::normal_sf((x - t[0]) / t[1]);
    case Family::weibull: return x <= 0.0 ? 1.0 : std::exp(-std::pow(x / t[1], t[0]));
    case Family::gaussian_mixture: return mixture_sf(m, x);
    case Family::dirac: return x >= t[0] ? 0.0 : 1.0;
  }
  return 1.0;
}

double pdf(const FittedModel& m, double x) {
  const auto& t = m.params();
  switch (m.family().tag()) {
    case Family::exponential: return x < 0.0 ? 0.0 : std::exp(-x / t[0]) / t[0];
    case Family::normal: return sp::normal_pdf((x - t[0]) / t[1]) / t[1];
    case Family::weibull: {
      if (x < 0.0) return 0.0;
      const double r = x / t[1];
      return t[0] / t[1] * std::pow(r, t[0] - 1.0) * std::exp(-std::pow(r, t[0]));
    }
    case Family::gaussian_mixture: {
      double s = 0.0;
      for (int j = 0; j < m.family().k(); ++j)
        s += m.weights()[j] * sp::normal_pdf((x - m.means()[j]) / m.sds()[j]) / m.sds()[j];
      return s;
    }
    case Family::dirac: break;
  }
  fail(ErrorCode::unsupported, "dirac has no density");
}

double quantile(const FittedModel& m, double u) {
  require(u > 0.0 && u < 1.0, ErrorCode::domain,
          "quantile level must lie in (0,1), got " + std::to_string(u));
  const auto& t = m.params();
  switch (m.family().tag()) {
    case Family::exponential: return -t[0] * std::log1p(-u);
    case Family::normal: return t[0] + t[1] * sp::normal_quantile(u);
    case Family::weibull: return t[1] * std::pow(-std::log1p(-u), 1.0 / t[0]);
    case Family::gaussian_mixture: return mixture_quantile(m, u);
    case Family::dirac: return t[0];
  }
  return 0.0;
}

double mean(const FittedModel& m) {
  const auto& t = m.params();
  switch (m.family().tag()) {
    case Family::exponential: return t[0];
    case Family::normal: return t[0];
    case Family::weibull: return weibull_mean(t[0], t[1]);
    case Family::gaussian_mixture: return m.weights().dot(m.means());
    case Family::dirac: return t[0];
  }
  return 0.0;
}

double variance(const FittedModel& m) {
  const auto& t = m.params();
  switch (m.family().tag()) {
    case Family::exponential: return t[0] * t[0];
    case Family::normal: return t[1] * t[1];
    case Family::weibull: {
      const double g1 = std::tgamma(1.0 + 1.0 / t[0]);
      return t[1] * t[1] * (std::tgamma(1.0 + 2.0 / t[0]) - g1 * g1);
    }
    case Family::gaussian_mixture: {
      const double mu = mean(m);
      double second = 0.0;
      for (int j = 0; j < m.family().k(); ++j)
        second += m.weights()[j] * (m.sds()[j] * m.sds()[j] + m.means()[j] * m.means()[j]);
      return std::max(0.0, second - mu * mu);
    }
    case Family::dirac: return 0.0;
  }
  return 0.0;
}

double support_lower(const FittedModel& m) {
  switch (m.family().tag()) {
    case Family::exponential:
    case Family::weibull: return 0.0;
    case Family::dirac: return m.params()[0];
    default: return -kInf;
  }
}

double lower_tail_integral(const FittedModel& m, double x) {
  const auto& t = m.params();
  switch (m.family().tag()) {
    case Family::exponential:
      return x <= 0.0 ? 0.0 : x + t[0] * std::expm1(-x / t[0]);
    case Family::normal: return t[1] * sp::normal_lower_partial_moment((x - t[0]) / t[1]);
    case Family::weibull: {
      if (x <= 0.0) return 0.0;
      const double a = 1.0 + 1.0 / t[0];
      const double z = std::pow(x / t[1], t[0]);
      return std::max(0.0, -x * std::expm1(-z) - weibull_mean(t[0], t[1]) * (1.0 - sp::gamma_q(a, z)));
    }
    case Family::gaussian_mixture: {
      double s = 0.0;
      for (int j = 0; j < m.family().k(); ++j)
        s += m.weights()[j] * m.sds()[j] *
             sp::normal_lower_partial_moment((x - m.means()[j]) / m.sds()[j]);
      return s;
    }
    case Family::dirac: return std::max(0.0, x - t[0]);
  }
  return 0.0;
}

double upper_tail_integral(const FittedModel& m, double x) {
  const auto& t = m.params();
  switch (m.family().tag()) {
    case Family::exponential: return x <= 0.0 ? t[0] - x : t[0] * std::exp(-x / t[0]);
    case Family::normal: return t[1] * sp::normal_upper_partial_moment((x - t[0]) / t[1]);
    case Family::weibull: {
      if (x <= 0.0) return weibull_mean(t[0], t[1]) - x;
      const double a = 1.0 + 1.0 / t[0];
      const double z = std::pow(x / t[1], t[0]);
      return std::max(0.0, weibull_mean(t[0], t[1]) * sp::gamma_q(a, z) - x * std::exp(-z));
    }
    case Family::gaussian_mixture: {
      double s = 0.0;
      for (int j = 0; j < m.family().k(); ++j)
        s += m.weights()[j] * m.sds()[j] *
             sp::normal_upper_partial_moment((x - m.means()[j]) / m.sds()[j]);
      return s;
    }
    case Family::dirac: return std::max(0.0, t[0] - x);
  }
  return 0.0;
}

Sample draw_sample(const FittedModel& m, std::size_t n, std::uint64_t seed) {
  require(n >= 1, ErrorCode::domain, "draw_sample needs n >= 1");
  Stream rng(seed);
  std::vector<double> out(n);
  const auto& t = m.params();
  for (auto& x : out) {
    switch (m.family().tag()) {
      case Family::exponential: x = -t[0] * std::log(rng.uniform()); break;
      case Family::normal: x = t[0] + t[1] * rng.normal(); break;
      case Family::weibull: x = t[1] * std::pow(-std::log(rng.uniform()), 1.0 / t[0]); break;
      case Family::gaussian_mixture: {
        const double u = rng.uniform();
        int j = 0;
        double acc = m.weights()[0];
        while (u > acc && j + 1 < m.family().k()) acc += m.weights()[++j];
        x = m.means()[j] + m.sds()[j] * rng.normal();
        break;
      }
      case Family::dirac: x = t[0]; break;
    }
  }
  return Sample(std::move(out), "draw:" + to_string(m.family()) + ":seed=" + std::to_string(seed));
}

void EmConfig::validate() const {
  require(restarts >= 1, ErrorCode::domain, "EM restarts must be >= 1");
  require(max_iter >= 1, ErrorCode::domain, "EM max_iter must be >= 1");
  require(rel_tol > 0.0, ErrorCode::domain, "EM rel_tol must be > 0");
  require(variance_floor_factor > 0.0, ErrorCode::domain, "EM variance_floor_factor must be > 0");
}

Params fit_mle(const FamilyId& family, const Sample& sample, const EmConfig& em) {
  switch (family.tag()) {
    case Family::exponential:
      require(sample.min() > 0.0, ErrorCode::domain,
              "exponential fit requires strictly positive data");
      return Params::Constant(1, sample.mean());
    case Family::normal: {
      require(sample.size() >= 2, ErrorCode::insufficient_data, "normal fit needs n >= 2");
      const double var = sample.variance();
      require(var > 0.0, ErrorCode::degenerate_data, "normal fit: zero sample variance");
      Params p(2);
      p << sample.mean(), std::sqrt(var);
      return p;
    }
    case Family::dirac: return Params::Constant(1, sample.mean());
    case Family::gaussian_mixture: return em_fit_mixture(sample, family.k(), em);
    case Family::weibull: break;
  }
  fail(ErrorCode::unsupported, "weibull is available as a generator only (no MLE fit)");
}

double log_likelihood(const FittedModel& m, const Sample& sample) {
  const auto& t = m.params();
  constexpr double ninf = -kInf;
  double ll = 0.0;
  switch (m.family().tag()) {
    case Family::exponential:
      for (double x : sample.data()) {
        if (x < 0.0) return ninf;
        ll += -std::log(t[0]) - x / t[0];
      }
      return ll;
    case Family::normal:
      for (double x : sample.data()) {
        const double z = (x - t[0]) / t[1];
        ll += -std::log(t[1]) - sp::kLogSqrt2Pi - 0.5 * z * z;
      }
      return ll;
    case Family::weibull:
      for (double x : sample.data()) {
        if (x < 0.0) return ninf;
        ll += std::log(pdf(m, x));
      }
      return ll;
    case Family::gaussian_mixture: {
      const int k = m.family().k();
      std::vector<double> terms(static_cast<std::size_t>(k));
      for (double x : sample.data()) {
        double top = ninf;
        for (int j = 0; j < k; ++j) {
          const double z = (x - m.means()[j]) / m.sds()[j];
          terms[j] = std::log(m.weights()[j]) - std::log(m.sds()[j]) - sp::kLogSqrt2Pi - 0.5 * z * z;
          top = std::max(top, terms[j]);
        }
        double s = 0.0;
        for (double v : terms) s += std::exp(v - top);
        ll += top + std::log(s);
      }
      return ll;
    }
    case Family::dirac: break;
  }
  fail(ErrorCode::unsupported, "log_likelihood: dirac has no density");
}

Params projection_params(const FittedModel& truth, const FamilyId& family) {
  const double mu = mean(truth);
  switch (family.tag()) {
    case Family::exponential:
      require(mu > 0.0 && support_lower(truth) >= 0.0, ErrorCode::domain,
              "exponential projection needs a distribution on [0, inf) with positive mean");
      return Params::Constant(1, mu);
    case Family::normal: {
      const double var = variance(truth);
      require(var > 0.0, ErrorCode::domain, "normal projection needs positive variance");
      Params p(2);
      p << mu, std::sqrt(var);
      return p;
    }
    case Family::dirac: return Params::Constant(1, mu);
    default: break;
  }
  fail(ErrorCode::unsupported,
       "no closed-form projection onto " + to_string(family) + " (exponential, normal, dirac only)");
}

}  // namespace agof
