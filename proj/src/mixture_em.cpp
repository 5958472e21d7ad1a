#include "agof/mixture_em.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "agof/errors.hpp"
#include "agof/rng.hpp"
#include "agof/special_functions.hpp"

namespace agof {

namespace {

using Eigen::ArrayXd;
using Eigen::ArrayXXd;

// Linear-interpolation sample quantile on sorted data.
double sample_quantile(std::span<const double> sorted, double level) {
  const double pos = level * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

struct EmState {
  ArrayXd weights, means, vars;
  double log_likelihood = 0.0;
};

class EmRunner {
 public:
  EmRunner(const Sample& sample, int k, double var_floor)
      : x_(Eigen::Map<const ArrayXd>(sample.data().data(), static_cast<Eigen::Index>(sample.size()))),
        k_(k),
        var_floor_(var_floor),
        resp_(x_.size(), k) {}

  // E-step: fills responsibilities, returns the log-likelihood of `s`.
  double expectation(const EmState& s) {
    for (int j = 0; j < k_; ++j) {
      resp_.col(j) = std::log(s.weights[j]) - 0.5 * std::log(s.vars[j]) - special::kLogSqrt2Pi -
                     0.5 * (x_ - s.means[j]).square() / s.vars[j];
    }
    const ArrayXd top = resp_.rowwise().maxCoeff();
    resp_.colwise() -= top;
    resp_ = resp_.exp();
    const ArrayXd norm = resp_.rowwise().sum();
    resp_.colwise() /= norm;
    return (top + norm.log()).sum();
  }

  // M-step with the variance floor; false if a component lost all mass.
  bool maximization(EmState& s) const {
    const ArrayXd nk = resp_.colwise().sum().transpose();
    if (!(nk > 0.0).all() || !nk.allFinite()) return false;
    const double n = static_cast<double>(x_.size());
    s.weights = nk / n;
    s.weights /= s.weights.sum();
    for (int j = 0; j < k_; ++j) {
      s.means[j] = (resp_.col(j) * x_).sum() / nk[j];
      const double v = (resp_.col(j) * (x_ - s.means[j]).square()).sum() / nk[j];
      s.vars[j] = std::max(v, var_floor_);
    }
    return true;
  }

 private:
  ArrayXd x_;
  int k_;
  double var_floor_;
  ArrayXXd resp_;
};

}  // namespace

Params em_fit_mixture(const Sample& sample, int k, const EmConfig& cfg, EmTrace* trace) {
  cfg.validate();
  require(k >= 1, ErrorCode::domain, "mixture needs k >= 1");
  const std::size_t n = sample.size();
  require(n >= 2 * static_cast<std::size_t>(k), ErrorCode::insufficient_data,
          "EM with k=" + std::to_string(k) + " needs at least " + std::to_string(2 * k) +
              " observations, got " + std::to_string(n));
  const double var = sample.variance();
  require(var > 0.0, ErrorCode::degenerate_data, "EM: zero sample variance");
  const double sd = std::sqrt(var);
  const double var_floor = cfg.variance_floor_factor * var;

  EmRunner runner(sample, k, var_floor);
  EmState best;
  int best_index = -1;
  if (trace) trace->restarts.assign(static_cast<std::size_t>(cfg.restarts), {});

  for (int r = 0; r < cfg.restarts; ++r) {
    Stream rng(derive_seed(cfg.seed, static_cast<std::uint64_t>(r)));
    EmState s;
    s.weights = ArrayXd::Constant(k, 1.0 / k);
    s.vars = ArrayXd::Constant(k, var);
    s.means.resize(k);
    for (int j = 0; j < k; ++j)
      s.means[j] = sample_quantile(sample.data(), (j + 1.0) / (k + 1.0)) + 0.1 * sd * rng.normal();

    EmTrace::Restart info;
    s.log_likelihood = runner.expectation(s);
    info.log_likelihood.push_back(s.log_likelihood);
    for (int it = 0; it < cfg.max_iter; ++it) {
      EmState next = s;
      if (!runner.maximization(next)) {
        info.failed = true;
        break;
      }
      next.log_likelihood = runner.expectation(next);
      info.log_likelihood.push_back(next.log_likelihood);
      const double gain = next.log_likelihood - s.log_likelihood;
      s = std::move(next);
      if (gain < cfg.rel_tol * std::abs(s.log_likelihood)) {
        info.converged = true;
        break;
      }
    }
    info.degenerate = !info.failed && (s.vars <= var_floor).all();
    const bool usable = !info.failed && !info.degenerate && std::isfinite(s.log_likelihood);
    if (usable && (best_index < 0 || s.log_likelihood > best.log_likelihood)) {
      best = s;
      best_index = r;
    }
    if (trace) trace->restarts[static_cast<std::size_t>(r)] = std::move(info);
  }
  if (trace) trace->best_restart = best_index;
  require(best_index >= 0, ErrorCode::degenerate_fit,
          "EM: every restart collapsed onto the variance floor or lost a component");

  std::vector<int> order(static_cast<std::size_t>(k));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return best.means[a] < best.means[b]; });
  Params out(3 * k);
  for (int j = 0; j < k; ++j) {
    out[j] = best.weights[order[j]];
    out[k + j] = best.means[order[j]];
    out[2 * k + j] = std::sqrt(best.vars[order[j]]);
  }
  out.head(k) /= out.head(k).sum();
  return out;
}

}  // namespace agof
