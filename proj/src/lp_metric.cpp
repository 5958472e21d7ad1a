#include "agof/lp_metric.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "agof/errors.hpp"
#include "agof/quadrature.hpp"

namespace agof {

namespace {

// Smallest bound on the norm error we accept regardless of the relative rule;
// tail remainders alone reach ~1e-11 even when the two cdfs coincide.
constexpr double kAbsoluteBoundFloor = 1e-9;

inline double pow_abs(double d, double p) {
  d = std::abs(d);
  if (p == 1.0) return d;
  if (p == 2.0) return d * d;
  return std::pow(d, p);
}

// (I)^{1/p} with the error of I pushed through the root.
DistanceResult to_norm(double integral, double delta, double p) {
  integral = std::max(integral, 0.0);
  const double value = std::pow(integral, 1.0 / p);
  const double up = std::pow(integral + delta, 1.0 / p) - value;
  const double down = value - std::pow(std::max(integral - delta, 0.0), 1.0 / p);
  DistanceResult r{value, std::max(up, down)};
  if (r.abs_error_bound > std::max(0.01 * value, kAbsoluteBoundFloor)) {
    throw PrecisionError("distance error bound " + std::to_string(r.abs_error_bound) +
                             " exceeds 1% of the value " + std::to_string(value),
                         r.abs_error_bound);
  }
  return r;
}

// G(x) - c, evaluated on the survival side for upper levels.
inline double level_gap(const FittedModel& m, double c, double x) {
  return c > 0.5 ? (1.0 - c) - sf(m, x) : cdf(m, x) - c;
}

// Point t in [a, b] with G(t) = c, given G(a) < c < G(b).
double level_crossing(const FittedModel& m, double c, double a, double b) {
  if (m.family().tag() != Family::gaussian_mixture) {
    return std::clamp(quantile(m, c), a, b);
  }
  double lo = a, hi = b, x = 0.5 * (a + b);
  for (int it = 0; it < 100; ++it) {
    const double g = level_gap(m, c, x);
    if (g == 0.0) return x;
    if (g < 0.0) lo = x; else hi = x;
    const double d = pdf(m, x);
    double next = d > 0.0 ? x - g / d : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (next == x || hi - lo <= 2.0 * std::numeric_limits<double>::epsilon() * std::abs(x)) return next;
    x = next;
  }
  return x;
}

void require_continuous(const FittedModel& m) {
  require(m.family().continuous(), ErrorCode::unsupported,
          "distance to a dirac model: use dirac_distance");
}

double left_truncation(const FittedModel& m, double tail_u) {
  const double lo = support_lower(m);
  return std::isfinite(lo) ? lo : quantile(m, tail_u);
}

// Bound on the integral of cdf^p over (-inf, x], valid when cdf(x) < 1.
double left_remainder(const FittedModel& m, double x, double p) {
  if (x <= support_lower(m)) return 0.0;
  return std::pow(cdf(m, x), p - 1.0) * lower_tail_integral(m, x);
}

double right_remainder(const FittedModel& m, double x, double p) {
  return std::pow(sf(m, x), p - 1.0) * upper_tail_integral(m, x);
}

}  // namespace

void DistanceConfig::validate() const {
  require(std::isfinite(p) && p >= 1.0, ErrorCode::domain,
          "p must be finite and >= 1 (the sup-norm is not supported)");
  require(tail_u > 0.0 && tail_u < 0.01, ErrorCode::domain, "tail_u must lie in (0, 0.01)");
  require(quad_rel_tol > 0.0, ErrorCode::domain, "quad_rel_tol must be > 0");
  require(max_subdivisions >= 1, ErrorCode::domain, "max_subdivisions must be >= 1");
}

DistanceResult empirical_model_distance(const Sample& sample, const FittedModel& model,
                                        const DistanceConfig& cfg) {
  cfg.validate();
  require_continuous(model);
  const double p = cfg.p;
  const double tol = cfg.quad_rel_tol;
  const auto x = sample.data();
  const std::size_t n = x.size();
  const double inv_n = 1.0 / static_cast<double>(n);
  quad::Budget budget{cfg.max_subdivisions};
  quad::Integral total;
  double remainder = 0.0;

  // (-inf, x_(1)): integrand G^p.
  const double left = std::min(left_truncation(model, cfg.tail_u), x.front());
  total += quad::integrate([&](double t) { return pow_abs(cdf(model, t), p); }, left, x.front(),
                           tol, budget);
  remainder += left_remainder(model, left, p);

  // [x_(i), x_(i+1)): integrand |i/n - G|^p, split where G crosses i/n.
  double g_lo = cdf(model, x[0]);
  for (std::size_t i = 1; i < n; ++i) {
    const double a = x[i - 1], b = x[i];
    const double g_hi = cdf(model, b);
    if (b > a) {
      const double c = static_cast<double>(i) * inv_n;
      auto integrand = [&](double t) { return pow_abs(level_gap(model, c, t), p); };
      if (g_lo < c && c < g_hi) {
        const double t = level_crossing(model, c, a, b);
        total += quad::integrate(integrand, a, t, tol, budget);
        total += quad::integrate(integrand, t, b, tol, budget);
      } else {
        total += quad::integrate(integrand, a, b, tol, budget);
      }
    }
    g_lo = g_hi;
  }

  // [x_(n), inf): integrand (1 - G)^p.
  const double right = std::max(quantile(model, 1.0 - cfg.tail_u), x.back());
  total += quad::integrate([&](double t) { return pow_abs(sf(model, t), p); }, x.back(), right,
                           tol, budget);
  remainder += right_remainder(model, right, p);

  return to_norm(total.value, total.error + remainder, p);
}

DistanceResult analytic_distance(const FittedModel& f, const FittedModel& g,
                                 const DistanceConfig& cfg) {
  cfg.validate();
  require_continuous(f);
  require_continuous(g);
  const double p = cfg.p;
  const double u = cfg.tail_u;

  const double left = std::min(left_truncation(f, u), left_truncation(g, u));
  const double right = std::max(quantile(f, 1.0 - u), quantile(g, 1.0 - u));

  static constexpr double kLevels[] = {1e-8, 1e-6, 1e-4, 1e-3, 0.01, 0.025, 0.05, 0.1, 0.15,
                                       0.2,  0.25, 0.3,  0.35, 0.4,  0.45,  0.5,  0.55, 0.6,
                                       0.65, 0.7,  0.75, 0.8,  0.85, 0.9,   0.95, 0.975, 0.99,
                                       0.999, 1 - 1e-4, 1 - 1e-6, 1 - 1e-8};
  std::vector<double> grid{left, right};
  for (const FittedModel* m : {&f, &g}) {
    const double lo = support_lower(*m);
    if (std::isfinite(lo)) grid.push_back(lo);
    for (double level : kLevels) {
      if (level > u && level < 1.0 - u) grid.push_back(quantile(*m, level));
    }
  }
  std::erase_if(grid, [&](double t) { return !(t >= left && t <= right); });
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

  auto diff = [&](double t) {
    const double fa = cdf(f, t), ga = cdf(g, t);
    return (fa > 0.5 && ga > 0.5) ? sf(g, t) - sf(f, t) : fa - ga;
  };

  // Add every sign change of F - G found on a fine scan as a breakpoint.
  constexpr int kScan = 16;
  std::vector<double> breaks;
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    const double a = grid[i], b = grid[i + 1];
    breaks.push_back(a);
    double prev_t = a, prev_d = diff(a);
    for (int s = 1; s <= kScan; ++s) {
      const double t = s == kScan ? b : a + (b - a) * s / kScan;
      const double d = diff(t);
      if ((prev_d < 0.0 && d > 0.0) || (prev_d > 0.0 && d < 0.0)) {
        double lo = prev_t, hi = t, dlo = prev_d;
        for (int it = 0; it < 200; ++it) {
          const double mid = 0.5 * (lo + hi);
          if (!(mid > lo && mid < hi)) break;
          const double dm = diff(mid);
          if (dm == 0.0) { lo = hi = mid; break; }
          if ((dm < 0.0) == (dlo < 0.0)) { lo = mid; dlo = dm; } else { hi = mid; }
        }
        breaks.push_back(0.5 * (lo + hi));
      }
      prev_t = t;
      prev_d = d;
    }
  }
  breaks.push_back(grid.back());
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());

  quad::Budget budget{cfg.max_subdivisions};
  quad::Integral total;
  auto integrand = [&](double t) { return pow_abs(diff(t), p); };
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i)
    total += quad::integrate(integrand, breaks[i], breaks[i + 1], cfg.quad_rel_tol, budget);

  // |F - G|^p <= F^p + G^p on the left tail, (1-F)^p + (1-G)^p on the right.
  const double remainder = left_remainder(f, left, p) + left_remainder(g, left, p) +
                           right_remainder(f, right, p) + right_remainder(g, right, p);
  return to_norm(total.value, total.error + remainder, p);
}

DistanceResult dirac_distance(const Sample& sample, double mu, double p) {
  require(std::isfinite(p) && p >= 1.0, ErrorCode::domain, "p must be finite and >= 1");
  require(std::isfinite(mu), ErrorCode::domain, "dirac location must be finite");
  const auto x = sample.data();
  std::vector<double> points(x.begin(), x.end());
  points.push_back(mu);
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());
  const double n = static_cast<double>(x.size());
  double sum = 0.0;
  for (std::size_t j = 0; j + 1 < points.size(); ++j) {
    const double t = points[j];
    const double fn = static_cast<double>(std::upper_bound(x.begin(), x.end(), t) - x.begin()) / n;
    const double h = t >= mu ? 1.0 : 0.0;
    sum += pow_abs(fn - h, p) * (points[j + 1] - t);
  }
  return {std::pow(sum, 1.0 / p), 0.0};
}

}  // namespace agof
