// Test-only reference computations. None of these share code paths with the
// quadrature engine: they are dense midpoint rules or closed forms.
#ifndef AGOF_TESTS_ORACLES_HPP
#define AGOF_TESTS_ORACLES_HPP

#include <algorithm>
#include <cmath>
#include <vector>

#include "agof/distributions.hpp"
#include "agof/sample.hpp"

namespace oracle {

inline double empirical_cdf(const std::vector<double>& sorted, double t) {
  return static_cast<double>(std::upper_bound(sorted.begin(), sorted.end(), t) - sorted.begin()) /
         static_cast<double>(sorted.size());
}

/// Midpoint rule for (int |F_n - G|^p)^{1/p} over
/// [min(q(1e-8), x_1), max(q(1-1e-8), x_n)], with cell edges aligned to the
/// order statistics so the jumps of F_n never fall inside a cell.
inline double midpoint_empirical(const agof::Sample& s, const agof::FittedModel& g, double p,
                                 double h) {
  const std::vector<double>& x = s.values();
  double lo = std::min(x.front(), agof::quantile(g, 1e-8));
  if (std::isfinite(agof::support_lower(g))) lo = std::min(x.front(), agof::support_lower(g));
  const double hi = std::max(x.back(), agof::quantile(g, 1.0 - 1e-8));
  std::vector<double> edges{lo};
  for (double v : x)
    if (v > edges.back()) edges.push_back(v);
  if (hi > edges.back()) edges.push_back(hi);
  double sum = 0.0;
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    const double a = edges[i], b = edges[i + 1];
    const double fn = empirical_cdf(x, a);
    const auto cells = static_cast<long>(std::ceil((b - a) / h));
    const double w = (b - a) / static_cast<double>(cells);
    for (long c = 0; c < cells; ++c) {
      const double t = a + (static_cast<double>(c) + 0.5) * w;
      sum += std::pow(std::abs(fn - agof::cdf(g, t)), p) * w;
    }
  }
  return std::pow(sum, 1.0 / p);
}

/// Midpoint rule for ||F - G||_p on [lo, hi] with `cells` equal cells.
inline double midpoint_analytic(const agof::FittedModel& f, const agof::FittedModel& g, double p,
                                double lo, double hi, long cells) {
  const double w = (hi - lo) / static_cast<double>(cells);
  double sum = 0.0;
  for (long c = 0; c < cells; ++c) {
    const double t = lo + (static_cast<double>(c) + 0.5) * w;
    sum += std::pow(std::abs(agof::cdf(f, t) - agof::cdf(g, t)), p) * w;
  }
  return std::pow(sum, 1.0 / p);
}

/// Exact ||F_n - Exp(theta)||_1 for positive data: closed-form antiderivatives
/// of |c - (1 - e^{-t/theta})| on each gap, split at the crossing.
inline double exponential_l1_closed_form(const std::vector<double>& x, double theta) {
  // Antiderivative of (1 - e^{-t/theta}) - c.
  auto prim = [&](double t, double c) { return (1.0 - c) * t + theta * std::exp(-t / theta); };
  auto piece = [&](double a, double b, double c) {
    if (!(b > a)) return 0.0;
    const double cross = -theta * std::log1p(-c);
    if (c >= 1.0 || cross >= b) return -(prim(b, c) - prim(a, c));  // G < c
    if (cross <= a) return prim(b, c) - prim(a, c);                 // G > c
    return -(prim(cross, c) - prim(a, c)) + (prim(b, c) - prim(cross, c));
  };
  const double n = static_cast<double>(x.size());
  double total = 0.0;
  // [0, x_1): integrand G.
  total += x.front() - theta * (1.0 - std::exp(-x.front() / theta));
  for (std::size_t i = 1; i < x.size(); ++i) total += piece(x[i - 1], x[i], static_cast<double>(i) / n);
  // [x_n, inf): integrand 1 - G.
  total += theta * std::exp(-x.back() / theta);
  return total;
}

}  // namespace oracle

#endif  // AGOF_TESTS_ORACLES_HPP
