#ifndef AGOF_QUADRATURE_HPP
#define AGOF_QUADRATURE_HPP

#include <array>
#include <cmath>
#include <cstddef>
#include <string>

#include "agof/errors.hpp"

namespace agof::quad {

/// Nodes and weights of an N-point Gauss-Legendre rule on [-1, 1],
/// computed once by Newton iteration on P_N.
template <int N>
struct GaussLegendre {
  std::array<double, N> nodes{};
  std::array<double, N> weights{};

  GaussLegendre() {
    for (int i = 0; i < (N + 1) / 2; ++i) {
      double z = std::cos(M_PI * (i + 0.75) / (N + 0.5));
      double dp = 0.0;
      for (int it = 0; it < 100; ++it) {
        double p0 = 1.0, p1 = 0.0;
        for (int j = 1; j <= N; ++j) {
          const double p2 = p1;
          p1 = p0;
          p0 = ((2.0 * j - 1.0) * z * p1 - (j - 1.0) * p2) / j;
        }
        dp = N * (z * p0 - p1) / (z * z - 1.0);
        const double dz = p0 / dp;
        z -= dz;
        if (std::abs(dz) < 1e-16) break;
      }
      nodes[i] = -z;
      nodes[N - 1 - i] = z;
      weights[i] = weights[N - 1 - i] = 2.0 / ((1.0 - z * z) * dp * dp);
    }
  }

  template <class F>
  double apply(F& f, double a, double b) const {
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (a + b);
    double sum = 0.0;
    for (int i = 0; i < N; ++i) sum += weights[i] * f(mid + half * nodes[i]);
    return sum * half;
  }
};

const GaussLegendre<5>& gl5();
const GaussLegendre<10>& gl10();

struct Integral {
  double value = 0.0;
  double error = 0.0;  // conservative absolute error estimate

  Integral& operator+=(const Integral& o) {
    value += o.value;
    error += o.error;
    return *this;
  }
};

/// Shared cap on the number of bisections across one distance evaluation.
struct Budget {
  std::size_t max_subdivisions = 1'000'000;
  std::size_t used = 0;
};

/// Adaptive Gauss-Legendre with interval bisection. A panel is accepted when
/// the 5- and 10-point rules agree to max(rel_tol |I|, abs_tol_per_length (b-a));
/// their difference is reported as the panel error, which overestimates the
/// error of the 10-point value that is kept.
template <class F>
Integral integrate(F&& f, double a, double b, double rel_tol, Budget& budget,
                   double abs_tol_per_length = 1e-16) {
  Integral total;
  if (!(b > a)) return total;
  struct Panel {
    double a, b;
  };
  // Depth-first with an explicit stack; left halves are summed first, so the
  // summation order depends only on the integrand.
  Panel stack[128];
  int top = 0;
  stack[top++] = {a, b};
  const auto& lo = gl5();
  const auto& hi = gl10();
  while (top > 0) {
    const Panel panel = stack[--top];
    const double coarse = lo.apply(f, panel.a, panel.b);
    const double fine = hi.apply(f, panel.a, panel.b);
    const double err = std::abs(fine - coarse);
    const double width = panel.b - panel.a;
    const double mid = 0.5 * (panel.a + panel.b);
    const bool unsplittable = !(mid > panel.a && mid < panel.b) || top >= 126;
    if (err <= std::max(rel_tol * std::abs(fine), abs_tol_per_length * width) ||
        unsplittable) {
      total.value += fine;
      total.error += err;
      continue;
    }
    if (++budget.used > budget.max_subdivisions) {
      throw PrecisionError("quadrature exceeded " +
                               std::to_string(budget.max_subdivisions) +
                               " subdivisions",
                           total.error + err);
    }
    stack[top++] = {mid, panel.b};
    stack[top++] = {panel.a, mid};
  }
  return total;
}

}  // namespace agof::quad

#endif  // AGOF_QUADRATURE_HPP
