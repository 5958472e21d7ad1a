#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "agof/distributions.hpp"
#include "agof/errors.hpp"
#include "agof/rng.hpp"
#include "agof/special_functions.hpp"

using namespace agof;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an agof::Error");
  return ErrorCode::input;
}

std::vector<FittedModel> zoo() {
  Eigen::VectorXd w(3), m(3), s(3);
  w << 0.5, 0.3, 0.2;
  m << -3.0, 0.5, 4.0;
  s << 0.7, 1.5, 0.4;
  return {exponential_model(1.7), normal_model(-0.3, 2.2), weibull_model(2.0, 1.0),
          weibull_model(0.7, 3.0), mixture_model(w, m, s)};
}

}  // namespace

TEST_CASE("cdf reference values") {
  CHECK(cdf(exponential_model(1.0), 0.0) == 0.0);
  CHECK(cdf(normal_model(0.0, 1.0), 0.0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(cdf(weibull_model(2.0, 1.0), 1.0) == doctest::Approx(1.0 - std::exp(-1.0)).epsilon(1e-14));
  CHECK(cdf(weibull_model(2.0, 1.0), 1.0) == doctest::Approx(0.632121).epsilon(1e-6));
  CHECK(cdf(dirac_model(2.0), 1.999) == 0.0);
  CHECK(cdf(dirac_model(2.0), 2.0) == 1.0);
}

TEST_CASE("quantile reference values and domain") {
  CHECK(quantile(exponential_model(1.0), 1.0 - std::exp(-1.0)) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(std::abs(quantile(normal_model(0.0, 1.0), 0.5)) < 1e-15);
  CHECK(quantile(dirac_model(3.0), 0.2) == 3.0);
  for (const auto& m : zoo()) {
    CHECK(code_of([&] { quantile(m, 1.2); }) == ErrorCode::domain);
    CHECK(code_of([&] { quantile(m, 0.0); }) == ErrorCode::domain);
  }
}

TEST_CASE("normal quantile matches tabulated values") {
  CHECK(special::normal_quantile(0.05) == doctest::Approx(-1.6448536269514722).epsilon(1e-15));
  CHECK(special::normal_quantile(0.975) == doctest::Approx(1.959963984540054).epsilon(1e-15));
  CHECK(special::normal_quantile(1e-10) == doctest::Approx(-6.361340902404056).epsilon(1e-14));
}

TEST_CASE("incomplete gamma against closed forms") {
  for (double x : {0.01, 0.5, 1.0, 3.0, 10.0, 40.0}) {
    CHECK(special::gamma_q(1.0, x) == doctest::Approx(std::exp(-x)).epsilon(1e-13));
    CHECK(special::gamma_q(0.5, x) == doctest::Approx(std::erfc(std::sqrt(x))).epsilon(1e-12));
    CHECK(special::gamma_q(2.0, x) == doctest::Approx((1.0 + x) * std::exp(-x)).epsilon(1e-13));
  }
}

TEST_CASE("cdf is monotone on randomized grids for every family") {
  Stream rng(11);
  for (const auto& m : zoo()) {
    for (int rep = 0; rep < 20; ++rep) {
      std::vector<double> xs(200);
      for (auto& x : xs) x = 20.0 * rng.uniform() - 8.0;
      std::sort(xs.begin(), xs.end());
      for (std::size_t i = 1; i < xs.size(); ++i) REQUIRE(cdf(m, xs[i - 1]) <= cdf(m, xs[i]));
    }
    CHECK(cdf(m, -1e6) == doctest::Approx(0.0));
    CHECK(cdf(m, 1e6) == doctest::Approx(1.0));
  }
}

TEST_CASE("quantile inverts cdf within 1e-10") {
  for (const auto& m : zoo()) {
    for (double u = 0.001; u < 0.999; u += 0.00499) {
      const double x = quantile(m, u);
      REQUIRE(std::abs(cdf(m, x) - u) < 1e-10);
    }
  }
}

TEST_CASE("survival function complements cdf") {
  for (const auto& m : zoo())
    for (double x : {-2.0, 0.1, 1.0, 3.5})
      CHECK(sf(m, x) + cdf(m, x) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("tail integrals match a dense midpoint rule") {
  // E[(x - X)^+] and E[(X - x)^+] by brute force on a wide window.
  for (const auto& m : zoo()) {
    const double lo = std::isfinite(support_lower(m)) ? support_lower(m) : quantile(m, 1e-14);
    const double hi = quantile(m, 1.0 - 1e-14) + 10.0;
    for (double u : {0.01, 0.3, 0.9}) {
      const double x = quantile(m, u);
      const long cells = 400000;
      double left = 0.0, right = 0.0;
      const double wl = (x - lo) / cells, wr = (hi - x) / cells;
      for (long c = 0; c < cells; ++c) {
        left += cdf(m, lo + (c + 0.5) * wl) * wl;
        right += sf(m, x + (c + 0.5) * wr) * wr;
      }
      CHECK(lower_tail_integral(m, x) == doctest::Approx(left).epsilon(1e-6));
      CHECK(upper_tail_integral(m, x) == doctest::Approx(right).epsilon(1e-6));
    }
  }
}

TEST_CASE("draw_sample is deterministic and validates n") {
  for (const auto& m : zoo()) {
    const Sample a = draw_sample(m, 100, 42);
    const Sample b = draw_sample(m, 100, 42);
    CHECK(a.values() == b.values());
    CHECK(draw_sample(m, 100, 43).values() != a.values());
    CHECK(code_of([&] { draw_sample(m, 0, 1); }) == ErrorCode::domain);
  }
}

TEST_CASE("Weibull generator passes the Kolmogorov band") {
  const FittedModel w = weibull_model(2.0, 1.0);
  const std::size_t n = 100000;
  int failures = 0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Sample s = draw_sample(w, n, seed);
    double d = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double g = cdf(w, s[i]);
      d = std::max({d, std::abs(g - static_cast<double>(i) / n), std::abs(static_cast<double>(i + 1) / n - g)});
    }
    if (d >= 1.95 / std::sqrt(static_cast<double>(n))) ++failures;
  }
  CHECK(failures <= 1);
}

TEST_CASE("fit_mle closed forms") {
  CHECK(fit_mle(FamilyId::exponential(), Sample({1.0, 2.0, 3.0}))[0] == 2.0);
  const Params nrm = fit_mle(FamilyId::normal(), Sample({0.0, 2.0}));
  CHECK(nrm[0] == 1.0);
  CHECK(nrm[1] == 1.0);
  CHECK(fit_mle(FamilyId::dirac(), Sample({1.0, 5.0}))[0] == 3.0);
  CHECK(code_of([] { fit_mle(FamilyId::exponential(), Sample({-1.0, 2.0})); }) == ErrorCode::domain);
  CHECK(code_of([] { fit_mle(FamilyId::normal(), Sample({1.0, 1.0})); }) == ErrorCode::degenerate_data);
  CHECK(code_of([] { fit_mle(FamilyId::normal(), Sample({1.0})); }) == ErrorCode::insufficient_data);
  CHECK(code_of([] { fit_mle(FamilyId::weibull(), Sample({1.0, 2.0})); }) == ErrorCode::unsupported);
}

TEST_CASE("MLE equivariance") {
  const Sample s = draw_sample(weibull_model(1.5, 2.0), 300, 5);
  const double theta = fit_mle(FamilyId::exponential(), s)[0];
  const Params nrm = fit_mle(FamilyId::normal(), s);
  for (double a : {0.25, 4.0, 1024.0}) {  // powers of two scale exactly
    std::vector<double> scaled(s.values());
    for (auto& v : scaled) v *= a;
    CHECK(fit_mle(FamilyId::exponential(), Sample(scaled))[0] == a * theta);
  }
  for (auto [a, b] : {std::pair{3.0, -7.0}, std::pair{0.1, 2.5}}) {
    std::vector<double> moved(s.values());
    for (auto& v : moved) v = a * v + b;
    const Sample t(moved);
    std::vector<double> scaled(s.values());
    for (auto& v : scaled) v *= a;
    CHECK(fit_mle(FamilyId::exponential(), Sample(scaled))[0] ==
          doctest::Approx(a * theta).epsilon(1e-13));
    const Params p = fit_mle(FamilyId::normal(), t);
    CHECK(p[0] == doctest::Approx(a * nrm[0] + b).epsilon(1e-12));
    CHECK(p[1] == doctest::Approx(a * nrm[1]).epsilon(1e-12));
  }
}

TEST_CASE("log_likelihood reference values") {
  CHECK(log_likelihood(normal_model(0.0, 1.0), Sample({0.0})) ==
        doctest::Approx(-0.5 * std::log(2.0 * std::numbers::pi)).epsilon(1e-15));
  CHECK(log_likelihood(normal_model(0.0, 1.0), Sample({0.0})) == doctest::Approx(-0.918939).epsilon(1e-6));
  CHECK(log_likelihood(exponential_model(1.0), Sample({0.5, 1.5})) == doctest::Approx(-2.0).epsilon(1e-15));
  CHECK(log_likelihood(exponential_model(1.0), Sample({-1.0})) == -std::numeric_limits<double>::infinity());
  CHECK(code_of([] { log_likelihood(dirac_model(0.0), Sample({0.0})); }) == ErrorCode::unsupported);
  // A one-component mixture is the normal density.
  const Sample s({-1.0, 0.3, 2.0});
  CHECK(log_likelihood(mixture_model(Eigen::VectorXd::Ones(1), Eigen::VectorXd::Constant(1, 0.2),
                                     Eigen::VectorXd::Constant(1, 1.3)),
                       s) == doctest::Approx(log_likelihood(normal_model(0.2, 1.3), s)).epsilon(1e-14));
}

TEST_CASE("projection parameters") {
  const Params e = projection_params(weibull_model(2.0, 1.0), FamilyId::exponential());
  CHECK(e[0] == doctest::Approx(std::sqrt(std::numbers::pi) / 2.0).epsilon(1e-14));
  CHECK(e[0] == doctest::Approx(0.886227).epsilon(1e-6));

  Eigen::VectorXd w(2), m(2), s(2);
  w << 0.8, 0.2;
  m << 0.0, 2.0;
  s << 1.0, 2.0;
  const Params n = projection_params(mixture_model(w, m, s), FamilyId::normal());
  CHECK(n[0] == doctest::Approx(0.4).epsilon(1e-14));
  CHECK(n[1] == doctest::Approx(std::sqrt(2.24)).epsilon(1e-14));
  CHECK(n[1] == doctest::Approx(1.496663).epsilon(1e-6));

  const FittedModel already = normal_model(1.5, 0.5);
  CHECK(projection_params(already, FamilyId::normal()) == already.params());
  CHECK(projection_params(exponential_model(2.5), FamilyId::exponential())[0] == 2.5);
  CHECK(code_of([&] { projection_params(already, FamilyId::gaussian_mixture(2)); }) == ErrorCode::unsupported);
  CHECK(code_of([&] { projection_params(already, FamilyId::weibull()); }) == ErrorCode::unsupported);
}

TEST_CASE("parameter validation") {
  CHECK(code_of([] { exponential_model(0.0); }) == ErrorCode::domain);
  CHECK(code_of([] { normal_model(0.0, -1.0); }) == ErrorCode::domain);
  CHECK(code_of([] { FittedModel(FamilyId::normal(), Params::Zero(3)); }) == ErrorCode::domain);
  Eigen::VectorXd w(2), m(2), s(2);
  w << 0.7, 0.2;
  m << 0.0, 1.0;
  s << 1.0, 1.0;
  CHECK(code_of([&] { mixture_model(w, m, s); }) == ErrorCode::domain);
  CHECK(code_of([] { FamilyId::gaussian_mixture(0); }) == ErrorCode::domain);
  CHECK(code_of([] { Sample({}); }) == ErrorCode::domain);
  CHECK(code_of([] { Sample({1.0, std::nan("")}); }) == ErrorCode::domain);
  CHECK(Sample({3.0, 1.0, 2.0}).values() == std::vector<double>{1.0, 2.0, 3.0});
}
