#include "agof/mc_harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <optional>
#include <ostream>
#include <thread>

#include "agof/bootstrap.hpp"
#include "agof/errors.hpp"
#include "agof/format.hpp"
#include "agof/rng.hpp"

namespace agof {

void PowerStudyConfig::validate() const {
  require(n >= 1, ErrorCode::domain, "power study needs n >= 1");
  require(runs >= 1, ErrorCode::domain, "power study needs runs >= 1");
  require(B >= 2, ErrorCode::domain, "power study needs B >= 2");
  require(alpha > 0.0 && alpha < 0.5, ErrorCode::domain, "alpha must lie in (0, 0.5)");
  require(!methods.empty(), ErrorCode::domain, "power study needs at least one method");
  require(std::isfinite(p) && p >= 1.0, ErrorCode::domain, "p must be finite and >= 1");
  for (std::size_t i = 0; i < epsilon_grid.size(); ++i) {
    require(epsilon_grid[i] > 0.0, ErrorCode::domain, "epsilon grid entries must be > 0");
    require(i == 0 || epsilon_grid[i] > epsilon_grid[i - 1], ErrorCode::domain,
            "epsilon grid must be strictly ascending");
  }
  em.validate();
}

const MethodCurve& PowerCurve::curve(Method m) const {
  for (const auto& c : curves)
    if (c.method == m) return c;
  fail(ErrorCode::domain, "method not part of this power study");
}

PowerRow rejection_at(const MethodCurve& curve, double epsilon) {
  PowerRow row;
  row.epsilon = epsilon;
  const auto runs = static_cast<double>(curve.margins.size());
  if (runs == 0.0) return row;
  const auto hits = std::count_if(curve.margins.begin(), curve.margins.end(),
                                  [&](double m) { return m < epsilon; });
  row.rejection_proportion = static_cast<double>(hits) / runs;
  row.std_error = std::sqrt(row.rejection_proportion * (1.0 - row.rejection_proportion) / runs);
  return row;
}

PowerCurve power_curve(const PowerStudyConfig& cfg) {
  cfg.validate();
  struct RunResult {
    double margin[2];
  };
  std::vector<std::optional<RunResult>> results(cfg.runs);
  std::atomic<std::size_t> next{0};

  DistanceConfig distance;
  distance.p = cfg.p;
  BootstrapConfig boot_cfg;
  boot_cfg.B = cfg.B;
  boot_cfg.failure_policy = cfg.failure_policy;
  boot_cfg.workers = 1;

  auto run = [&](std::size_t r) -> std::optional<RunResult> {
    try {
      const Sample sample = draw_sample(cfg.true_dist, cfg.n, derive_seed(cfg.seed, r, 0));
      const FittedModel model(cfg.family, fit_mle(cfg.family, sample, cfg.em));
      const double obs = empirical_model_distance(sample, model, distance).value;
      BootstrapConfig bc = boot_cfg;
      bc.seed = derive_seed(cfg.seed, r, 1);
      const BootstrapSummary boot = run_bootstrap(sample, cfg.family, distance, bc, cfg.em);
      RunResult out{};
      for (Method m : {Method::bootstrap1, Method::bootstrap2})
        out.margin[static_cast<int>(m)] = min_margin(obs, boot, cfg.alpha, m);
      return out;
    } catch (const PrecisionError&) {
      throw;
    } catch (const Error&) {
      return std::nullopt;  // skipped run, excluded from the denominator
    }
  };

  std::vector<std::exception_ptr> errors(cfg.runs);
  auto worker = [&] {
    for (std::size_t r = next++; r < cfg.runs; r = next++) {
      try {
        results[r] = run(r);
      } catch (...) {
        errors[r] = std::current_exception();
      }
    }
  };
  unsigned workers = cfg.workers == 0 ? std::max(1u, std::thread::hardware_concurrency()) : cfg.workers;
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, cfg.runs));
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);

  PowerCurve out;
  out.config = cfg;
  for (Method m : cfg.methods) {
    MethodCurve c;
    c.method = m;
    for (const auto& res : results)
      if (res) c.margins.push_back(res->margin[static_cast<int>(m)]);
    for (double eps : cfg.epsilon_grid) c.rows.push_back(rejection_at(c, eps));
    out.curves.push_back(std::move(c));
  }
  out.runs_completed = static_cast<std::size_t>(
      std::count_if(results.begin(), results.end(), [](const auto& r) { return r.has_value(); }));
  out.runs_skipped = cfg.runs - out.runs_completed;
  return out;
}

std::vector<PowerRow> size_calibration(PowerStudyConfig cfg, double epsilon_true) {
  require(std::isfinite(epsilon_true) && epsilon_true >= 0.0, ErrorCode::domain,
          "epsilon_true must be >= 0");
  cfg.epsilon_grid.clear();
  const PowerCurve curve = power_curve(cfg);
  std::vector<PowerRow> out;
  for (const auto& c : curve.curves) out.push_back(rejection_at(c, epsilon_true));
  return out;
}

void write_power_csv(std::ostream& out, const PowerCurve& curve) {
  const auto& cfg = curve.config;
  out << "method,epsilon,rejection_proportion,std_error,runs,B,n,p,alpha,seed\n";
  for (const auto& c : curve.curves) {
    for (const auto& row : c.rows) {
      out << method_name(c.method) << ',' << shortest(row.epsilon) << ','
          << shortest(row.rejection_proportion) << ',' << shortest(row.std_error) << ','
          << curve.runs_completed << ',' << cfg.B << ',' << cfg.n << ',' << shortest(cfg.p) << ','
          << shortest(cfg.alpha) << ',' << cfg.seed << '\n';
    }
  }
}

}  // namespace agof
