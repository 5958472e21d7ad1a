#include "agof/bootstrap.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <optional>
#include <ostream>
#include <thread>

#include "agof/errors.hpp"
#include "agof/format.hpp"
#include "agof/rng.hpp"

namespace agof {

namespace {

bool is_fit_failure(ErrorCode code) {
  return code == ErrorCode::degenerate_data || code == ErrorCode::degenerate_fit ||
         code == ErrorCode::insufficient_data || code == ErrorCode::domain;
}

// One resample of `data` (sorted) drawn from the stream keyed by `key`.
Sample resample(std::span<const double> data, std::uint64_t key) {
  Stream rng(key);
  std::vector<std::size_t> idx(data.size());
  for (auto& i : idx) i = rng.index(data.size());
  std::sort(idx.begin(), idx.end());
  std::vector<double> out(data.size());
  std::transform(idx.begin(), idx.end(), out.begin(), [&](std::size_t i) { return data[i]; });
  return Sample(std::move(out));
}

unsigned resolve_workers(unsigned requested, std::size_t tasks) {
  unsigned w = requested == 0 ? std::max(1u, std::thread::hardware_concurrency()) : requested;
  return static_cast<unsigned>(std::min<std::size_t>(w, std::max<std::size_t>(tasks, 1)));
}

}  // namespace

void BootstrapConfig::validate() const {
  require(B >= 2, ErrorCode::domain, "bootstrap needs B >= 2");
  require(max_skip_fraction >= 0.0 && max_skip_fraction < 0.05, ErrorCode::domain,
          "max_skip_fraction must lie in [0, 0.05)");
}

double BootstrapSummary::quantile(double level) const {
  require(level > 0.0 && level < 1.0, ErrorCode::domain, "quantile level must lie in (0,1)");
  require(!norms.empty(), ErrorCode::domain, "empty bootstrap summary");
  const auto b = static_cast<double>(norms.size());
  auto idx = static_cast<std::size_t>(std::ceil(level * b));
  idx = std::clamp<std::size_t>(idx, 1, norms.size());
  return norms[idx - 1];
}

BootstrapSummary run_bootstrap(const Sample& sample, const FamilyId& family,
                               const DistanceConfig& distance, const BootstrapConfig& cfg,
                               const EmConfig& em) {
  cfg.validate();
  distance.validate();
  require(family.continuous(), ErrorCode::unsupported, "bootstrap needs a continuous family");
  // Precondition: the family is fittable on the original sample.
  (void)fit_mle(family, sample, em);

  const std::size_t B = cfg.B;
  std::vector<std::optional<double>> norms(B);
  std::vector<std::exception_ptr> errors(B);
  std::atomic<std::size_t> next{0};

  auto replicate = [&](std::size_t b) -> std::optional<double> {
    const int attempts = cfg.failure_policy == FailurePolicy::abort ? 1 : 2;
    for (int attempt = 0; attempt < attempts; ++attempt) {
      const Sample star = resample(sample.data(), derive_seed(cfg.seed, b, attempt));
      try {
        const FittedModel refit(family, fit_mle(family, star, em));
        return empirical_model_distance(star, refit, distance).value;
      } catch (const PrecisionError&) {
        throw;
      } catch (const Error& e) {
        if (!is_fit_failure(e.code()) || cfg.failure_policy == FailurePolicy::abort) throw;
      }
    }
    return std::nullopt;
  };

  auto worker = [&] {
    for (std::size_t b = next++; b < B; b = next++) {
      try {
        norms[b] = replicate(b);
      } catch (...) {
        errors[b] = std::current_exception();
      }
    }
  };

  const unsigned workers = resolve_workers(cfg.workers, B);
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
  }

  // The lowest failing replicate wins, independent of scheduling.
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);

  BootstrapSummary out;
  out.seed = cfg.seed;
  out.norms.reserve(B);
  for (const auto& v : norms) {
    if (v) out.norms.push_back(*v); else ++out.n_skipped;
  }
  const double skipped = static_cast<double>(out.n_skipped) / static_cast<double>(B);
  require(skipped <= cfg.max_skip_fraction && out.norms.size() >= 2,
          ErrorCode::bootstrap_degeneracy,
          std::to_string(out.n_skipped) + " of " + std::to_string(B) +
              " bootstrap replicates could not be refitted");
  std::sort(out.norms.begin(), out.norms.end());

  const double m = static_cast<double>(out.norms.size());
  double mean = 0.0;
  for (double v : out.norms) mean += v;
  mean /= m;
  double ss = 0.0;
  for (double v : out.norms) ss += (v - mean) * (v - mean);
  out.sigma_boot = std::sqrt(ss / (m - 1.0));
  return out;
}

void write_norms_csv(std::ostream& out, const BootstrapSummary& summary) {
  out << "norm\n";
  for (double v : summary.norms) out << shortest(v) << '\n';
}

}  // namespace agof
