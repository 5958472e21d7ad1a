#ifndef AGOF_MIXTURE_EM_HPP
#define AGOF_MIXTURE_EM_HPP

#include <vector>

#include "agof/distributions.hpp"

namespace agof {

/// Per-restart diagnostics of an EM run.
struct EmTrace {
  struct Restart {
    std::vector<double> log_likelihood;  // one entry per E-step
    bool converged = false;
    bool degenerate = false;  // every component ended on the variance floor
    bool failed = false;      // a component lost all responsibility
  };
  std::vector<Restart> restarts;
  int best_restart = -1;
};

/// Best-of-restarts EM fit of a k-component univariate Gaussian mixture.
///
/// Each restart starts from the sample quantiles j/(k+1) with seeded normal
/// jitter (sd 0.1 x sample sd), equal weights and variances equal to the
/// sample variance. Component variances are floored at
/// variance_floor_factor x sample variance; the constrained M-step keeps the
/// log-likelihood ascent property. The winning restart is the one with the
/// largest final log-likelihood, ties broken by the lower restart index.
/// Components are returned in ascending order of their means.
Params em_fit_mixture(const Sample& sample, int k, const EmConfig& cfg,
                      EmTrace* trace = nullptr);

}  // namespace agof

#endif  // AGOF_MIXTURE_EM_HPP
