#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numeric>
#include <span>
#include <vector>

#include "tiltfuse/error.hpp"
#include "tiltfuse/numeric.hpp"

namespace tiltfuse {

struct OptimizerConfig {
  int max_iterations = 4000;   // per restart
  double initial_scale = 0.25; // simplex edge relative to |x0_i|
  double zero_step = 1e-3;     // edge used where x0_i == 0
  double f_tol = 1e-12;        // spread of objective values across the simplex
  double x_tol = 1e-10;        // max distance of any vertex from the best one
  int restarts = 3;
  std::uint64_t seed = 1;

  friend bool operator==(const OptimizerConfig&, const OptimizerConfig&) = default;

  void validate() const {
    if (!(f_tol > 0.0) || !(x_tol > 0.0)) throw ParameterError("optimizer: tolerances must be > 0");
    if (max_iterations < 1) throw ParameterError("optimizer: max_iterations must be >= 1");
    if (restarts < 0) throw ParameterError("optimizer: restarts must be >= 0");
    if (!(initial_scale > 0.0) || !(zero_step > 0.0)) throw ParameterError("optimizer: simplex scale must be > 0");
  }
};

struct OptimizationResult {
  std::vector<double> x;
  double f = std::numeric_limits<double>::infinity();
  int iterations = 0;
  int evaluations = 0;
  bool converged = false;
};

using Objective = std::function<double(std::span<const double>)>;

namespace detail {

inline OptimizationResult nelder_mead_once(const Objective& objective, const std::vector<double>& x0,
                                           const std::vector<double>& steps, const OptimizerConfig& cfg) {
  const std::size_t n = x0.size();
  OptimizationResult res;
  auto eval = [&](const std::vector<double>& x) {
    ++res.evaluations;
    const double v = objective(x);
    return std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
  };

  std::vector<std::vector<double>> simplex(n + 1, x0);
  for (std::size_t i = 0; i < n; ++i) simplex[i + 1][i] += steps[i];
  std::vector<double> fv(n + 1);
  for (std::size_t i = 0; i <= n; ++i) fv[i] = eval(simplex[i]);

  std::vector<std::size_t> order(n + 1);
  auto sort_simplex = [&] {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return fv[a] < fv[b]; });
    std::vector<std::vector<double>> s2(n + 1);
    std::vector<double> f2(n + 1);
    for (std::size_t i = 0; i <= n; ++i) {
      s2[i] = std::move(simplex[order[i]]);
      f2[i] = fv[order[i]];
    }
    simplex.swap(s2);
    fv.swap(f2);
  };
  auto diameter = [&] {
    double d = 0.0;
    for (std::size_t i = 1; i <= n; ++i)
      for (std::size_t j = 0; j < n; ++j) d = std::max(d, std::fabs(simplex[i][j] - simplex[0][j]));
    return d;
  };
  auto along = [&](const std::vector<double>& c, const std::vector<double>& x, double t) {
    std::vector<double> p(n);
    for (std::size_t j = 0; j < n; ++j) p[j] = c[j] + t * (x[j] - c[j]);
    return p;
  };

  sort_simplex();
  for (res.iterations = 0; res.iterations < cfg.max_iterations; ++res.iterations) {
    const double spread = fv[n] - fv[0];
    if (std::isfinite(fv[n]) && spread <= cfg.f_tol && diameter() <= cfg.x_tol) {
      res.converged = true;
      break;
    }
    if (n == 0) {
      res.converged = true;
      break;
    }

    std::vector<double> centroid(n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) centroid[j] += simplex[i][j] / static_cast<double>(n);

    const auto xr = along(centroid, simplex[n], -1.0);
    const double fr = eval(xr);
    if (fr < fv[0]) {
      const auto xe = along(centroid, simplex[n], -2.0);
      const double fe = eval(xe);
      if (fe < fr) {
        simplex[n] = xe;
        fv[n] = fe;
      } else {
        simplex[n] = xr;
        fv[n] = fr;
      }
    } else if (fr < fv[n - 1]) {
      simplex[n] = xr;
      fv[n] = fr;
    } else {
      const bool outside = fr < fv[n];
      const auto xc = along(centroid, simplex[n], outside ? -0.5 : 0.5);
      const double fc = eval(xc);
      if (fc < (outside ? fr : fv[n])) {
        simplex[n] = xc;
        fv[n] = fc;
      } else {
        for (std::size_t i = 1; i <= n; ++i) {
          simplex[i] = along(simplex[0], simplex[i], 0.5);
          fv[i] = eval(simplex[i]);
        }
      }
    }
    sort_simplex();
  }
  res.x = simplex[0];
  res.f = fv[0];
  return res;
}

}  // namespace detail

/// Downhill simplex minimisation with seeded restarts. Each restart starts a
/// fresh simplex around a jittered copy of the best point found so far; the
/// best vertex over all runs is returned. Non-finite objective values are
/// treated as +inf.
inline OptimizationResult nelder_mead(const Objective& objective, std::span<const double> x0,
                                      const OptimizerConfig& cfg = {}) {
  cfg.validate();
  const std::size_t n = x0.size();
  std::vector<double> steps(n);
  for (std::size_t i = 0; i < n; ++i)
    steps[i] = x0[i] != 0.0 ? cfg.initial_scale * std::fabs(x0[i]) : cfg.zero_step;

  std::vector<double> start(x0.begin(), x0.end());
  OptimizationResult best = detail::nelder_mead_once(objective, start, steps, cfg);
  GaussianSource rng(cfg.seed);
  for (int r = 0; r < cfg.restarts; ++r) {
    std::vector<double> jittered = best.x;
    for (std::size_t i = 0; i < n; ++i) jittered[i] += 0.05 * steps[i] * rng.standard_normal();
    OptimizationResult run = detail::nelder_mead_once(objective, jittered, steps, cfg);
    const int iters = best.iterations + run.iterations;
    const int evals = best.evaluations + run.evaluations;
    if (run.f < best.f) {
      best.x = run.x;
      best.f = run.f;
    }
    best.converged = run.converged;
    best.iterations = iters;
    best.evaluations = evals;
  }
  if (!std::isfinite(best.f)) throw OptimizationError("nelder_mead: objective was non-finite at every trial point");
  return best;
}

}  // namespace tiltfuse
