#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tiltfuse/correction.hpp"
#include "tiltfuse/error.hpp"
#include "tiltfuse/filters.hpp"
#include "tiltfuse/metrics.hpp"
#include "tiltfuse/numeric.hpp"
#include "tiltfuse/optimize.hpp"
#include "tiltfuse/polynomial.hpp"
#include "tiltfuse/sample.hpp"

namespace tiltfuse {

// ---------------------------------------------------------------------------
// Static bias

enum class Channel { Gyro, AccX, AccY };

struct BiasEstimate {
  double mean = 0.0;
  double min = 0.0;
  double max = 0.0;
  double stddev = 0.0;
  std::size_t samples = 0;
  std::vector<double> window_means;  // one per complete window
};

inline constexpr std::size_t kBiasWindow = 100000;

inline BiasEstimate estimate_static_bias(std::span<const double> values, std::size_t window = kBiasWindow) {
  if (values.empty()) throw InvalidStateError("estimate_static_bias: empty log");
  if (window == 0) throw ParameterError("estimate_static_bias: window must be > 0");
  BiasEstimate b;
  b.samples = values.size();
  b.min = b.max = values.front();
  KahanSum total, win;
  std::size_t in_win = 0;
  for (double v : values) {
    total.add(v);
    b.min = std::min(b.min, v);
    b.max = std::max(b.max, v);
    win.add(v);
    if (++in_win == window) {
      b.window_means.push_back(win.value() / static_cast<double>(window));
      win = KahanSum{};
      in_win = 0;
    }
  }
  b.mean = total.value() / static_cast<double>(values.size());
  KahanSum sq;
  for (double v : values) sq.add((v - b.mean) * (v - b.mean));
  b.stddev = values.size() > 1 ? std::sqrt(sq.value() / static_cast<double>(values.size() - 1)) : 0.0;
  return b;
}

inline std::vector<double> channel_values(std::span<const RawSample> log, Channel ch) {
  std::vector<double> v;
  v.reserve(log.size());
  for (const auto& s : log)
    v.push_back(ch == Channel::Gyro ? s.gyro_dps : ch == Channel::AccX ? s.acc_x_mps2 : s.acc_y_mps2);
  return v;
}

inline BiasEstimate estimate_static_bias(std::span<const RawSample> log, Channel ch,
                                         std::size_t window = kBiasWindow) {
  if (log.empty()) throw InvalidStateError("estimate_static_bias: empty log");
  const auto v = channel_values(log, ch);
  return estimate_static_bias(std::span<const double>(v), window);
}

// ---------------------------------------------------------------------------
// Scale-factor polynomial

struct CalibrationPair {
  double p = 0.0;      // measurement minus bias, m/s^2
  double a_ref = 0.0;  // reference acceleration, m/s^2
};

struct ScaleFit {
  ScalePolynomial poly;
  double mse = 0.0;            // corrected vs reference
  double bias_only_mse = 0.0;  // p vs reference
  OptimizationResult optimizer;
};

inline OptimizerConfig default_fit_config() {
  OptimizerConfig c;
  c.max_iterations = 40000;
  c.f_tol = 1e-22;
  c.x_tol = 1e-13;
  c.zero_step = 0.05;
  c.restarts = 4;
  return c;
}

/// Zero-intercept polynomial minimising MSE between p - S(p) and a_ref.
/// The search runs on coefficients rescaled by max|p|^i so all directions
/// have comparable magnitude.
inline ScaleFit fit_scale_factor(std::span<const CalibrationPair> pairs, std::size_t degree,
                                 const OptimizerConfig& cfg = default_fit_config(),
                                 std::span<const double> warm_start = {}) {
  if (degree < 1 || degree > 10) throw FittingError("fit_scale_factor: degree must be 1..10");
  std::vector<double> ps;
  for (const auto& pr : pairs) ps.push_back(pr.p);
  std::sort(ps.begin(), ps.end());
  const auto distinct = static_cast<std::size_t>(std::unique(ps.begin(), ps.end()) - ps.begin());
  if (distinct < 2) throw FittingError("fit_scale_factor: degenerate data (all p equal)");
  if (distinct < degree + 1)
    throw FittingError("fit_scale_factor: need at least " + std::to_string(degree + 1) + " distinct p values, got " +
                       std::to_string(distinct));

  double s = 0.0;
  for (const auto& pr : pairs) s = std::max(s, std::fabs(pr.p));
  const std::size_t m = pairs.size();
  std::vector<double> powers(m * degree);
  std::vector<double> resid0(m);
  for (std::size_t k = 0; k < m; ++k) {
    const double u = pairs[k].p / s;
    double acc = 1.0;
    for (std::size_t i = 0; i < degree; ++i) {
      acc *= u;
      powers[k * degree + i] = acc;
    }
    resid0[k] = pairs[k].p - pairs[k].a_ref;
  }
  auto objective = [&](std::span<const double> d) {
    KahanSum sum;
    for (std::size_t k = 0; k < m; ++k) {
      double sk = 0.0;
      for (std::size_t i = 0; i < degree; ++i) sk += d[i] * powers[k * degree + i];
      const double r = resid0[k] - sk;
      sum.add(r * r);
    }
    return sum.value() / static_cast<double>(m);
  };

  std::vector<double> x0(degree, 0.0);
  for (std::size_t i = 0; i < std::min(degree, warm_start.size()); ++i)
    x0[i] = warm_start[i] * std::pow(s, static_cast<double>(i + 1));

  ScaleFit fit;
  fit.optimizer = nelder_mead(objective, x0, cfg);
  std::vector<double> c(degree);
  for (std::size_t i = 0; i < degree; ++i) c[i] = fit.optimizer.x[i] / std::pow(s, static_cast<double>(i + 1));
  fit.poly = ScalePolynomial(std::move(c));
  fit.mse = fit.optimizer.f;
  KahanSum b;
  for (double r : resid0) b.add(r * r);
  fit.bias_only_mse = b.value() / static_cast<double>(m);
  return fit;
}

/// Fits degrees 1..max_degree, each warm-started from the previous one so the
/// training MSE cannot increase with degree.
inline std::vector<ScaleFit> fit_scale_factor_degrees(std::span<const CalibrationPair> pairs,
                                                      std::size_t max_degree = 5,
                                                      const OptimizerConfig& cfg = default_fit_config()) {
  std::vector<ScaleFit> fits;
  std::vector<double> warm;
  for (std::size_t d = 1; d <= max_degree; ++d) {
    fits.push_back(fit_scale_factor(pairs, d, cfg, warm));
    warm = fits.back().poly.coefficients();
  }
  return fits;
}

/// Static poses: reference accelerations g sin(phi), g cos(phi) against the
/// bias-corrected readings.
inline std::vector<CalibrationPair> calibration_pairs(std::span<const double> phi_deg,
                                                      std::span<const double> a_meas, double bias, bool x_axis) {
  if (phi_deg.size() != a_meas.size()) throw InvalidStateError("calibration_pairs: length mismatch");
  std::vector<CalibrationPair> out;
  for (std::size_t k = 0; k < phi_deg.size(); ++k) {
    const double phi = deg2rad(phi_deg[k]);
    out.push_back({a_meas[k] - bias, kGravity * (x_axis ? std::sin(phi) : std::cos(phi))});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Low-pass time constants

struct TimeConstantResult {
  double T_omega = 0.0;
  double T_v = 0.0;
  double mse = 0.0;
  OptimizationResult optimizer;
};

inline std::vector<double> phi_bar_of(std::span<const CorrectedSample> c) {
  std::vector<double> v(c.size());
  for (std::size_t k = 0; k < c.size(); ++k) v[k] = c[k].phi_bar;
  return v;
}

inline double correction_mse(std::span<const RawSample> log, std::span<const double> ref_phi,
                             const CorrectionParams& params) {
  CorrectionPipeline pipe(params);
  KahanSum s;
  for (std::size_t k = 0; k < log.size(); ++k) {
    const double d = pipe.step(log[k]).phi_bar - ref_phi[k];
    s.add(d * d);
  }
  return s.value() / static_cast<double>(log.size());
}

inline OptimizerConfig default_tuning_config() {
  OptimizerConfig c;
  c.max_iterations = 1500;
  c.f_tol = 1e-12;
  c.x_tol = 1e-9;
  c.zero_step = 0.01;
  c.restarts = 3;
  return c;
}

/// Minimises MSE(ref, phi_bar) over (T_omega, T_v) starting from the
/// template's values, subject to dt + T > 0.
inline TimeConstantResult tune_time_constants(std::span<const RawSample> log, std::span<const double> ref_phi,
                                              const CorrectionParams& templ,
                                              const OptimizerConfig& cfg = default_tuning_config()) {
  if (log.size() != ref_phi.size()) throw InvalidStateError("tune_time_constants: log and reference differ in length");
  if (log.empty()) throw InvalidStateError("tune_time_constants: empty log");
  templ.validate();
  auto objective = [&](std::span<const double> x) {
    CorrectionParams p = templ;
    p.T_omega = x[0];
    p.T_v = x[1];
    if (!(p.dt + p.T_omega > 0.0) || !(p.dt + p.T_v > 0.0)) return std::numeric_limits<double>::infinity();
    return correction_mse(log, ref_phi, p);
  };
  const std::vector<double> x0{templ.T_omega, templ.T_v};
  TimeConstantResult r;
  r.optimizer = nelder_mead(objective, x0, cfg);
  r.T_omega = r.optimizer.x[0];
  r.T_v = r.optimizer.x[1];
  r.mse = r.optimizer.f;
  return r;
}

// ---------------------------------------------------------------------------
// Filter parameters

struct TuningResult {
  Variant variant = Variant::WB;
  double dt = 0.0;
  FilterParams parameters;
  double training_mse = 0.0;
  double verification_mse = std::numeric_limits<double>::quiet_NaN();
  int iterations = 0;
  bool converged = false;
  std::optional<StabilityReport> stability;  // fixed-gain variants only
};

struct TuneOptions {
  double gyro_bias = 0.0;             // calibrated bias, seeds the WB bias state
  std::optional<FilterParams> seed;   // starting point; defaults to the published row
  // Gains the first Kalman step should reproduce (P0 initialisation).
  std::optional<std::pair<double, double>> kalman_init_gains;
  std::span<const CorrectedSample> verification;
  std::span<const double> verification_ref;
};

/// Published parameters for the variant at the closest sampling period,
/// skipping rows whose gains are unstable.
inline FilterParams default_seed(Variant v, double dt) {
  const double dt_ms = dt * 1000.0;
  const PublishedTuning* best = nullptr;
  for (const auto& row : published_tunings()) {
    if (row.variant != v) continue;
    if (!is_kalman(v) && check_stability(make_filter(v, row.params, dt)).status == Stability::Unstable) continue;
    if (!best || std::fabs(row.dt_ms - dt_ms) < std::fabs(best->dt_ms - dt_ms)) best = &row;
  }
  if (!best) throw ConfigError("no usable published seed for " + std::string(variant_name(v)));
  return best->params;
}

inline std::pair<double, double> default_kalman_init_gains(double dt) {
  const auto p = default_seed(Variant::WB, dt);
  return {p.at("alpha"), p.at("beta")};
}

namespace detail {

inline double filter_mse(const FilterSpec& spec, std::span<const CorrectedSample> stream,
                         std::span<const double> ref, double gyro_bias) {
  const auto est = run_filter(spec, stream, gyro_bias);
  return mse(ref, est);
}

// Parameter point whose tilt output equals phi_bar sample for sample.
inline std::optional<FilterParams> passthrough_params(Variant v, const FilterParams& seed) {
  switch (v) {
    case Variant::WOB: return FilterParams{{"alpha", 1.0}, {"beta", 1.0}};
    case Variant::WB: return FilterParams{{"alpha", 1.0}, {"beta", std::min(seed.at("beta"), 0.0)}};
    case Variant::ABTG: return FilterParams{{"alpha", 1.0}, {"beta", 0.0}, {"theta", 0.0}, {"gamma", 1.0}};
    case Variant::WA_A:
    case Variant::WA_B: return FilterParams{{"alpha", 1.0}, {"beta", 1.0}, {"theta", 0.0}};
    case Variant::COMPLEMENTARY: return FilterParams{{"T_c", 0.0}};
    default: return std::nullopt;
  }
}

}  // namespace detail

/// Kalman (no star): covariances from an interference analysis of the
/// training stream. r is the variance of the tilt residual, q1 * dt the
/// variance of one step of integrated rate error, q2 = 0.
inline FilterParams kalman_noise_analysis(std::span<const CorrectedSample> stream, std::span<const double> ref,
                                          double dt) {
  if (stream.size() < 3 || stream.size() != ref.size())
    throw InvalidStateError("kalman noise analysis: need aligned streams of >= 3 samples");
  std::vector<double> tilt_res, rate_res;
  for (std::size_t k = 0; k < stream.size(); ++k) {
    tilt_res.push_back(stream[k].phi_bar - ref[k]);
    if (k > 0) rate_res.push_back(stream[k].rate_bar - discrete_derivative(ref[k], ref[k - 1], dt));
  }
  auto var = [](const std::vector<double>& v) {
    const double m = compensated_mean(v);
    KahanSum s;
    for (double x : v) s.add((x - m) * (x - m));
    return s.value() / static_cast<double>(v.size() - 1);
  };
  return {{"q1", var(rate_res) * dt}, {"q2", 0.0}, {"r", var(tilt_res)}};
}

inline TuningResult tune_filter(Variant variant, std::span<const CorrectedSample> training,
                                std::span<const double> ref, double dt,
                                const OptimizerConfig& cfg = default_tuning_config(), const TuneOptions& opt = {}) {
  if (training.size() != ref.size()) throw InvalidStateError("tune_filter: stream and reference differ in length");
  if (training.empty()) throw InvalidStateError("tune_filter: empty stream");

  TuningResult res;
  res.variant = variant;
  res.dt = dt;

  const auto names = parameter_names(variant);
  FilterParams extra;
  if (is_kalman(variant)) {
    const auto gains = opt.kalman_init_gains.value_or(default_kalman_init_gains(dt));
    extra = {{"init_alpha", gains.first}, {"init_beta", gains.second}};
  }
  auto with_extra = [&](FilterParams p) {
    for (const auto& [k, v] : extra) p[k] = v;
    return p;
  };
  // Kalman P0 from the init gains may be infeasible for a candidate (Q, r);
  // fall back to P0 = 0 in that case.
  auto build = [&](const FilterParams& p) {
    FilterSpec spec = make_filter(variant, with_extra(p), dt);
    if (is_kalman(variant)) {
      try {
        (void)initial_kalman_state(spec, initial_state(spec, training.front(), opt.gyro_bias));
      } catch (const InitializationError&) {
        spec = make_filter(variant, p, dt);
      }
    }
    return spec;
  };
  auto evaluate = [&](const FilterParams& p) -> double {
    try {
      const FilterSpec spec = build(p);
      if (!is_kalman(variant) && check_stability(spec).status == Stability::Unstable)
        return std::numeric_limits<double>::infinity();
      return detail::filter_mse(spec, training, ref, opt.gyro_bias);
    } catch (const NumericError&) {
      return std::numeric_limits<double>::infinity();
    }
  };

  if (variant == Variant::KALMAN) {
    res.parameters = kalman_noise_analysis(training, ref, dt);
    res.training_mse = evaluate(res.parameters);
    res.converged = true;
  } else {
    const FilterParams seed = opt.seed.value_or(default_seed(variant, dt));
    // Kalman* searches over square roots so q1, q2, r stay nonnegative.
    const bool squared = variant == Variant::KALMAN_STAR;
    auto to_params = [&](std::span<const double> x) {
      FilterParams p;
      for (std::size_t i = 0; i < names.size(); ++i) p[names[i]] = squared ? x[i] * x[i] : x[i];
      return p;
    };
    auto to_vector = [&](const FilterParams& p) {
      std::vector<double> x;
      for (const auto& n : names) x.push_back(squared ? std::sqrt(std::max(p.at(n), 0.0)) : p.at(n));
      return x;
    };
    auto objective = [&](std::span<const double> x) {
      if (variant == Variant::COMPLEMENTARY && !(dt + x[0] > 0.0)) return std::numeric_limits<double>::infinity();
      return evaluate(to_params(x));
    };

    std::vector<double> x0 = to_vector(seed);
    double f0 = objective(x0);
    if (const auto pt = detail::passthrough_params(variant, seed)) {
      const auto xp = to_vector(*pt);
      const double fp = objective(xp);
      if (fp < f0) {
        x0 = xp;
        f0 = fp;
      }
    }
    OptimizationResult r;
    try {
      r = nelder_mead(objective, x0, cfg);
    } catch (const OptimizationError&) {
      std::string s;
      for (const auto& [k, v] : seed) s += " " + k + "=" + std::to_string(v);
      throw OptimizationError("tune_filter(" + std::string(variant_name(variant)) +
                              "): every candidate was unstable or non-finite; best found:" + s);
    }
    res.parameters = to_params(r.x);
    res.training_mse = r.f;
    res.iterations = r.iterations;
    res.converged = r.converged;
  }

  const FilterSpec final_spec = build(res.parameters);
  if (!is_kalman(variant)) res.stability = check_stability(final_spec);
  if (!opt.verification.empty()) {
    if (opt.verification.size() != opt.verification_ref.size())
      throw InvalidStateError("tune_filter: verification stream and reference differ in length");
    res.verification_mse = detail::filter_mse(final_spec, opt.verification, opt.verification_ref, opt.gyro_bias);
  }
  return res;
}

}  // namespace tiltfuse
