#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tiltfuse/correction.hpp"
#include "tiltfuse/error.hpp"

namespace tiltfuse {

// Every fixed-gain variant is written in the single recursion
//   x(k) = [A - KCA] x(k-1) + [B - KCB] u + K y(k)
// which is what the two-phase predict/correct equations collapse to.

enum class Variant { WOB, WB, ABTG, WA_A, WA_B, COMPLEMENTARY, KALMAN, KALMAN_STAR };

inline constexpr Variant kAllVariants[] = {Variant::WOB,  Variant::WB,   Variant::ABTG,          Variant::WA_A,
                                           Variant::WA_B, Variant::KALMAN, Variant::KALMAN_STAR, Variant::COMPLEMENTARY};

inline std::string_view variant_name(Variant v) {
  switch (v) {
    case Variant::WOB: return "wob";
    case Variant::WB: return "wb";
    case Variant::ABTG: return "abtg";
    case Variant::WA_A: return "wa-a";
    case Variant::WA_B: return "wa-b";
    case Variant::COMPLEMENTARY: return "complementary";
    case Variant::KALMAN: return "kalman";
    case Variant::KALMAN_STAR: return "kalman*";
  }
  return "?";
}

inline Variant parse_variant(std::string_view s) {
  std::string k(s);
  std::transform(k.begin(), k.end(), k.begin(), [](unsigned char c) { return std::tolower(c); });
  std::replace(k.begin(), k.end(), '_', '-');
  if (k == "wob") return Variant::WOB;
  if (k == "wb") return Variant::WB;
  if (k == "abtg") return Variant::ABTG;
  if (k == "wa-a") return Variant::WA_A;
  if (k == "wa-b") return Variant::WA_B;
  if (k == "complementary" || k == "comp") return Variant::COMPLEMENTARY;
  if (k == "kalman") return Variant::KALMAN;
  if (k == "kalman*" || k == "kalman-star") return Variant::KALMAN_STAR;
  throw ConfigError("unknown filter variant '" + std::string(s) + "'");
}

inline bool is_kalman(Variant v) { return v == Variant::KALMAN || v == Variant::KALMAN_STAR; }

/// Tunable parameters of each variant, in reporting order.
inline std::vector<std::string> parameter_names(Variant v) {
  switch (v) {
    case Variant::WOB:
    case Variant::WB: return {"alpha", "beta"};
    case Variant::ABTG: return {"alpha", "beta", "theta", "gamma"};
    case Variant::WA_A:
    case Variant::WA_B: return {"alpha", "beta", "theta"};
    case Variant::COMPLEMENTARY: return {"T_c"};
    case Variant::KALMAN:
    case Variant::KALMAN_STAR: return {"q1", "q2", "r"};
  }
  return {};
}

// Kalman variants may also carry the gains their first step should produce.
inline std::vector<std::string> optional_parameter_names(Variant v) {
  if (is_kalman(v)) return {"init_alpha", "init_beta"};
  return {};
}

using FilterParams = std::map<std::string, double>;

// Small matrices with a compile-time upper bound so stepping never allocates.
using Mat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::ColMajor, 3, 3>;
using Vec = Eigen::Matrix<double, Eigen::Dynamic, 1, Eigen::ColMajor, 3, 1>;

struct FilterSpec {
  Variant variant = Variant::WOB;
  double dt = 0.0;
  Mat A, B, C, K;
  Mat F;  // A - KCA
  Mat G;  // B - KCB
  std::vector<std::string> state_labels;
  // Inputs from the current sample rather than the previous one.
  bool input_current = false;
  FilterParams params;

  Eigen::Index state_dim() const { return A.rows(); }
  Eigen::Index input_dim() const { return B.cols(); }
  Eigen::Index output_dim() const { return C.rows(); }

  void refresh() {
    F = A - K * C * A;
    G = B - K * C * B;
  }
};

struct FilterState {
  Vec x;
};

inline FilterSpec make_filter(Variant variant, const FilterParams& params, double dt) {
  if (!(dt > 0.0)) throw ConfigError("make_filter: dt must be > 0");
  const auto required = parameter_names(variant);
  const auto optional = optional_parameter_names(variant);
  auto describe = [&] {
    std::string s;
    for (const auto& n : required) s += (s.empty() ? "" : ", ") + n;
    return std::string(variant_name(variant)) + " expects {" + s + "}";
  };
  for (const auto& n : required)
    if (!params.count(n)) throw ConfigError("missing parameter '" + n + "': " + describe());
  for (const auto& [k, v] : params) {
    if (std::find(required.begin(), required.end(), k) == required.end() &&
        std::find(optional.begin(), optional.end(), k) == optional.end())
      throw ConfigError("unexpected parameter '" + k + "': " + describe());
    if (!std::isfinite(v)) throw ConfigError("parameter '" + k + "' is not finite");
  }
  auto p = [&](const char* n) { return params.at(n); };

  FilterSpec s;
  s.variant = variant;
  s.dt = dt;
  s.params = params;
  switch (variant) {
    case Variant::WOB:
    case Variant::ABTG: {
      s.A = Mat{{1.0, dt}, {0.0, 1.0}};
      s.B = Mat::Zero(2, 0);
      s.C = Mat::Identity(2, 2);
      if (variant == Variant::WOB)
        s.K = Mat{{p("alpha"), 0.0}, {0.0, p("beta")}};
      else
        s.K = Mat{{p("alpha"), p("theta") * dt}, {p("beta") / dt, p("gamma")}};
      s.state_labels = {"phi", "phi_dot"};
      break;
    }
    case Variant::WB:
    case Variant::KALMAN:
    case Variant::KALMAN_STAR: {
      s.A = Mat{{1.0, -dt}, {0.0, 1.0}};
      s.B = Mat{{dt}, {0.0}};
      s.C = Mat{{1.0, 0.0}};
      if (variant == Variant::WB) {
        s.K = Mat{{p("alpha")}, {p("beta")}};
      } else {
        for (const char* n : {"q1", "q2", "r"})
          if (params.at(n) < 0.0) throw ConfigError(std::string("kalman: ") + n + " must be >= 0");
        const double a0 = params.count("init_alpha") ? params.at("init_alpha") : 0.0;
        const double b0 = params.count("init_beta") ? params.at("init_beta") : 0.0;
        s.K = Mat{{a0}, {b0}};
      }
      s.state_labels = {"phi", "gyro_bias"};
      break;
    }
    case Variant::WA_A:
    case Variant::WA_B: {
      s.A = Mat{{1.0, dt, dt * dt / 2.0}, {0.0, 1.0, dt}, {0.0, 0.0, 1.0}};
      s.B = Mat::Zero(3, 0);
      s.C = Mat{{1.0, 0.0, 0.0}, {0.0, 1.0, 0.0}};
      if (variant == Variant::WA_A)
        s.K = Mat{{p("alpha"), 0.0}, {0.0, p("beta")}, {p("theta") / (dt * dt), 0.0}};
      else
        s.K = Mat{{p("alpha"), 0.0}, {0.0, p("beta")}, {0.0, p("theta") / dt}};
      s.state_labels = {"phi", "phi_dot", "phi_ddot"};
      break;
    }
    case Variant::COMPLEMENTARY: {
      const double tc = p("T_c");
      const double den = dt + tc;
      if (!(den > 0.0)) throw ConfigError("complementary: dt + T_c must be > 0");
      s.A = Mat{{tc / den}};
      s.B = Mat{{dt / den, tc * dt / den}};
      s.C = Mat::Zero(1, 1);
      s.K = Mat::Zero(1, 1);
      s.state_labels = {"phi"};
      s.input_current = true;
      break;
    }
  }
  s.refresh();
  return s;
}

inline FilterState filter_step(const FilterSpec& spec, const FilterState& state, const Vec& u, const Vec& y) {
  if (state.x.size() != spec.state_dim() || u.size() != spec.input_dim() || y.size() != spec.output_dim())
    throw InvalidStateError("filter_step: dimension mismatch (state " + std::to_string(state.x.size()) + "/" +
                            std::to_string(spec.state_dim()) + ", input " + std::to_string(u.size()) + "/" +
                            std::to_string(spec.input_dim()) + ", output " + std::to_string(y.size()) + "/" +
                            std::to_string(spec.output_dim()) + ")");
  FilterState next;
  next.x = spec.F * state.x + spec.K * y;
  if (spec.input_dim() > 0) next.x += spec.G * u;
  return next;
}

// ---------------------------------------------------------------------------
// Kalman filter with a [tilt, gyro bias] state and the corrected rate as input.

struct KalmanState {
  Eigen::Vector2d x = Eigen::Vector2d::Zero();
  Eigen::Matrix2d P = Eigen::Matrix2d::Zero();
  Eigen::Matrix2d Q = Eigen::Matrix2d::Zero();
  double r = 0.0;
  Eigen::Vector2d K = Eigen::Vector2d::Zero();
};

inline Eigen::Matrix2d kalman_process_covariance(double q1, double q2, double dt) {
  Eigen::Matrix2d Q;
  Q << q1 * dt, 0.0, 0.0, q2;
  return Q;
}

inline KalmanState kalman_step(const KalmanState& ks, double u, double y_bar, double dt) {
  Eigen::Matrix2d A;
  A << 1.0, -dt, 0.0, 1.0;
  const Eigen::Vector2d B(dt, 0.0);

  KalmanState next = ks;
  const Eigen::Vector2d x_pred = A * ks.x + B * u;
  const Eigen::Matrix2d P_pred = A * ks.P * A.transpose() + ks.Q;
  const double innovation_var = P_pred(0, 0) + ks.r;
  if (innovation_var == 0.0 || !std::isfinite(innovation_var))
    throw SingularInnovationError("kalman: innovation variance is " + std::to_string(innovation_var));
  next.K = P_pred.col(0) / innovation_var;
  next.x = x_pred + next.K * (y_bar - x_pred(0));
  Eigen::Matrix2d IKC = Eigen::Matrix2d::Identity();
  IKC.col(0) -= next.K;
  next.P = IKC * P_pred;
  next.P = 0.5 * (next.P + next.P.transpose()).eval();
  return next;
}

/// Initial covariance for which the first Kalman gain equals (alpha, beta).
/// Only the first column of the predicted covariance is pinned by the gain;
/// the remaining entry is the smallest PSD-preserving value plus 1e-9.
inline Eigen::Matrix2d kalman_init_P(double alpha, double beta, const Eigen::Matrix2d& Q, double r, double dt) {
  if (alpha == 0.0 && beta == 0.0 && Q.isZero(0.0)) return Eigen::Matrix2d::Zero();
  if (!(alpha >= 0.0 && alpha < 1.0)) throw InitializationError("kalman_init_P: alpha must lie in [0, 1)");
  if (!(r >= 0.0)) throw InitializationError("kalman_init_P: r must be >= 0");

  const double p11 = alpha * r / (1.0 - alpha);
  const double p21 = beta * r / (1.0 - alpha);
  // M = P_pred - Q must be PSD, since P0 = A^-1 M A^-T.
  double m11 = p11 - Q(0, 0);
  const double m12 = p21 - Q(0, 1);
  const double scale = std::max({std::fabs(p11), std::fabs(Q(0, 0)), 1e-300});
  if (m11 < -1e-12 * scale)
    throw InitializationError("kalman_init_P: gain alpha=" + std::to_string(alpha) +
                              " is below what Q and r allow (q1*dt exceeds the required prior variance)");
  double m22;
  if (m11 <= 1e-12 * scale) {
    m11 = 0.0;
    if (std::fabs(m12) > 1e-12 * std::max(std::fabs(p21), 1e-300))
      throw InitializationError("kalman_init_P: beta must be 0 when the prior tilt variance is zero");
    m22 = 0.0;
  } else {
    m22 = m12 * m12 / m11 + 1e-9;
  }
  Eigen::Matrix2d M;
  M << m11, m12, m12, m22;
  Eigen::Matrix2d Ainv;
  Ainv << 1.0, dt, 0.0, 1.0;
  Eigen::Matrix2d P0 = Ainv * M * Ainv.transpose();
  return 0.5 * (P0 + P0.transpose());
}

// ---------------------------------------------------------------------------
// Stability of the error dynamics: eigenvalues of A - KCA.

enum class Stability { Stable, Marginal, Unstable };

inline std::string_view stability_name(Stability s) {
  switch (s) {
    case Stability::Stable: return "stable";
    case Stability::Marginal: return "marginal";
    case Stability::Unstable: return "unstable";
  }
  return "?";
}

struct StabilityReport {
  std::vector<std::complex<double>> eigenvalues;
  std::vector<double> magnitudes;
  double spectral_radius = 0.0;
  Stability status = Stability::Stable;
  bool stable() const { return status == Stability::Stable; }
};

inline constexpr double kStabilityTolerance = 1e-9;

namespace detail {

// Roots of z^2 - tr z + det = 0.
inline std::vector<std::complex<double>> quadratic_roots(double tr, double det) {
  const double half = tr / 2.0;
  const double disc = half * half - det;
  if (disc >= 0.0) {
    const double s = std::sqrt(disc);
    const double r1 = half >= 0.0 ? half + s : half - s;
    const double r2 = r1 != 0.0 ? det / r1 : 0.0;
    return {r1, r2};
  }
  const double im = std::sqrt(-disc);
  return {{half, im}, {half, -im}};
}

// Roots of z^3 + a z^2 + b z + c = 0: one real root from Cardano or the
// trigonometric form, Newton-polished, then deflation to a quadratic.
inline std::vector<std::complex<double>> cubic_roots(double a, double b, double c) {
  const double p = b - a * a / 3.0;
  const double q = 2.0 * a * a * a / 27.0 - a * b / 3.0 + c;
  const double D = q * q / 4.0 + p * p * p / 27.0;
  double mu;
  if (D >= 0.0) {
    const double s = std::sqrt(D);
    mu = std::cbrt(-q / 2.0 + s) + std::cbrt(-q / 2.0 - s);
  } else {
    const double m = 2.0 * std::sqrt(-p / 3.0);
    const double arg = std::clamp(3.0 * q / (p * m), -1.0, 1.0);
    mu = m * std::cos(std::acos(arg) / 3.0);
  }
  double z = mu - a / 3.0;
  for (int i = 0; i < 4; ++i) {
    const double f = ((z + a) * z + b) * z + c;
    const double df = (3.0 * z + 2.0 * a) * z + b;
    if (df == 0.0) break;
    const double step = f / df;
    if (!std::isfinite(step)) break;
    z -= step;
  }
  // z^2 + (a + z1) z + (b + z1 (a + z1))
  const double b1 = a + z;
  const double c1 = b + z * b1;
  auto rest = quadratic_roots(-b1, c1);
  return {z, rest[0], rest[1]};
}

}  // namespace detail

inline std::vector<std::complex<double>> closed_form_eigenvalues(const Mat& F) {
  if (F.rows() != F.cols() || F.rows() < 1 || F.rows() > 3)
    throw InvalidStateError("eigenvalues: expected a square matrix of size 1..3");
  if (F.rows() == 1) return {F(0, 0)};
  if (F.rows() == 2) return detail::quadratic_roots(F.trace(), F(0, 0) * F(1, 1) - F(0, 1) * F(1, 0));
  const double tr = F.trace();
  const double minors = F(0, 0) * F(1, 1) - F(0, 1) * F(1, 0) + F(0, 0) * F(2, 2) - F(0, 2) * F(2, 0) +
                        F(1, 1) * F(2, 2) - F(1, 2) * F(2, 1);
  const double det = F(0, 0) * (F(1, 1) * F(2, 2) - F(1, 2) * F(2, 1)) -
                     F(0, 1) * (F(1, 0) * F(2, 2) - F(1, 2) * F(2, 0)) +
                     F(0, 2) * (F(1, 0) * F(2, 1) - F(1, 1) * F(2, 0));
  return detail::cubic_roots(-tr, minors, -det);
}

inline StabilityReport check_stability(const FilterSpec& spec) {
  StabilityReport rep;
  rep.eigenvalues = closed_form_eigenvalues(spec.A - spec.K * spec.C * spec.A);
  for (const auto& l : rep.eigenvalues) {
    rep.magnitudes.push_back(std::abs(l));
    rep.spectral_radius = std::max(rep.spectral_radius, std::abs(l));
  }
  if (rep.spectral_radius < 1.0 - kStabilityTolerance)
    rep.status = Stability::Stable;
  else if (rep.spectral_radius <= 1.0 + kStabilityTolerance)
    rep.status = Stability::Marginal;
  else
    rep.status = Stability::Unstable;
  return rep;
}

// ---------------------------------------------------------------------------
// Running a filter over a corrected stream.

/// Initial state from the first sample: tilt from the raw accelerometer
/// arctangent, rate from the corrected gyro, zero acceleration, and the
/// calibrated bias for the filter that consumes the raw gyro.
inline FilterState initial_state(const FilterSpec& spec, const CorrectedSample& first, double gyro_bias) {
  FilterState s;
  switch (spec.variant) {
    case Variant::WOB:
    case Variant::ABTG: s.x = Vec{{first.phi_raw, first.rate_bar}}; break;
    case Variant::WB: s.x = Vec{{first.phi_raw, gyro_bias}}; break;
    case Variant::WA_A:
    case Variant::WA_B: s.x = Vec{{first.phi_raw, first.rate_bar, 0.0}}; break;
    case Variant::COMPLEMENTARY: s.x = Vec{{first.phi_raw}}; break;
    case Variant::KALMAN:
    case Variant::KALMAN_STAR: s.x = Vec{{first.phi_raw, 0.0}}; break;
  }
  return s;
}

/// Initial Kalman state for a Kalman-variant spec: P0 from the spec's
/// init gains when present, zero otherwise.
inline KalmanState initial_kalman_state(const FilterSpec& spec, const FilterState& initial) {
  if (!is_kalman(spec.variant)) throw InvalidStateError("initial_kalman_state: not a Kalman variant");
  KalmanState ks;
  ks.x = Eigen::Vector2d(initial.x(0), initial.x(1));
  ks.Q = kalman_process_covariance(spec.params.at("q1"), spec.params.at("q2"), spec.dt);
  ks.r = spec.params.at("r");
  const double a0 = spec.K(0, 0), b0 = spec.K(1, 0);
  ks.P = (a0 == 0.0 && b0 == 0.0) ? Eigen::Matrix2d::Zero() : kalman_init_P(a0, b0, ks.Q, ks.r, spec.dt);
  return ks;
}

inline std::vector<double> run_filter(const FilterSpec& spec, const FilterState& initial,
                                      std::span<const CorrectedSample> corrected) {
  if (corrected.empty()) throw InvalidStateError("run_filter: empty stream");
  std::vector<double> out;
  out.reserve(corrected.size());
  out.push_back(initial.x(0));

  if (is_kalman(spec.variant)) {
    KalmanState ks = initial_kalman_state(spec, initial);
    for (std::size_t k = 1; k < corrected.size(); ++k) {
      try {
        ks = kalman_step(ks, corrected[k - 1].rate_bar, corrected[k].phi_bar, spec.dt);
      } catch (const NumericError& e) {
        throw StepError(e.what(), k);
      }
      out.push_back(ks.x(0));
    }
    return out;
  }

  FilterState st = initial;
  Vec u(spec.input_dim()), y(spec.output_dim());
  for (std::size_t k = 1; k < corrected.size(); ++k) {
    const CorrectedSample& cur = corrected[k];
    const CorrectedSample& prev = corrected[k - 1];
    switch (spec.variant) {
      case Variant::WOB:
      case Variant::ABTG:
      case Variant::WA_A:
      case Variant::WA_B: y << cur.phi_bar, cur.rate_bar; break;
      case Variant::WB:
        u << prev.rate_raw;
        y << cur.phi_bar;
        break;
      case Variant::COMPLEMENTARY:
        u << cur.phi_bar, cur.rate_bar;
        y << cur.phi_bar;
        break;
      default: break;
    }
    try {
      st = filter_step(spec, st, u, y);
    } catch (const NumericError& e) {
      throw StepError(e.what(), k);
    }
    if (!std::isfinite(st.x(0))) throw StepError("estimate diverged", k);
    out.push_back(st.x(0));
  }
  return out;
}

inline std::vector<double> run_filter(const FilterSpec& spec, std::span<const CorrectedSample> corrected,
                                      double gyro_bias) {
  if (corrected.empty()) throw InvalidStateError("run_filter: empty stream");
  return run_filter(spec, initial_state(spec, corrected.front(), gyro_bias), corrected);
}

// ---------------------------------------------------------------------------
// Published tunings, one row per (variant, sampling period).

struct PublishedTuning {
  Variant variant;
  double dt_ms;
  FilterParams params;
  double training_mse;
  double verification_mse;
};

inline const std::vector<PublishedTuning>& published_tunings() {
  static const std::vector<PublishedTuning> rows = {
      {Variant::WOB, 2, {{"alpha", 0.00227}, {"beta", 1.58242}}, 1.98686, 0.82071},
      {Variant::WOB, 5, {{"alpha", 0.00866}, {"beta", 1.12381}}, 6.18150, 3.07579},
      {Variant::WOB, 10, {{"alpha", 0.00103}, {"beta", 1.67836}}, 1.60046, 11.94604},
      {Variant::WOB, 20, {{"alpha", 0.00165}, {"beta", 1.84408}}, 2.32469, 3.34761},
      {Variant::WB, 2, {{"alpha", 0.00185}, {"beta", -0.00018}}, 1.93816, 0.78603},
      {Variant::WB, 5, {{"alpha", 0.00858}, {"beta", -0.00007}}, 6.16623, 3.05931},
      {Variant::WB, 10, {{"alpha", 0.00080}, {"beta", 0.0}}, 1.73683, 14.17050},
      {Variant::WB, 20, {{"alpha", 0.00171}, {"beta", 0.0}}, 3.07329, 4.05407},
      {Variant::ABTG, 2, {{"alpha", 0.00204}, {"beta", -0.00001}, {"theta", 1.07026}, {"gamma", -0.00013}}, 0.74852, 1.33160},
      {Variant::ABTG, 5, {{"alpha", 0.00668}, {"beta", -0.00005}, {"theta", 1.05866}, {"gamma", 0.00007}}, 3.91003, 2.12875},
      {Variant::ABTG, 10, {{"alpha", 0.00088}, {"beta", 0.0}, {"theta", 1.05141}, {"gamma", -0.00002}}, 0.61819, 12.05841},
      {Variant::ABTG, 20, {{"alpha", 0.00391}, {"beta", -0.00406}, {"theta", -0.04194}, {"gamma", 1.87665}}, 2.32142, 3.34578},
      {Variant::WA_A, 2, {{"alpha", 0.00169}, {"beta", 1.21567}, {"theta", 0.0}}, 1.94261, 0.86258},
      {Variant::WA_A, 5, {{"alpha", 0.00850}, {"beta", 1.12964}, {"theta", 0.0}}, 6.16275, 3.07526},
      {Variant::WA_A, 10, {{"alpha", 0.00080}, {"beta", 1.67821}, {"theta", 0.0}}, 1.58494, 13.92453},
      {Variant::WA_A, 20, {{"alpha", 0.00165}, {"beta", 1.84410}, {"theta", 0.0}}, 2.32469, 3.34753},
      {Variant::WA_B, 2, {{"alpha", 0.00315}, {"beta", 0.28647}, {"theta", 0.00673}}, 1.87487, 1.12021},
      {Variant::WA_B, 5, {{"alpha", 0.00911}, {"beta", 0.32710}, {"theta", 0.01188}}, 5.43600, 2.81706},
      {Variant::WA_B, 10, {{"alpha", 0.00104}, {"beta", 0.69743}, {"theta", 0.06346}}, 1.33276, 11.34403},
      {Variant::WA_B, 20, {{"alpha", 0.00168}, {"beta", 1.01622}, {"theta", 0.17281}}, 2.06774, 3.07125},
      {Variant::KALMAN, 2, {{"q1", 0.01076}, {"q2", 0.0}, {"r", 0.02792}}, 6.88674, 11.08092},
      {Variant::KALMAN, 5, {{"q1", 0.01076}, {"q2", 0.0}, {"r", 0.02792}}, 9.45858, 6.80941},
      {Variant::KALMAN, 10, {{"q1", 0.01076}, {"q2", 0.0}, {"r", 0.02792}}, 9.41660, 6.79686},
      {Variant::KALMAN, 20, {{"q1", 0.01076}, {"q2", 0.0}, {"r", 0.02792}}, 7.98366, 12.38334},
      {Variant::KALMAN_STAR, 2, {{"q1", 0.00001}, {"q2", 0.0}, {"r", 2.30640}}, 1.94297, 0.79206},
      {Variant::KALMAN_STAR, 5, {{"q1", 0.00112}, {"q2", 0.0}, {"r", 17.16979}}, 6.17602, 3.03979},
      {Variant::KALMAN_STAR, 10, {{"q1", 0.0}, {"q2", 0.0}, {"r", 2.25847}}, 1.73928, 13.73496},
      {Variant::KALMAN_STAR, 20, {{"q1", 0.00001}, {"q2", 0.0}, {"r", 2.92997}}, 3.07025, 4.10513},
      {Variant::COMPLEMENTARY, 2, {{"T_c", 1.06895}}, 2.01177, 0.82619},
      {Variant::COMPLEMENTARY, 5, {{"T_c", 0.60307}}, 6.39301, 3.38819},
      {Variant::COMPLEMENTARY, 10, {{"T_c", 9.74413}}, 1.92216, 12.33891},
      {Variant::COMPLEMENTARY, 20, {{"T_c", 12.40721}}, 3.31344, 4.30363},
  };
  return rows;
}

// Published low-pass constants per sampling period (dt_ms, T_omega, T_v).
struct PublishedTimeConstants {
  double dt_ms;
  double T_omega;
  double T_v;
  double mse_raw;
  double mse_corrected;
};

inline const std::vector<PublishedTimeConstants>& published_time_constants() {
  static const std::vector<PublishedTimeConstants> rows = {
      {2, 0.06874, 0.04607, 150.56951, 72.52314},
      {5, 0.02392, 0.02031, 515.27065, 222.05807},
      {10, 0.02557, 0.02045, 377.39749, 174.45667},
      {20, 0.00774, -0.00065, 280.23692, 110.55792},
  };
  return rows;
}

}  // namespace tiltfuse
