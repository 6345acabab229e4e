#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "tiltfuse/error.hpp"
#include "tiltfuse/numeric.hpp"
#include "tiltfuse/polynomial.hpp"
#include "tiltfuse/sample.hpp"

namespace tiltfuse {

// Deterministic correction of raw IMU + encoder samples into a tilt angle
// and an angular rate. Angles are in degrees throughout; the rate is
// converted to rad/s only to compute the motion-induced accelerations.

struct CorrectionParams {
  double gyro_bias = 0.0;     // deg/s
  double accel_bias_x = 0.0;  // m/s^2
  double accel_bias_y = 0.0;  // m/s^2
  ScalePolynomial scale_poly_x = ScalePolynomial::zero();
  ScalePolynomial scale_poly_y = ScalePolynomial::zero();
  double R = 0.135;       // sensor distance from the rotation axis, m
  double R_w = 0.0375;    // wheel radius, m
  std::int64_t N_drive = 0;  // drive-encoder pulses per revolution
  double dt = 0.01;       // s
  double T_omega = 0.0;   // s, rate low-pass time constant
  double T_v = 0.0;       // s, velocity low-pass time constant

  void validate() const {
    auto fail = [](const std::string& m) { throw ParameterError("correction params: " + m); };
    if (!(R > 0.0)) fail("R must be > 0");
    if (!(R_w > 0.0)) fail("R_w must be > 0");
    if (N_drive < 1) fail("N_drive must be >= 1");
    if (!(dt > 0.0)) fail("dt must be > 0");
    // A negative constant is accepted as long as the recurrence stays defined.
    if (!(dt + T_omega > 0.0)) fail("dt + T_omega must be > 0");
    if (!(dt + T_v > 0.0)) fail("dt + T_v must be > 0");
  }
};

struct CorrectionState {
  double prev_phi_bar = 0.0;        // deg
  double prev_rate_filtered = 0.0;  // rad/s
  double prev_v_filtered = 0.0;     // m/s
  bool initialized = false;
};

struct CorrectedSample {
  double t = 0.0;
  double phi_bar = 0.0;   // deg
  double rate_bar = 0.0;  // deg/s
  double a_c = 0.0;
  double a_e = 0.0;
  double a_t = 0.0;
  double a_t_x = 0.0;
  double a_t_y = 0.0;
  double phi_raw = 0.0;   // arctangent of the uncorrected accelerations, deg
  double rate_raw = 0.0;  // uncorrected gyro output, deg/s
  bool degenerate_tilt = false;
  bool encoder_missing = false;
};

inline double correct_gyro(double rate_meas, double gyro_bias) { return rate_meas - gyro_bias; }

inline double correct_accel(double a_meas, double bias, const ScalePolynomial& poly) {
  const double p = a_meas - bias;
  return p - poly(p);
}

inline double lowpass_step(double x, double y_prev, double T, double dt) {
  const double den = dt + T;
  if (!(den > 0.0)) throw ParameterError("low-pass: dt + T must be > 0");
  if (T == 0.0) return x;
  return (x * dt + y_prev * T) / den;
}

inline double discrete_derivative(double y, double y_prev, double dt) { return (y - y_prev) / dt; }

inline double encoder_velocity(std::int64_t n, std::int64_t N, double R_w, double dt) {
  return 2.0 * kPi * R_w * static_cast<double>(n) / (static_cast<double>(N) * dt);
}

struct MotionAccelerations {
  double a_c = 0.0;            // centrifugal, m/s^2
  double a_e = 0.0;            // Euler, m/s^2
  double rate_filtered = 0.0;  // rad/s, next filter state
};

/// The centrifugal term uses the unfiltered rate; only the path to the
/// angular-acceleration derivative goes through the low-pass.
inline MotionAccelerations motion_accelerations(double rate_bar_dps, const CorrectionState& state,
                                                const CorrectionParams& params) {
  const double omega = deg2rad(rate_bar_dps);
  MotionAccelerations out;
  if (!state.initialized) {
    out.rate_filtered = omega;
  } else {
    out.rate_filtered = lowpass_step(omega, state.prev_rate_filtered, params.T_omega, params.dt);
  }
  const double prev = state.initialized ? state.prev_rate_filtered : out.rate_filtered;
  const double omega_ddot = discrete_derivative(out.rate_filtered, prev, params.dt);
  out.a_c = omega * omega * params.R;
  out.a_e = omega_ddot * params.R;
  return out;
}

/// Four-quadrant arctangent of the motion-compensated accelerations, in
/// degrees, range (-180, 180].
inline double corrected_tilt(double ax_bar, double ay_bar, double a_e, double a_c, double a_t_x,
                             double a_t_y) {
  const double num = ax_bar + a_e + a_t_x;
  const double den = ay_bar + a_c - a_t_y;
  if (num == 0.0 && den == 0.0) throw DegenerateTiltError("tilt undefined: both components are zero");
  double deg = rad2deg(std::atan2(num, den));
  if (deg <= -180.0) deg += 360.0;
  return deg;
}

inline double raw_tilt(double ax, double ay) {
  if (ax == 0.0 && ay == 0.0) return 0.0;
  double deg = rad2deg(std::atan2(ax, ay));
  if (deg <= -180.0) deg += 360.0;
  return deg;
}

struct CorrectionStepResult {
  CorrectedSample sample;
  CorrectionState state;
};

inline CorrectionStepResult correction_pipeline_step(const RawSample& raw, const CorrectionParams& params,
                                                     const CorrectionState& state) {
  CorrectedSample out;
  out.t = raw.t;
  out.rate_raw = raw.gyro_dps;
  out.phi_raw = raw_tilt(raw.acc_x_mps2, raw.acc_y_mps2);
  out.rate_bar = correct_gyro(raw.gyro_dps, params.gyro_bias);
  const double ax = correct_accel(raw.acc_x_mps2, params.accel_bias_x, params.scale_poly_x);
  const double ay = correct_accel(raw.acc_y_mps2, params.accel_bias_y, params.scale_poly_y);

  out.encoder_missing = !raw.enc_count.has_value();
  const std::int64_t n = raw.enc_count.value_or(0);
  const double v = encoder_velocity(n, params.N_drive, params.R_w, params.dt);

  CorrectionState next = state;
  const MotionAccelerations motion = motion_accelerations(out.rate_bar, state, params);
  out.a_c = motion.a_c;
  out.a_e = motion.a_e;
  next.prev_rate_filtered = motion.rate_filtered;

  if (!state.initialized) {
    // Velocity filter starts from rest; no translational history yet.
    next.prev_v_filtered = 0.0;
    out.a_t = 0.0;
  } else {
    const double vf = lowpass_step(v, state.prev_v_filtered, params.T_v, params.dt);
    out.a_t = discrete_derivative(vf, state.prev_v_filtered, params.dt);
    next.prev_v_filtered = vf;
    const double prev = deg2rad(state.prev_phi_bar);
    out.a_t_x = out.a_t * std::cos(prev);
    out.a_t_y = out.a_t * std::sin(prev);
  }

  try {
    out.phi_bar = corrected_tilt(ax, ay, out.a_e, out.a_c, out.a_t_x, out.a_t_y);
  } catch (const DegenerateTiltError&) {
    out.phi_bar = state.initialized ? state.prev_phi_bar : 0.0;
    out.degenerate_tilt = true;
  }
  next.prev_phi_bar = out.phi_bar;
  next.initialized = true;
  return {out, next};
}

// Streaming wrapper that owns the state.
class CorrectionPipeline {
 public:
  explicit CorrectionPipeline(CorrectionParams params) : params_(std::move(params)) { params_.validate(); }

  CorrectedSample step(const RawSample& raw) {
    auto r = correction_pipeline_step(raw, params_, state_);
    state_ = r.state;
    return r.sample;
  }

  const CorrectionState& state() const { return state_; }
  const CorrectionParams& params() const { return params_; }
  void reset() { state_ = {}; }

 private:
  CorrectionParams params_;
  CorrectionState state_;
};

inline std::vector<CorrectedSample> correct_log(std::span<const RawSample> log, const CorrectionParams& params) {
  CorrectionPipeline pipeline(params);
  std::vector<CorrectedSample> out;
  out.reserve(log.size());
  for (const auto& s : log) out.push_back(pipeline.step(s));
  return out;
}

}  // namespace tiltfuse
