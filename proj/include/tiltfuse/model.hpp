#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "tiltfuse/correction.hpp"
#include "tiltfuse/error.hpp"
#include "tiltfuse/numeric.hpp"
#include "tiltfuse/polynomial.hpp"
#include "tiltfuse/sample.hpp"

namespace tiltfuse {

// Planar robot kinematics and synthetic sensor logs.

struct RobotState {
  double phi = 0.0;       // deg
  double phi_dot = 0.0;   // deg/s
  double phi_ddot = 0.0;  // deg/s^2
  double x_pos = 0.0;     // m
  double v_t = 0.0;       // m/s
  double a_t = 0.0;       // m/s^2

  bool finite() const {
    return std::isfinite(phi) && std::isfinite(phi_dot) && std::isfinite(phi_ddot) && std::isfinite(x_pos) &&
           std::isfinite(v_t) && std::isfinite(a_t);
  }
  friend bool operator==(const RobotState&, const RobotState&) = default;
};

/// Constant-acceleration update over one step; the accelerations carry over
/// unchanged.
inline RobotState step_kinematics(const RobotState& s, double dt) {
  if (!(dt > 0.0)) throw InvalidStateError("step_kinematics: dt must be > 0");
  if (!s.finite()) throw InvalidStateError("step_kinematics: non-finite state");
  RobotState n = s;
  n.phi = s.phi + s.phi_dot * dt + s.phi_ddot * dt * dt / 2.0;
  n.phi_dot = s.phi_dot + s.phi_ddot * dt;
  n.x_pos = s.x_pos + s.v_t * dt + s.a_t * dt * dt / 2.0;
  n.v_t = s.v_t + s.a_t * dt;
  return n;
}

struct GyroErrorModel {
  double bias = 0.0;         // deg/s
  double noise_std = 0.0;    // deg/s
  double saturation = 250.0; // deg/s, symmetric full scale

  void validate() const {
    if (!(noise_std >= 0.0)) throw ParameterError("gyro model: noise_std must be >= 0");
    if (!(saturation > 0.0)) throw ParameterError("gyro model: saturation must be > 0");
  }
};

struct AccelErrorModel {
  double bias_x = 0.0;  // m/s^2
  double bias_y = 0.0;
  ScalePolynomial scale_poly_x = ScalePolynomial::zero();
  ScalePolynomial scale_poly_y = ScalePolynomial::zero();
  double noise_std = 0.0;
  double saturation = 2.0 * kGravity;

  void validate() const {
    if (!(noise_std >= 0.0)) throw ParameterError("accel model: noise_std must be >= 0");
    if (!(saturation > 0.0)) throw ParameterError("accel model: saturation must be > 0");
  }
};

inline GyroErrorModel published_gyro_model(double noise_std = 0.0) { return {-1.91195, noise_std, 250.0}; }

inline AccelErrorModel published_accel_model(double noise_std = 0.0) {
  return {-0.02340, -0.63629, published_scale_poly_x(), published_scale_poly_y(), noise_std, 2.0 * kGravity};
}

inline double synthesize_gyro(double true_rate, const GyroErrorModel& model, GaussianSource& rng) {
  model.validate();
  const double v = true_rate + model.bias + rng.normal(model.noise_std);
  return std::clamp(v, -model.saturation, model.saturation);
}

struct AccelReading {
  double ax = 0.0;
  double ay = 0.0;
};

/// Specific force on the sensor axes for the given state, written so that the
/// correction's arctangent of (ax + a_e + a_t,x) / (ay + a_c - a_t,y) recovers
/// phi. phi_ddot and a_t are taken as the accelerations the sensor senses.
inline AccelReading true_axis_accelerations(const RobotState& s, double R) {
  const double phi = deg2rad(s.phi);
  const double omega = deg2rad(s.phi_dot);
  const double a_e = deg2rad(s.phi_ddot) * R;
  const double a_c = omega * omega * R;
  return {kGravity * std::sin(phi) - a_e - s.a_t * std::cos(phi),
          kGravity * std::cos(phi) - a_c + s.a_t * std::sin(phi)};
}

/// Corrupts the true components with scale-factor error, bias and noise, then
/// clamps to the range. The scale-factor error is applied as the exact
/// inverse of the correction map (see README, "Sensor model").
inline AccelReading synthesize_accel(const RobotState& s, const AccelErrorModel& model,
                                     const CorrectionParams& params, GaussianSource& rng) {
  model.validate();
  const AccelReading truth = true_axis_accelerations(s, params.R);
  const double px = model.scale_poly_x.invert_correction(truth.ax);
  const double py = model.scale_poly_y.invert_correction(truth.ay);
  const double ax = px + model.bias_x + rng.normal(model.noise_std);
  const double ay = py + model.bias_y + rng.normal(model.noise_std);
  return {std::clamp(ax, -model.saturation, model.saturation), std::clamp(ay, -model.saturation, model.saturation)};
}

struct MotionProfile {
  double duration = 1.0;  // s
  double dt = 0.01;       // s
  std::function<double(double)> phi_ddot;  // deg/s^2 as a function of time
  std::function<double(double)> a_t;      // m/s^2
  RobotState initial;

  void validate() const {
    if (!(dt > 0.0)) throw ParameterError("profile: dt must be > 0");
    if (!(duration >= dt)) throw ParameterError("profile: duration must be >= dt");
  }

  std::size_t samples() const { return static_cast<std::size_t>(std::floor(duration / dt + 1e-9)); }

  static MotionProfile stationary(double duration, double dt, double phi0_deg = 0.0) {
    MotionProfile p;
    p.duration = duration;
    p.dt = dt;
    p.phi_ddot = [](double) { return 0.0; };
    p.a_t = [](double) { return 0.0; };
    p.initial.phi = phi0_deg;
    return p;
  }

  struct DynamicShape {
    double phi_amp_deg = 6.0;   // primary tilt swing
    double phi_freq_hz = 0.6;
    double x_amp_m = 0.15;      // back-and-forth travel
    double x_freq_hz = 0.45;
  };

  /// Starts at rest. Tilt phi(t) = A(1 - cos w t) - A/2 (1 - cos 2.7 w t);
  /// travel x(t) = X(1 - cos w_x t).
  static MotionProfile dynamic(double duration, double dt, DynamicShape shape) {
    MotionProfile p;
    p.duration = duration;
    p.dt = dt;
    const double a1 = shape.phi_amp_deg;
    const double w1 = 2.0 * kPi * shape.phi_freq_hz;
    const double a2 = 0.5 * shape.phi_amp_deg;
    const double w2 = 2.7 * w1;
    p.phi_ddot = [=](double t) { return a1 * w1 * w1 * std::cos(w1 * t) - a2 * w2 * w2 * std::cos(w2 * t); };
    const double xa = shape.x_amp_m;
    const double wx = 2.0 * kPi * shape.x_freq_hz;
    p.a_t = [=](double t) { return xa * wx * wx * std::cos(wx * t); };
    return p;
  }
};

struct SimulationRun {
  std::vector<RobotState> truth;
  std::vector<RawSample> log;
};

/// Generators are sampled at interval midpoints. The accelerometer senses
/// the mean angular and translational acceleration over the interval ending
/// at each sample; before the first sample the robot is taken to be at rest.
inline SimulationRun simulate_run(const MotionProfile& profile, const GyroErrorModel& gyro,
                                  const AccelErrorModel& accel, const CorrectionParams& params, std::uint64_t seed,
                                  std::int64_t n_ref = 2000) {
  profile.validate();
  gyro.validate();
  accel.validate();
  if (!(params.R > 0.0)) throw ParameterError("simulate: R must be > 0");
  if (!(params.R_w > 0.0)) throw ParameterError("simulate: R_w must be > 0");
  if (params.N_drive < 1) throw ParameterError("simulate: N_drive must be >= 1");
  if (n_ref < 1) throw ParameterError("simulate: N_ref must be >= 1");

  const std::size_t n = profile.samples();
  const double dt = profile.dt;
  const double pulse_m = 2.0 * kPi * params.R_w / static_cast<double>(params.N_drive);
  const double pulse_deg = 360.0 / static_cast<double>(n_ref);

  GaussianSource rng(seed);
  SimulationRun run;
  run.truth.reserve(n);
  run.log.reserve(n);

  RobotState state = profile.initial;
  double prev_enc = 0.0, prev_ref = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double t = static_cast<double>(k) * dt;
    RobotState sensed;
    if (k == 0) {
      if (!state.finite()) throw SimulationError("non-finite initial state", k);
      sensed = state;
      sensed.phi_ddot = 0.0;
      sensed.a_t = 0.0;
    } else {
      const RobotState& prev = run.truth.back();
      state = step_kinematics(prev, dt);
      sensed = state;
      sensed.phi_ddot = prev.phi_ddot;
      sensed.a_t = prev.a_t;
    }
    state.phi_ddot = profile.phi_ddot ? profile.phi_ddot(t + dt / 2.0) : 0.0;
    state.a_t = profile.a_t ? profile.a_t(t + dt / 2.0) : 0.0;
    if (!state.finite()) throw SimulationError("profile generator produced a non-finite value", k);

    RawSample s;
    s.t = t;
    s.gyro_dps = synthesize_gyro(state.phi_dot, gyro, rng);
    const AccelReading a = synthesize_accel(sensed, accel, params, rng);
    s.acc_x_mps2 = a.ax;
    s.acc_y_mps2 = a.ay;

    // Floor of the accumulated fractional pulse count; the residual carries.
    const double enc = std::floor(state.x_pos / pulse_m);
    const double ref = std::floor((state.phi - profile.initial.phi) / pulse_deg);
    s.enc_count = k == 0 ? 0 : static_cast<std::int64_t>(enc - prev_enc);
    s.ref_count = k == 0 ? 0 : static_cast<std::int64_t>(ref - prev_ref);
    prev_enc = enc;
    prev_ref = ref;

    run.truth.push_back(state);
    run.log.push_back(s);
  }
  return run;
}

}  // namespace tiltfuse
