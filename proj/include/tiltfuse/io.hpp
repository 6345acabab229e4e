#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "tiltfuse/correction.hpp"
#include "tiltfuse/error.hpp"
#include "tiltfuse/filters.hpp"
#include "tiltfuse/model.hpp"
#include "tiltfuse/optimize.hpp"
#include "tiltfuse/sample.hpp"
#include "tiltfuse/text.hpp"
#include "tiltfuse/tuning.hpp"

namespace tiltfuse {

// ---------------------------------------------------------------------------
// Raw logs: t,gyro_dps,acc_x_mps2,acc_y_mps2,enc_count[,ref_count]

inline constexpr const char* kLogColumns[] = {"t", "gyro_dps", "acc_x_mps2", "acc_y_mps2", "enc_count", "ref_count"};

/// Streaming reader: validates the header, then yields one sample per call.
/// Only the current line is held in memory.
class LogReader {
 public:
  explicit LogReader(std::istream& in) : in_(in) {
    if (!std::getline(in_, line_)) throw ParseError("missing header", 1);
    line_no_ = 1;
    split_csv(line_, fields_);
    const std::size_t n = fields_.size();
    if (n != 5 && n != 6) throw ParseError("header must have 5 or 6 columns", 1);
    for (std::size_t i = 0; i < n; ++i)
      if (fields_[i] != kLogColumns[i])
        throw ParseError("expected column '" + std::string(kLogColumns[i]) + "', found '" + std::string(fields_[i]) + "'",
                         1, kLogColumns[i]);
    has_ref_ = n == 6;
  }

  bool has_ref() const { return has_ref_; }
  std::size_t line() const { return line_no_; }

  bool next(RawSample& s) {
    while (std::getline(in_, line_)) {
      ++line_no_;
      if (trim(line_).empty()) continue;
      split_csv(line_, fields_);
      const std::size_t want = has_ref_ ? 6 : 5;
      if (fields_.size() != want)
        throw ParseError("expected " + std::to_string(want) + " fields, found " + std::to_string(fields_.size()),
                         line_no_);
      s.t = real(0);
      s.gyro_dps = real(1);
      s.acc_x_mps2 = real(2);
      s.acc_y_mps2 = real(3);
      s.enc_count = count(4);
      s.ref_count = has_ref_ ? count(5) : std::nullopt;
      if (prev_t_ && !(s.t > *prev_t_))
        throw OrderingError("t does not strictly increase (" + format_double(*prev_t_) + " then " +
                                format_double(s.t) + ")",
                            line_no_, "t");
      prev_t_ = s.t;
      return true;
    }
    return false;
  }

 private:
  double real(std::size_t i) const {
    const auto v = parse_double(fields_[i]);
    if (!v || !std::isfinite(*v))
      throw ParseError("not a finite number: '" + std::string(fields_[i]) + "'", line_no_, kLogColumns[i]);
    return *v;
  }
  std::optional<std::int64_t> count(std::size_t i) const {
    if (fields_[i].empty()) return std::nullopt;
    const auto v = parse_int(fields_[i]);
    if (!v) throw ParseError("not an integer: '" + std::string(fields_[i]) + "'", line_no_, kLogColumns[i]);
    return v;
  }

  std::istream& in_;
  std::string line_;
  std::vector<std::string_view> fields_;
  std::size_t line_no_ = 0;
  bool has_ref_ = false;
  std::optional<double> prev_t_;
};

inline std::vector<RawSample> parse_log(std::istream& in) {
  LogReader reader(in);
  std::vector<RawSample> out;
  RawSample s;
  while (reader.next(s)) out.push_back(s);
  return out;
}

inline std::vector<RawSample> parse_log(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw UsageError("cannot open log '" + path + "'");
  return parse_log(f);
}

inline void write_log(std::ostream& out, std::span<const RawSample> log) {
  bool with_ref = false;
  for (const auto& s : log) with_ref = with_ref || s.ref_count.has_value();
  out << "t,gyro_dps,acc_x_mps2,acc_y_mps2,enc_count" << (with_ref ? ",ref_count" : "") << "\n";
  for (const auto& s : log) {
    out << format_double(s.t) << ',' << format_double(s.gyro_dps) << ',' << format_double(s.acc_x_mps2) << ','
        << format_double(s.acc_y_mps2) << ',' << (s.enc_count ? format_int(*s.enc_count) : "");
    if (with_ref) out << ',' << (s.ref_count ? format_int(*s.ref_count) : "");
    out << '\n';
  }
}

inline void write_truth(std::ostream& out, std::span<const RobotState> truth, double dt) {
  out << "t,phi_deg,phi_dot_dps,phi_ddot_dps2,x_m,v_mps,a_t_mps2\n";
  for (std::size_t k = 0; k < truth.size(); ++k) {
    const auto& s = truth[k];
    out << format_double(static_cast<double>(k) * dt) << ',' << format_double(s.phi) << ','
        << format_double(s.phi_dot) << ',' << format_double(s.phi_ddot) << ',' << format_double(s.x_pos) << ','
        << format_double(s.v_t) << ',' << format_double(s.a_t) << '\n';
  }
}

/// One numeric column of any headed CSV.
inline std::vector<double> read_csv_column(std::istream& in, const std::string& column) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError("missing header", 1);
  std::vector<std::string_view> f;
  split_csv(line, f);
  std::size_t idx = f.size();
  for (std::size_t i = 0; i < f.size(); ++i)
    if (f[i] == column) idx = i;
  if (idx == f.size()) throw ParseError("no column named '" + column + "'", 1, column);
  std::vector<double> out;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    split_csv(line, f);
    if (idx >= f.size()) throw ParseError("row too short", line_no, column);
    const auto v = parse_double(f[idx]);
    if (!v) throw ParseError("not a number: '" + std::string(f[idx]) + "'", line_no, column);
    out.push_back(*v);
  }
  return out;
}

inline std::vector<double> read_csv_column(const std::string& path, const std::string& column) {
  std::ifstream f(path);
  if (!f) throw UsageError("cannot open '" + path + "'");
  return read_csv_column(f, column);
}

/// Reference tilt from reference-encoder counts: running sum of 360 n / N_ref
/// from a zero initial angle (the initial angle itself is not emitted).
inline std::vector<double> accumulate_reference(std::span<const std::int64_t> counts, std::int64_t n_ref) {
  if (n_ref < 1) throw ParameterError("accumulate_reference: N_ref must be >= 1");
  std::vector<double> phi(counts.size());
  std::int64_t total = 0;
  for (std::size_t k = 0; k < counts.size(); ++k) {
    total += counts[k];
    phi[k] = 360.0 * static_cast<double>(total) / static_cast<double>(n_ref);
  }
  return phi;
}

inline std::vector<double> reference_from_log(std::span<const RawSample> log, std::int64_t n_ref) {
  std::vector<std::int64_t> counts;
  counts.reserve(log.size());
  for (std::size_t k = 0; k < log.size(); ++k) {
    if (!log[k].ref_count) throw ConfigError("log has no ref_count at sample " + std::to_string(k));
    counts.push_back(*log[k].ref_count);
  }
  return accumulate_reference(counts, n_ref);
}

/// Mean sampling period from the timestamps; ConfigError when it does not
/// match the configured one.
inline void check_sampling_period(std::span<const RawSample> log, double dt_ms) {
  if (log.size() < 2) return;
  const double log_dt_ms = 1000.0 * (log.back().t - log.front().t) / static_cast<double>(log.size() - 1);
  if (std::fabs(log_dt_ms - dt_ms) > 1e-3 * dt_ms)
    throw ConfigError("sampling period mismatch: config dt_ms=" + format_double(dt_ms) +
                      " but log timestamps give dt_ms=" + format_double(log_dt_ms));
}

// ---------------------------------------------------------------------------
// Run configuration: flat key=value text, '#' starts a comment.

struct RunConfig {
  double dt_ms = 10.0;
  std::uint64_t seed = 1;

  double gyro_bias = -1.91195;
  double gyro_noise_std = 0.1;
  double gyro_saturation = 250.0;
  double accel_bias_x = -0.02340;
  double accel_bias_y = -0.63629;
  std::vector<double> poly_x = published_scale_poly_x().coefficients();
  std::vector<double> poly_y = published_scale_poly_y().coefficients();
  double accel_noise_std = 0.04;
  double accel_saturation = 2.0 * kGravity;

  double R_m = 0.135;
  double Rw_m = 0.0375;
  std::optional<std::int64_t> N_drive;
  std::int64_t N_ref = 2000;
  double T_omega = 0.02557;
  double T_v = 0.02045;

  Variant variant = Variant::WB;
  FilterParams filter_params;  // empty: published row for the period

  OptimizerConfig optimizer = default_tuning_config();
  int poly_degree = 5;

  std::string profile = "dynamic";  // dynamic | static
  double duration_s = 30.0;
  double phi0_deg = 0.0;
  double phi_amp_deg = 6.0;
  double phi_freq_hz = 0.6;
  double x_amp_m = 0.15;
  double x_freq_hz = 0.45;

  friend bool operator==(const RunConfig&, const RunConfig&) = default;

  double dt() const { return dt_ms / 1000.0; }

  std::int64_t require_N_drive() const {
    if (!N_drive) throw ConfigError("N_drive is required (drive-encoder pulses per revolution)");
    return *N_drive;
  }

  CorrectionParams correction() const {
    CorrectionParams p;
    p.gyro_bias = gyro_bias;
    p.accel_bias_x = accel_bias_x;
    p.accel_bias_y = accel_bias_y;
    p.scale_poly_x = ScalePolynomial(poly_x);
    p.scale_poly_y = ScalePolynomial(poly_y);
    p.R = R_m;
    p.R_w = Rw_m;
    p.N_drive = require_N_drive();
    p.dt = dt();
    p.T_omega = T_omega;
    p.T_v = T_v;
    p.validate();
    return p;
  }

  GyroErrorModel gyro_model() const { return {gyro_bias, gyro_noise_std, gyro_saturation}; }

  AccelErrorModel accel_model() const {
    return {accel_bias_x, accel_bias_y, ScalePolynomial(poly_x), ScalePolynomial(poly_y), accel_noise_std,
            accel_saturation};
  }

  MotionProfile motion_profile() const {
    if (profile == "static") return MotionProfile::stationary(duration_s, dt(), phi0_deg);
    if (profile != "dynamic") throw ConfigError("profile must be 'dynamic' or 'static', got '" + profile + "'");
    auto p = MotionProfile::dynamic(duration_s, dt(), {phi_amp_deg, phi_freq_hz, x_amp_m, x_freq_hz});
    p.initial.phi = phi0_deg;
    return p;
  }

  FilterParams resolved_filter_params() const {
    return filter_params.empty() ? published_params(variant, dt_ms) : filter_params;
  }

  static FilterParams published_params(Variant v, double dt_ms) {
    const PublishedTuning* best = nullptr;
    for (const auto& row : published_tunings())
      if (row.variant == v && (!best || std::fabs(row.dt_ms - dt_ms) < std::fabs(best->dt_ms - dt_ms))) best = &row;
    return best->params;
  }
};

namespace detail {

inline const std::vector<std::string>& filter_param_keys() {
  static const std::vector<std::string> keys = {"alpha", "beta",  "theta", "gamma",      "T_c",
                                                "q1",    "q2",    "r",     "init_alpha", "init_beta"};
  return keys;
}

}  // namespace detail

/// Applies key=value lines on top of `cfg` (later files override earlier ones).
inline void apply_config(std::istream& in, RunConfig& cfg) {
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = raw;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ParseError("expected key=value", line_no);
    const std::string key(trim(line.substr(0, eq)));
    const std::string_view val = trim(line.substr(eq + 1));
    if (key.empty()) throw ParseError("empty key", line_no);

    auto num = [&] {
      const auto v = parse_double(val);
      if (!v) throw ParseError("not a number: '" + std::string(val) + "'", line_no, key);
      return *v;
    };
    auto integer = [&] {
      const auto v = parse_int(val);
      if (!v) throw ParseError("not an integer: '" + std::string(val) + "'", line_no, key);
      return *v;
    };

    if (key == "dt_ms") cfg.dt_ms = num();
    else if (key == "seed") cfg.seed = static_cast<std::uint64_t>(integer());
    else if (key == "gyro_bias") cfg.gyro_bias = num();
    else if (key == "gyro_noise_std") cfg.gyro_noise_std = num();
    else if (key == "gyro_saturation") cfg.gyro_saturation = num();
    else if (key == "accel_bias_x") cfg.accel_bias_x = num();
    else if (key == "accel_bias_y") cfg.accel_bias_y = num();
    else if (key == "poly_x_degree" || key == "poly_y_degree") {
      const auto d = integer();
      if (d < 0 || d > 10) throw ConfigError(key + " must be 0..10");
      (key[5] == 'x' ? cfg.poly_x : cfg.poly_y).resize(static_cast<std::size_t>(d), 0.0);
    } else if (key.rfind("poly_x_", 0) == 0 || key.rfind("poly_y_", 0) == 0) {
      const auto idx = parse_int(std::string_view(key).substr(7));
      if (!idx || *idx < 1 || *idx > 10) throw ConfigError("line " + std::to_string(line_no) + ": bad key " + key);
      auto& poly = key[5] == 'x' ? cfg.poly_x : cfg.poly_y;
      if (poly.size() < static_cast<std::size_t>(*idx)) poly.resize(static_cast<std::size_t>(*idx), 0.0);
      poly[static_cast<std::size_t>(*idx - 1)] = num();
    } else if (key == "accel_noise_std") cfg.accel_noise_std = num();
    else if (key == "accel_saturation") cfg.accel_saturation = num();
    else if (key == "R_m") cfg.R_m = num();
    else if (key == "Rw_m") cfg.Rw_m = num();
    else if (key == "N_drive") cfg.N_drive = integer();
    else if (key == "N_ref") cfg.N_ref = integer();
    else if (key == "T_omega") cfg.T_omega = num();
    else if (key == "T_v") cfg.T_v = num();
    else if (key == "variant") {
      const Variant v = parse_variant(val);
      if (v != cfg.variant) cfg.filter_params.clear();
      cfg.variant = v;
    } else if (std::find(detail::filter_param_keys().begin(), detail::filter_param_keys().end(), key) !=
               detail::filter_param_keys().end())
      cfg.filter_params[key] = num();
    else if (key == "opt_max_iterations") cfg.optimizer.max_iterations = static_cast<int>(integer());
    else if (key == "opt_initial_scale") cfg.optimizer.initial_scale = num();
    else if (key == "opt_zero_step") cfg.optimizer.zero_step = num();
    else if (key == "opt_f_tol") cfg.optimizer.f_tol = num();
    else if (key == "opt_x_tol") cfg.optimizer.x_tol = num();
    else if (key == "opt_restarts") cfg.optimizer.restarts = static_cast<int>(integer());
    else if (key == "opt_seed") cfg.optimizer.seed = static_cast<std::uint64_t>(integer());
    else if (key == "poly_degree") cfg.poly_degree = static_cast<int>(integer());
    else if (key == "profile") cfg.profile = std::string(val);
    else if (key == "duration_s") cfg.duration_s = num();
    else if (key == "phi0_deg") cfg.phi0_deg = num();
    else if (key == "phi_amp_deg") cfg.phi_amp_deg = num();
    else if (key == "phi_freq_hz") cfg.phi_freq_hz = num();
    else if (key == "x_amp_m") cfg.x_amp_m = num();
    else if (key == "x_freq_hz") cfg.x_freq_hz = num();
    else throw ConfigError("line " + std::to_string(line_no) + ": unknown config key '" + key + "'");
  }
}

inline void validate_config(const RunConfig& c) {
  if (!(c.dt_ms > 0.0)) throw ConfigError("dt_ms must be > 0");
  if (c.N_ref < 1) throw ConfigError("N_ref must be >= 1");
  if (c.N_drive && *c.N_drive < 1) throw ConfigError("N_drive must be >= 1");
  if (c.poly_degree < 1 || c.poly_degree > 10) throw ConfigError("poly_degree must be 1..10");
  if (!(c.duration_s > 0.0)) throw ConfigError("duration_s must be > 0");
  try {
    c.optimizer.validate();
    c.gyro_model().validate();
    c.accel_model().validate();
  } catch (const ParameterError& e) {
    throw ConfigError(e.what());
  }
}

inline RunConfig parse_config(std::istream& in, RunConfig base = {}) {
  apply_config(in, base);
  validate_config(base);
  return base;
}

inline RunConfig load_config(const std::vector<std::string>& paths) {
  RunConfig cfg;
  for (const auto& p : paths) {
    std::ifstream f(p);
    if (!f) throw UsageError("cannot open config '" + p + "'");
    apply_config(f, cfg);
  }
  validate_config(cfg);
  return cfg;
}

/// Every key in a fixed order; parse_config(format_config(c)) == c.
inline std::string format_config(const RunConfig& c) {
  std::ostringstream os;
  auto kv = [&](const std::string& k, const std::string& v) { os << k << '=' << v << '\n'; };
  auto d = [](double v) { return format_double(v); };
  kv("dt_ms", d(c.dt_ms));
  kv("seed", std::to_string(c.seed));
  kv("gyro_bias", d(c.gyro_bias));
  kv("gyro_noise_std", d(c.gyro_noise_std));
  kv("gyro_saturation", d(c.gyro_saturation));
  kv("accel_bias_x", d(c.accel_bias_x));
  kv("accel_bias_y", d(c.accel_bias_y));
  kv("poly_x_degree", std::to_string(c.poly_x.size()));
  for (std::size_t i = 0; i < c.poly_x.size(); ++i) kv("poly_x_" + std::to_string(i + 1), d(c.poly_x[i]));
  kv("poly_y_degree", std::to_string(c.poly_y.size()));
  for (std::size_t i = 0; i < c.poly_y.size(); ++i) kv("poly_y_" + std::to_string(i + 1), d(c.poly_y[i]));
  kv("accel_noise_std", d(c.accel_noise_std));
  kv("accel_saturation", d(c.accel_saturation));
  kv("R_m", d(c.R_m));
  kv("Rw_m", d(c.Rw_m));
  if (c.N_drive) kv("N_drive", std::to_string(*c.N_drive));
  kv("N_ref", std::to_string(c.N_ref));
  kv("T_omega", d(c.T_omega));
  kv("T_v", d(c.T_v));
  kv("variant", std::string(variant_name(c.variant)));
  for (const auto& [k, v] : c.filter_params) kv(k, d(v));
  kv("opt_max_iterations", std::to_string(c.optimizer.max_iterations));
  kv("opt_initial_scale", d(c.optimizer.initial_scale));
  kv("opt_zero_step", d(c.optimizer.zero_step));
  kv("opt_f_tol", d(c.optimizer.f_tol));
  kv("opt_x_tol", d(c.optimizer.x_tol));
  kv("opt_restarts", std::to_string(c.optimizer.restarts));
  kv("opt_seed", std::to_string(c.optimizer.seed));
  kv("poly_degree", std::to_string(c.poly_degree));
  kv("profile", c.profile);
  kv("duration_s", d(c.duration_s));
  kv("phi0_deg", d(c.phi0_deg));
  kv("phi_amp_deg", d(c.phi_amp_deg));
  kv("phi_freq_hz", d(c.phi_freq_hz));
  kv("x_amp_m", d(c.x_amp_m));
  kv("x_freq_hz", d(c.x_freq_hz));
  return os.str();
}

}  // namespace tiltfuse
