#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "tiltfuse/tiltfuse.hpp"

namespace fs = std::filesystem;
using namespace tiltfuse;

namespace {

struct Options {
  std::vector<std::string> configs;
  std::string log;
  std::string out = ".";
  std::string variant;
  std::optional<double> dt_ms;
  std::optional<std::uint64_t> seed;
  bool debug_intermediates = false;
  std::string ref;
  std::string column;
  std::string ref_column = "phi_deg";
  std::string verify_log;
  std::string verify_ref;
};

RunConfig resolve(const Options& o) {
  RunConfig cfg = load_config(o.configs);
  if (!o.variant.empty() && o.variant != "all") {
    const Variant v = parse_variant(o.variant);
    if (v != cfg.variant) cfg.filter_params.clear();
    cfg.variant = v;
  }
  if (o.dt_ms) cfg.dt_ms = *o.dt_ms;
  if (o.seed) cfg.seed = *o.seed;
  validate_config(cfg);
  return cfg;
}

void echo(const RunConfig& cfg, const fs::path& out) {
  const std::string text = format_config(cfg);
  std::cout << "# resolved config (seed=" << cfg.seed << ")\n" << text;
  std::ofstream(out / "resolved.cfg") << text;
}

std::ofstream open_out(const fs::path& p) {
  std::ofstream f(p);
  if (!f) throw UsageError("cannot write '" + p.string() + "'");
  return f;
}

std::vector<RawSample> load_log(const std::string& path) {
  if (path.empty()) throw UsageError("--log is required");
  return parse_log(path);
}

// Reference tilt: a column of a truth CSV, else the reference encoder.
std::vector<double> load_reference(const Options& o, const std::string& ref_path, std::span<const RawSample> log,
                                   const RunConfig& cfg) {
  std::vector<double> ref = ref_path.empty() ? reference_from_log(log, cfg.N_ref) : read_csv_column(ref_path, o.ref_column);
  if (ref.size() != log.size())
    throw ConfigError("reference has " + std::to_string(ref.size()) + " samples, log has " + std::to_string(log.size()));
  return ref;
}

int cmd_simulate(const Options& o, const RunConfig& cfg, const fs::path& out) {
  CorrectionParams params = cfg.correction();
  const auto run = simulate_run(cfg.motion_profile(), cfg.gyro_model(), cfg.accel_model(), params, cfg.seed, cfg.N_ref);
  auto lf = open_out(out / "log.csv");
  write_log(lf, run.log);
  auto tf = open_out(out / "truth.csv");
  write_truth(tf, run.truth, cfg.dt());
  (void)o;
  std::cout << "samples=" << run.log.size() << "\nlog=" << (out / "log.csv").string()
            << "\ntruth=" << (out / "truth.csv").string() << "\n";
  return 0;
}

int cmd_calibrate(const Options& o, const RunConfig& cfg, const fs::path& out) {
  const auto log = load_log(o.log);
  check_sampling_period(log, cfg.dt_ms);
  const auto gyro = estimate_static_bias(std::span<const RawSample>(log), Channel::Gyro);
  std::vector<double> phi = o.ref.empty() ? std::vector<double>(log.size(), cfg.phi0_deg)
                                          : read_csv_column(o.ref, o.ref_column);
  if (phi.size() != log.size()) throw ConfigError("reference length differs from log length");

  RunConfig cal = cfg;
  cal.gyro_bias = gyro.mean;
  std::ostringstream summary;
  summary << "gyro_bias mean=" << format_double(gyro.mean) << " min=" << format_double(gyro.min)
          << " max=" << format_double(gyro.max) << " std=" << format_double(gyro.stddev) << "\n";

  for (const bool x_axis : {true, false}) {
    const auto a = channel_values(log, x_axis ? Channel::AccX : Channel::AccY);
    KahanSum off;
    for (std::size_t k = 0; k < a.size(); ++k) {
      const double phi_r = deg2rad(phi[k]);
      off.add(a[k] - kGravity * (x_axis ? std::sin(phi_r) : std::cos(phi_r)));
    }
    const double bias = off.value() / static_cast<double>(a.size());
    (x_axis ? cal.accel_bias_x : cal.accel_bias_y) = bias;
    const auto pairs = calibration_pairs(phi, a, bias, x_axis);
    const char axis = x_axis ? 'x' : 'y';
    summary << "accel_bias_" << axis << "=" << format_double(bias) << "\n";
    try {
      const auto fits = fit_scale_factor_degrees(pairs, static_cast<std::size_t>(cfg.poly_degree));
      for (std::size_t d = 0; d < fits.size(); ++d)
        summary << "poly_" << axis << " degree " << d + 1 << " mse=" << format_double(fits[d].mse)
                << " bias_only_mse=" << format_double(fits[d].bias_only_mse) << "\n";
      (x_axis ? cal.poly_x : cal.poly_y) = fits.back().poly.coefficients();
    } catch (const FittingError& e) {
      summary << "poly_" << axis << " not fitted: " << e.what() << "\n";
      (x_axis ? cal.poly_x : cal.poly_y).assign(1, 0.0);
    }
  }
  std::cout << summary.str();
  auto f = open_out(out / "calibration.cfg");
  f << "gyro_bias=" << format_double(cal.gyro_bias) << "\naccel_bias_x=" << format_double(cal.accel_bias_x)
    << "\naccel_bias_y=" << format_double(cal.accel_bias_y) << "\n";
  for (const auto& [name, poly] : {std::pair{"x", &cal.poly_x}, std::pair{"y", &cal.poly_y}}) {
    f << "poly_" << name << "_degree=" << poly->size() << "\n";
    for (std::size_t i = 0; i < poly->size(); ++i)
      f << "poly_" << name << "_" << i + 1 << "=" << format_double((*poly)[i]) << "\n";
  }
  return 0;
}

int cmd_tune(const Options& o, const RunConfig& cfg, const fs::path& out) {
  const auto log = load_log(o.log);
  check_sampling_period(log, cfg.dt_ms);
  const auto params = cfg.correction();
  const auto ref = load_reference(o, o.ref, log, cfg);
  const auto stream = correct_log(log, params);

  std::vector<RawSample> vlog;
  std::vector<double> vref;
  std::vector<CorrectedSample> vstream;
  if (!o.verify_log.empty()) {
    vlog = parse_log(o.verify_log);
    check_sampling_period(vlog, cfg.dt_ms);
    vref = load_reference(o, o.verify_ref, vlog, cfg);
    vstream = correct_log(vlog, params);
  }

  std::vector<Variant> variants;
  if (o.variant == "all")
    variants.assign(std::begin(kAllVariants), std::end(kAllVariants));
  else
    variants.push_back(cfg.variant);

  std::vector<TuningResult> results;
  for (const Variant v : variants) {
    TuneOptions opt;
    opt.gyro_bias = params.gyro_bias;
    if (v == cfg.variant && !cfg.filter_params.empty()) {
      FilterParams seed;
      for (const auto& n : parameter_names(v))
        if (cfg.filter_params.count(n)) seed[n] = cfg.filter_params.at(n);
      if (seed.size() == parameter_names(v).size()) opt.seed = seed;
      if (cfg.filter_params.count("init_alpha") && cfg.filter_params.count("init_beta"))
        opt.kalman_init_gains = std::pair{cfg.filter_params.at("init_alpha"), cfg.filter_params.at("init_beta")};
    }
    opt.verification = vstream;
    opt.verification_ref = vref;
    results.push_back(tune_filter(v, stream, ref, cfg.dt(), cfg.optimizer, opt));
  }

  ReportMeta meta;
  meta.training_log = o.log;
  meta.verification_log = o.verify_log;
  meta.seed = cfg.seed;
  const Report rep = make_report(results, meta);
  std::cout << rep.text;
  open_out(out / "tuning.txt") << rep.text;
  open_out(out / "tuning.csv") << rep.csv;
  if (results.size() == 1) {
    RunConfig tuned = cfg;
    tuned.filter_params = results.front().parameters;
    open_out(out / "tuned.cfg") << format_config(tuned);
  }
  return 0;
}

int cmd_run(const Options& o, const RunConfig& cfg, const fs::path& out) {
  const auto log = load_log(o.log);
  check_sampling_period(log, cfg.dt_ms);
  const auto params = cfg.correction();
  const auto stream = correct_log(log, params);
  const FilterSpec spec = make_filter(cfg.variant, cfg.resolved_filter_params(), cfg.dt());
  const auto est = run_filter(spec, stream, params.gyro_bias);
  bool has_ref = !log.empty();
  for (const auto& s : log) has_ref = has_ref && s.ref_count.has_value();
  const auto ref = has_ref ? reference_from_log(log, cfg.N_ref) : std::vector<double>{};

  auto f = open_out(out / "estimate.csv");
  f << "t,phi_raw_deg,phi_bar_deg,rate_bar_dps,phi_hat_deg";
  if (has_ref) f << ",phi_ref_deg";
  if (o.debug_intermediates) f << ",a_c_mps2,a_e_mps2,a_t_mps2,a_t_x_mps2,a_t_y_mps2,degenerate_tilt,encoder_missing";
  f << "\n";
  for (std::size_t k = 0; k < stream.size(); ++k) {
    const auto& c = stream[k];
    f << format_double(c.t) << ',' << format_double(c.phi_raw) << ',' << format_double(c.phi_bar) << ','
      << format_double(c.rate_bar) << ',' << format_double(est[k]);
    if (has_ref) f << ',' << format_double(ref[k]);
    if (o.debug_intermediates)
      f << ',' << format_double(c.a_c) << ',' << format_double(c.a_e) << ',' << format_double(c.a_t) << ','
        << format_double(c.a_t_x) << ',' << format_double(c.a_t_y) << ',' << int(c.degenerate_tilt) << ','
        << int(c.encoder_missing);
    f << "\n";
  }
  const auto st = check_stability(spec);
  std::cout << "variant=" << variant_name(cfg.variant) << "\nstability=" << stability_name(st.status)
            << "\nsamples=" << stream.size() << "\nestimate=" << (out / "estimate.csv").string() << "\n";
  return 0;
}

int cmd_eval(const Options& o, const RunConfig&, const fs::path& out) {
  if (o.log.empty()) throw UsageError("--log is required");
  const std::string column = o.column.empty() ? "phi_hat_deg" : o.column;
  const auto est = read_csv_column(o.log, column);
  const auto ref = o.ref.empty() ? read_csv_column(o.log, "phi_ref_deg") : read_csv_column(o.ref, o.ref_column);
  const double m = mse(ref, est);
  const std::string line = "mse(" + column + ")=" + format_double(m) + "\n";
  std::cout << line;
  open_out(out / "eval.txt") << line;
  return 0;
}

int cmd_spectrum(const Options& o, const RunConfig& cfg, const fs::path& out) {
  if (o.log.empty()) throw UsageError("--log is required");
  const std::string column = o.column.empty() ? "phi_bar_deg" : o.column;
  auto signal = read_csv_column(o.log, column);
  if (!o.ref.empty()) {
    const auto ref = read_csv_column(o.ref, o.ref_column);
    if (ref.size() != signal.size()) throw ConfigError("reference length differs from signal length");
    for (std::size_t k = 0; k < signal.size(); ++k) signal[k] -= ref[k];
  }
  const Spectrum sp = noise_spectrum(signal, cfg.dt());
  auto f = open_out(out / "spectrum.csv");
  f << "frequency_hz,magnitude\n";
  for (std::size_t k = 0; k < sp.frequencies.size(); ++k)
    f << format_double(sp.frequencies[k]) << ',' << format_double(sp.magnitudes[k]) << "\n";
  std::cout << "n_samples=" << sp.n_samples << "\nn_fft=" << sp.n_fft << "\narea=" << format_double(spectrum_area(sp))
            << "\nenergy=" << format_double(spectrum_energy(sp)) << "\nspectrum=" << (out / "spectrum.csv").string()
            << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Tilt estimation toolkit: simulate, calibrate, tune, run, eval, spectrum"};
  app.require_subcommand(1);
  Options o;
  const std::vector<std::string> commands = {"simulate", "calibrate", "tune", "run", "eval", "spectrum"};
  for (const auto& name : commands) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("--config", o.configs, "key=value config file; repeatable, later files override");
    sub->add_option("--log", o.log, "input CSV");
    sub->add_option("--out", o.out, "output directory");
    sub->add_option("--variant", o.variant, "filter variant (tune also accepts 'all')");
    sub->add_option("--dt-ms", o.dt_ms, "sampling period in ms");
    sub->add_option("--seed", o.seed, "random seed");
    sub->add_flag("--debug-intermediates", o.debug_intermediates, "write correction intermediates");
    sub->add_option("--ref", o.ref, "reference CSV (defaults to the log's reference encoder)");
    sub->add_option("--ref-column", o.ref_column, "reference column name");
    sub->add_option("--column", o.column, "signal column name");
    sub->add_option("--verify-log", o.verify_log, "verification log for tune");
    sub->add_option("--verify-ref", o.verify_ref, "verification reference CSV for tune");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return static_cast<int>(ErrorClass::Usage);
  }

  const std::string cmd = app.get_subcommands().front()->get_name();
  try {
    const RunConfig cfg = resolve(o);
    const fs::path out(o.out);
    fs::create_directories(out);
    echo(cfg, out);
    if (cmd == "simulate") return cmd_simulate(o, cfg, out);
    if (cmd == "calibrate") return cmd_calibrate(o, cfg, out);
    if (cmd == "tune") return cmd_tune(o, cfg, out);
    if (cmd == "run") return cmd_run(o, cfg, out);
    if (cmd == "eval") return cmd_eval(o, cfg, out);
    return cmd_spectrum(o, cfg, out);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return static_cast<int>(e.error_class());
  } catch (const fs::filesystem_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return static_cast<int>(ErrorClass::Usage);
  }
}
