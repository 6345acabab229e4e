#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "tiltfuse/error.hpp"
#include "tiltfuse/filters.hpp"
#include "tiltfuse/text.hpp"
#include "tiltfuse/tuning.hpp"

namespace tiltfuse {

// Tuning tables: one row per (variant, sampling period), in the layout of the
// published parameter table, plus a CSV that parses back exactly.

inline const std::vector<std::string>& report_parameter_columns() {
  static const std::vector<std::string> cols = {"alpha", "beta", "theta", "gamma", "T_c", "q1", "q2", "r"};
  return cols;
}

struct ReportRow {
  Variant variant = Variant::WB;
  double dt_ms = 0.0;
  FilterParams parameters;
  double training_mse = 0.0;
  double verification_mse = std::numeric_limits<double>::quiet_NaN();
  std::string stability;  // stable | marginal | unstable | n/a
  double spectral_radius = std::numeric_limits<double>::quiet_NaN();
  int iterations = 0;
  bool converged = false;
};

struct ReportMeta {
  std::string title = "Filter tuning";
  std::string training_log;
  std::string verification_log;
  std::optional<std::uint64_t> seed;
};

struct Report {
  std::string text;
  std::string csv;
  std::vector<ReportRow> rows;
};

inline ReportRow report_row(const TuningResult& r) {
  ReportRow row;
  row.variant = r.variant;
  row.dt_ms = r.dt * 1000.0;
  row.parameters = r.parameters;
  row.training_mse = r.training_mse;
  row.verification_mse = r.verification_mse;
  row.iterations = r.iterations;
  row.converged = r.converged;
  if (r.stability) {
    row.stability = std::string(stability_name(r.stability->status));
    row.spectral_radius = r.stability->spectral_radius;
  } else {
    row.stability = "n/a";
  }
  return row;
}

inline std::string report_csv_header() {
  std::string h = "variant,dt_ms";
  for (const auto& c : report_parameter_columns()) h += "," + c;
  return h + ",training_mse,verification_mse,stability,spectral_radius,iterations,converged";
}

inline std::string report_csv(const std::vector<ReportRow>& rows) {
  std::string out = report_csv_header() + "\n";
  for (const auto& r : rows) {
    out += std::string(variant_name(r.variant)) + "," + format_double(r.dt_ms);
    for (const auto& c : report_parameter_columns()) {
      out += ",";
      if (const auto it = r.parameters.find(c); it != r.parameters.end()) out += format_double(it->second);
    }
    out += "," + format_double(r.training_mse) + "," + format_double(r.verification_mse) + "," + r.stability + "," +
           format_double(r.spectral_radius) + "," + std::to_string(r.iterations) + "," +
           (r.converged ? "true" : "false") + "\n";
  }
  return out;
}

inline std::vector<ReportRow> parse_report_csv(std::istream& in) {
  std::string line;
  std::size_t line_no = 1;
  if (!std::getline(in, line)) throw ParseError("empty report", 1);
  if (trim(line) != report_csv_header()) throw ParseError("unexpected report header", 1);
  const auto& pcols = report_parameter_columns();
  std::vector<std::string_view> f;
  std::vector<ReportRow> rows;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    split_csv(line, f);
    if (f.size() != 2 + pcols.size() + 6) throw ParseError("wrong number of fields", line_no);
    auto num = [&](std::size_t i, const std::string& col) {
      const auto v = parse_double(f[i]);
      if (!v) throw ParseError("not a number: '" + std::string(f[i]) + "'", line_no, col);
      return *v;
    };
    ReportRow r;
    try {
      r.variant = parse_variant(f[0]);
    } catch (const ConfigError&) {
      throw ParseError("unknown variant '" + std::string(f[0]) + "'", line_no, "variant");
    }
    r.dt_ms = num(1, "dt_ms");
    for (std::size_t i = 0; i < pcols.size(); ++i)
      if (!f[2 + i].empty()) r.parameters[pcols[i]] = num(2 + i, pcols[i]);
    std::size_t j = 2 + pcols.size();
    r.training_mse = num(j, "training_mse");
    r.verification_mse = num(j + 1, "verification_mse");
    r.stability = std::string(f[j + 2]);
    r.spectral_radius = num(j + 3, "spectral_radius");
    const auto it = parse_int(f[j + 4]);
    if (!it) throw ParseError("not an integer", line_no, "iterations");
    r.iterations = static_cast<int>(*it);
    if (f[j + 5] != "true" && f[j + 5] != "false") throw ParseError("expected true/false", line_no, "converged");
    r.converged = f[j + 5] == "true";
    rows.push_back(std::move(r));
  }
  return rows;
}

inline std::string report_text(const std::vector<ReportRow>& rows, const ReportMeta& meta) {
  std::ostringstream os;
  os << meta.title << "\n";
  if (!meta.training_log.empty()) os << "training log: " << meta.training_log << "\n";
  if (!meta.verification_log.empty()) os << "verification log: " << meta.verification_log << "\n";
  if (meta.seed) os << "seed: " << *meta.seed << "\n";
  char buf[256];
  std::snprintf(buf, sizeof buf, "%-14s %6s  %-44s %14s %14s  %-9s\n", "filter", "dt[ms]", "parameters",
                "MSE training", "MSE verif.", "stability");
  os << buf << std::string(108, '-') << "\n";
  Variant prev = rows.empty() ? Variant::WB : rows.front().variant;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    if (i > 0 && r.variant != prev) os << "\n";
    prev = r.variant;
    std::string params;
    for (const auto& name : parameter_names(r.variant)) {
      const auto it = r.parameters.find(name);
      if (it == r.parameters.end()) continue;
      char p[64];
      std::snprintf(p, sizeof p, "%s%s=%.5f", params.empty() ? "" : " ", name.c_str(), it->second);
      params += p;
    }
    std::snprintf(buf, sizeof buf, "%-14s %6g  %-44s %14.5f %14.5f  %-9s\n", std::string(variant_name(r.variant)).c_str(),
                  r.dt_ms, params.c_str(), r.training_mse, r.verification_mse, r.stability.c_str());
    os << buf;
  }
  return os.str();
}

/// Rows ordered by variant then sampling period.
inline Report make_report(const std::vector<TuningResult>& results, const ReportMeta& meta = {}) {
  if (results.empty()) throw InvalidStateError("make_report: no results");
  Report rep;
  for (const auto& r : results) rep.rows.push_back(report_row(r));
  std::stable_sort(rep.rows.begin(), rep.rows.end(), [](const ReportRow& a, const ReportRow& b) {
    if (a.variant != b.variant) return static_cast<int>(a.variant) < static_cast<int>(b.variant);
    return a.dt_ms < b.dt_ms;
  });
  rep.text = report_text(rep.rows, meta);
  rep.csv = report_csv(rep.rows);
  return rep;
}

/// Plot-ready trajectories: reference, raw arctangent, corrected and filtered tilt.
inline std::string trajectory_csv(const std::vector<double>& t, const std::vector<double>& phi_ref,
                                  const std::vector<double>& phi_raw, const std::vector<double>& phi_bar,
                                  const std::vector<double>& phi_hat) {
  const std::size_t n = t.size();
  if (phi_ref.size() != n || phi_raw.size() != n || phi_bar.size() != n || phi_hat.size() != n)
    throw InvalidStateError("trajectory_csv: length mismatch");
  std::string out = "t,phi_ref_deg,phi_raw_deg,phi_bar_deg,phi_hat_deg\n";
  for (std::size_t k = 0; k < n; ++k)
    out += format_double(t[k]) + "," + format_double(phi_ref[k]) + "," + format_double(phi_raw[k]) + "," +
           format_double(phi_bar[k]) + "," + format_double(phi_hat[k]) + "\n";
  return out;
}

}  // namespace tiltfuse
