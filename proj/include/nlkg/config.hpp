#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "nlkg/experiments.hpp"

namespace nlkg {

/// Fully resolved run description.
///
/// Text format: `[section]` headers, `key = value` lines, `#` comments.
/// Sections: model (m, p, d), grid (length, points), integrator (dt, scheme,
/// dealias), soliton (omega, theta, v, x0; repeatable), experiment (Tn, T0,
/// diag_interval, out_dir, alpha_ref, fit_lo, fit_hi), run (seed).
struct RunConfig {
  ModelParams model;
  double length = 160.0;
  std::size_t points = 2048;
  double dt = 0.01;
  std::optional<Scheme> scheme;  // unset: strang for evolve, yoshida4 for multi-soliton runs
  bool dealias = false;
  std::vector<SolitonParams> solitons;
  double Tn = 40.0;
  double T0 = 10.0;
  double diag_interval = 0.5;
  std::string out_dir;
  double alpha_ref = 1.0 / 24.0;
  double fit_lo = std::numeric_limits<double>::quiet_NaN();
  double fit_hi = std::numeric_limits<double>::quiet_NaN();
  std::uint64_t seed = 1;

  std::vector<bool> stable;           // per soliton, stability-window flag
  std::vector<std::string> warnings;  // non-fatal findings (e.g. outside the window)

  Grid grid() const { return Grid(length, points); }
  IntegratorConfig integrator() const;
  MultiSolitonConfig multisoliton() const;
};

/// Parses and validates a configuration. All violations are collected and
/// reported together in one Error(config); syntax errors carry line numbers.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

/// Canonical text of a configuration (17 significant digits); parsing it
/// back reproduces the same values.
std::string to_text(const RunConfig& cfg);

const char* scheme_name(Scheme s) noexcept;

}  // namespace nlkg
