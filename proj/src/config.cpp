#include "nlkg/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>

#include "nlkg/errors.hpp"

namespace nlkg {

IntegratorConfig RunConfig::integrator() const {
  IntegratorConfig c;
  c.dt = dt;
  c.scheme = scheme.value_or(Scheme::strang);
  c.dealias = dealias;
  return c;
}

MultiSolitonConfig RunConfig::multisoliton() const {
  MultiSolitonConfig c;
  c.model = model;
  c.solitons = solitons;
  c.Tn = Tn;
  c.T0 = T0;
  c.dt = dt;
  c.scheme = scheme.value_or(Scheme::yoshida4);
  c.dealias = dealias;
  c.alpha_ref = alpha_ref;
  c.length = length;
  c.points = points;
  c.diag_interval = diag_interval;
  c.fit_lo = fit_lo;
  c.fit_hi = fit_hi;
  return c;
}

const char* scheme_name(Scheme s) noexcept {
  return s == Scheme::yoshida4 ? "yoshida4" : "strang";
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

bool parse_double(const std::string& text, double& out) {
  const char* first = text.data();
  const char* last = first + text.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last && std::isfinite(out);
}

bool parse_uint(const std::string& text, std::uint64_t& out) {
  const char* first = text.data();
  const char* last = first + text.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last;
}

struct Collector {
  std::vector<std::string> issues;
  void add(int line, const std::string& what) {
    std::ostringstream os;
    if (line > 0) os << "line " << line << ": ";
    os << what;
    issues.push_back(os.str());
  }
};

}  // namespace

RunConfig parse_config(const std::string& text) {
  RunConfig cfg;
  Collector errs;
  std::istringstream in(text);
  std::string raw, section;
  int line_no = 0;
  std::map<std::string, int> seen;  // section.key -> line, for duplicates outside [soliton]
  std::map<std::string, int> soliton_seen;
  SolitonParams* current = nullptr;

  auto number = [&](const std::string& key, const std::string& value, double& dst) {
    if (!parse_double(value, dst)) errs.add(line_no, "'" + key + "' expects a real number, got '" + value + "'");
  };

  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = raw;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') {
        errs.add(line_no, "unterminated section header");
        continue;
      }
      section = trim(line.substr(1, line.size() - 2));
      static const char* known[] = {"model", "grid", "integrator", "soliton", "experiment", "run"};
      bool ok = false;
      for (const char* k : known) ok = ok || section == k;
      if (!ok) errs.add(line_no, "unknown section [" + section + "]");
      if (section == "soliton") {
        cfg.solitons.emplace_back();
        current = &cfg.solitons.back();
        soliton_seen.clear();
      } else {
        current = nullptr;
      }
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      errs.add(line_no, "expected 'key = value'");
      continue;
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty()) {
      errs.add(line_no, "expected 'key = value'");
      continue;
    }
    if (section.empty()) {
      errs.add(line_no, "key '" + key + "' outside of any section");
      continue;
    }
    auto& dup = (section == "soliton") ? soliton_seen : seen;
    const std::string full = section + "." + key;
    if (dup.count(full)) {
      errs.add(line_no, "duplicate key '" + key + "' in [" + section + "]");
      continue;
    }
    dup[full] = line_no;

    if (section == "model") {
      if (key == "m") {
        number(key, value, cfg.model.m);
      } else if (key == "p") {
        number(key, value, cfg.model.p);
      } else if (key == "d") {
        std::uint64_t d = 0;
        if (!parse_uint(value, d)) errs.add(line_no, "'d' expects an integer");
        cfg.model.d = static_cast<int>(d);
      } else {
        errs.add(line_no, "unknown key '" + key + "' in [model]");
      }
    } else if (section == "grid") {
      if (key == "length") {
        number(key, value, cfg.length);
      } else if (key == "points") {
        std::uint64_t n = 0;
        if (!parse_uint(value, n)) errs.add(line_no, "'points' expects a positive integer");
        cfg.points = n;
      } else {
        errs.add(line_no, "unknown key '" + key + "' in [grid]");
      }
    } else if (section == "integrator") {
      if (key == "dt") {
        number(key, value, cfg.dt);
      } else if (key == "scheme") {
        if (value == "strang") {
          cfg.scheme = Scheme::strang;
        } else if (value == "yoshida4") {
          cfg.scheme = Scheme::yoshida4;
        } else {
          errs.add(line_no, "'scheme' must be strang or yoshida4");
        }
      } else if (key == "dealias") {
        if (value == "true" || value == "1") {
          cfg.dealias = true;
        } else if (value == "false" || value == "0") {
          cfg.dealias = false;
        } else {
          errs.add(line_no, "'dealias' must be true or false");
        }
      } else {
        errs.add(line_no, "unknown key '" + key + "' in [integrator]");
      }
    } else if (section == "soliton") {
      if (key == "omega") {
        number(key, value, current->omega);
      } else if (key == "theta") {
        number(key, value, current->theta);
      } else if (key == "v") {
        number(key, value, current->v);
      } else if (key == "x0") {
        number(key, value, current->x0);
      } else {
        errs.add(line_no, "unknown key '" + key + "' in [soliton]");
      }
    } else if (section == "experiment") {
      if (key == "Tn") {
        number(key, value, cfg.Tn);
      } else if (key == "T0") {
        number(key, value, cfg.T0);
      } else if (key == "diag_interval") {
        number(key, value, cfg.diag_interval);
      } else if (key == "out_dir") {
        cfg.out_dir = value;
      } else if (key == "alpha_ref") {
        number(key, value, cfg.alpha_ref);
      } else if (key == "fit_lo") {
        number(key, value, cfg.fit_lo);
      } else if (key == "fit_hi") {
        number(key, value, cfg.fit_hi);
      } else {
        errs.add(line_no, "unknown key '" + key + "' in [experiment]");
      }
    } else if (section == "run") {
      if (key == "seed") {
        if (!parse_uint(value, cfg.seed)) errs.add(line_no, "'seed' expects a non-negative integer");
      } else {
        errs.add(line_no, "unknown key '" + key + "' in [run]");
      }
    }
  }

  // Semantic checks, all collected.
  const auto& md = cfg.model;
  if (!(md.m > 0.0)) errs.add(0, "model.m must be positive");
  if (md.d != 1) errs.add(0, "model.d must be 1 for runs (dynamics are one-dimensional)");
  if (!(md.p > 1.0) || !(md.p < 1.0 + 4.0 / std::max(md.d, 1))) {
    errs.add(0, "model.p must satisfy 1 < p < 1 + 4/d");
  }
  if (!(cfg.length > 0.0)) errs.add(0, "grid.length must be positive");
  if (cfg.points < 4) errs.add(0, "grid.points must be at least 4");
  if (cfg.length > 0.0 && cfg.points >= 4) {
    const double spacing = cfg.length / static_cast<double>(cfg.points);
    if (!(cfg.dt > 0.0)) {
      errs.add(0, "integrator.dt must be positive");
    } else if (cfg.dt > 0.5 * spacing) {
      errs.add(0, "integrator.dt exceeds the stability bound 0.5 * spacing");
    }
  }
  for (std::size_t j = 0; j < cfg.solitons.size(); ++j) {
    auto& s = cfg.solitons[j];
    s.model = cfg.model;
    std::ostringstream tag;
    tag << "soliton " << j + 1 << ": ";
    if (!(std::abs(s.v) < 1.0)) errs.add(0, tag.str() + "|v| < 1 violated");
    if (md.m > 0.0 && !(std::abs(s.omega) < std::sqrt(md.m))) {
      errs.add(0, tag.str() + "omega outside (-sqrt(m), sqrt(m))");
    }
    for (std::size_t k = 0; k < j; ++k) {
      if (cfg.solitons[k].v == s.v) {
        std::ostringstream os;
        os << tag.str() << "velocity equals that of soliton " << k + 1
           << "; velocities must be pairwise distinct (distinct-velocity hypothesis)";
        errs.add(0, os.str());
      }
    }
  }
  if (!(cfg.T0 > 0.0)) errs.add(0, "experiment.T0 must be positive");
  if (!(cfg.Tn > cfg.T0)) errs.add(0, "experiment.Tn must exceed experiment.T0");
  if (!(cfg.diag_interval > 0.0)) errs.add(0, "experiment.diag_interval must be positive");
  if (!(cfg.alpha_ref > 0.0)) errs.add(0, "experiment.alpha_ref must be positive");

  if (!errs.issues.empty()) {
    std::ostringstream os;
    os << "configuration has " << errs.issues.size() << " problem(s):";
    for (const auto& s : errs.issues) os << "\n  " << s;
    fail(ErrorKind::config, os.str());
  }

  for (std::size_t j = 0; j < cfg.solitons.size(); ++j) {
    const bool ok = cfg.solitons[j].stable();
    cfg.stable.push_back(ok);
    if (!ok) {
      std::ostringstream os;
      os << "soliton " << j + 1 << ": omega^2/m = "
         << cfg.solitons[j].omega * cfg.solitons[j].omega / md.m
         << " is outside the stability window (threshold " << md.stability_threshold() << ")";
      cfg.warnings.push_back(os.str());
    }
  }
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::io, "cannot open config file " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return parse_config(os.str());
}

std::string to_text(const RunConfig& cfg) {
  std::ostringstream os;
  os << std::setprecision(17);
  os << "[model]\nm = " << cfg.model.m << "\np = " << cfg.model.p << "\nd = " << cfg.model.d << "\n\n";
  os << "[grid]\nlength = " << cfg.length << "\npoints = " << cfg.points << "\n\n";
  os << "[integrator]\ndt = " << cfg.dt << "\n";
  if (cfg.scheme) os << "scheme = " << scheme_name(*cfg.scheme) << "\n";
  os << "dealias = " << (cfg.dealias ? "true" : "false") << "\n\n";
  for (const auto& s : cfg.solitons) {
    os << "[soliton]\nomega = " << s.omega << "\ntheta = " << s.theta << "\nv = " << s.v
       << "\nx0 = " << s.x0 << "\n\n";
  }
  os << "[experiment]\nTn = " << cfg.Tn << "\nT0 = " << cfg.T0
     << "\ndiag_interval = " << cfg.diag_interval << "\nalpha_ref = " << cfg.alpha_ref << "\n";
  if (!cfg.out_dir.empty()) os << "out_dir = " << cfg.out_dir << "\n";
  if (!std::isnan(cfg.fit_lo)) os << "fit_lo = " << cfg.fit_lo << "\n";
  if (!std::isnan(cfg.fit_hi)) os << "fit_hi = " << cfg.fit_hi << "\n";
  os << "\n[run]\nseed = " << cfg.seed << "\n";
  return os.str();
}

}  // namespace nlkg
