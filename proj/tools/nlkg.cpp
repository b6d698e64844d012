#include <cmath>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "nlkg/config.hpp"
#include "nlkg/errors.hpp"
#include "nlkg/experiments.hpp"
#include "nlkg/functionals.hpp"
#include "nlkg/io.hpp"
#include "nlkg/modulation.hpp"
#include "nlkg/profiles.hpp"
#include "nlkg/spectrum.hpp"

namespace fs = std::filesystem;
using namespace nlkg;

namespace {

struct ModelOptions {
  double m = 1.0;
  double p = 3.0;
  int d = 1;

  void attach(CLI::App* app) {
    app->add_option("--m", m, "mass parameter")->capture_default_str();
    app->add_option("--p", p, "nonlinearity exponent")->capture_default_str();
  }
  ModelParams model() const { return {m, p, d}; }
};

std::string params_text(const std::vector<std::pair<std::string, double>>& kv) {
  std::ostringstream os;
  os << std::setprecision(17);
  for (const auto& [k, v] : kv) os << k << " = " << v << "\n";
  return os.str();
}

void print_warnings(const RunConfig& cfg) {
  for (const auto& w : cfg.warnings) std::cerr << "warning: " << w << "\n";
}

Table trajectory_modulation_table(const ParameterTrack& track) {
  Table t;
  t.columns = {"t"};
  const std::size_t n = track.states.empty() ? 0 : track.states.front().solitons.size();
  for (std::size_t j = 1; j <= n; ++j) {
    const auto s = std::to_string(j);
    t.columns.insert(t.columns.end(), {"theta_" + s, "omega_" + s, "x_" + s, "domega_" + s,
                                       "dtheta_minus_omega_over_gamma_" + s, "dx_minus_v_" + s});
  }
  t.columns.push_back("residual_norm");
  for (std::size_t k = 0; k < track.states.size(); ++k) {
    RealVector row{track.times[k]};
    for (std::size_t j = 0; j < n; ++j) {
      const auto& s = track.states[k].solitons[j];
      row.insert(row.end(), {s.theta, s.omega, s.x, track.omega_rate[k][j], track.phase_rate[k][j],
                             track.center_rate[k][j]});
    }
    row.push_back(track.residual_norms[k]);
    t.rows.push_back(std::move(row));
  }
  return t;
}

int cmd_groundstate(const ModelOptions& mo, double omega, double length, std::size_t points,
                    double rmax, std::size_t nodes, const std::string& out) {
  const ModelParams model = mo.model();
  const fs::path dir = resolve_output_dir(out, "groundstate");
  Table t;
  double norm_sq = 0.0, grad_sq = 0.0;
  double residual = 0.0;
  if (model.d == 1) {
    const Grid grid(length, points);
    const GroundState gs = ground_state_1d(model, omega, grid);
    t.columns = {"x", "phi", "dphi"};
    for (std::size_t i = 0; i < points; ++i) {
      const double x = grid.x(i);
      const double d = x < 0 ? -gs.derivative(-x) : gs.derivative(x);
      t.rows.push_back({x, gs.samples[i], d});
      norm_sq += gs.samples[i] * gs.samples[i] * grid.spacing();
      grad_sq += d * d * grid.spacing();
    }
    residual = gs.residual;
  } else {
    const GroundState gs = ground_state_radial(model, omega, rmax, nodes);
    t.columns = {"r", "phi", "dphi"};
    for (std::size_t i = 0; i < gs.nodes.size(); ++i) {
      t.rows.push_back({gs.nodes[i], gs.samples[i], gs.derivative(gs.nodes[i])});
    }
    residual = gs.residual;
  }
  write_csv(dir / "profile.csv", t);
  write_text(dir / "params.txt", params_text({{"m", model.m}, {"p", model.p}, {"d", double(model.d)},
                                               {"omega", omega}, {"length", length},
                                               {"points", double(points)}, {"rmax", rmax},
                                               {"nodes", double(nodes)}}));
  std::cout << std::setprecision(12) << "phi(0) = " << t.rows[model.d == 1 ? points / 2 : 0][1]
            << "\nresidual = " << residual << "\n";
  if (model.d == 1) std::cout << "|phi|^2 = " << norm_sq << "\n|phi'|^2 = " << grad_sq << "\n";
  std::cout << "wrote " << dir.string() << "\n";
  return 0;
}

int cmd_soliton(const ModelOptions& mo, double omega, double v, double theta, double x0,
                double length, std::size_t points, const std::string& out) {
  const ModelParams model = mo.model();
  const Grid grid(length, points);
  const SolitonParams sp{model, omega, theta, v, x0};
  sp.validate();
  const Field phi = soliton_field(model, omega, v, theta, x0, grid);
  const ActionParams ap = ActionParams::for_soliton(sp);
  const fs::path dir = resolve_output_dir(out, "soliton");
  write_field(dir / "soliton.field", phi, 0.0);
  write_text(dir / "params.txt", params_text({{"m", model.m}, {"p", model.p}, {"omega", omega},
                                               {"v", v}, {"theta", theta}, {"x0", x0},
                                               {"length", length}, {"points", double(points)}}));
  const Field g = action_gradient(phi, ap);
  std::cout << std::setprecision(12) << "E = " << energy(phi, model) << "\nQ = " << charge(phi)
            << "\nP = " << momentum(phi) << "\nS = " << action(phi, ap)
            << "\n|S'| = " << norm_L2L2(g)
            << "\nNehari = " << nehari_value(phi, ap) << "\nstable = " << (sp.stable() ? "yes" : "no")
            << "\nwrote " << dir.string() << "\n";
  return 0;
}

int cmd_evolve(const std::string& config_path, const std::string& input, double t_end,
               double interval, const std::string& out) {
  RunConfig cfg = load_config(config_path);
  print_warnings(cfg);
  if (!cfg.scheme) cfg.scheme = Scheme::strang;
  const Grid grid = cfg.grid();
  Field u(grid);
  double t0 = 0.0;
  if (!input.empty()) {
    FieldDump dump = read_field(input);
    if (!(dump.field.grid == grid)) fail(ErrorKind::config, "input field grid differs from [grid]");
    u = std::move(dump.field);
    t0 = dump.time;
  } else {
    if (cfg.solitons.empty()) fail(ErrorKind::config, "evolve needs [soliton] sections or --input");
    u = sample_solitons(cfg.solitons, t0, grid);
  }
  const IntegratorConfig ic = cfg.integrator();
  const auto stride = static_cast<std::size_t>(std::max(1.0, std::round(interval / cfg.dt)));
  const fs::path dir = resolve_output_dir(out.empty() ? cfg.out_dir : out, "evolve");
  write_text(dir / "config.resolved", to_text(cfg));
  Table t;
  t.columns = {"t", "E", "Q", "P"};
  const EvolutionHook hook{stride, [&](double time, const Field& w) {
                             t.rows.push_back({time, energy(w, cfg.model), charge(w), momentum(w)});
                           }};
  const Field end = evolve(u, t0, t0 + t_end, ic, cfg.model, std::span<const EvolutionHook>(&hook, 1));
  write_csv(dir / "conservation.csv", t);
  write_field(dir / "final.field", end, t0 + t_end);
  std::cout << "wrote " << dir.string() << "\n";
  return 0;
}

int cmd_spectrum(const ModelOptions& mo, double omega, double v, double length, std::size_t points,
                 const std::string& out) {
  const ModelParams model = mo.model();
  const Grid grid(length, points);
  const SolitonParams sp{model, omega, 0.0, v, 0.0};
  sp.validate();
  const ActionParams ap = ActionParams::for_soliton(sp);
  const Field phi = soliton_field(model, omega, v, 0.0, 0.0, grid);
  const RealizedOperator op = assemble_second_variation(phi, ap);
  const SpectrumReport rep = spectrum_report(op, phi, ap);
  const fs::path dir = resolve_output_dir(out, "spectrum");
  Table t;
  t.columns = {"index", "eigenvalue"};
  for (std::size_t i = 0; i < rep.lowest.size(); ++i) t.rows.push_back({double(i), rep.lowest[i]});
  write_csv(dir / "lowest.csv", t);
  write_text(dir / "params.txt", params_text({{"m", model.m}, {"p", model.p}, {"omega", omega},
                                               {"v", v}, {"length", length},
                                               {"points", double(points)}}));
  std::cout << std::setprecision(10) << "negative eigenvalues: " << rep.negative_count
            << " (lowest " << rep.negative_eigenvalue << ")\nkernel dimension: "
            << rep.kernel_dimension << " (tolerance " << rep.kernel_tolerance
            << ")\ncoercivity delta: " << rep.coercivity_delta << "\n";
  if (v == 0.0 && std::abs(omega) > 0.0) {
    const auto family = [&](double w) { return soliton_field(model, w, v, 0.0, 0.0, grid); };
    const SlopeResult s = slope_test(family, ap, omega, sp.gamma());
    std::cout << "slope quantity: " << s.slope << " (closed form "
              << analytic_slope(model, omega, sp.gamma()) << ")\n";
  }
  std::cout << "wrote " << dir.string() << "\n";
  return 0;
}

int cmd_modulate(const std::string& config_path, const std::string& input, const std::string& out) {
  RunConfig cfg = load_config(config_path);
  print_warnings(cfg);
  if (cfg.solitons.empty()) fail(ErrorKind::config, "modulate needs [soliton] sections as the initial guess");
  const FieldDump dump = read_field(input);
  std::vector<ModulatedSoliton> guess;
  for (const auto& s : cfg.solitons) {
    guess.push_back({s.theta + s.omega * dump.time / s.gamma(), s.omega, s.x0 + s.v * dump.time, s.v});
  }
  const ModulationState st = fit_modulation(dump.field, cfg.model, guess);
  const fs::path dir = resolve_output_dir(out.empty() ? cfg.out_dir : out, "modulate");
  write_text(dir / "config.resolved", to_text(cfg));
  Table t;
  t.columns = {"j", "theta", "omega", "x", "v"};
  for (std::size_t j = 0; j < st.solitons.size(); ++j) {
    const auto& s = st.solitons[j];
    t.rows.push_back({double(j + 1), s.theta, s.omega, s.x, s.v});
  }
  write_csv(dir / "modulation.csv", t);
  write_field(dir / "residual.field", st.residual, dump.time);
  std::cout << std::setprecision(12);
  for (const auto& row : t.rows) {
    std::cout << "soliton " << row[0] << ": theta " << row[1] << " omega " << row[2] << " x " << row[3] << "\n";
  }
  std::cout << "iterations " << st.iterations << ", Jacobian condition " << st.jacobian_condition
            << "\nwrote " << dir.string() << "\n";
  return 0;
}

void write_decay(const fs::path& dir, const DecayReport& rep) {
  write_csv(dir / "diagnostics.csv", diagnostics_table(rep.trajectory.rows));
  if (rep.trajectory.track) write_csv(dir / "modulation.csv", trajectory_modulation_table(*rep.trajectory.track));
  if (rep.final_field) write_field(dir / "final.field", *rep.final_field, rep.times.front());
  std::ostringstream os;
  os << std::setprecision(17) << "fit_lo = " << rep.fit_lo << "\nfit_hi = " << rep.fit_hi
     << "\nslope = " << rep.fit.slope << "\nslope_error = " << rep.fit.slope_error
     << "\nreference_rate = " << rep.reference_rate << "\nrate_ceiling = " << rep.rate_ceiling
     << "\nerror_at_T0 = " << rep.errors.front() << "\n";
  if (!std::isnan(rep.trajectory.tube_exit_time)) {
    os << "tube_exit_time = " << rep.trajectory.tube_exit_time << "\ntube_exit_reason = "
       << rep.trajectory.tube_exit_reason << "\n";
  }
  write_text(dir / "summary.txt", os.str());
}

int cmd_multisoliton(const std::string& config_path, bool no_track, const std::string& out) {
  RunConfig cfg = load_config(config_path);
  print_warnings(cfg);
  if (!cfg.scheme) cfg.scheme = Scheme::yoshida4;
  MultiSolitonConfig mc = cfg.multisoliton();
  mc.track_modulation = !no_track;
  const fs::path dir = resolve_output_dir(out.empty() ? cfg.out_dir : out, "multisoliton");
  write_text(dir / "config.resolved", to_text(cfg));
  const DecayReport rep = run_backward_construction(mc);
  write_decay(dir, rep);
  std::cout << std::setprecision(8) << "error at T0 = " << rep.errors.front() << "\nfit slope = "
            << rep.fit.slope << " +- " << rep.fit.slope_error << " on [" << rep.fit_lo << ", "
            << rep.fit_hi << "]\nwrote " << dir.string() << "\n";
  if (!std::isnan(rep.trajectory.tube_exit_time)) {
    throw NumericalFailure(rep.trajectory.tube_exit_reason, rep.trajectory.tube_exit_time);
  }
  return 0;
}

int cmd_sweep(const std::string& config_path, const std::vector<double>& ladder, bool no_track,
              const std::string& out) {
  RunConfig cfg = load_config(config_path);
  print_warnings(cfg);
  if (!cfg.scheme) cfg.scheme = Scheme::yoshida4;
  const fs::path dir = resolve_output_dir(out.empty() ? cfg.out_dir : out, "sweep");
  write_text(dir / "config.resolved", to_text(cfg));
  Table t;
  t.columns = {"Tn", "error_at_T0", "slope", "slope_error"};
  bool exited = false;
  for (const double tn : ladder) {
    MultiSolitonConfig mc = cfg.multisoliton();
    mc.Tn = tn;
    mc.fit_lo = cfg.fit_lo;
    mc.fit_hi = cfg.fit_hi;
    mc.track_modulation = !no_track;
    const DecayReport rep = run_backward_construction(mc);
    std::ostringstream name;
    name << "Tn_" << tn;
    const fs::path sub = dir / name.str();
    fs::create_directories(sub);
    write_decay(sub, rep);
    t.rows.push_back({tn, rep.errors.front(), rep.fit.slope, rep.fit.slope_error});
    std::cout << std::setprecision(10) << "Tn " << tn << ": error at T0 " << rep.errors.front() << "\n";
    exited = exited || !std::isnan(rep.trajectory.tube_exit_time);
  }
  write_csv(dir / "sweep.csv", t);
  std::cout << "wrote " << dir.string() << "\n";
  if (exited) throw NumericalFailure("a ladder run left the modulation tube", 0.0);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Nonlinear Klein-Gordon solitons and multi-solitons"};
  app.require_subcommand(1);
  std::string out;
  app.add_option("-o,--out", out, "output directory (default $NLKG_OUT_DIR/<command>)");

  ModelOptions gs_model;
  double gs_omega = 0.0, gs_length = 80.0, gs_rmax = 30.0;
  std::size_t gs_points = 1024, gs_nodes = 3000;
  auto* gs = app.add_subcommand("groundstate", "scalar ground state profile");
  gs_model.attach(gs);
  gs->add_option("--d", gs_model.d, "space dimension (1, 2 or 3)")->capture_default_str();
  gs->add_option("--omega", gs_omega, "frequency")->capture_default_str();
  gs->add_option("--length", gs_length, "periodic domain length (d = 1)")->capture_default_str();
  gs->add_option("--points", gs_points, "grid points (d = 1)")->capture_default_str();
  gs->add_option("--rmax", gs_rmax, "radial domain (d > 1)")->capture_default_str();
  gs->add_option("--nodes", gs_nodes, "radial nodes (d > 1)")->capture_default_str();

  ModelOptions so_model;
  double so_omega = 0.8, so_v = 0.0, so_theta = 0.0, so_x0 = 0.0, so_length = 160.0;
  std::size_t so_points = 2048;
  auto* so = app.add_subcommand("soliton", "boosted soliton field and its functionals");
  so_model.attach(so);
  so->add_option("--omega", so_omega, "frequency")->capture_default_str();
  so->add_option("--v", so_v, "velocity, |v| < 1")->capture_default_str();
  so->add_option("--theta", so_theta, "phase")->capture_default_str();
  so->add_option("--x0", so_x0, "center")->capture_default_str();
  so->add_option("--length", so_length, "periodic domain length")->capture_default_str();
  so->add_option("--points", so_points, "grid points")->capture_default_str();

  std::string ev_config, ev_input;
  double ev_time = 10.0, ev_interval = 0.5;
  auto* ev = app.add_subcommand("evolve", "integrate a configuration in time");
  ev->add_option("config", ev_config, "config file")->required()->check(CLI::ExistingFile);
  ev->add_option("--input", ev_input, "start from a field dump instead of the solitons");
  ev->add_option("--time", ev_time, "duration")->capture_default_str();
  ev->add_option("--interval", ev_interval, "diagnostic interval")->capture_default_str();

  ModelOptions sp_model;
  double sp_omega = 0.8, sp_v = 0.0, sp_length = 80.0;
  std::size_t sp_points = 512;
  auto* spc = app.add_subcommand("spectrum", "linearized operator spectrum at a soliton");
  sp_model.attach(spc);
  spc->add_option("--omega", sp_omega, "frequency")->capture_default_str();
  spc->add_option("--v", sp_v, "velocity, |v| < 1")->capture_default_str();
  spc->add_option("--length", sp_length, "periodic domain length")->capture_default_str();
  spc->add_option("--points", sp_points, "grid points")->capture_default_str();

  std::string mo_config, mo_input;
  auto* mo = app.add_subcommand("modulate", "fit modulation parameters to a field dump");
  mo->add_option("config", mo_config, "config file (solitons give the guess)")->required()->check(CLI::ExistingFile);
  mo->add_option("--input", mo_input, "field dump")->required()->check(CLI::ExistingFile);

  std::string ms_config;
  bool ms_no_track = false;
  auto* ms = app.add_subcommand("multisoliton", "backward multi-soliton construction");
  ms->add_option("config", ms_config, "config file")->required()->check(CLI::ExistingFile);
  ms->add_flag("--no-track", ms_no_track, "skip modulation tracking");

  std::string sw_config;
  std::vector<double> sw_ladder{25.0, 32.5, 40.0};
  bool sw_no_track = false;
  auto* sw = app.add_subcommand("sweep", "backward construction over a ladder of final times");
  sw->add_option("config", sw_config, "config file")->required()->check(CLI::ExistingFile);
  sw->add_option("--tn", sw_ladder, "final times")->delimiter(',')->capture_default_str();
  sw->add_flag("--no-track", sw_no_track, "skip modulation tracking");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : exit_code(ErrorKind::config);
  }

  try {
    if (*gs) return cmd_groundstate(gs_model, gs_omega, gs_length, gs_points, gs_rmax, gs_nodes, out);
    if (*so) return cmd_soliton(so_model, so_omega, so_v, so_theta, so_x0, so_length, so_points, out);
    if (*ev) return cmd_evolve(ev_config, ev_input, ev_time, ev_interval, out);
    if (*spc) return cmd_spectrum(sp_model, sp_omega, sp_v, sp_length, sp_points, out);
    if (*mo) return cmd_modulate(mo_config, mo_input, out);
    if (*ms) return cmd_multisoliton(ms_config, ms_no_track, out);
    if (*sw) return cmd_sweep(sw_config, sw_ladder, sw_no_track, out);
  } catch (const NumericalFailure& e) {
    std::cerr << "numerical failure at t = " << e.time() << ": " << e.what() << "\n";
    return exit_code(e.kind());
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code(e.kind());
  } catch (const fs::filesystem_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code(ErrorKind::io);
  }
  return 0;
}
