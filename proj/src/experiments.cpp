#include "nlkg/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

#include "nlkg/errors.hpp"
#include "nlkg/fft.hpp"
#include "nlkg/spectrum.hpp"

namespace nlkg {

IntegratorConfig MultiSolitonConfig::integrator() const {
  IntegratorConfig c;
  c.dt = dt;
  c.scheme = scheme;
  c.dealias = dealias;
  return c;
}

double MultiSolitonConfig::v_star() const {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < solitons.size(); ++j) {
    for (std::size_t k = j + 1; k < solitons.size(); ++k) {
      best = std::min(best, std::abs(solitons[j].v - solitons[k].v));
    }
  }
  return std::isfinite(best) ? best : 0.0;
}

double MultiSolitonConfig::omega_star() const {
  double w = 0.0;
  for (const auto& s : solitons) w = std::max(w, std::abs(s.omega));
  return w;
}

double MultiSolitonConfig::alpha_tilde() const {
  // Omega(e) = prod_{j<k} |(v_j - v_k) . e| maximized over unit e, divided by
  // the product of |v_j - v_k|. In one dimension e = +-1 attains the product.
  double omega_e = 1.0, full = 1.0;
  for (std::size_t j = 0; j < solitons.size(); ++j) {
    for (std::size_t k = j + 1; k < solitons.size(); ++k) {
      const double dv = std::abs(solitons[j].v - solitons[k].v);
      omega_e *= dv;
      full *= dv;
    }
  }
  return full > 0.0 ? omega_e / full : 1.0;
}

double MultiSolitonConfig::reference_rate() const {
  return alpha_ref * std::sqrt(model.m - omega_star() * omega_star()) * v_star();
}

double MultiSolitonConfig::rate_ceiling() const {
  return std::min(1.0 / 24.0, alpha_tilde() / 8.0) *
         std::sqrt(model.m - omega_star() * omega_star()) * v_star();
}

std::vector<std::size_t> MultiSolitonConfig::velocity_order() const {
  std::vector<std::size_t> idx(solitons.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(),
            [&](std::size_t a, std::size_t b) { return solitons[a].v < solitons[b].v; });
  return idx;
}

void MultiSolitonConfig::validate(bool require_stable) const {
  std::vector<std::string> issues;
  auto check = [&](bool ok, const std::string& what) {
    if (!ok) issues.push_back(what);
  };
  try {
    model.validate();
  } catch (const Error& e) {
    issues.push_back(e.what());
  }
  check(model.d == 1, "dynamics are one-dimensional (d = 1)");
  check(model.mass_subcritical(), "p must satisfy 1 < p < 1 + 4/d");
  check(!solitons.empty(), "at least one soliton is required");
  for (std::size_t j = 0; j < solitons.size(); ++j) {
    const auto& s = solitons[j];
    std::ostringstream tag;
    tag << "soliton " << j + 1 << ": ";
    check(s.model.m == model.m && s.model.p == model.p && s.model.d == model.d,
          tag.str() + "model differs from the run model");
    check(std::abs(s.v) < 1.0, tag.str() + "|v| < 1 violated");
    check(std::abs(s.omega) < std::sqrt(model.m), tag.str() + "|omega| < sqrt(m) violated");
    if (require_stable) check(s.stable(), tag.str() + "outside the stability window");
    for (std::size_t k = j + 1; k < solitons.size(); ++k) {
      check(solitons[k].v != s.v, tag.str() + "velocities must be pairwise distinct");
    }
  }
  check(Tn > T0, "Tn must exceed T0");
  check(T0 > 0.0, "T0 must be positive (cutoffs are defined for t > 0)");
  check(dt > 0.0, "dt must be positive");
  check(points >= 4 && length > 0.0, "grid must have positive length and at least 4 points");
  if (dt > 0.0) {
    const double ratio = diag_interval / dt;
    check(diag_interval > 0.0 && std::abs(ratio - std::round(ratio)) < 1e-9 * ratio,
          "diag_interval must be a positive multiple of dt");
    const double span = (Tn - T0) / diag_interval;
    check(std::abs(span - std::round(span)) < 1e-9 * std::max(1.0, span),
          "Tn - T0 must be a multiple of diag_interval");
  }
  if (issues.empty()) {
    // Every soliton must stay away from the periodic seam.
    for (std::size_t j = 0; j < solitons.size(); ++j) {
      const auto& s = solitons[j];
      const double reach = std::log(1e12) / (s.gamma() * std::sqrt(model.m - s.omega * s.omega));
      for (double t : {T0, Tn}) {
        if (std::abs(s.x0 + s.v * t) + reach > 0.5 * length) {
          std::ostringstream os;
          os << "soliton " << j + 1 << " reaches the periodic seam at t = " << t
             << " (domain too small)";
          issues.push_back(os.str());
          break;
        }
      }
    }
  }
  if (!issues.empty()) {
    std::ostringstream os;
    os << "invalid multi-soliton configuration:";
    for (const auto& s : issues) os << "\n  " << s;
    fail(ErrorKind::config, os.str());
  }
}

LogFit fit_log_linear(std::span<const double> t, std::span<const double> y) {
  if (t.size() != y.size()) fail(ErrorKind::dimension, "fit_log_linear: length mismatch");
  LogFit fit;
  RealVector xs, ls;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (y[i] > 0.0 && std::isfinite(y[i])) {
      xs.push_back(t[i]);
      ls.push_back(std::log(y[i]));
    }
  }
  fit.samples = xs.size();
  if (xs.size() < 3) fail(ErrorKind::numerical, "fit_log_linear: fewer than three positive samples");
  const double n = static_cast<double>(xs.size());
  const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  const double my = std::accumulate(ls.begin(), ls.end(), 0.0) / n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ls[i] - my);
  }
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double sse = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double r = ls[i] - fit.intercept - fit.slope * xs[i];
    sse += r * r;
  }
  fit.slope_error = std::sqrt(sse / (n - 2.0) / sxx);
  return fit;
}

namespace {

std::vector<ActionParams> sorted_action_params(const MultiSolitonConfig& cfg) {
  std::vector<ActionParams> out;
  for (std::size_t j : cfg.velocity_order()) out.push_back(ActionParams::for_soliton(cfg.solitons[j]));
  return out;
}

RealVector sorted_velocities(const MultiSolitonConfig& cfg) {
  RealVector out;
  for (std::size_t j : cfg.velocity_order()) out.push_back(cfg.solitons[j].v);
  return out;
}

std::vector<ModulatedSoliton> planted(const MultiSolitonConfig& cfg, double t) {
  std::vector<ModulatedSoliton> out;
  for (const auto& s : cfg.solitons) {
    out.push_back({s.theta + s.omega * t / s.gamma(), s.omega, s.x0 + s.v * t, s.v});
  }
  return out;
}

DiagnosticsRow diagnostics(const MultiSolitonConfig& cfg, double t, const Field& u) {
  DiagnosticsRow row;
  row.t = t;
  row.energy = energy(u, cfg.model);
  row.charge = charge(u);
  row.momentum = momentum(u);
  const auto vel = sorted_velocities(cfg);
  const auto params = sorted_action_params(cfg);
  row.local = localized_quantities(u, build_cutoffs(vel, t, u.grid), params);
  row.error = norm_H1L2(u - sample_solitons(cfg.solitons, t, u.grid));
  return row;
}

void fill_track(const MultiSolitonConfig& cfg, Trajectory& traj, bool backward) {
  if (!cfg.track_modulation || traj.snapshots.empty()) return;
  std::vector<Snapshot> ordered = traj.snapshots;
  if (backward) std::reverse(ordered.begin(), ordered.end());
  try {
    ParameterTrack track = track_parameters(ordered, cfg.model, planted(cfg, ordered.front().t));
    if (backward) {
      std::reverse(track.times.begin(), track.times.end());
      std::reverse(track.states.begin(), track.states.end());
      std::reverse(track.omega_rate.begin(), track.omega_rate.end());
      std::reverse(track.phase_rate.begin(), track.phase_rate.end());
      std::reverse(track.center_rate.begin(), track.center_rate.end());
      std::reverse(track.residual_norms.begin(), track.residual_norms.end());
    }
    traj.track = std::move(track);
  } catch (const NumericalFailure& e) {
    traj.tube_exit_time = e.time();
    traj.tube_exit_reason = e.what();
  }
}

DecayReport finish_report(const MultiSolitonConfig& cfg, Trajectory traj, Field final_field,
                          std::size_t reference_index) {
  DecayReport rep;
  rep.reference_rate = cfg.reference_rate();
  rep.rate_ceiling = cfg.rate_ceiling();
  rep.fit_lo = std::isnan(cfg.fit_lo) ? cfg.T0 : cfg.fit_lo;
  rep.fit_hi = std::isnan(cfg.fit_hi) ? cfg.Tn - 0.1 * (cfg.Tn - cfg.T0) : cfg.fit_hi;
  RealVector ft, fe;
  const auto& ref = traj.rows[reference_index];
  for (const auto& row : traj.rows) {
    rep.times.push_back(row.t);
    rep.errors.push_back(row.error);
    if (row.t >= rep.fit_lo - 1e-9 && row.t <= rep.fit_hi + 1e-9) {
      ft.push_back(row.t);
      fe.push_back(row.error);
    }
    RealVector drift;
    for (std::size_t j = 0; j < row.local.charge.size(); ++j) {
      drift.push_back(std::abs(row.local.charge[j] - ref.local.charge[j]));
    }
    rep.charge_drift.push_back(std::move(drift));
    rep.action_drift.push_back(std::abs(row.local.action - ref.local.action));
  }
  if (ft.size() >= 3) {
    try {
      rep.fit = fit_log_linear(ft, fe);
    } catch (const Error&) {
      rep.fit = {};
    }
  }
  rep.trajectory = std::move(traj);
  rep.final_field = std::move(final_field);
  return rep;
}

std::size_t stride_of(const MultiSolitonConfig& cfg) {
  return static_cast<std::size_t>(std::llround(cfg.diag_interval / cfg.dt));
}

}  // namespace

DecayReport run_backward_construction(const MultiSolitonConfig& cfg) {
  cfg.validate(true);
  const Grid grid = cfg.grid();
  const Field start = sample_solitons(cfg.solitons, cfg.Tn, grid);
  Trajectory traj;
  const EvolutionHook hook{stride_of(cfg), [&](double t, const Field& w) {
                             traj.snapshots.push_back({t, w});
                           }};
  Field end = evolve(start, cfg.Tn, cfg.T0, cfg.integrator(), cfg.model,
                     std::span<const EvolutionHook>(&hook, 1));
  std::reverse(traj.snapshots.begin(), traj.snapshots.end());
  for (const auto& s : traj.snapshots) traj.rows.push_back(diagnostics(cfg, s.t, s.field));
  fill_track(cfg, traj, true);
  const std::size_t ref = traj.rows.size() - 1;
  return finish_report(cfg, std::move(traj), std::move(end), ref);
}

DecayReport run_forward_stability(const MultiSolitonConfig& cfg, const Field& perturbation,
                                  double amplitude) {
  cfg.validate(false);
  const Grid grid = cfg.grid();
  if (!(perturbation.grid == grid)) fail(ErrorKind::dimension, "perturbation grid mismatch");
  Field start = sample_solitons(cfg.solitons, cfg.T0, grid);
  axpy(amplitude, perturbation, start);
  Trajectory traj;
  const EvolutionHook hook{stride_of(cfg), [&](double t, const Field& w) {
                             traj.snapshots.push_back({t, w});
                           }};
  Field end = evolve(start, cfg.T0, cfg.Tn, cfg.integrator(), cfg.model,
                     std::span<const EvolutionHook>(&hook, 1));
  for (const auto& s : traj.snapshots) traj.rows.push_back(diagnostics(cfg, s.t, s.field));
  fill_track(cfg, traj, false);
  return finish_report(cfg, std::move(traj), std::move(end), 0);
}

Field bump_perturbation(const Grid& grid, double x0, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  std::uniform_real_distribution<double> shift(-2.0, 2.0);
  Field w(grid);
  for (int b = 0; b < 4; ++b) {
    const Complex a1(coef(rng), coef(rng));
    const Complex a2(coef(rng), coef(rng));
    const double c = x0 + shift(rng);
    for (std::size_t i = 0; i < grid.points(); ++i) {
      const double y = grid.wrap(grid.x(i) - c);
      const double g = std::exp(-0.5 * y * y);
      w.u1[i] += a1 * g;
      w.u2[i] += a2 * g;
    }
  }
  w *= 1.0 / norm_H1L2(w);
  return w;
}

InteractionReport measure_interactions(const MultiSolitonConfig& cfg, std::span<const double> times) {
  if (cfg.solitons.size() < 2) fail(ErrorKind::domain, "measure_interactions: at least two distinct solitons required");
  for (std::size_t j = 0; j < cfg.solitons.size(); ++j) {
    for (std::size_t k = j + 1; k < cfg.solitons.size(); ++k) {
      if (cfg.solitons[j].v == cfg.solitons[k].v) {
        fail(ErrorKind::domain, "measure_interactions: solitons must be pairwise distinct");
      }
    }
  }
  const double vs = cfg.v_star();
  const double t_min = std::max(4.0 / (vs * vs), 1.0);
  for (double t : times) {
    if (t < t_min) {
      std::ostringstream os;
      os << "measure_interactions: t = " << t << " below max(4/v*^2, 1) = " << t_min;
      fail(ErrorKind::domain, os.str());
    }
  }
  const Grid grid = cfg.grid();
  const auto order = cfg.velocity_order();
  const std::size_t n = order.size();
  const auto vel = sorted_velocities(cfg);
  const double h = grid.spacing();
  const double p = cfg.model.p;

  InteractionReport rep;
  rep.times.assign(times.begin(), times.end());
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) rep.pairs.push_back({a, b, {}, {}, {}, {}, {}, {}, {}, {}});
  }
  for (double t : times) {
    std::vector<Field> r, dr;
    for (std::size_t j : order) {
      r.push_back(sample_soliton(cfg.solitons[j], t, grid));
      dr.push_back(gradient(r.back()));
    }
    const CutoffPartition cp = build_cutoffs(vel, t, grid);
    for (auto& pair : rep.pairs) {
      const Field& rj = r[pair.j];
      const Field& rk = r[pair.k];
      double prod = 0.0, pg = 0.0, gg = 0.0, co = 0.0;
      for (std::size_t i = 0; i < grid.points(); ++i) {
        prod += std::abs(rj.u1[i]) * std::abs(rk.u1[i]) + std::abs(rj.u2[i]) * std::abs(rk.u2[i]);
        pg += std::abs(rj.u1[i]) * std::abs(dr[pair.k].u1[i]) +
              std::abs(rj.u2[i]) * std::abs(dr[pair.k].u2[i]);
        gg += std::abs(dr[pair.j].u1[i]) * std::abs(dr[pair.k].u1[i]) +
              std::abs(dr[pair.j].u2[i]) * std::abs(dr[pair.k].u2[i]);
        co += std::hypot(std::abs(rj.u1[i]), std::abs(rj.u2[i])) * cp.weights[pair.k][i];
      }
      pair.product.push_back(prod * h);
      pair.product_grad.push_back(pg * h);
      pair.grad_grad.push_back(gg * h);
      pair.cutoff_overlap.push_back(co * h);
    }
    double cross = 0.0;
    for (std::size_t i = 0; i < grid.points(); ++i) {
      Complex total = 0.0;
      double separate = 0.0;
      for (const auto& f : r) {
        total += f.u1[i];
        separate += std::pow(std::abs(f.u1[i]), p + 1.0);
      }
      cross += std::abs(std::pow(std::abs(total), p + 1.0) - separate);
    }
    rep.nonlinear_cross.push_back(cross * h);
  }
  if (times.size() >= 3) {
    for (auto& pair : rep.pairs) {
      pair.product_fit = fit_log_linear(times, pair.product);
      pair.product_grad_fit = fit_log_linear(times, pair.product_grad);
      pair.grad_grad_fit = fit_log_linear(times, pair.grad_grad);
      pair.cutoff_fit = fit_log_linear(times, pair.cutoff_overlap);
    }
    rep.nonlinear_fit = fit_log_linear(times, rep.nonlinear_cross);
  }
  return rep;
}

namespace {

double local_charge(const Field& w, std::span<const double> weight) {
  double s = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) s += weight[i] * (w.u1[i] * std::conj(w.u2[i])).imag();
  return s * w.grid.spacing();
}

}  // namespace

ConservationAudit almost_conservation_audit(const Trajectory& traj, const MultiSolitonConfig& cfg,
                                            std::size_t identity_samples, double h) {
  if (traj.rows.size() < 3) fail(ErrorKind::domain, "almost_conservation_audit: at least three snapshots required");
  ConservationAudit audit;
  const auto& rows = traj.rows;
  const std::size_t n = rows.size();
  const auto ref_it = std::max_element(rows.begin(), rows.end(),
                                       [](const auto& a, const auto& b) { return a.t < b.t; });
  const DiagnosticsRow& ref = *ref_it;
  // Drifts are relative to max(|X_ref|, sum_j |X(R_j)|) so that a vanishing
  // total (e.g. momentum of a symmetric pair) does not blow up the ratio.
  const Grid& g0 = traj.snapshots.front().field.grid;
  double e_scale = std::abs(ref.energy), q_scale = std::abs(ref.charge), p_scale = std::abs(ref.momentum);
  double e_sum = 0.0, q_sum = 0.0, p_sum = 0.0;
  for (const auto& s : cfg.solitons) {
    const Field r = sample_soliton(s, 0.0, g0);
    e_sum += std::abs(energy(r, cfg.model));
    q_sum += std::abs(charge(r));
    p_sum += std::abs(momentum(r));
  }
  e_scale = std::max(e_scale, e_sum);
  q_scale = std::max(q_scale, q_sum);
  p_scale = std::max(p_scale, p_sum);
  for (const auto& row : rows) {
    audit.times.push_back(row.t);
    audit.energy_drift = std::max(audit.energy_drift, std::abs(row.energy - ref.energy) / e_scale);
    audit.charge_drift = std::max(audit.charge_drift, std::abs(row.charge - ref.charge) / q_scale);
    audit.momentum_drift = std::max(audit.momentum_drift, std::abs(row.momentum - ref.momentum) / p_scale);
    RealVector drift;
    for (std::size_t j = 0; j < row.local.charge.size(); ++j) {
      drift.push_back(std::abs(row.local.charge[j] - ref.local.charge[j]));
    }
    audit.charge_drift_local.push_back(std::move(drift));
  }
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t lo = k == 0 ? 0 : k - 1;
    const std::size_t hi = k + 1 == n ? n - 1 : k + 1;
    audit.action_rate.push_back((rows[hi].local.action - rows[lo].local.action) / (rows[hi].t - rows[lo].t));
  }
  audit.charge_drift_decreasing = true;
  for (std::size_t k = 1; k < n; ++k) {
    for (std::size_t j = 0; j < audit.charge_drift_local[k].size(); ++j) {
      if (!(audit.charge_drift_local[k][j] < audit.charge_drift_local[k - 1][j])) {
        audit.charge_drift_decreasing = false;
      }
    }
  }

  // Local identity on a fixed ramp across the fastest soliton.
  if (identity_samples > 0 && h > 0.0) {
    IntegratorConfig ic = cfg.integrator();
    ic.dt = h;
    ic.scheme = Scheme::yoshida4;
    IntegratorConfig back = ic;
    back.dt = -h;
    const Grid& grid = traj.snapshots.front().field.grid;
    const Propagator forward_prop(grid, cfg.model, ic);
    const Propagator backward_prop(grid, cfg.model, back);
    const auto order = cfg.velocity_order();
    const SolitonParams& fast = cfg.solitons[order.back()];
    const double width = 4.0;
    double lhs_scale = 0.0, worst = 0.0;
    for (std::size_t s = 0; s < identity_samples; ++s) {
      const std::size_t k = (n - 1) * (s + 1) / (identity_samples + 1);
      const Snapshot& snap = traj.snapshots[k];
      const double center = fast.x0 + fast.v * snap.t;
      RealVector phi(grid.points()), dphi(grid.points());
      for (std::size_t i = 0; i < grid.points(); ++i) {
        const double y = grid.wrap(grid.x(i) - center) / width;
        phi[i] = cutoff_ramp(y);
        dphi[i] = cutoff_ramp_slope(y) / width;
      }
      auto shifted = [&](const Propagator& prop) {
        ComplexVector a(grid.points()), b(grid.points());
        fft::forward(snap.field.u1, a);
        fft::forward(snap.field.u2, b);
        prop.advance(a, b, snap.t);
        Field out(grid);
        fft::inverse(a, out.u1);
        fft::inverse(b, out.u2);
        return out;
      };
      const double lhs = (local_charge(shifted(forward_prop), phi) -
                          local_charge(shifted(backward_prop), phi)) / (2.0 * h);
      const auto du = spectral_derivative(snap.field.u1, grid);
      double rhs = 0.0;
      for (std::size_t i = 0; i < grid.points(); ++i) {
        rhs += (du[i] * std::conj(snap.field.u1[i])).imag() * dphi[i];
      }
      rhs *= grid.spacing();
      audit.identity_times.push_back(snap.t);
      audit.identity_lhs.push_back(lhs);
      audit.identity_rhs.push_back(rhs);
      lhs_scale = std::max(lhs_scale, std::abs(lhs));
      worst = std::max(worst, std::abs(lhs - rhs));
    }
    audit.identity_mismatch = lhs_scale > 0.0 ? worst / lhs_scale : worst;
  }
  return audit;
}

TaylorAudit taylor_expansion_audit(const Trajectory& traj, const MultiSolitonConfig& cfg,
                                   double t_lo, double t_hi) {
  if (!traj.track) fail(ErrorKind::domain, "taylor_expansion_audit: modulation track required");
  const ParameterTrack& track = *traj.track;
  const auto order = cfg.velocity_order();
  const auto params = sorted_action_params(cfg);
  const auto vel = sorted_velocities(cfg);
  const Grid& grid = traj.snapshots.front().field.grid;

  TaylorAudit audit;
  for (std::size_t k = 0; k < order.size(); ++k) {
    audit.constant += action(sample_soliton(cfg.solitons[order[k]], 0.0, grid), params[k]);
  }
  audit.min_coercivity_ratio = std::numeric_limits<double>::infinity();
  for (std::size_t s = 0; s < traj.snapshots.size(); ++s) {
    const Snapshot& snap = traj.snapshots[s];
    if (snap.t < t_lo - 1e-9 || snap.t > t_hi + 1e-9) continue;
    const ModulationState& state = track.states[s];
    const CutoffPartition cp = build_cutoffs(vel, snap.t, grid);
    const double s_local = localized_quantities(snap.field, cp, params).action;
    Field tilde(grid);
    double hess = 0.0;
    for (std::size_t k = 0; k < order.size(); ++k) {
      const Field piece = modulated_soliton(cfg.model, state.solitons[order[k]], grid);
      tilde += piece;
      hess += weighted_hessian_form(piece, state.residual, params[k], cp.weights[k]);
    }
    const double s_tilde = localized_quantities(tilde, cp, params).action;
    const double ups = norm_H1L2(state.residual);
    audit.times.push_back(snap.t);
    audit.localized_action.push_back(s_local);
    audit.hessian.push_back(hess);
    audit.upsilon_sq.push_back(ups * ups);
    audit.remainder.push_back(s_local - audit.constant - 0.5 * hess);
    audit.modulated_remainder.push_back(s_local - s_tilde - 0.5 * hess);
    if (ups > 0.0) audit.min_coercivity_ratio = std::min(audit.min_coercivity_ratio, hess / (ups * ups));
  }
  return audit;
}

double single_soliton_coercivity(const ModelParams& model, double omega, double v,
                                 double length, std::size_t points) {
  const Grid grid(length, points);
  SolitonParams sp;
  sp.model = model;
  sp.omega = omega;
  sp.v = v;
  const Field phi = sample_soliton(sp, 0.0, grid);
  const ActionParams ap = ActionParams::for_soliton(sp);
  return spectrum_report(assemble_second_variation(phi, ap), phi, ap).coercivity_delta;
}

}  // namespace nlkg
