#pragma once

#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "nlkg/functionals.hpp"
#include "nlkg/integrator.hpp"
#include "nlkg/modulation.hpp"

namespace nlkg {

struct MultiSolitonConfig {
  ModelParams model;
  std::vector<SolitonParams> solitons;
  double Tn = 40.0;
  double T0 = 10.0;
  double dt = 0.01;
  Scheme scheme = Scheme::yoshida4;
  bool dealias = false;
  double alpha_ref = 1.0 / 24.0;
  double length = 160.0;
  std::size_t points = 2048;
  double diag_interval = 0.5;  // time between diagnostic snapshots
  bool track_modulation = true;
  // log-error fit window; NaN means [T0, Tn - 0.1 (Tn - T0)]
  double fit_lo = std::numeric_limits<double>::quiet_NaN();
  double fit_hi = std::numeric_limits<double>::quiet_NaN();

  Grid grid() const { return Grid(length, points); }
  IntegratorConfig integrator() const;
  /// Minimal pairwise relative speed.
  double v_star() const;
  /// Maximal |omega_j|.
  double omega_star() const;
  /// Direction-selection constant; in 1D the only axis gives 1.
  double alpha_tilde() const;
  /// alpha_ref * sqrt(m - omega_star^2) * v_star.
  double reference_rate() const;
  /// Proof-side ceiling min(1/24, alpha_tilde/8) * sqrt(m - omega_star^2) * v_star.
  double rate_ceiling() const;
  /// Throws Error(config) on an invalid configuration. When require_stable is
  /// set, every soliton must lie in the stability window.
  void validate(bool require_stable = true) const;
  /// Sorted velocities with the matching ActionParams (cutoff order).
  std::vector<std::size_t> velocity_order() const;
};

/// Least squares fit of log y = a + slope t.
struct LogFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_error = 0.0;  // standard error of the slope
  std::size_t samples = 0;
};
LogFit fit_log_linear(std::span<const double> t, std::span<const double> y);

struct DiagnosticsRow {
  double t = 0.0;
  double energy = 0.0;
  double charge = 0.0;
  double momentum = 0.0;
  LocalizedQuantities local;
  double error = 0.0;  // |U - R(t)|_{H1xL2}
};

struct Trajectory {
  std::vector<Snapshot> snapshots;      // ascending in time
  std::vector<DiagnosticsRow> rows;     // same times
  std::optional<ParameterTrack> track;  // same times when tracking succeeded or partially
  double tube_exit_time = std::numeric_limits<double>::quiet_NaN();
  std::string tube_exit_reason;
};

struct DecayReport {
  RealVector times;
  RealVector errors;
  LogFit fit;
  double fit_lo = 0.0;
  double fit_hi = 0.0;
  double reference_rate = 0.0;
  double rate_ceiling = 0.0;
  std::vector<RealVector> charge_drift;  // [time][j] |Q_j(t) - Q_j(Tn)|, cutoff order
  RealVector action_drift;               // |S(t) - S(Tn)|
  Trajectory trajectory;
  std::optional<Field> final_field;      // U at the end of the run
};

/// Backward construction: U(Tn) = sum R_j(Tn) integrated back to T0.
DecayReport run_backward_construction(const MultiSolitonConfig& cfg);

/// Forward evolution of R(T0) + perturbation over [T0, Tn].
DecayReport run_forward_stability(const MultiSolitonConfig& cfg, const Field& perturbation,
                                  double amplitude);

/// Smooth deterministic perturbation centered at x0 with unit H1xL2 norm.
Field bump_perturbation(const Grid& grid, double x0, unsigned seed);

struct PairInteraction {
  std::size_t j = 0;
  std::size_t k = 0;
  RealVector product;         // int |R_j||R_k| summed over components
  RealVector product_grad;    // int |R_j||dR_k|
  RealVector grad_grad;       // int |dR_j||dR_k|
  RealVector cutoff_overlap;  // int |R_j| phi_k
  LogFit product_fit;
  LogFit product_grad_fit;
  LogFit grad_grad_fit;
  LogFit cutoff_fit;
};

struct InteractionReport {
  RealVector times;
  std::vector<PairInteraction> pairs;
  RealVector nonlinear_cross;  // int ||R1|^{p+1} - sum |R_l1|^{p+1}|
  LogFit nonlinear_fit;
};

/// Interaction integrals of the exact solitons sampled at the given times.
/// Every time must satisfy t >= max(4/v_star^2, 1).
InteractionReport measure_interactions(const MultiSolitonConfig& cfg, std::span<const double> times);

struct ConservationAudit {
  RealVector times;
  double energy_drift = 0.0;    // max |X(t) - X(Tn)| / max(|X(Tn)|, sum_j |X(R_j)|)
  double charge_drift = 0.0;
  double momentum_drift = 0.0;
  RealVector action_rate;       // centered difference of the localized action
  std::vector<RealVector> charge_drift_local;  // [time][j]
  bool charge_drift_decreasing = false;        // in t, for every j
  // Local charge identity d/dt Im int u1 conj(u2) phi = Im int u1' conj(u1) phi'.
  RealVector identity_times;
  RealVector identity_lhs;
  RealVector identity_rhs;
  double identity_mismatch = 0.0;  // max |lhs - rhs| / max |lhs|
};

/// Drift report on a stored trajectory. The identity check re-steps the flow
/// by +-h from `identity_samples` snapshots with the same model and grid.
ConservationAudit almost_conservation_audit(const Trajectory& traj, const MultiSolitonConfig& cfg,
                                            std::size_t identity_samples = 5, double h = 1e-3);

struct TaylorAudit {
  RealVector times;
  RealVector localized_action;  // S(t, U)
  double constant = 0.0;        // sum_j S_j(R_j)
  RealVector hessian;           // H_n(Y, Y)
  RealVector upsilon_sq;        // |Y|^2_{H1xL2}
  RealVector remainder;         // S - constant - H/2
  RealVector modulated_remainder;  // S(U) - S(R~) - H/2
  double min_coercivity_ratio = 0.0;  // min H / |Y|^2
};

/// Taylor-like expansion of the localized action on snapshots in [t_lo, t_hi].
TaylorAudit taylor_expansion_audit(const Trajectory& traj, const MultiSolitonConfig& cfg,
                                   double t_lo, double t_hi);

/// Coercivity constant of a single soliton at (omega, v) on a grid (dense eigensolve).
double single_soliton_coercivity(const ModelParams& model, double omega, double v,
                                 double length, std::size_t points);

}  // namespace nlkg
