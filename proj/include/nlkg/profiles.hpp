#pragma once

#include <cstddef>

#include "nlkg/grid.hpp"

namespace nlkg {

/// Coefficients of u_tt - u_xx + m u - |u|^{p-1} u = 0 in dimension d.
struct ModelParams {
  double m = 1.0;
  double p = 3.0;
  int d = 1;

  /// Throws unless m > 0, p > 1 and d in {1, 2, 3}.
  void validate() const;
  /// 1 < p < 1 + 4/d, the regime of the dynamics and of the stability window.
  bool mass_subcritical() const noexcept;
  /// p < (d+2)/(d-2), the existence range of ground states.
  bool energy_subcritical() const noexcept;
  /// Lower edge of the stability window in omega^2/m: 1/(1 + 4/(p-1) - d).
  double stability_threshold() const noexcept;
};

/// One boosted soliton exp(i(omega/gamma) t + i theta) Phi_{omega,v}(x - v t - x0).
struct SolitonParams {
  ModelParams model;
  double omega = 0.0;
  double theta = 0.0;
  double v = 0.0;
  double x0 = 0.0;

  double gamma() const noexcept;
  /// Throws on |v| >= 1 or |omega| >= sqrt(m).
  void validate() const;
  /// omega^2/m above the stability threshold (and the admissibility bounds).
  bool stable() const noexcept;
};

double lorentz_factor(double v);

/// Scalar ground state phi_omega of -phi'' + (m - omega^2) phi - phi^p = 0.
///
/// For d = 1 the samples live on the periodic grid coordinates x. For the
/// radial solver they live on nodes r_i = i * rmax / n. value() evaluates
/// the profile at any radius in both cases.
class GroundState {
 public:
  enum class Kind { closed_form, tabulated };

  ModelParams model;
  double omega = 0.0;
  RealVector nodes;
  RealVector samples;
  double residual = 0.0;

  Kind kind() const noexcept { return kind_; }
  /// phi_omega(|r|).
  double value(double r) const;
  /// d phi_omega / dr at |r| (odd extension for negative r).
  double derivative(double r) const;
  /// sqrt(m - omega^2).
  double decay_rate() const noexcept;

 private:
  friend GroundState ground_state_1d(const ModelParams&, double, const Grid&);
  friend GroundState ground_state_radial(const ModelParams&, double, double,
                                         std::size_t);
  Kind kind_ = Kind::closed_form;
  RealVector slopes_;       // phi'(r) at the nodes (tabulated only)
  double tail_amplitude_ = 0.0;  // phi ~ A r^{-(d-1)/2} e^{-kappa r} past rmax
};

/// Closed-form profile phi~(x) = ((p+1)/2)^{1/(p-1)} sech^{2/(p-1)}((p-1)x/2),
/// the unit-frequency ground state (m = 1, omega = 0).
double unit_ground_state_1d(double p, double x);

/// 1D ground state sampled on the grid, scaled to (m, omega). Throws when
/// |omega| >= sqrt(m) or when the profile is not negligible at the domain edge.
GroundState ground_state_1d(const ModelParams& model, double omega,
                            const Grid& grid);

/// Radial ground state by shooting on phi(0), for d in {1, 2, 3}.
GroundState ground_state_radial(const ModelParams& model, double omega,
                                double rmax, std::size_t n);

/// Boosted Hamiltonian profile Phi_{omega,v} on the grid, centered at the
/// origin, without the soliton phase.
Field boost_profile(const GroundState& gs, const SolitonParams& sp,
                    const Grid& grid);

/// exp(i phase) Phi_{omega,v}(x - center) with the translation taken modulo L.
Field soliton_field(const GroundState& gs, double v, double phase,
                    double center, const Grid& grid);

/// Same as soliton_field, building the 1D ground state internally.
Field soliton_field(const ModelParams& model, double omega, double v,
                    double phase, double center, const Grid& grid);

/// Exact soliton R(t) for the given parameters.
Field sample_soliton(const SolitonParams& sp, double t, const Grid& grid);

/// Sum of exact solitons at time t.
Field sample_solitons(std::span<const SolitonParams> solitons, double t,
                      const Grid& grid);

/// Domain length that makes every profile negligible at the edge:
/// 60/sqrt(m - omega^2) plus the translation extent.
double recommended_length(const ModelParams& model, double omega,
                          double translation_extent = 0.0);

}  // namespace nlkg
