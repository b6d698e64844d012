#pragma once

#include <span>
#include <vector>

#include "nlkg/grid.hpp"
#include "nlkg/profiles.hpp"

namespace nlkg {

/// Coefficients of the action S = E + (omega/gamma) Q + v P.
struct ActionParams {
  double omega_over_gamma = 0.0;
  double v = 0.0;
  ModelParams model;

  static ActionParams for_soliton(const SolitonParams& sp);
};

double energy(const Field& w, const ModelParams& model);
/// Q = Im int u1 conj(u2).
double charge(const Field& w);
/// P = Re int u1' conj(u2).
double momentum(const Field& w);
double action(const Field& w, const ActionParams& ap);

/// L2 gradient of E: (-u1'' + m u1 - |u1|^{p-1} u1, u2).
Field energy_gradient(const Field& w, const ModelParams& model);
/// S'(W), the left-hand side of the boosted stationary system.
Field action_gradient(const Field& w, const ActionParams& ap);

/// Split of <S'(W), W> into its quadratic and nonlinear parts:
/// I(W) = quadratic - nonlinear, S(sW) = s^2 quadratic/2 - s^{p+1} nonlinear/(p+1).
struct RayParts {
  double quadratic = 0.0;
  double nonlinear = 0.0;
};
RayParts ray_parts(const Field& w, const ActionParams& ap);

/// Nehari functional I(W) = <S'(W), W>.
double nehari_value(const Field& w, const ActionParams& ap);

struct NehariProjection {
  double s_star = 0.0;
  Field projected;
};
/// Rescales W onto the Nehari manifold: s_star^{p-1} = quadratic / nonlinear.
NehariProjection nehari_project(const Field& w, const ActionParams& ap);

/// Smooth ramp psi(s) = sin^2(pi (s+1)/4) on [-1, 1], 0 below, 1 above.
double cutoff_ramp(double s) noexcept;
double cutoff_ramp_slope(double s) noexcept;
/// Constant C in |psi'| <= C sqrt(psi).
inline constexpr double kRampBoundConstant = 1.5707963267948966;

/// Moving partition of unity phi_j separating solitons ordered by velocity.
struct CutoffPartition {
  RealVector velocities;  // sorted, strictly increasing
  RealVector midpoints;   // m_j = (v_{j-1} + v_j)/2 for j >= 2; m_1 unused (0)
  double time = 0.0;
  std::vector<RealVector> weights;  // phi_j sampled on the grid

  std::size_t count() const noexcept { return velocities.size(); }
};

/// psi_j(t, x) with psi_1 = 1.
double moving_ramp(const CutoffPartition& cp, std::size_t j, double x);

CutoffPartition build_cutoffs(std::span<const double> velocities, double t,
                              const Grid& grid);

struct LocalizedQuantities {
  RealVector energy;
  RealVector charge;
  RealVector momentum;
  double action = 0.0;  // sum_j E_j + (omega_j/gamma_j) Q_j + v_j P_j
};

LocalizedQuantities localized_quantities(const Field& w, const CutoffPartition& cp,
                                         std::span<const ActionParams> params);

/// <S''(Phi) Z, Z> localized with weight phi (the localized hessian density
/// integrated). Pass an empty weight for the global quadratic form.
double weighted_hessian_form(const Field& phi, const Field& z, const ActionParams& ap,
                             std::span<const double> weight);

}  // namespace nlkg
