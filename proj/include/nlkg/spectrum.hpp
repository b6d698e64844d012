#pragma once

#include <functional>

#include <Eigen/Dense>

#include "nlkg/functionals.hpp"

namespace nlkg {

/// S''(Phi) W for the profile Phi. Real-linear, not complex-linear.
Field apply_second_variation(const Field& phi, const Field& w, const ActionParams& ap);

/// Same operator with the potential terms dropped (the constant-coefficient part).
Field apply_free_operator(const Field& w, const ActionParams& ap);

/// Real flattening (Re u1, Im u1, Re u2, Im u2) of a field.
Eigen::VectorXd flatten(const Field& w);
Field unflatten(const Eigen::VectorXd& x, const Grid& grid);

struct RealizedOperator {
  Grid grid;
  Eigen::MatrixXd matrix;  // W -> S''W in the flattening; the L2 form is spacing * x^T matrix y
  Eigen::MatrixXd gram;    // H1 x L2 form, also divided by the spacing
  double asymmetry = 0.0;  // max |A - A^T| / 2 before symmetrization
};

/// Dense matrix of S''(Phi), built column by column. Throws when the raw
/// matrix is not symmetric to 1e-9 of its largest entry.
RealizedOperator assemble_second_variation(const Field& phi, const ActionParams& ap);

/// Dense matrix of the potential-free operator.
RealizedOperator assemble_free_operator(const Grid& grid, const ActionParams& ap);

struct SpectrumReport {
  int negative_count = 0;
  double negative_eigenvalue = 0.0;  // most negative eigenvalue
  int kernel_dimension = 0;
  double kernel_tolerance = 0.0;
  double spectral_radius = 0.0;
  double kernel_rayleigh_phase = 0.0;        // <S'' iPhi, iPhi> / |iPhi|^2
  double kernel_rayleigh_translation = 0.0;  // same for dPhi/dx
  double coercivity_delta = 0.0;             // min generalized Rayleigh quotient on the constrained complement
  RealVector lowest;                         // lowest L2 eigenvalues, ascending
};

/// Symmetric eigensolve of the realized operator plus the coercivity constant
/// on the L2-orthogonal complement of {dPhi/dx, iJPhi, iPhi} in the H1 x L2 metric.
SpectrumReport spectrum_report(const RealizedOperator& op, const Field& phi,
                               const ActionParams& ap, double kernel_relative_tol = 1e-6,
                               std::size_t keep_lowest = 20);

/// Smallest eigenvalue of a realized operator in the L2 metric.
double smallest_eigenvalue(const RealizedOperator& op);

struct SlopeResult {
  double slope = 0.0;             // <S'' dPhi/domega, dPhi/domega>
  double miracle_residual = 0.0;  // |S'' dPhi/domega + (1/gamma) iJPhi| in L2 x L2
};

/// Slope quantity by centered differencing of the profile family in omega.
/// `ap` must be the action coefficients at `omega`; `gamma` the Lorentz factor.
SlopeResult slope_test(const std::function<Field(double)>& family, const ActionParams& ap,
                       double omega, double gamma, double h = 1e-4);

/// Closed-form slope quantity for d = 1 profiles:
/// (1/gamma) d/domega (omega |phi_omega|^2).
double analytic_slope(const ModelParams& model, double omega, double gamma);

}  // namespace nlkg
