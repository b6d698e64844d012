#include "nlkg/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <lapacke.h>

#include "nlkg/errors.hpp"

namespace nlkg {

namespace {

void add_coupling(const Field& w, const ActionParams& ap, Field& out) {
  const auto d1 = spectral_derivative(w.u1, w.grid);
  const auto d2 = spectral_derivative(w.u2, w.grid);
  const auto lap = spectral_second_derivative(w.u1, w.grid);
  const Complex ic(0.0, ap.omega_over_gamma);
  for (std::size_t i = 0; i < w.size(); ++i) {
    out.u1[i] += -lap[i] + ap.model.m * w.u1[i] + ic * w.u2[i] - ap.v * d2[i];
    out.u2[i] += w.u2[i] - ic * w.u1[i] + ap.v * d1[i];
  }
}

Eigen::MatrixXd assemble_columns(const Grid& grid,
                                 const std::function<Field(const Field&)>& apply) {
  const std::size_t n = grid.points();
  const auto dim = static_cast<Eigen::Index>(4 * n);
  Eigen::MatrixXd a(dim, dim);
  Eigen::VectorXd e = Eigen::VectorXd::Zero(dim);
  for (Eigen::Index c = 0; c < dim; ++c) {
    e[c] = 1.0;
    a.col(c) = flatten(apply(unflatten(e, grid)));
    e[c] = 0.0;
  }
  return a;
}

RealizedOperator realize(const Grid& grid, Eigen::MatrixXd a) {
  RealizedOperator op{grid, {}, {}, 0.0};
  const double scale = a.cwiseAbs().maxCoeff();
  op.asymmetry = 0.5 * (a - a.transpose()).cwiseAbs().maxCoeff();
  if (op.asymmetry > 1e-9 * std::max(scale, 1.0)) {
    fail(ErrorKind::numerical, "second variation: assembled matrix is not symmetric");
  }
  op.matrix = 0.5 * (a + a.transpose());

  // H1 x L2 Gram: (I + D^T D) on both parts of u1, identity on u2.
  const std::size_t n = grid.points();
  const auto nn = static_cast<Eigen::Index>(n);
  Eigen::MatrixXd d(nn, nn);
  ComplexVector unit(n, 0.0);
  for (std::size_t c = 0; c < n; ++c) {
    unit[c] = 1.0;
    const auto col = spectral_derivative(unit, grid);
    for (std::size_t r = 0; r < n; ++r) d(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = col[r].real();
    unit[c] = 0.0;
  }
  const Eigen::MatrixXd h1 = Eigen::MatrixXd::Identity(nn, nn) + d.transpose() * d;
  op.gram = Eigen::MatrixXd::Identity(4 * nn, 4 * nn);
  op.gram.block(0, 0, nn, nn) = h1;
  op.gram.block(nn, nn, nn, nn) = h1;
  return op;
}

RealVector symmetric_eigenvalues(Eigen::MatrixXd a) {
  const auto n = static_cast<lapack_int>(a.rows());
  RealVector w(static_cast<std::size_t>(n));
  const lapack_int info = LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'N', 'U', n, a.data(), n, w.data());
  if (info != 0) fail(ErrorKind::numerical, "symmetric eigensolve failed");
  return w;
}

// A y = mu B y reduced to standard form with B = L L^T. The reduction is done
// here rather than with dsygvd, which aborts on some AVX-512 OpenBLAS builds.
RealVector generalized_eigenvalues(Eigen::MatrixXd a, const Eigen::MatrixXd& b) {
  const Eigen::LLT<Eigen::MatrixXd> llt(b);
  if (llt.info() != Eigen::Success) {
    fail(ErrorKind::numerical, "generalized eigensolve: metric is not positive definite");
  }
  const auto l = llt.matrixL();
  l.solveInPlace(a);
  a.transposeInPlace();
  l.solveInPlace(a);
  return symmetric_eigenvalues(std::move(a));
}

double rayleigh(const Field& phi, const Field& z, const ActionParams& ap) {
  return inner_product(apply_second_variation(phi, z, ap), z) / inner_product(z, z);
}

}  // namespace

Field apply_second_variation(const Field& phi, const Field& w, const ActionParams& ap) {
  if (!(phi.grid == w.grid)) fail(ErrorKind::dimension, "second variation: grid mismatch");
  Field out(w.grid);
  add_coupling(w, ap, out);
  const double p = ap.model.p;
  for (std::size_t i = 0; i < w.size(); ++i) {
    const Complex base = phi.u1[i];
    const double modulus = std::abs(base);
    if (modulus == 0.0) continue;
    const Complex z = w.u1[i];
    const double along = (std::conj(base) * z).real();
    out.u1[i] -= std::pow(modulus, p - 1.0) * z +
                 (p - 1.0) * std::pow(modulus, p - 3.0) * along * base;
  }
  return out;
}

Field apply_free_operator(const Field& w, const ActionParams& ap) {
  Field out(w.grid);
  add_coupling(w, ap, out);
  return out;
}

Eigen::VectorXd flatten(const Field& w) {
  const auto n = static_cast<Eigen::Index>(w.size());
  Eigen::VectorXd x(4 * n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto k = static_cast<std::size_t>(i);
    x[i] = w.u1[k].real();
    x[n + i] = w.u1[k].imag();
    x[2 * n + i] = w.u2[k].real();
    x[3 * n + i] = w.u2[k].imag();
  }
  return x;
}

Field unflatten(const Eigen::VectorXd& x, const Grid& grid) {
  const auto n = static_cast<Eigen::Index>(grid.points());
  if (x.size() != 4 * n) fail(ErrorKind::dimension, "unflatten: length mismatch");
  Field w(grid);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto k = static_cast<std::size_t>(i);
    w.u1[k] = {x[i], x[n + i]};
    w.u2[k] = {x[2 * n + i], x[3 * n + i]};
  }
  return w;
}

RealizedOperator assemble_second_variation(const Field& phi, const ActionParams& ap) {
  return realize(phi.grid, assemble_columns(phi.grid, [&](const Field& z) {
                   return apply_second_variation(phi, z, ap);
                 }));
}

RealizedOperator assemble_free_operator(const Grid& grid, const ActionParams& ap) {
  return realize(grid, assemble_columns(grid, [&](const Field& z) {
                   return apply_free_operator(z, ap);
                 }));
}

double smallest_eigenvalue(const RealizedOperator& op) {
  return symmetric_eigenvalues(op.matrix).front();
}

SpectrumReport spectrum_report(const RealizedOperator& op, const Field& phi,
                               const ActionParams& ap, double kernel_relative_tol,
                               std::size_t keep_lowest) {
  SpectrumReport rep;
  const RealVector eig = symmetric_eigenvalues(op.matrix);
  rep.spectral_radius = std::max(std::abs(eig.front()), std::abs(eig.back()));
  rep.kernel_tolerance = kernel_relative_tol * rep.spectral_radius;
  for (double mu : eig) {
    if (std::abs(mu) < rep.kernel_tolerance) {
      ++rep.kernel_dimension;
    } else if (mu < 0.0) {
      ++rep.negative_count;
    }
  }
  rep.negative_eigenvalue = eig.front();
  rep.lowest.assign(eig.begin(), eig.begin() + static_cast<std::ptrdiff_t>(std::min(keep_lowest, eig.size())));

  const Field phase = times_i(phi);
  const Field translation = gradient(phi);
  rep.kernel_rayleigh_phase = rayleigh(phi, phase, ap);
  rep.kernel_rayleigh_translation = rayleigh(phi, translation, ap);

  // Orthonormal complement of the three constraint directions via Householder QR.
  const Eigen::Index dim = op.matrix.rows();
  Eigen::MatrixXd constraints(dim, 3);
  constraints.col(0) = flatten(translation);
  constraints.col(1) = flatten(times_i(apply_J(phi)));
  constraints.col(2) = flatten(phase);
  const Eigen::HouseholderQR<Eigen::MatrixXd> qr(constraints);
  const auto q = qr.householderQ();
  Eigen::MatrixXd a = op.matrix;
  a.applyOnTheLeft(q.adjoint());
  a.applyOnTheRight(q);
  Eigen::MatrixXd g = op.gram;
  g.applyOnTheLeft(q.adjoint());
  g.applyOnTheRight(q);
  const Eigen::Index k = dim - 3;
  const RealVector mu = generalized_eigenvalues(a.bottomRightCorner(k, k), g.bottomRightCorner(k, k));
  rep.coercivity_delta = mu.front();
  return rep;
}

double analytic_slope(const ModelParams& model, double omega, double gamma) {
  if (model.d != 1) fail(ErrorKind::domain, "analytic_slope: closed form only for d = 1");
  const double p = model.p;
  const double gap = model.m - omega * omega;
  if (!(gap > 0.0)) fail(ErrorKind::domain, "analytic_slope: |omega| must be below sqrt(m)");
  const double s = 4.0 / (p - 1.0);
  const double unit_norm = std::pow(0.5 * (p + 1.0), 2.0 / (p - 1.0)) * (2.0 / (p - 1.0)) *
                           std::sqrt(std::numbers::pi) * std::tgamma(0.5 * s) /
                           std::tgamma(0.5 * (s + 1.0));
  const double a = 2.0 / (p - 1.0) - 0.5;
  return std::pow(gap, a) * (1.0 - 2.0 * a * omega * omega / gap) * unit_norm / gamma;
}

SlopeResult slope_test(const std::function<Field(double)>& family, const ActionParams& ap,
                       double omega, double gamma, double h) {
  const double edge = std::sqrt(ap.model.m);
  if (!(h > 0.0) || std::abs(omega) + h >= edge) {
    fail(ErrorKind::domain, "slope_test: differencing stencil leaves the frequency window");
  }
  const Field center = family(omega);
  const Field dphi = (1.0 / (2.0 * h)) * (family(omega + h) - family(omega - h));
  const Field image = apply_second_variation(center, dphi, ap);
  SlopeResult out;
  out.slope = inner_product(image, dphi);
  const Field defect = image + (1.0 / gamma) * times_i(apply_J(center));
  out.miracle_residual = norm_L2L2(defect);
  return out;
}

}  // namespace nlkg
