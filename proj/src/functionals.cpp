#include "nlkg/functionals.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "nlkg/errors.hpp"

namespace nlkg {

ActionParams ActionParams::for_soliton(const SolitonParams& sp) {
  return {sp.omega / sp.gamma(), sp.v, sp.model};
}

namespace {

double power_integral(std::span<const Complex> u, double p, const Grid& grid) {
  double sum = 0.0;
  for (const auto& z : u) sum += std::pow(std::abs(z), p + 1.0);
  return sum * grid.spacing();
}

}  // namespace

double energy(const Field& w, const ModelParams& model) {
  const auto du = spectral_derivative(w.u1, w.grid);
  const double kinetic = inner_product_L2(w.u2, w.u2, w.grid);
  const double gradient = inner_product_L2(du, du, w.grid);
  const double mass = inner_product_L2(w.u1, w.u1, w.grid);
  return 0.5 * kinetic + 0.5 * gradient + 0.5 * model.m * mass -
         power_integral(w.u1, model.p, w.grid) / (model.p + 1.0);
}

double charge(const Field& w) {
  double sum = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) sum += (w.u1[i] * std::conj(w.u2[i])).imag();
  return sum * w.grid.spacing();
}

double momentum(const Field& w) {
  const auto du = spectral_derivative(w.u1, w.grid);
  return inner_product_L2(du, w.u2, w.grid);
}

double action(const Field& w, const ActionParams& ap) {
  return energy(w, ap.model) + ap.omega_over_gamma * charge(w) + ap.v * momentum(w);
}

Field energy_gradient(const Field& w, const ModelParams& model) {
  Field g(w.grid);
  const auto lap = spectral_second_derivative(w.u1, w.grid);
  for (std::size_t i = 0; i < w.size(); ++i) {
    const Complex u = w.u1[i];
    g.u1[i] = -lap[i] + model.m * u - std::pow(std::abs(u), model.p - 1.0) * u;
    g.u2[i] = w.u2[i];
  }
  return g;
}

Field action_gradient(const Field& w, const ActionParams& ap) {
  Field g = energy_gradient(w, ap.model);
  const auto d1 = spectral_derivative(w.u1, w.grid);
  const auto d2 = spectral_derivative(w.u2, w.grid);
  const Complex ic(0.0, ap.omega_over_gamma);
  for (std::size_t i = 0; i < w.size(); ++i) {
    g.u1[i] += ic * w.u2[i] - ap.v * d2[i];
    g.u2[i] += -ic * w.u1[i] + ap.v * d1[i];
  }
  return g;
}

RayParts ray_parts(const Field& w, const ActionParams& ap) {
  const auto du = spectral_derivative(w.u1, w.grid);
  RayParts parts;
  parts.quadratic = inner_product_L2(du, du, w.grid) +
                    ap.model.m * inner_product_L2(w.u1, w.u1, w.grid) +
                    inner_product_L2(w.u2, w.u2, w.grid) +
                    2.0 * ap.omega_over_gamma * charge(w) +
                    2.0 * ap.v * inner_product_L2(du, w.u2, w.grid);
  parts.nonlinear = power_integral(w.u1, ap.model.p, w.grid);
  return parts;
}

double nehari_value(const Field& w, const ActionParams& ap) {
  return inner_product(action_gradient(w, ap), w);
}

NehariProjection nehari_project(const Field& w, const ActionParams& ap) {
  const RayParts parts = ray_parts(w, ap);
  if (!(parts.nonlinear > 0.0)) {
    fail(ErrorKind::domain, "nehari_project: nonlinear part vanishes, no projection");
  }
  if (!(parts.quadratic > 0.0)) {
    fail(ErrorKind::domain, "nehari_project: quadratic part is not positive, no maximum on the ray");
  }
  const double s = std::pow(parts.quadratic / parts.nonlinear, 1.0 / (ap.model.p - 1.0));
  return {s, s * w};
}

double cutoff_ramp(double s) noexcept {
  if (s <= -1.0) return 0.0;
  if (s >= 1.0) return 1.0;
  const double a = std::sin(0.25 * std::numbers::pi * (s + 1.0));
  return a * a;
}

double cutoff_ramp_slope(double s) noexcept {
  if (s <= -1.0 || s >= 1.0) return 0.0;
  const double angle = 0.25 * std::numbers::pi * (s + 1.0);
  return 0.25 * std::numbers::pi * std::sin(2.0 * angle);
}

double moving_ramp(const CutoffPartition& cp, std::size_t j, double x) {
  if (j == 0) return 1.0;
  const double scale = std::sqrt(cp.time);
  return cutoff_ramp((x - cp.midpoints[j] * cp.time) / scale);
}

CutoffPartition build_cutoffs(std::span<const double> velocities, double t,
                              const Grid& grid) {
  if (!(t > 0.0)) fail(ErrorKind::domain, "build_cutoffs: time must be positive");
  if (velocities.empty()) fail(ErrorKind::domain, "build_cutoffs: no velocities");
  for (std::size_t j = 1; j < velocities.size(); ++j) {
    if (!(velocities[j] > velocities[j - 1])) {
      fail(ErrorKind::domain, "build_cutoffs: velocities must be strictly increasing");
    }
  }
  CutoffPartition cp;
  cp.velocities.assign(velocities.begin(), velocities.end());
  cp.time = t;
  const std::size_t count = velocities.size();
  cp.midpoints.assign(count, 0.0);
  for (std::size_t j = 1; j < count; ++j) {
    cp.midpoints[j] = 0.5 * (velocities[j - 1] + velocities[j]);
  }
  const std::size_t n = grid.points();
  std::vector<RealVector> ramps(count, RealVector(n));
  for (std::size_t j = 0; j < count; ++j) {
    for (std::size_t i = 0; i < n; ++i) ramps[j][i] = moving_ramp(cp, j, grid.x(i));
  }
  cp.weights.assign(count, RealVector(n));
  for (std::size_t j = 0; j < count; ++j) {
    for (std::size_t i = 0; i < n; ++i) {
      cp.weights[j][i] = (j + 1 < count) ? ramps[j][i] - ramps[j + 1][i] : ramps[j][i];
    }
  }
  return cp;
}

LocalizedQuantities localized_quantities(const Field& w, const CutoffPartition& cp,
                                         std::span<const ActionParams> params) {
  if (params.size() != cp.count()) {
    fail(ErrorKind::dimension, "localized_quantities: one ActionParams per cutoff required");
  }
  const auto du = spectral_derivative(w.u1, w.grid);
  const double h = w.grid.spacing();
  const std::size_t count = cp.count();
  LocalizedQuantities out;
  out.energy.assign(count, 0.0);
  out.charge.assign(count, 0.0);
  out.momentum.assign(count, 0.0);
  for (std::size_t j = 0; j < count; ++j) {
    const auto& model = params[j].model;
    const auto& phi = cp.weights[j];
    double e = 0.0, q = 0.0, pm = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) {
      const Complex u1 = w.u1[i];
      const Complex u2 = w.u2[i];
      const double a1 = std::norm(u1);
      e += phi[i] * (0.5 * std::norm(du[i]) + 0.5 * model.m * a1 + 0.5 * std::norm(u2) -
                     std::pow(a1, 0.5 * (model.p + 1.0)) / (model.p + 1.0));
      q += phi[i] * (u1 * std::conj(u2)).imag();
      pm += phi[i] * (du[i] * std::conj(u2)).real();
    }
    out.energy[j] = e * h;
    out.charge[j] = q * h;
    out.momentum[j] = pm * h;
    out.action += out.energy[j] + params[j].omega_over_gamma * out.charge[j] +
                  params[j].v * out.momentum[j];
  }
  return out;
}

double weighted_hessian_form(const Field& phi, const Field& z, const ActionParams& ap,
                             std::span<const double> weight) {
  if (!(phi.grid == z.grid)) fail(ErrorKind::dimension, "hessian form: grid mismatch");
  if (!weight.empty() && weight.size() != z.size()) {
    fail(ErrorKind::dimension, "hessian form: weight length mismatch");
  }
  const auto dz = spectral_derivative(z.u1, z.grid);
  const double p = ap.model.p;
  double sum = 0.0;
  for (std::size_t i = 0; i < z.size(); ++i) {
    const double wt = weight.empty() ? 1.0 : weight[i];
    if (wt == 0.0) continue;
    const Complex base = phi.u1[i];
    const Complex z1 = z.u1[i];
    const Complex z2 = z.u2[i];
    const double modulus = std::abs(base);
    double potential = 0.0;
    if (modulus > 0.0) {
      const double along = (std::conj(base) * z1).real() / modulus;
      potential = std::pow(modulus, p - 1.0) * (std::norm(z1) + (p - 1.0) * along * along);
    }
    const double density = std::norm(dz[i]) + ap.model.m * std::norm(z1) + std::norm(z2) -
                            potential +
                            2.0 * ap.omega_over_gamma * (z1 * std::conj(z2)).imag() +
                            2.0 * ap.v * (dz[i] * std::conj(z2)).real();
    sum += wt * density;
  }
  return sum * z.grid.spacing();
}

}  // namespace nlkg
