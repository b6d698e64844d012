#include "nlkg/profiles.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

#include "nlkg/errors.hpp"

namespace nlkg {

void ModelParams::validate() const {
  if (!(m > 0.0) || !std::isfinite(m)) fail(ErrorKind::domain, "mass m must be positive");
  if (!(p > 1.0) || !std::isfinite(p)) fail(ErrorKind::domain, "exponent p must exceed 1");
  if (d < 1 || d > 3) fail(ErrorKind::domain, "dimension d must be 1, 2 or 3");
}

bool ModelParams::mass_subcritical() const noexcept {
  return p > 1.0 && p < 1.0 + 4.0 / d;
}

bool ModelParams::energy_subcritical() const noexcept {
  if (d <= 2) return p > 1.0;
  return p > 1.0 && p < (d + 2.0) / (d - 2.0);
}

double ModelParams::stability_threshold() const noexcept {
  return 1.0 / (1.0 + 4.0 / (p - 1.0) - d);
}

double lorentz_factor(double v) {
  if (!(std::abs(v) < 1.0)) fail(ErrorKind::domain, "velocity must satisfy |v| < 1");
  return 1.0 / std::sqrt(1.0 - v * v);
}

double SolitonParams::gamma() const noexcept { return 1.0 / std::sqrt(1.0 - v * v); }

void SolitonParams::validate() const {
  model.validate();
  if (!(std::abs(v) < 1.0)) fail(ErrorKind::domain, "velocity must satisfy |v| < 1");
  if (!(std::abs(omega) < std::sqrt(model.m))) {
    fail(ErrorKind::domain, "frequency must satisfy |omega| < sqrt(m)");
  }
}

bool SolitonParams::stable() const noexcept {
  if (!model.mass_subcritical()) return false;
  if (!(std::abs(v) < 1.0)) return false;
  const double ratio = omega * omega / model.m;
  return ratio < 1.0 && ratio > model.stability_threshold();
}

namespace {

double stable_sech(double y) {
  const double e = std::exp(-std::abs(y));
  return 2.0 * e / (1.0 + e * e);
}

double frequency_gap(const ModelParams& model, double omega) {
  const double gap = model.m - omega * omega;
  if (!(gap > 0.0)) {
    std::ostringstream os;
    os << "frequency out of range: |omega| = " << std::abs(omega)
       << " >= sqrt(m) = " << std::sqrt(model.m);
    fail(ErrorKind::domain, os.str());
  }
  return gap;
}

// phi~'(x) for the closed form.
double unit_ground_state_1d_slope(double p, double x) {
  const double b = 0.5 * (p - 1.0);
  return -unit_ground_state_1d(p, x) * std::tanh(b * x);
}

// Linear tail r^{1-d/2} K_{|d/2-1|}(kappa r), up to a constant.
double radial_tail_shape(int d, double kappa, double r) {
  switch (d) {
    case 1:
      return std::exp(-kappa * r);
    case 3:
      return std::exp(-kappa * r) / r;
    default:
      return std::cyl_bessel_k(0.0, kappa * r);
  }
}

double radial_tail_slope(int d, double kappa, double r) {
  switch (d) {
    case 1:
      return -kappa * std::exp(-kappa * r);
    case 3:
      return -std::exp(-kappa * r) * (kappa * r + 1.0) / (r * r);
    default:
      return -kappa * std::cyl_bessel_k(1.0, kappa * r);
  }
}

}  // namespace

double unit_ground_state_1d(double p, double x) {
  const double amplitude = std::pow(0.5 * (p + 1.0), 1.0 / (p - 1.0));
  return amplitude * std::pow(stable_sech(0.5 * (p - 1.0) * x), 2.0 / (p - 1.0));
}

double GroundState::decay_rate() const noexcept {
  return std::sqrt(model.m - omega * omega);
}

double GroundState::value(double r) const {
  r = std::abs(r);
  const double kappa = decay_rate();
  if (kind_ == Kind::closed_form) {
    return std::pow(kappa, 2.0 / (model.p - 1.0)) *
           unit_ground_state_1d(model.p, kappa * r);
  }
  const double rmax = nodes.back();
  if (r >= rmax) return tail_amplitude_ * radial_tail_shape(model.d, kappa, r);
  const double h = nodes[1] - nodes[0];
  const auto i = std::min(static_cast<std::size_t>(r / h), nodes.size() - 2);
  const double s = (r - nodes[i]) / h;
  // cubic Hermite on (phi, phi')
  const double h00 = (1 + 2 * s) * (1 - s) * (1 - s);
  const double h10 = s * (1 - s) * (1 - s);
  const double h01 = s * s * (3 - 2 * s);
  const double h11 = s * s * (s - 1);
  return h00 * samples[i] + h10 * h * slopes_[i] + h01 * samples[i + 1] +
         h11 * h * slopes_[i + 1];
}

double GroundState::derivative(double r) const {
  const double sign = r < 0.0 ? -1.0 : 1.0;
  r = std::abs(r);
  const double kappa = decay_rate();
  if (kind_ == Kind::closed_form) {
    const double scale = std::pow(kappa, 2.0 / (model.p - 1.0)) * kappa;
    return sign * scale * unit_ground_state_1d_slope(model.p, kappa * r);
  }
  const double rmax = nodes.back();
  if (r >= rmax) return sign * tail_amplitude_ * radial_tail_slope(model.d, kappa, r);
  const double h = nodes[1] - nodes[0];
  const auto i = std::min(static_cast<std::size_t>(r / h), nodes.size() - 2);
  const double s = (r - nodes[i]) / h;
  const double d00 = 6 * s * s - 6 * s;
  const double d10 = 3 * s * s - 4 * s + 1;
  const double d01 = -6 * s * s + 6 * s;
  const double d11 = 3 * s * s - 2 * s;
  return sign * (d00 * samples[i] / h + d10 * slopes_[i] + d01 * samples[i + 1] / h +
                 d11 * slopes_[i + 1]);
}

GroundState ground_state_1d(const ModelParams& model, double omega,
                            const Grid& grid) {
  model.validate();
  if (model.d != 1) fail(ErrorKind::domain, "ground_state_1d requires d = 1");
  const double gap = frequency_gap(model, omega);
  GroundState gs;
  gs.model = model;
  gs.omega = omega;
  gs.kind_ = GroundState::Kind::closed_form;
  gs.nodes = grid.coordinates();
  gs.samples.resize(gs.nodes.size());
  for (std::size_t i = 0; i < gs.nodes.size(); ++i) gs.samples[i] = gs.value(gs.nodes[i]);

  const double peak = gs.value(0.0);
  const double edge = gs.value(0.5 * grid.length());
  if (edge > 1e-6 * peak) {
    std::ostringstream os;
    os << "domain too small for the profile decay: phi(L/2)/phi(0) = " << edge / peak
       << "; use L >= " << recommended_length(model, omega);
    fail(ErrorKind::domain, os.str());
  }

  const auto second = spectral_second_derivative(to_complex(gs.samples), grid);
  double residual = 0.0;
  for (std::size_t i = 0; i < gs.samples.size(); ++i) {
    const double phi = gs.samples[i];
    const double r = -second[i].real() + gap * phi - std::pow(phi, model.p);
    residual = std::max(residual, std::abs(r));
  }
  gs.residual = residual;
  return gs;
}

namespace {

struct ShotState {
  double phi;
  double slope;
};

ShotState radial_rhs(const ModelParams& model, double gap, double r,
                     const ShotState& s) {
  const double nonlinear = std::pow(std::abs(s.phi), model.p - 1.0) * s.phi;
  double second;
  if (r == 0.0) {
    second = (gap * s.phi - nonlinear) / model.d;
  } else {
    second = -(model.d - 1.0) / r * s.slope + gap * s.phi - nonlinear;
  }
  return {s.slope, second};
}

enum class ShotOutcome { overshoot, undershoot };

struct Shot {
  RealVector phi;
  RealVector slope;
  ShotOutcome outcome;
};

Shot shoot(const ModelParams& model, double gap, double amplitude, double rmax,
           std::size_t n) {
  const double h = rmax / static_cast<double>(n);
  Shot shot;
  shot.phi.reserve(n + 1);
  shot.slope.reserve(n + 1);
  ShotState s{amplitude, 0.0};
  shot.phi.push_back(s.phi);
  shot.slope.push_back(s.slope);
  {
    // First step from the regular series phi0 + c2 r^2 + c4 r^4 + c6 r^6,
    // avoiding the (d-1)/r singularity.
    const double d = model.d, p = model.p, a = amplitude;
    const double f0 = gap * a - std::pow(a, p);
    const double f1 = gap - p * std::pow(a, p - 1.0);
    const double f2 = -p * (p - 1.0) * std::pow(a, p - 2.0);
    const double c2 = f0 / (2.0 * d);
    const double c4 = f1 * c2 / (4.0 * (d + 2.0));
    const double c6 = (f1 * c4 + 0.5 * f2 * c2 * c2) / (6.0 * (d + 4.0));
    const double h2 = h * h;
    s.phi = a + h2 * (c2 + h2 * (c4 + h2 * c6));
    s.slope = h * (2.0 * c2 + h2 * (4.0 * c4 + h2 * 6.0 * c6));
    shot.phi.push_back(s.phi);
    shot.slope.push_back(s.slope);
  }
  for (std::size_t i = 1; i < n; ++i) {
    auto add = [](const ShotState& a, const ShotState& k, double c) {
      return ShotState{a.phi + c * k.phi, a.slope + c * k.slope};
    };
    // The 1/r coefficient varies on the scale r itself; subdivide near the origin.
    const int sub = i < 64 ? 64 : 1;
    const double hs = h / sub;
    for (int q = 0; q < sub; ++q) {
      const double r = h * static_cast<double>(i) + hs * q;
      const ShotState k1 = radial_rhs(model, gap, r, s);
      const ShotState k2 = radial_rhs(model, gap, r + 0.5 * hs, add(s, k1, 0.5 * hs));
      const ShotState k3 = radial_rhs(model, gap, r + 0.5 * hs, add(s, k2, 0.5 * hs));
      const ShotState k4 = radial_rhs(model, gap, r + hs, add(s, k3, hs));
      s.phi += hs / 6.0 * (k1.phi + 2 * k2.phi + 2 * k3.phi + k4.phi);
      s.slope += hs / 6.0 * (k1.slope + 2 * k2.slope + 2 * k3.slope + k4.slope);
    }
    shot.phi.push_back(s.phi);
    shot.slope.push_back(s.slope);
    if (s.phi < 0.0) {
      shot.outcome = ShotOutcome::overshoot;
      return shot;
    }
    if (s.slope > 0.0) {
      shot.outcome = ShotOutcome::undershoot;
      return shot;
    }
  }
  // Undecided within rmax: the sign of the growing mode decides.
  const double growing = s.slope + std::sqrt(gap) * s.phi;
  shot.outcome = growing > 0.0 ? ShotOutcome::undershoot : ShotOutcome::overshoot;
  return shot;
}

}  // namespace

GroundState ground_state_radial(const ModelParams& model, double omega,
                                double rmax, std::size_t n) {
  model.validate();
  if (!model.energy_subcritical()) {
    fail(ErrorKind::domain, "no ground state: p is not energy subcritical");
  }
  if (!(rmax > 0.0) || n < 16) fail(ErrorKind::domain, "radial grid too small");
  const double gap = frequency_gap(model, omega);
  const double kappa = std::sqrt(gap);

  // Below the constant equilibrium the shot turns up immediately.
  const double equilibrium = std::pow(gap, 1.0 / (model.p - 1.0));
  double lo = equilibrium * (1.0 + 1e-9);
  double hi = 2.0 * equilibrium;
  int guard = 0;
  while (shoot(model, gap, hi, rmax, n).outcome != ShotOutcome::overshoot) {
    lo = hi;
    hi *= 2.0;
    if (++guard > 60) fail(ErrorKind::numerical, "shooting failure: cannot bracket phi(0)");
  }
  if (shoot(model, gap, lo, rmax, n).outcome != ShotOutcome::undershoot) {
    fail(ErrorKind::numerical, "shooting failure: lower bracket does not undershoot");
  }
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (shoot(model, gap, mid, rmax, n).outcome == ShotOutcome::overshoot) {
      hi = mid;
    } else {
      lo = mid;
    }
    if (hi - lo <= 1e-15 * hi) break;
  }
  if (hi - lo > 1e-12 * hi) {
    fail(ErrorKind::numerical, "shooting failure: bisection did not reach tolerance");
  }

  const Shot under = shoot(model, gap, lo, rmax, n);
  const Shot over = shoot(model, gap, hi, rmax, n);
  const double h = rmax / static_cast<double>(n);

  // Both shots track the ground state until the unstable mode separates them;
  // past that point the profile is continued by the exact linear tail.
  std::size_t cut = std::min(under.phi.size(), over.phi.size()) - 1;
  for (std::size_t i = 1; i < cut; ++i) {
    const double mean = 0.5 * (under.phi[i] + over.phi[i]);
    if (std::abs(under.phi[i] - over.phi[i]) > 1e-6 * mean) {
      cut = i;
      break;
    }
  }
  // Stay clear of the region where the shots already disagree.
  cut = std::max<std::size_t>(cut > 20 ? cut - 20 : cut, 2);

  GroundState gs;
  gs.model = model;
  gs.omega = omega;
  gs.kind_ = GroundState::Kind::tabulated;
  gs.nodes.resize(n + 1);
  gs.samples.resize(n + 1);
  gs.slopes_.resize(n + 1);
  const double rc = h * static_cast<double>(cut);
  const double phic = 0.5 * (under.phi[cut] + over.phi[cut]);
  gs.tail_amplitude_ = phic / radial_tail_shape(model.d, kappa, rc);
  for (std::size_t i = 0; i <= n; ++i) {
    const double r = h * static_cast<double>(i);
    gs.nodes[i] = r;
    if (i <= cut) {
      gs.samples[i] = 0.5 * (under.phi[i] + over.phi[i]);
      gs.slopes_[i] = 0.5 * (under.slope[i] + over.slope[i]);
    } else {
      gs.samples[i] = gs.tail_amplitude_ * radial_tail_shape(model.d, kappa, r);
      gs.slopes_[i] = gs.tail_amplitude_ * radial_tail_slope(model.d, kappa, r);
    }
  }

  for (std::size_t i = 1; i <= n; ++i) {
    if (!(gs.samples[i] < gs.samples[i - 1]) || !(gs.samples[i] > 0.0)) {
      fail(ErrorKind::numerical,
           "shooting failure: profile is not positive and strictly decreasing");
    }
  }

  // Sixth-order central differences with the even extension about r = 0.
  auto at = [&](long i) { return gs.samples[static_cast<std::size_t>(std::abs(i))]; };
  static constexpr std::array<double, 4> c2 = {-49.0 / 18.0, 3.0 / 2.0, -3.0 / 20.0,
                                               1.0 / 90.0};
  static constexpr std::array<double, 3> c1 = {3.0 / 4.0, -3.0 / 20.0, 1.0 / 60.0};
  double residual = 0.0;
  const long last = static_cast<long>(n) - 3;
  for (long i = 0; i <= last; ++i) {
    double d2 = c2[0] * at(i);
    double d1 = 0.0;
    for (long k = 1; k <= 3; ++k) {
      d2 += c2[k] * (at(i + k) + at(i - k));
      d1 += c1[k - 1] * (at(i + k) - at(i - k));
    }
    d2 /= h * h;
    d1 /= h;
    const double r = h * static_cast<double>(i);
    const double lap = (i == 0) ? model.d * d2 : d2 + (model.d - 1.0) / r * d1;
    const double phi = at(i);
    const double res = lap - gap * phi + std::pow(phi, model.p);
    residual = std::max(residual, std::abs(res));
  }
  gs.residual = residual;
  return gs;
}

Field soliton_field(const GroundState& gs, double v, double phase, double center,
                    const Grid& grid) {
  const double gamma = lorentz_factor(v);
  const double omega = gs.omega;
  const std::size_t n = grid.points();
  ComplexVector shape(n);
  RealVector y(n);
  for (std::size_t i = 0; i < n; ++i) {
    y[i] = grid.wrap(grid.x(i) - center);
    shape[i] = gs.value(gamma * y[i]);
  }
  // d/dx phi(gamma y) = gamma phi'(gamma y)
  const ComplexVector dshape = spectral_derivative(shape, grid);
  Field w(grid);
  const Complex rotation = std::polar(1.0, phase);
  for (std::size_t i = 0; i < n; ++i) {
    const Complex carrier = rotation * std::polar(1.0, -gamma * omega * v * y[i]);
    const double s = shape[i].real();
    w.u1[i] = carrier * s;
    w.u2[i] = carrier * (Complex(0.0, gamma * omega * s) - v * dshape[i].real());
  }
  return w;
}

namespace {
GroundState closed_form(const ModelParams& model, double omega) {
  // The evaluator only needs the parameters; no grid sampling.
  ModelParams m1 = model;
  m1.validate();
  if (m1.d != 1) fail(ErrorKind::domain, "solitons are one-dimensional");
  frequency_gap(m1, omega);
  GroundState gs;
  gs.model = m1;
  gs.omega = omega;
  return gs;
}
}  // namespace

Field soliton_field(const ModelParams& model, double omega, double v, double phase,
                    double center, const Grid& grid) {
  return soliton_field(closed_form(model, omega), v, phase, center, grid);
}

Field boost_profile(const GroundState& gs, const SolitonParams& sp, const Grid& grid) {
  sp.validate();
  if (gs.omega != sp.omega || gs.model.m != sp.model.m || gs.model.p != sp.model.p) {
    fail(ErrorKind::domain, "boost_profile: ground state and soliton parameters differ");
  }
  const double gamma = sp.gamma();
  const double edge = gs.value(0.5 * gamma * grid.length());
  if (edge > 1e-6 * gs.value(0.0)) {
    fail(ErrorKind::domain, "boost_profile: grid too small for the profile support");
  }
  return soliton_field(gs, sp.v, 0.0, 0.0, grid);
}

Field sample_soliton(const SolitonParams& sp, double t, const Grid& grid) {
  sp.validate();
  const double gamma = sp.gamma();
  return soliton_field(sp.model, sp.omega, sp.v, sp.omega / gamma * t + sp.theta,
                       sp.x0 + sp.v * t, grid);
}

Field sample_solitons(std::span<const SolitonParams> solitons, double t,
                      const Grid& grid) {
  Field sum(grid);
  for (const auto& sp : solitons) sum += sample_soliton(sp, t, grid);
  return sum;
}

double recommended_length(const ModelParams& model, double omega,
                          double translation_extent) {
  return 60.0 / std::sqrt(frequency_gap(model, omega)) + translation_extent;
}

}  // namespace nlkg
