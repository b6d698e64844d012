#include "nlkg/integrator.hpp"

#include <cmath>
#include <sstream>

#include "nlkg/errors.hpp"
#include "nlkg/fft.hpp"

namespace nlkg {

void IntegratorConfig::validate(const Grid& grid) const {
  if (dt == 0.0 || !std::isfinite(dt)) fail(ErrorKind::config, "integrator: dt must be nonzero");
  if (std::abs(dt) > 0.5 * grid.spacing()) {
    std::ostringstream os;
    os << "integrator: |dt| = " << std::abs(dt) << " exceeds 0.5*spacing = "
       << 0.5 * grid.spacing();
    fail(ErrorKind::config, os.str());
  }
}

Propagator::Propagator(const Grid& grid, const ModelParams& model,
                       const IntegratorConfig& cfg)
    : grid_(grid), model_(model), cfg_(cfg) {
  model_.validate();
  cfg_.validate(grid_);
  const auto symbol = grid_.derivative_symbol();
  const std::size_t n = grid_.points();
  frequency_.resize(n);
  keep_.assign(n, true);
  const double cutoff = 2.0 / 3.0 * grid_.max_wavenumber();
  for (std::size_t i = 0; i < n; ++i) {
    frequency_[i] = std::sqrt(model_.m + symbol[i] * symbol[i]);
    if (cfg_.dealias && std::abs(grid_.wavenumbers()[i]) > cutoff) keep_[i] = false;
  }
  if (cfg_.scheme == Scheme::strang) {
    substeps_ = {cfg_.dt};
  } else {
    const double cbrt2 = std::cbrt(2.0);
    const double outer = 1.0 / (2.0 - cbrt2);
    const double inner = -cbrt2 / (2.0 - cbrt2);
    substeps_ = {outer * cfg_.dt, inner * cfg_.dt, outer * cfg_.dt};
  }
  for (double tau : substeps_) halves_.push_back(make_rotation(0.5 * tau));
}

Propagator::Rotation Propagator::make_rotation(double tau) const {
  Rotation r;
  const std::size_t n = frequency_.size();
  r.cosine.resize(n);
  r.sine_over_freq.resize(n);
  r.freq_sine.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double w = frequency_[i];
    const double s = std::sin(w * tau);
    r.cosine[i] = std::cos(w * tau);
    r.sine_over_freq[i] = s / w;
    r.freq_sine[i] = w * s;
  }
  return r;
}

void Propagator::rotate(const Rotation& r, ComplexVector& hat1,
                        ComplexVector& hat2) const {
  for (std::size_t i = 0; i < hat1.size(); ++i) {
    const Complex a = hat1[i];
    const Complex b = hat2[i];
    hat1[i] = r.cosine[i] * a + r.sine_over_freq[i] * b;
    hat2[i] = -r.freq_sine[i] * a + r.cosine[i] * b;
  }
}

void Propagator::kick(double tau, ComplexVector& hat1, ComplexVector& hat2,
                      double time) const {
  // u1 is frozen by the nonlinear sub-flow, so u2 += tau |u1|^{p-1} u1 is exact.
  const std::size_t n = hat1.size();
  ComplexVector u1(n);
  fft::inverse(hat1, u1);
  double peak = 0.0;
  const double power = model_.p - 1.0;
  for (auto& z : u1) {
    const double a = std::abs(z);
    if (!std::isfinite(a) || a > peak) peak = std::isfinite(a) ? a : INFINITY;
    z *= std::pow(a, power);
  }
  if (!(peak <= kBlowUpAmplitude)) {
    std::ostringstream os;
    os << "blow-up detected: sup|u1| = " << peak;
    throw NumericalFailure(os.str(), time);
  }
  ComplexVector force(n);
  fft::forward(u1, force);
  for (std::size_t i = 0; i < n; ++i) {
    if (keep_[i]) hat2[i] += tau * force[i];
  }
}

void Propagator::strang(const Rotation& half, double tau, ComplexVector& hat1,
                        ComplexVector& hat2, double time) const {
  rotate(half, hat1, hat2);
  kick(tau, hat1, hat2, time);
  rotate(half, hat1, hat2);
}

void Propagator::advance(ComplexVector& hat1, ComplexVector& hat2, double time) const {
  for (std::size_t s = 0; s < substeps_.size(); ++s) {
    strang(halves_[s], substeps_[s], hat1, hat2, time);
  }
}

namespace {

void to_fourier(const Field& w, ComplexVector& hat1, ComplexVector& hat2) {
  hat1.resize(w.size());
  hat2.resize(w.size());
  fft::forward(w.u1, hat1);
  fft::forward(w.u2, hat2);
}

Field from_fourier(const Grid& grid, const ComplexVector& hat1, const ComplexVector& hat2) {
  Field w(grid);
  fft::inverse(hat1, w.u1);
  fft::inverse(hat2, w.u2);
  return w;
}

}  // namespace

Field step(const Field& w, const IntegratorConfig& cfg, const ModelParams& model) {
  if (!w.all_finite()) throw NumericalFailure("non-finite field", 0.0);
  const Propagator prop(w.grid, model, cfg);
  ComplexVector hat1, hat2;
  to_fourier(w, hat1, hat2);
  prop.advance(hat1, hat2, 0.0);
  Field out = from_fourier(w.grid, hat1, hat2);
  if (!out.all_finite()) throw NumericalFailure("non-finite field after step", cfg.dt);
  return out;
}

Field evolve(const Field& w, double t0, double t1, const IntegratorConfig& cfg,
             const ModelParams& model, std::span<const EvolutionHook> hooks) {
  if (t1 == t0) {
    for (const auto& hook : hooks) {
      if (hook.callback) hook.callback(t0, w);
    }
    return w;
  }
  IntegratorConfig directed = cfg;
  directed.dt = std::copysign(std::abs(cfg.dt), t1 - t0);
  const double ratio = (t1 - t0) / directed.dt;
  const double count = std::round(ratio);
  if (count < 1.0 || std::abs(ratio - count) > 1e-9 * std::max(1.0, count)) {
    fail(ErrorKind::config, "evolve: (t1 - t0)/dt must be a positive integer");
  }
  const auto steps = static_cast<std::size_t>(count);
  const Propagator prop(w.grid, model, directed);
  if (!w.all_finite()) throw NumericalFailure("non-finite initial field", t0);

  ComplexVector hat1, hat2;
  to_fourier(w, hat1, hat2);
  auto report = [&](std::size_t k, bool last) {
    bool any = false;
    for (const auto& hook : hooks) {
      if (hook.callback && (last || k == 0 || (hook.stride > 0 && k % hook.stride == 0))) {
        any = true;
      }
    }
    if (!any) return;
    const double t = (k == steps) ? t1 : t0 + static_cast<double>(k) * directed.dt;
    const Field current = from_fourier(w.grid, hat1, hat2);
    for (const auto& hook : hooks) {
      if (hook.callback && (last || k == 0 || (hook.stride > 0 && k % hook.stride == 0))) {
        hook.callback(t, current);
      }
    }
  };
  report(0, false);
  for (std::size_t k = 1; k <= steps; ++k) {
    const double t = t0 + static_cast<double>(k - 1) * directed.dt;
    prop.advance(hat1, hat2, t);
    report(k, k == steps);
  }
  Field out = from_fourier(w.grid, hat1, hat2);
  if (!out.all_finite()) throw NumericalFailure("non-finite field", t1);
  return out;
}

}  // namespace nlkg
