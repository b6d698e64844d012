#include "nlkg/modulation.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Dense>

#include "nlkg/errors.hpp"

namespace nlkg {

namespace {

constexpr int kParams = 3;

std::vector<ModulatedSoliton> unpack(const Eigen::VectorXd& p,
                                     std::span<const ModulatedSoliton> like) {
  std::vector<ModulatedSoliton> out(like.begin(), like.end());
  for (std::size_t j = 0; j < out.size(); ++j) {
    const auto k = static_cast<Eigen::Index>(kParams * j);
    out[j].theta = p[k];
    out[j].omega = p[k + 1];
    out[j].x = p[k + 2];
  }
  return out;
}

Eigen::VectorXd pack(std::span<const ModulatedSoliton> s) {
  Eigen::VectorXd p(static_cast<Eigen::Index>(kParams * s.size()));
  for (std::size_t j = 0; j < s.size(); ++j) {
    const auto k = static_cast<Eigen::Index>(kParams * j);
    p[k] = s[j].theta;
    p[k + 1] = s[j].omega;
    p[k + 2] = s[j].x;
  }
  return p;
}

struct Evaluation {
  Field residual;
  Eigen::VectorXd values;
};

Evaluation evaluate(const Field& u, const ModelParams& model,
                    std::span<const ModulatedSoliton> params) {
  std::vector<Field> pieces;
  pieces.reserve(params.size());
  Field residual = u;
  for (const auto& s : params) {
    pieces.push_back(modulated_soliton(model, s, u.grid));
    residual -= pieces.back();
  }
  Eigen::VectorXd f(static_cast<Eigen::Index>(kParams * params.size()));
  for (std::size_t j = 0; j < params.size(); ++j) {
    const auto k = static_cast<Eigen::Index>(kParams * j);
    const Field& r = pieces[j];
    f[k] = inner_product(residual, times_i(r));
    f[k + 1] = inner_product(residual, times_i(apply_J(r)));
    f[k + 2] = inner_product(residual, gradient(r));
  }
  return {std::move(residual), std::move(f)};
}

void check_window(const ModelParams& model, std::span<const ModulatedSoliton> params,
                  double margin) {
  const double edge = std::sqrt(model.m) - margin;
  for (const auto& s : params) {
    if (!(std::abs(s.omega) < edge)) {
      throw NumericalFailure("modulation: frequency left the admissible window (not in tube)", 0.0);
    }
  }
}

}  // namespace

Field modulated_soliton(const ModelParams& model, const ModulatedSoliton& s, const Grid& grid) {
  return soliton_field(model, s.omega, s.v, s.theta, s.x, grid);
}

RealVector orthogonality_residuals(const Field& u, const ModelParams& model,
                                   std::span<const ModulatedSoliton> params) {
  const Evaluation e = evaluate(u, model, params);
  return RealVector(e.values.begin(), e.values.end());
}

ModulationState fit_modulation(const Field& u, const ModelParams& model,
                               std::span<const ModulatedSoliton> guess,
                               const FitOptions& options) {
  if (guess.empty()) fail(ErrorKind::domain, "fit_modulation: empty guess");
  check_window(model, guess, options.omega_margin);
  const double scale = std::max(norm_H1L2(u), 1e-300);
  Eigen::VectorXd p = pack(guess);
  const auto dim = p.size();

  ModulationState state(u.grid);
  Evaluation current = evaluate(u, model, guess);
  double best = current.values.cwiseAbs().maxCoeff();
  int stalled = 0;
  for (int iter = 1; iter <= options.max_iter; ++iter) {
    Eigen::MatrixXd jac(dim, dim);
    for (Eigen::Index c = 0; c < dim; ++c) {
      Eigen::VectorXd plus = p, minus = p;
      plus[c] += options.fd_step;
      minus[c] -= options.fd_step;
      const auto fp = evaluate(u, model, unpack(plus, guess)).values;
      const auto fm = evaluate(u, model, unpack(minus, guess)).values;
      jac.col(c) = (fp - fm) / (2.0 * options.fd_step);
    }
    const Eigen::JacobiSVD<Eigen::MatrixXd> svd(jac);
    const auto& sv = svd.singularValues();
    state.jacobian_condition = sv[0] / sv[dim - 1];
    if (!(state.jacobian_condition <= options.max_condition)) {
      std::ostringstream os;
      os << "modulation: degenerate configuration, Jacobian condition " << state.jacobian_condition;
      fail(ErrorKind::numerical, os.str());
    }
    const Eigen::VectorXd step = jac.partialPivLu().solve(-current.values);
    p += step;
    const auto params = unpack(p, guess);
    check_window(model, params, options.omega_margin);
    current = evaluate(u, model, params);
    state.iterations = iter;

    const double err = current.values.cwiseAbs().maxCoeff();
    if (err < best) {
      best = err;
      stalled = 0;
    } else {
      ++stalled;
    }
    const double step_size = step.cwiseAbs().maxCoeff();
    // Iterate past the tolerance until the update reaches rounding level.
    if (err <= options.tolerance * scale && (step_size < 1e-13 * (1.0 + p.cwiseAbs().maxCoeff()) || stalled >= 2)) {
      break;
    }
  }

  state.solitons = unpack(p, guess);
  state.ortho_residuals.assign(current.values.begin(), current.values.end());
  state.residual = std::move(current.residual);
  state.converged = current.values.cwiseAbs().maxCoeff() <= options.tolerance * scale;
  if (!state.converged) {
    throw NumericalFailure("modulation: Newton iteration did not converge (not in tube)", 0.0);
  }
  if (options.min_separation > 0.0) {
    for (std::size_t j = 1; j < state.solitons.size(); ++j) {
      if (!(state.solitons[j].x - state.solitons[j - 1].x > options.min_separation)) {
        throw NumericalFailure("modulation: solitons are not separated (not in tube)", 0.0);
      }
    }
  }
  return state;
}

ParameterTrack track_parameters(std::span<const Snapshot> trajectory, const ModelParams& model,
                                std::span<const ModulatedSoliton> initial,
                                const FitOptions& options) {
  ParameterTrack track;
  std::vector<ModulatedSoliton> seed(initial.begin(), initial.end());
  for (std::size_t k = 0; k < trajectory.size(); ++k) {
    const Snapshot& snap = trajectory[k];
    if (k > 0) {
      const double dt = snap.t - trajectory[k - 1].t;
      for (auto& s : seed) {
        s.theta += dt * s.omega / lorentz_factor(s.v);
        s.x += dt * s.v;
      }
    }
    try {
      track.states.push_back(fit_modulation(snap.field, model, seed, options));
    } catch (const NumericalFailure& e) {
      throw NumericalFailure(e.what(), snap.t);
    }
    seed = track.states.back().solitons;
    track.times.push_back(snap.t);
    track.residual_norms.push_back(norm_H1L2(track.states.back().residual));
  }

  const std::size_t n = track.states.size();
  const std::size_t count = initial.size();
  track.omega_rate.assign(n, RealVector(count, 0.0));
  track.phase_rate.assign(n, RealVector(count, 0.0));
  track.center_rate.assign(n, RealVector(count, 0.0));
  if (n < 2) return track;
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t lo = (k == 0) ? 0 : k - 1;
    const std::size_t hi = (k + 1 == n) ? n - 1 : k + 1;
    const double span = track.times[hi] - track.times[lo];
    for (std::size_t j = 0; j < count; ++j) {
      const auto& a = track.states[lo].solitons[j];
      const auto& b = track.states[hi].solitons[j];
      const auto& c = track.states[k].solitons[j];
      track.omega_rate[k][j] = (b.omega - a.omega) / span;
      track.phase_rate[k][j] = (b.theta - a.theta) / span - c.omega / lorentz_factor(c.v);
      track.center_rate[k][j] = (b.x - a.x) / span - c.v;
    }
  }
  return track;
}

}  // namespace nlkg
