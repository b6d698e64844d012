#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "nlkg/grid.hpp"
#include "nlkg/profiles.hpp"

namespace nlkg {

enum class Scheme {
  strang,    // linear(dt/2) nonlinear(dt) linear(dt/2), second order
  yoshida4,  // triple-jump composition of strang steps, fourth order
};

struct IntegratorConfig {
  double dt = 0.01;       // sign gives the direction of time
  std::size_t steps = 0;  // used by step-count driven callers only
  Scheme scheme = Scheme::strang;
  bool dealias = false;   // 2/3 rule on the nonlinear kick

  /// dt != 0 and |dt| <= 0.5 * spacing.
  void validate(const Grid& grid) const;
};

/// Reusable propagator for a fixed (grid, model, dt, scheme). The state is
/// advanced in Fourier space; both sub-flows are exact.
class Propagator {
 public:
  Propagator(const Grid& grid, const ModelParams& model, const IntegratorConfig& cfg);

  /// Advances the spectral state by one step. `time` is only used to label
  /// blow-up failures.
  void advance(ComplexVector& hat1, ComplexVector& hat2, double time) const;

  const IntegratorConfig& config() const noexcept { return cfg_; }

 private:
  struct Rotation {
    RealVector cosine;
    RealVector sine_over_freq;
    RealVector freq_sine;
  };
  Rotation make_rotation(double tau) const;
  void rotate(const Rotation& r, ComplexVector& hat1, ComplexVector& hat2) const;
  void kick(double tau, ComplexVector& hat1, ComplexVector& hat2, double time) const;
  void strang(const Rotation& half, double tau, ComplexVector& hat1, ComplexVector& hat2,
              double time) const;

  Grid grid_;
  ModelParams model_;
  IntegratorConfig cfg_;
  RealVector frequency_;
  std::vector<bool> keep_;  // dealiasing mask
  std::vector<Rotation> halves_;
  RealVector substeps_;
};

/// One integrator step.
Field step(const Field& w, const IntegratorConfig& cfg, const ModelParams& model);

/// Observer called during evolve with the current time and field.
struct EvolutionHook {
  std::size_t stride = 1;  // in steps; the initial and final states are always reported
  std::function<void(double t, const Field& w)> callback;
};

/// Integrates from t0 to t1 with |dt| from cfg (the sign is taken from t1 - t0).
/// (t1 - t0)/dt must be an integer. Throws NumericalFailure on blow-up.
Field evolve(const Field& w, double t0, double t1, const IntegratorConfig& cfg,
             const ModelParams& model, std::span<const EvolutionHook> hooks = {});

/// Blow-up threshold on sup |u1|.
inline constexpr double kBlowUpAmplitude = 1e6;

}  // namespace nlkg
