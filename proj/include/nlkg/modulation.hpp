#pragma once

#include <span>
#include <vector>

#include "nlkg/grid.hpp"
#include "nlkg/profiles.hpp"

namespace nlkg {

/// Modulated parameters of one soliton; v is fixed, never fitted.
struct ModulatedSoliton {
  double theta = 0.0;
  double omega = 0.0;
  double x = 0.0;
  double v = 0.0;
};

struct ModulationState {
  std::vector<ModulatedSoliton> solitons;
  Field residual;              // U - sum of modulated solitons
  RealVector ortho_residuals;  // 3 per soliton: <res, iR>, <res, iJR>, <res, dR/dx>
  bool converged = false;
  int iterations = 0;
  double jacobian_condition = 0.0;

  explicit ModulationState(Grid grid) : residual(std::move(grid)) {}
};

struct FitOptions {
  int max_iter = 50;
  double fd_step = 1e-6;
  double tolerance = 1e-10;       // on max |ortho residual| / |U|_{H1xL2}
  double max_condition = 1e8;
  double omega_margin = 1e-3;     // |omega| must stay below sqrt(m) - margin
  double min_separation = 0.0;    // consecutive centers must be farther apart than this (0 disables)
};

/// Modulated soliton e^{i theta} Phi_{omega,v}(x - x0) on the grid.
Field modulated_soliton(const ModelParams& model, const ModulatedSoliton& s, const Grid& grid);

/// Orthogonality residuals for the given parameters.
RealVector orthogonality_residuals(const Field& u, const ModelParams& model,
                                   std::span<const ModulatedSoliton> params);

/// Newton solve of the orthogonality system starting from `guess`.
/// Throws NumericalFailure when the iteration leaves the tube and Error(numerical)
/// on a degenerate Jacobian.
ModulationState fit_modulation(const Field& u, const ModelParams& model,
                               std::span<const ModulatedSoliton> guess,
                               const FitOptions& options = {});

/// Modulation along a trajectory together with centered time derivatives.
struct ParameterTrack {
  RealVector times;
  std::vector<ModulationState> states;
  // [snapshot][soliton]
  std::vector<RealVector> omega_rate;  // d omega~/dt
  std::vector<RealVector> phase_rate;  // d theta~/dt - omega~/gamma
  std::vector<RealVector> center_rate; // d x~/dt - v
  RealVector residual_norms;           // |U - sum R~|_{H1xL2}
};

struct Snapshot {
  double t = 0.0;
  Field field;
};

/// Fits every snapshot in time order; each fit is seeded by the previous one
/// advanced with an Euler prediction. Throws NumericalFailure with the time
/// of the first failed fit.
ParameterTrack track_parameters(std::span<const Snapshot> trajectory, const ModelParams& model,
                                std::span<const ModulatedSoliton> initial,
                                const FitOptions& options = {});

}  // namespace nlkg
