#pragma once

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "slns/boundary.hpp"
#include "slns/elliptic.hpp"
#include "slns/field.hpp"
#include "slns/interpolation.hpp"
#include "slns/trajectory.hpp"

namespace slns {

struct RunConfig {
  double nu = 0.0;
  double dt = 0.0;
  /// Exactly one stopping rule: transient to end_time, or steady when
  /// max |omega^{n+1} - omega^n| / dt drops below steady_tol.
  std::optional<double> end_time;
  std::optional<double> steady_tol;
  TracerConfig tracer;
  InterpolationScheme scheme = InterpolationScheme::MonotonizedBicubic;
  PoissonBackend poisson_backend = PoissonBackend::Direct;
  double poisson_tol = 1e-10;
  long max_steps = 1000000;
  /// Diagnostics cadence in steps; 0 records only the final step.
  long output_every = 0;
  /// Warn when the compatibility ratio exceeds this.
  double guard_threshold = 0.5;

  void validate() const;
};

struct SolverState {
  ScalarField omega;
  ScalarField psi;
  VectorField u_now;
  VectorField u_prev;
  double t = 0.0;
  long step = 0;
};

struct StepDiagnostics {
  long step = 0;
  double t = 0.0;
  /// max |omega^{n+1} - omega^n| / dt
  double change_rate = 0.0;
  double max_abs_omega = 0.0;
  int substeps = 0;
  int poisson_iterations = 0;
  double poisson_residual = 0.0;
};

/// Failure inside a time step, tagged with the step index and stage.
class StepError : public std::runtime_error {
 public:
  StepError(long step, std::string stage, const std::string& detail)
      : std::runtime_error("step " + std::to_string(step) + ", stage " + stage + ": " + detail),
        step_(step),
        stage_(std::move(stage)) {}
  long step() const { return step_; }
  const std::string& stage() const { return stage_; }

 private:
  long step_;
  std::string stage_;
};

class RunError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunResult {
  SolverState state;
  std::vector<StepDiagnostics> history;
  std::vector<std::string> warnings;
  bool converged = false;
};

/// Called after every step whose index is a multiple of the output cadence.
using StepObserver = std::function<void(const SolverState&, const StepDiagnostics&)>;

/// Time stepper for the vorticity-streamfunction system.
///
/// Each step: Thom wall vorticity from psi^n, tracing velocity (Heun:
/// extrapolated to n+1/2, Euler: u^n), semi-Lagrangian advection-diffusion
/// at non-wall nodes, Poisson solve, velocity reconstruction.
class Solver {
 public:
  Solver(GridPtr grid, std::vector<WallSpec> walls, RunConfig cfg);

  /// Exactly one of psi0 / omega0 must be given.
  SolverState initialize(const std::optional<ScalarField>& psi0,
                         const std::optional<ScalarField>& omega0);
  SolverState initialize_from_streamfunction(const ScalarField& psi0);
  SolverState initialize_from_vorticity(const ScalarField& omega0);

  /// Advances s in place by one step.
  StepDiagnostics advance(SolverState& s);
  SolverState step(SolverState s) {
    advance(s);
    return s;
  }

  RunResult run(SolverState s, const StepObserver& observer = {});

  const Grid& grid() const { return *grid_; }
  const GridPtr& grid_ptr() const { return grid_; }
  const std::vector<WallSpec>& walls() const { return walls_; }
  const RunConfig& config() const { return cfg_; }
  PoissonSolver& poisson() { return poisson_; }

 private:
  GridPtr grid_;
  std::vector<WallSpec> walls_;
  RunConfig cfg_;
  PoissonSolver poisson_;
};

}  // namespace slns
