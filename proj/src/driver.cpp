#include "slns/driver.hpp"

#include <cmath>
#include <sstream>

#include "slns/simd/kernels.hpp"
#include "slns/sl_update.hpp"

namespace slns {

void RunConfig::validate() const {
  if (!(nu >= 0.0) || !std::isfinite(nu)) throw std::invalid_argument("nu must be finite and >= 0");
  if (!(dt > 0.0) || !std::isfinite(dt)) throw std::invalid_argument("dt must be positive");
  if (end_time.has_value() == steady_tol.has_value())
    throw std::invalid_argument("set exactly one of end_time and steady_tol");
  if (end_time && !(*end_time >= 0.0)) throw std::invalid_argument("end_time must be >= 0");
  if (steady_tol && !(*steady_tol > 0.0)) throw std::invalid_argument("steady_tol must be positive");
  if (max_steps < 1) throw std::invalid_argument("max_steps must be >= 1");
  if (output_every < 0) throw std::invalid_argument("output_every must be >= 0");
  tracer.validate();
}

Solver::Solver(GridPtr grid, std::vector<WallSpec> walls, RunConfig cfg)
    : grid_(std::move(grid)),
      walls_(std::move(walls)),
      cfg_(std::move(cfg)),
      poisson_(assemble_poisson(grid_, default_poisson_bc(*grid_)), cfg_.poisson_backend,
               cfg_.poisson_tol) {
  cfg_.validate();
  validate_walls(walls_, *grid_);
}

SolverState Solver::initialize(const std::optional<ScalarField>& psi0,
                               const std::optional<ScalarField>& omega0) {
  if (psi0.has_value() == omega0.has_value())
    throw std::invalid_argument("initialize needs exactly one of psi0 and omega0");
  return psi0 ? initialize_from_streamfunction(*psi0) : initialize_from_vorticity(*omega0);
}

SolverState Solver::initialize_from_streamfunction(const ScalarField& psi0) {
  if (!(psi0.grid() == *grid_)) throw std::invalid_argument("initial streamfunction grid mismatch");
  SolverState s;
  s.psi = ScalarField(grid_, std::vector<double>(psi0.values().begin(), psi0.values().end()));
  s.omega = poisson_.op().apply(s.psi);
  apply_wall_vorticity(s.psi, walls_).impose(s.omega);
  s.u_now = velocity_from_streamfunction(s.psi, walls_);
  s.u_prev = s.u_now;
  return s;
}

SolverState Solver::initialize_from_vorticity(const ScalarField& omega0) {
  if (!(omega0.grid() == *grid_)) throw std::invalid_argument("initial vorticity grid mismatch");
  SolverState s;
  s.omega = ScalarField(grid_, std::vector<double>(omega0.values().begin(), omega0.values().end()));
  s.psi = poisson_.solve(s.omega);
  s.u_now = velocity_from_streamfunction(s.psi, walls_);
  s.u_prev = s.u_now;
  return s;
}

StepDiagnostics Solver::advance(SolverState& s) {
  const long next = s.step + 1;
  std::string stage = "wall-vorticity";
  try {
    const WallValues wall = apply_wall_vorticity(s.psi, walls_);

    stage = "velocity-extrapolation";
    const VectorField u_trace = cfg_.tracer.scheme == TracerScheme::Heun
                                    ? extrapolate_velocity(s.u_now, s.u_prev)
                                    : s.u_now;

    stage = "sl-update";
    SlUpdateReport sl;
    ScalarField omega = advance_vorticity(s.omega, wall, u_trace, cfg_.nu, cfg_.dt, cfg_.tracer,
                                          cfg_.scheme, &sl);

    stage = "poisson";
    ScalarField psi = poisson_.solve(omega, &s.psi);

    stage = "velocity";
    VectorField u = velocity_from_streamfunction(psi, walls_);

    StepDiagnostics d;
    d.step = next;
    d.t = s.t + cfg_.dt;
    d.change_rate =
        simd::kernels().max_abs_diff(omega.data(), s.omega.data(), omega.size()) / cfg_.dt;
    d.max_abs_omega = omega.max_abs();
    d.substeps = sl.substeps;
    d.poisson_iterations = poisson_.last_report().iterations;
    d.poisson_residual = poisson_.last_report().relative_residual;
    if (!std::isfinite(d.change_rate) || !psi.all_finite() || !u.u.all_finite() ||
        !u.v.all_finite())
      throw std::runtime_error("non-finite values");

    s.omega = std::move(omega);
    s.psi = std::move(psi);
    s.u_prev = std::move(s.u_now);
    s.u_now = std::move(u);
    s.t = d.t;
    s.step = next;
    return d;
  } catch (const StepError&) {
    throw;
  } catch (const std::exception& e) {
    throw StepError(next, stage, e.what());
  }
}

RunResult Solver::run(SolverState s, const StepObserver& observer) {
  RunResult result;
  const double dx = grid_->min_spacing();
  auto guard = [&](double horizon) {
    if (horizon <= 0.0 || cfg_.nu <= 0.0) return;
    const double r = compatibility_ratio(cfg_.nu, cfg_.dt, horizon, dx);
    if (r > cfg_.guard_threshold) {
      std::ostringstream os;
      os << "compatibility ratio nu^(1/3) dt / (T^(2/3) dx^(2/3)) = " << r
         << " exceeds threshold " << cfg_.guard_threshold;
      result.warnings.push_back(os.str());
    }
  };

  if (cfg_.end_time) guard(*cfg_.end_time);
  const double t_end = cfg_.end_time.value_or(0.0);
  auto done = [&](const StepDiagnostics* last) {
    if (cfg_.end_time) return s.t >= t_end * (1.0 - 1e-12);
    return last != nullptr && last->change_rate < *cfg_.steady_tol;
  };

  StepDiagnostics last;
  bool have_last = false;
  int growth_run = 0;
  bool growth_reported = false;
  long steps_taken = 0;
  while (!done(have_last ? &last : nullptr)) {
    if (steps_taken >= cfg_.max_steps) {
      std::ostringstream os;
      os << "maximum step count " << cfg_.max_steps << " exceeded at t = " << s.t;
      if (have_last) os << " (change rate " << last.change_rate << ")";
      throw RunError(os.str());
    }
    const StepDiagnostics d = advance(s);
    ++steps_taken;
    if (have_last && d.change_rate > last.change_rate) {
      if (++growth_run == 200 && !growth_reported && cfg_.steady_tol) {
        result.warnings.push_back("steady-state residual grew for 200 consecutive steps near t = " +
                                  std::to_string(d.t));
        growth_reported = true;
      }
    } else {
      growth_run = 0;
    }
    last = d;
    have_last = true;
    const bool emit = cfg_.output_every > 0 && d.step % cfg_.output_every == 0;
    if (emit) {
      result.history.push_back(d);
      if (observer) observer(s, d);
    }
  }
  if (have_last && (result.history.empty() || result.history.back().step != last.step)) {
    result.history.push_back(last);
    if (observer) observer(s, last);
  }
  if (cfg_.steady_tol) guard(s.t);
  result.converged = cfg_.steady_tol ? have_last : true;
  result.state = std::move(s);
  return result;
}

}  // namespace slns
