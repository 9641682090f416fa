#pragma once

#include <memory>
#include <span>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "slns/boundary.hpp"
#include "slns/field.hpp"

namespace slns {

enum class PoissonBc { DirichletZero, Periodic };

enum class PoissonBackend { Direct, ConjugateGradient };

std::string_view to_string(PoissonBackend b);
PoissonBackend parse_poisson_backend(std::string_view name);

/// Discrete -Laplacian A = M^{-1} K on a tensor grid.
///
/// K is the linear finite element stiffness matrix (five-point, symmetric)
/// and M the lumped mass; on uniform grids A is the classical five-point
/// stencil. DirichletZero treats wall nodes as known zeros (psi = 0) and
/// wraps periodic axes; Periodic requires both axes periodic and has the
/// constants as nullspace.
class PoissonOperator {
 public:
  PoissonOperator(GridPtr grid, PoissonBc bc);

  const Grid& grid() const { return *grid_; }
  const GridPtr& grid_ptr() const { return grid_; }
  PoissonBc bc() const { return bc_; }

  /// A psi on non-wall nodes, 0 on wall nodes.
  ScalarField apply(const ScalarField& psi) const;
  /// K x over full-grid storage; wall rows are set to 0.
  void apply_stiffness(const double* x, double* out) const;

  std::span<const double> mass() const { return mass_; }
  std::span<const double> diagonal() const { return c_; }
  /// Off-diagonal K entry coupling node k to its neighbor in direction
  /// 0..3 (west, east, south, north).
  double coupling(std::size_t k, int dir) const;
  /// True for nodes carrying an unknown (not a wall node).
  bool active(std::size_t k) const { return active_[k] != 0; }

 private:
  GridPtr grid_;
  PoissonBc bc_;
  std::vector<double> c_, w_, e_, s_, n_;
  std::vector<double> mass_;
  std::vector<char> active_;
};

PoissonOperator assemble_poisson(GridPtr grid, PoissonBc bc);

/// Natural boundary condition for a grid: Periodic if both axes wrap.
PoissonBc default_poisson_bc(const Grid& g);

class PoissonSolveError : public std::runtime_error {
 public:
  PoissonSolveError(const std::string& what, double residual)
      : std::runtime_error(what), residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

struct PoissonReport {
  int iterations = 0;
  /// ||A psi - omega||_2 / ||omega||_2 over the unknowns.
  double relative_residual = 0.0;
};

/// Reusable solver for A psi = omega.
///
/// The direct backend factors K once (sparse LDL^T) and back-substitutes on
/// every solve; the CG backend runs Jacobi-preconditioned conjugate gradients
/// on K psi = M omega. Periodic right-hand sides are projected to zero
/// (mass-weighted) mean and the solution is returned with zero mean.
class PoissonSolver {
 public:
  PoissonSolver(PoissonOperator op, PoissonBackend backend, double tol = 1e-10,
                int max_iterations = 20000);
  ~PoissonSolver();
  PoissonSolver(PoissonSolver&&) noexcept;
  PoissonSolver& operator=(PoissonSolver&&) noexcept;

  /// `guess` seeds CG and is ignored by the direct backend.
  ScalarField solve(const ScalarField& omega, const ScalarField* guess = nullptr);

  const PoissonOperator& op() const { return op_; }
  PoissonBackend backend() const { return backend_; }
  const PoissonReport& last_report() const { return report_; }

 private:
  struct Factorization;

  std::vector<double> prepare_rhs(const ScalarField& omega, ScalarField& projected) const;
  void solve_cg(const std::vector<double>& rhs, std::vector<double>& x);
  void solve_direct(const std::vector<double>& rhs, std::vector<double>& x);
  double relative_residual(const ScalarField& psi, const ScalarField& omega) const;

  PoissonOperator op_;
  PoissonBackend backend_;
  double tol_;
  int max_iterations_;
  std::unique_ptr<Factorization> factor_;
  PoissonReport report_;
};

/// One-shot CG solve.
ScalarField solve_poisson(const PoissonOperator& A, const ScalarField& omega, double tol = 1e-10);

/// Perpendicular gradient (d psi/dy, -d psi/dx) by centered differences on
/// non-wall nodes; wall nodes take the wall velocity (corners average the
/// two walls).
VectorField velocity_from_streamfunction(const ScalarField& psi, const std::vector<WallSpec>& walls);

}  // namespace slns
