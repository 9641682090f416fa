#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <vector>

#include "slns/boundary.hpp"
#include "slns/driver.hpp"
#include "slns/field.hpp"

namespace slns::cases {

// ---------------------------------------------------------------------------
// Decaying periodic vortex array: omega = sin x sin y exp(-2 nu t) on
// [0, 2pi]^2. Its advection term vanishes identically, so the exact
// evolution is pure diffusive decay.

struct AnalyticCase {
  double nu = 0.02;
  double end_time = 4.0;

  GridPtr make_grid(std::size_t n) const;
  double exact(double x, double y, double t) const;
  ScalarField exact_field(const GridPtr& grid, double t) const;
  /// max |u| of the exact flow (psi = omega / 2).
  double max_speed(double t) const;
};

struct ErrorNorms {
  double linf_rel = 0.0;
  double l2_rel = 0.0;
};

/// Relative L-infinity and grid-weighted L2 errors against the exact solution.
ErrorNorms analytic_errors(const ScalarField& omega, double t, double nu);

/// log2(err_coarse / err_fine) for meshes one halving apart.
double observed_order(double err_coarse, double err_fine);

struct ConvergenceReference {
  std::size_t n;
  double courant;
  double diffusive;
  double linf_rel;
  double l2_rel;
  std::optional<double> order_l2;
};

/// Published convergence table for the analytic case.
inline constexpr std::array<ConvergenceReference, 3> kConvergenceTable{{
    {50, 2.6, 1.0, 1.12e-2, 1.68e-2, std::nullopt},
    {100, 2.6, 2.0, 5.44e-3, 7.54e-3, 1.15},
    {200, 2.6, 4.0, 2.58e-3, 3.57e-3, 1.08},
}};

/// Settings for one analytic-case run; dt follows from the target
/// diffusive number nu dt / (2 dx^2).
struct AnalyticRunSpec {
  std::size_t n = 50;
  double diffusive = 1.0;
  InterpolationScheme scheme = InterpolationScheme::MonotonizedBicubic;
  TracerConfig tracer{};
};

struct ConvergenceRow {
  std::size_t n = 0;
  double dt = 0.0;
  double courant = 0.0;
  double diffusive = 0.0;
  long steps = 0;
  double t_final = 0.0;
  ErrorNorms errors;
  std::optional<double> order_linf;
  std::optional<double> order_l2;
};

RunConfig analytic_run_config(const AnalyticCase& c, const AnalyticRunSpec& spec);
ConvergenceRow run_analytic(const AnalyticCase& c, const AnalyticRunSpec& spec);
/// Fills the observed orders of consecutive rows.
void attach_orders(std::vector<ConvergenceRow>& rows);

// ---------------------------------------------------------------------------
// Lid-driven cavity on [0, 1]^2 with the top wall moving in +x.

struct CavityCase {
  double re = 100.0;
  std::size_t n = 100;
  double fine_ratio = 0.5;
  double lid_speed = 1.0;
  /// Lid Courant number on the smallest spacing. When unset, dt is chosen so
  /// that nu dt / h_min^2 = wall_diffusion; the explicit wall-vorticity
  /// coupling loses stability somewhere between 0.5 and 1.
  std::optional<double> courant;
  double wall_diffusion = 0.5;
  double steady_tol = 1e-7;
  long max_steps = 2000000;
  InterpolationScheme scheme = InterpolationScheme::CubicSpline;
  PoissonBackend poisson_backend = PoissonBackend::Direct;

  double nu() const { return lid_speed / re; }
  GridPtr make_grid() const;
  std::vector<WallSpec> walls() const;
  RunConfig run_config(const Grid& g) const;
  void validate() const;
};

/// Centerline extrema and center vorticity. Signed values follow
/// omega = -laplacian(psi) with the lid moving in +x, so the primary vortex
/// has negative vorticity.
struct CavityDiagnostics {
  /// Extrema of u along the vertical centerline x = 0.5 (walls included).
  double u_min = 0.0;
  double u_max = 0.0;
  /// Extrema of v along the horizontal centerline y = 0.5.
  double v_min = 0.0;
  double v_max = 0.0;
  double omega_center = 0.0;

  /// Magnitude of the return-flow extremum, |u_min|.
  double u_return_magnitude() const;
  double omega_center_magnitude() const;
};

CavityDiagnostics cavity_diagnostics(const SolverState& s, InterpolationScheme scheme);

struct ProfileRow {
  double y = 0.0;
  double u = 0.0;
  double omega = 0.0;
};

/// u and omega along x = 0.5 at every grid row.
std::vector<ProfileRow> centerline_profiles(const SolverState& s, InterpolationScheme scheme);

struct CavityReference {
  double re;
  double u_max;
  double v_max;
  double v_min;
  double omega_center;
};

inline constexpr std::array<CavityReference, 2> kCavityReference{{
    {100.0, 0.21458, 0.17534, -0.24613, 1.13370},
    {1000.0, 0.37487, 0.36034, -0.49989, 2.02641},
}};

std::optional<CavityReference> cavity_reference(double re);

}  // namespace slns::cases
