#include "slns/cases.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "slns/interpolation.hpp"

namespace slns::cases {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Samples per grid interval when searching centerline extrema.
constexpr int kCenterlineRefinement = 10;

std::vector<double> refined_line(const Axis& axis) {
  std::vector<double> pts;
  for (std::size_t i = 0; i + 1 < axis.size(); ++i) {
    for (int s = 0; s < kCenterlineRefinement; ++s)
      pts.push_back(axis.coord(i) + axis.spacing(i) * s / kCenterlineRefinement);
  }
  pts.push_back(axis.coords().back());
  return pts;
}

}  // namespace

GridPtr AnalyticCase::make_grid(std::size_t n) const {
  return std::make_shared<const Grid>(make_uniform_grid(n, n, {0.0, kTwoPi, 0.0, kTwoPi}, true, true));
}

double AnalyticCase::exact(double x, double y, double t) const {
  return std::sin(x) * std::sin(y) * std::exp(-2.0 * nu * t);
}

ScalarField AnalyticCase::exact_field(const GridPtr& grid, double t) const {
  return ScalarField::from_function(grid, [&](double x, double y) { return exact(x, y, t); });
}

double AnalyticCase::max_speed(double t) const { return 0.5 * std::exp(-2.0 * nu * t); }

ErrorNorms analytic_errors(const ScalarField& omega, double t, double nu) {
  const Grid& g = omega.grid();
  const AnalyticCase c{nu};
  double emax = 0.0, xmax = 0.0, e2 = 0.0, x2 = 0.0;
  for (std::size_t j = 0; j < g.ny(); ++j) {
    const double hy = 0.5 * (g.y().spacing(g.y().neighbor(j, -1)) + g.y().spacing(j));
    for (std::size_t i = 0; i < g.nx(); ++i) {
      const double hx = 0.5 * (g.x().spacing(g.x().neighbor(i, -1)) + g.x().spacing(i));
      const double ex = c.exact(g.x().coord(i), g.y().coord(j), t);
      const double d = omega(i, j) - ex;
      emax = std::max(emax, std::abs(d));
      xmax = std::max(xmax, std::abs(ex));
      e2 += d * d * hx * hy;
      x2 += ex * ex * hx * hy;
    }
  }
  return {emax / xmax, std::sqrt(e2 / x2)};
}

double observed_order(double err_coarse, double err_fine) {
  if (!(err_coarse > 0.0) || !(err_fine > 0.0))
    throw std::invalid_argument("observed_order needs positive errors");
  return std::log2(err_coarse / err_fine);
}

RunConfig analytic_run_config(const AnalyticCase& c, const AnalyticRunSpec& spec) {
  const double dx = kTwoPi / static_cast<double>(spec.n);
  RunConfig cfg;
  cfg.nu = c.nu;
  cfg.dt = spec.diffusive * 2.0 * dx * dx / c.nu;
  cfg.end_time = c.end_time;
  cfg.scheme = spec.scheme;
  cfg.tracer = spec.tracer;
  return cfg;
}

ConvergenceRow run_analytic(const AnalyticCase& c, const AnalyticRunSpec& spec) {
  const GridPtr grid = c.make_grid(spec.n);
  const RunConfig cfg = analytic_run_config(c, spec);
  Solver solver(grid, {}, cfg);
  const RunResult res = solver.run(solver.initialize_from_vorticity(c.exact_field(grid, 0.0)));

  const double dx = grid->x().h();
  ConvergenceRow row;
  row.n = spec.n;
  row.dt = cfg.dt;
  row.courant = c.max_speed(0.0) * cfg.dt / dx;
  row.diffusive = c.nu * cfg.dt / (2.0 * dx * dx);
  row.steps = res.state.step;
  row.t_final = res.state.t;
  row.errors = analytic_errors(res.state.omega, res.state.t, c.nu);
  return row;
}

void attach_orders(std::vector<ConvergenceRow>& rows) {
  for (std::size_t k = 1; k < rows.size(); ++k) {
    rows[k].order_linf = observed_order(rows[k - 1].errors.linf_rel, rows[k].errors.linf_rel);
    rows[k].order_l2 = observed_order(rows[k - 1].errors.l2_rel, rows[k].errors.l2_rel);
  }
}

// ---------------------------------------------------------------------------

void CavityCase::validate() const {
  if (!(re > 0.0) || !std::isfinite(re)) throw std::invalid_argument("Reynolds number must be positive");
  if (n < 7) throw std::invalid_argument("cavity grid needs n >= 7");
  if (!(fine_ratio > 0.0 && fine_ratio < 1.0)) throw std::invalid_argument("fine_ratio must lie in (0, 1)");
  if (courant && !(*courant > 0.0)) throw std::invalid_argument("courant must be positive");
  if (!(wall_diffusion > 0.0)) throw std::invalid_argument("wall_diffusion must be positive");
  if (!(steady_tol > 0.0)) throw std::invalid_argument("steady tolerance must be positive");
}

GridPtr CavityCase::make_grid() const {
  return std::make_shared<const Grid>(make_boundary_refined_grid(n, {0.0, 1.0, 0.0, 1.0}, fine_ratio));
}

std::vector<WallSpec> CavityCase::walls() const {
  return {wall_moving(Side::Left, 0.0), wall_moving(Side::Right, 0.0),
          wall_moving(Side::Bottom, 0.0), wall_moving(Side::Top, lid_speed)};
}

RunConfig CavityCase::run_config(const Grid& g) const {
  validate();
  RunConfig cfg;
  cfg.nu = nu();
  const double h = g.min_spacing();
  cfg.dt = courant ? *courant * h / std::abs(lid_speed) : wall_diffusion * h * h / cfg.nu;
  cfg.steady_tol = steady_tol;
  cfg.scheme = scheme;
  cfg.poisson_backend = poisson_backend;
  cfg.max_steps = max_steps;
  return cfg;
}

double CavityDiagnostics::u_return_magnitude() const { return std::abs(u_min); }
double CavityDiagnostics::omega_center_magnitude() const { return std::abs(omega_center); }

CavityDiagnostics cavity_diagnostics(const SolverState& s, InterpolationScheme scheme) {
  const Grid& g = s.omega.grid();
  const Interpolator iu(s.u_now.u, scheme);
  const Interpolator iv(s.u_now.v, scheme);
  const Interpolator iw(s.omega, scheme);
  const double xc = 0.5 * (g.x().lower() + g.x().upper());
  const double yc = 0.5 * (g.y().lower() + g.y().upper());

  CavityDiagnostics d;
  bool first = true;
  for (double y : refined_line(g.y())) {
    const double u = iu({xc, y});
    d.u_min = first ? u : std::min(d.u_min, u);
    d.u_max = first ? u : std::max(d.u_max, u);
    first = false;
  }
  first = true;
  for (double x : refined_line(g.x())) {
    const double v = iv({x, yc});
    d.v_min = first ? v : std::min(d.v_min, v);
    d.v_max = first ? v : std::max(d.v_max, v);
    first = false;
  }
  d.omega_center = iw({xc, yc});
  return d;
}

std::vector<ProfileRow> centerline_profiles(const SolverState& s, InterpolationScheme scheme) {
  const Grid& g = s.omega.grid();
  const Interpolator iu(s.u_now.u, scheme);
  const Interpolator iw(s.omega, scheme);
  const double xc = 0.5 * (g.x().lower() + g.x().upper());
  std::vector<ProfileRow> rows;
  rows.reserve(g.ny());
  for (std::size_t j = 0; j < g.ny(); ++j) {
    const double y = g.y().coord(j);
    rows.push_back({y, iu({xc, y}), iw({xc, y})});
  }
  return rows;
}

std::optional<CavityReference> cavity_reference(double re) {
  for (const auto& r : kCavityReference)
    if (r.re == re) return r;
  return std::nullopt;
}

}  // namespace slns::cases
