#include <cmath>
#include <numbers>

#include "doctest.h"
#include "slns/cases.hpp"

using namespace slns;
using namespace slns::cases;

TEST_CASE("observed order") {
  CHECK(observed_order(1.68e-2, 7.54e-3) == doctest::Approx(1.156).epsilon(1e-3));
  CHECK(observed_order(7.54e-3, 3.57e-3) == doctest::Approx(1.079).epsilon(1e-3));
  CHECK(observed_order(2e-3, 2e-3) == 0.0);
  CHECK_THROWS_AS(observed_order(0.0, 1e-3), std::invalid_argument);
  CHECK_THROWS_AS(observed_order(1e-3, -1.0), std::invalid_argument);
}

TEST_CASE("reference table orders") {
  CHECK(observed_order(kConvergenceTable[0].l2_rel, kConvergenceTable[1].l2_rel) ==
        doctest::Approx(*kConvergenceTable[1].order_l2).epsilon(0.01));
  CHECK(observed_order(kConvergenceTable[1].l2_rel, kConvergenceTable[2].l2_rel) ==
        doctest::Approx(*kConvergenceTable[2].order_l2).epsilon(0.01));
}

TEST_CASE("exact solution has zero error") {
  const AnalyticCase c;
  const GridPtr g = c.make_grid(32);
  const ErrorNorms e = analytic_errors(c.exact_field(g, 1.3), 1.3, c.nu);
  CHECK(e.linf_rel == 0.0);
  CHECK(e.l2_rel == 0.0);
  const ErrorNorms f = analytic_errors(c.exact_field(g, 1.3), 0.0, c.nu);
  CHECK(f.linf_rel == doctest::Approx(1.0 - std::exp(-2 * c.nu * 1.3)).epsilon(1e-12));
}

TEST_CASE("advection of the exact vortex vanishes to second order") {
  const AnalyticCase c;
  auto residual = [&](std::size_t n) {
    const GridPtr g = c.make_grid(n);
    const ScalarField w = c.exact_field(g, 0.0);
    const ScalarField psi =
        ScalarField::from_function(g, [&](double x, double y) { return 0.5 * c.exact(x, y, 0.0); });
    const VectorField u = velocity_from_streamfunction(psi, {});
    const double h = g->x().h();
    double r = 0;
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t i = 0; i < n; ++i) {
        const std::size_t ip = g->x().neighbor(i, 1), im = g->x().neighbor(i, -1);
        const std::size_t jp = g->y().neighbor(j, 1), jm = g->y().neighbor(j, -1);
        r = std::max(r, std::abs(u.u(i, j) * (w(ip, j) - w(im, j)) / (2 * h) +
                                 u.v(i, j) * (w(i, jp) - w(i, jm)) / (2 * h)));
      }
    return r;
  };
  // sin x cos x products cancel exactly between the two terms.
  CHECK(residual(32) < 1e-14);
  CHECK(residual(64) < 1e-14);
}

TEST_CASE("analytic run configuration matches the table settings") {
  const AnalyticCase c;
  for (const auto& ref : kConvergenceTable) {
    AnalyticRunSpec spec;
    spec.n = ref.n;
    spec.diffusive = ref.diffusive;
    const RunConfig cfg = analytic_run_config(c, spec);
    const double dx = 2 * std::numbers::pi / ref.n;
    CHECK(c.nu * cfg.dt / (2 * dx * dx) == doctest::Approx(ref.diffusive));
    CHECK(*cfg.end_time == 4.0);
  }
}

TEST_CASE("short analytic run decays") {
  const AnalyticCase c{0.02, 0.5};
  AnalyticRunSpec spec;
  spec.n = 32;
  const ConvergenceRow r = run_analytic(c, spec);
  CHECK(r.t_final >= 0.5 * (1 - 1e-12));
  CHECK(r.errors.linf_rel < 0.02);
  std::vector<ConvergenceRow> rows{r, r};
  attach_orders(rows);
  CHECK(!rows[0].order_l2);
  CHECK(*rows[1].order_l2 == 0.0);
}

TEST_CASE("cavity grid and time step") {
  CavityCase c;
  const GridPtr g = c.make_grid();
  CHECK(g->nx() == 100);
  CHECK(g->x().coord(0) == 0.0);
  CHECK(g->x().coord(99) == 1.0);
  CHECK(g->min_spacing() == doctest::Approx(0.5 / 97));
  const RunConfig cfg = c.run_config(*g);
  CHECK(cfg.nu == doctest::Approx(0.01));
  CHECK(cfg.nu * cfg.dt / std::pow(g->min_spacing(), 2) == doctest::Approx(0.5));
  c.courant = 6.0;
  CHECK(c.run_config(*g).dt == doctest::Approx(6.0 * g->min_spacing()));
  c.fine_ratio = 1.5;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  CHECK(cavity_reference(100.0)->u_max == 0.21458);
  CHECK(!cavity_reference(400.0));
}

TEST_CASE("diagnostics and profiles at rest") {
  CavityCase c;
  c.n = 21;
  const GridPtr g = c.make_grid();
  Solver still(g, no_slip_walls(*g), c.run_config(*g));
  const CavityDiagnostics d =
      cavity_diagnostics(still.initialize_from_streamfunction(ScalarField(g)), c.scheme);
  CHECK(d.u_min == 0.0);
  CHECK(d.u_max == 0.0);
  CHECK(d.v_min == 0.0);
  CHECK(d.v_max == 0.0);
  CHECK(d.omega_center == 0.0);

  // Impulsively started lid: only the top row moves.
  Solver s(g, c.walls(), c.run_config(*g));
  const auto rows = centerline_profiles(s.initialize_from_streamfunction(ScalarField(g)), c.scheme);
  REQUIRE(rows.size() == 21);
  // The lid sits on the top row but its corner nodes are not on x = 0.5.
  CHECK(rows.back().u == doctest::Approx(1.0));
  for (std::size_t k = 0; k + 1 < rows.size(); ++k) CHECK(rows[k].u == 0.0);
}

TEST_CASE("small cavity reaches steady state with a lid-driven profile") {
  CavityCase c;
  c.n = 21;
  c.re = 20;
  c.steady_tol = 1e-5;
  const GridPtr g = c.make_grid();
  Solver s(g, c.walls(), c.run_config(*g));
  const RunResult r = s.run(s.initialize_from_streamfunction(ScalarField(g)));
  CHECK(r.converged);
  const auto rows = centerline_profiles(r.state, c.scheme);
  CHECK(rows.front().u == 0.0);
  CHECK(rows.back().u == doctest::Approx(1.0));
  const CavityDiagnostics d = cavity_diagnostics(r.state, c.scheme);
  CHECK(d.u_min < -0.1);
  CHECK(d.u_max == doctest::Approx(1.0));
  CHECK(d.v_min < 0.0);
  CHECK(d.v_max > 0.0);
  CHECK(d.omega_center < 0.0);
  CHECK(d.u_return_magnitude() == -d.u_min);
}

TEST_CASE("reversing the lid mirrors the flow") {
  CavityCase c;
  c.n = 17;
  const GridPtr g = c.make_grid();
  RunConfig cfg = c.run_config(*g);
  cfg.steady_tol.reset();
  cfg.end_time = 20 * cfg.dt;
  CavityCase rev = c;
  rev.lid_speed = -1.0;
  Solver a(g, c.walls(), cfg), b(g, rev.walls(), cfg);
  const SolverState sa = a.run(a.initialize_from_streamfunction(ScalarField(g))).state;
  const SolverState sb = b.run(b.initialize_from_streamfunction(ScalarField(g))).state;
  for (std::size_t j = 0; j < 17; ++j)
    for (std::size_t i = 0; i < 17; ++i) {
      CHECK(sb.omega(16 - i, j) == doctest::Approx(-sa.omega(i, j)).epsilon(1e-9).scale(1.0));
      CHECK(sb.u_now.u(16 - i, j) == doctest::Approx(-sa.u_now.u(i, j)).epsilon(1e-9).scale(1.0));
    }
}
