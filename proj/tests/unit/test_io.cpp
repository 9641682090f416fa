#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include <unistd.h>

#include "doctest.h"
#include "slns/io.hpp"

using namespace slns;
namespace fs = std::filesystem;

namespace {

const char* kVortex = R"([grid]
nx = 16
x_max = 6.283185307179586
y_max = 6.283185307179586
periodic_x = true
periodic_y = true
[physics]
nu = 0.02
[initial]
field = sinsin
[time]
courant = 2.6
end_time = 0.5
[output]
field_every = 2
)";

const char* kCavity = R"([grid]
nx = 15
refinement = boundary
fine_ratio = 0.5
[physics]
re = 100
[walls]
top = 1
[time]
dt = 0.002
end_time = 0.01
)";

io::RunSpec parse(const std::string& text) {
  std::istringstream in(text);
  return io::parse_config(in);
}

std::string field_of(const std::string& text) {
  try {
    parse(text);
  } catch (const io::ConfigError& e) {
    return e.field();
  }
  return "";
}

fs::path scratch(const char* name) {
  const fs::path p = fs::temp_directory_path() / ("slns_test_" + std::to_string(::getpid()) + "_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string replace(std::string s, const std::string& from, const std::string& to) {
  const auto pos = s.find(from);
  REQUIRE(pos != std::string::npos);
  return s.replace(pos, from.size(), to);
}

}  // namespace

TEST_CASE("parse a periodic vortex config") {
  const io::RunSpec s = parse(kVortex);
  CHECK(s.grid.nx == 16);
  CHECK(s.grid.ny == 16);
  CHECK(s.grid.periodic_x);
  CHECK(s.initial == io::InitialField::SinSin);
  CHECK(s.run.nu == 0.02);
  // Courant 2.6 on the sin x sin y flow with peak speed 1/2.
  CHECK(s.run.dt == doctest::Approx(2.6 * (2 * std::numbers::pi / 16) / 0.5));
  CHECK(*s.run.end_time == 0.5);
  CHECK(s.field_every == 2);
  CHECK(s.run.output_every == 1);
}

TEST_CASE("parse a cavity config") {
  const io::RunSpec s = parse(kCavity);
  CHECK(s.grid.boundary_refined);
  CHECK(s.run.nu == doctest::Approx(0.01));
  CHECK(s.wall_top == 1.0);
  CHECK(s.run.scheme == InterpolationScheme::CubicSpline);
  const GridPtr g = io::make_grid(s.grid);
  const auto walls = io::make_walls(s, *g);
  CHECK(walls.size() == 4);
  for (const auto& w : walls)
    if (w.side == Side::Top) CHECK(w.velocity().x == 1.0);
}

TEST_CASE("config errors name the field") {
  CHECK(field_of("[grid]\nny = 4\n") == "grid.nx");
  CHECK(field_of(replace(kVortex, "nu = 0.02", "")) == "physics.nu");
  CHECK(field_of(replace(kVortex, "nu = 0.02", "nu = 0.02\nre = 10")) == "physics.nu");
  CHECK(field_of(replace(kVortex, "courant = 2.6", "")) == "time.dt");
  CHECK(field_of(replace(kVortex, "end_time = 0.5", "")) == "time.end_time");
  CHECK(field_of(replace(kVortex, "field = sinsin", "field = gaussian")) == "initial.field");
  CHECK(field_of(replace(kVortex, "[output]", "[walls]\ntop = 1\n[output]")) == "walls.top");
  CHECK(field_of(replace(kVortex, "nu = 0.02", "nu = 0.02\nviscosity = 1")) == "physics.viscosity");
  CHECK(field_of(replace(kVortex, "[output]", "[extras]\na = 1\n[output]")) == "extras");
  CHECK(field_of(replace(kVortex, "nx = 16", "nx = two")) == "grid.nx");
  CHECK(field_of(replace(kCavity, "fine_ratio = 0.5", "fine_ratio = 2")) == "grid.fine_ratio");
  CHECK(field_of(replace(kCavity, "dt = 0.002", "dt = -1")) == "time.dt");
  CHECK(field_of(std::string(kVortex) + "[numerics]\ninterpolation = quintic\n") == "numerics.interpolation");
  CHECK(field_of(std::string(kCavity) + "[numerics]\ninterpolation = bicubic\n") == "numerics.interpolation");
}

TEST_CASE("ini echo round-trips") {
  for (const char* text : {kVortex, kCavity}) {
    const io::RunSpec a = parse(text);
    const io::RunSpec b = parse(io::to_ini(a));
    CHECK(io::to_ini(b) == io::to_ini(a));
    CHECK(b.run.dt == a.run.dt);
    CHECK(b.run.nu == a.run.nu);
  }
}

TEST_CASE("field files round-trip bit for bit") {
  const fs::path dir = scratch("fields");
  const io::RunSpec spec = parse(kVortex);
  const GridPtr g = io::make_grid(spec.grid);
  Solver solver(g, io::make_walls(spec, *g), spec.run);
  SolverState s = io::initial_state(spec, solver);
  solver.advance(s);
  const fs::path p = io::field_path(dir, s.step);
  CHECK(p.filename() == "fields_000001.csv");
  io::write_fields(p, s, {"note = first"});
  const io::FieldTable t = io::read_fields(p);
  REQUIRE(t.x.size() == g->size());
  CHECK(t.comments[0] == "note = first");
  CHECK(t.comments[1] == "step = 1");
  for (std::size_t k = 0; k < g->size(); ++k) {
    const std::size_t i = k % g->nx(), j = k / g->nx();
    CHECK(t.x[k] == g->x().coord(i));
    CHECK(t.y[k] == g->y().coord(j));
    CHECK(t.omega[k] == s.omega[k]);
    CHECK(t.psi[k] == s.psi[k]);
    CHECK(t.u[k] == s.u_now.u[k]);
    CHECK(t.v[k] == s.u_now.v[k]);
  }
  fs::remove_all(dir);
}

TEST_CASE("rerun from the echoed config reproduces the field") {
  const fs::path dir = scratch("echo");
  auto run_once = [](const io::RunSpec& spec) {
    const GridPtr g = io::make_grid(spec.grid);
    Solver solver(g, io::make_walls(spec, *g), spec.run);
    return solver.run(io::initial_state(spec, solver)).state;
  };
  const io::RunSpec spec = parse(kCavity);
  const SolverState a = run_once(spec);
  std::vector<std::string> header;
  std::istringstream ini(io::to_ini(spec));
  for (std::string line; std::getline(ini, line);) header.push_back(line);
  io::write_fields(io::field_path(dir, a.step), a, header);

  const io::RunSpec again = io::load_echo(io::field_path(dir, a.step));
  const SolverState b = run_once(again);
  CHECK(b.step == a.step);
  for (std::size_t k = 0; k < a.omega.size(); ++k) CHECK(b.omega[k] == a.omega[k]);
  fs::remove_all(dir);
}

TEST_CASE("read_fields rejects foreign files") {
  const fs::path dir = scratch("bad");
  std::ofstream(dir / "a.csv") << "x,y,z\n1,2,3\n";
  CHECK_THROWS(io::read_fields(dir / "a.csv"));
  std::ofstream(dir / "b.csv") << "x,y,omega,psi,u,v\n1,2,3\n";
  CHECK_THROWS(io::read_fields(dir / "b.csv"));
  CHECK_THROWS(io::read_fields(dir / "missing.csv"));
  fs::remove_all(dir);
}

TEST_CASE("diagnostics and profile tables") {
  const fs::path dir = scratch("tables");
  StepDiagnostics d;
  d.step = 7;
  d.t = 0.7;
  d.change_rate = 1e-3;
  io::write_diagnostics(dir / "diagnostics.csv", {d});
  io::write_profiles(dir / "profiles.csv", {{0.0, 0.0, 1.5}, {1.0, 1.0, -2.0}});
  std::ifstream a(dir / "diagnostics.csv"), b(dir / "profiles.csv");
  std::string l1, l2;
  std::getline(a, l1);
  std::getline(a, l2);
  CHECK(l1 == "step,t,change_rate,max_abs_omega,substeps,poisson_iterations,poisson_residual");
  CHECK(l2.rfind("7,0.69999999999999996,0.001,", 0) == 0);
  std::getline(b, l1);
  std::getline(b, l2);
  CHECK(l1 == "y,u,omega");
  CHECK(l2 == "0,0,1.5");
  fs::remove_all(dir);
}
