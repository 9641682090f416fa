// slns: command-line front end for the vorticity-streamfunction solver.

#include <cmath>
#include <cstdlib>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "slns/cases.hpp"
#include "slns/io.hpp"
#include "slns/simd/kernels.hpp"

namespace fs = std::filesystem;
using namespace slns;

namespace {

enum Exit { kOk = 0, kValidation = 1, kRuntime = 2, kMismatch = 3 };

std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

bool within(double value, double ref, double rel) {
  return std::abs(value - ref) <= rel * std::abs(ref);
}

int cmd_run(const fs::path& config, const std::optional<fs::path>& out_override) {
  io::RunSpec spec = io::load_config(config);
  if (out_override) spec.output_dir = *out_override;
  const GridPtr grid = io::make_grid(spec.grid);
  Solver solver(grid, io::make_walls(spec, *grid), spec.run);
  fs::create_directories(spec.output_dir);
  const auto header = split_lines(io::to_ini(spec));

  SolverState s0 = io::initial_state(spec, solver);
  io::write_fields(io::field_path(spec.output_dir, 0), s0, header);
  long last_written = 0;
  const RunResult res = solver.run(std::move(s0), [&](const SolverState& s, const StepDiagnostics&) {
    if (spec.field_every > 0 && s.step % spec.field_every == 0 && s.step != last_written) {
      io::write_fields(io::field_path(spec.output_dir, s.step), s, header);
      last_written = s.step;
    }
  });
  if (res.state.step != last_written)
    io::write_fields(io::field_path(spec.output_dir, res.state.step), res.state, header);
  io::write_diagnostics(spec.output_dir / "diagnostics.csv", res.history);
  for (const auto& w : res.warnings) std::cerr << "warning: " << w << "\n";
  std::printf("steps %ld  t %.6g  output %s\n", res.state.step, res.state.t,
              spec.output_dir.string().c_str());
  return kOk;
}

int cmd_convergence(std::optional<std::size_t> mesh, const fs::path& out) {
  const cases::AnalyticCase c;
  std::vector<cases::ConvergenceRow> rows;
  std::vector<cases::ConvergenceReference> refs;
  for (const auto& ref : cases::kConvergenceTable) {
    if (mesh && ref.n != *mesh) continue;
    cases::AnalyticRunSpec spec;
    spec.n = ref.n;
    spec.diffusive = ref.diffusive;
    rows.push_back(cases::run_analytic(c, spec));
    refs.push_back(ref);
  }
  if (rows.empty()) throw std::invalid_argument("--mesh must be one of 50, 100, 200");
  cases::attach_orders(rows);

  fs::create_directories(out);
  std::FILE* f = std::fopen((out / "convergence.csv").string().c_str(), "w");
  if (!f) throw std::runtime_error("cannot write " + (out / "convergence.csv").string());
  std::fprintf(f, "n,dt,courant,diffusive,steps,t_final,linf_rel,l2_rel,order_l2\n");

  bool ok = true;
  std::printf("%5s %9s %8s %6s %11s %11s %7s\n", "n", "dt", "courant", "diff", "Linf", "L2", "p2");
  for (std::size_t k = 0; k < rows.size(); ++k) {
    const auto& r = rows[k];
    const auto& ref = refs[k];
    std::printf("%5zu %9.4g %8.3g %6.3g %11.4e %11.4e %7s\n", r.n, r.dt, r.courant, r.diffusive,
                r.errors.linf_rel, r.errors.l2_rel,
                r.order_l2 ? std::to_string(*r.order_l2).substr(0, 5).c_str() : "-");
    std::fprintf(f, "%zu,%.17g,%.17g,%.17g,%ld,%.17g,%.17g,%.17g,%s\n", r.n, r.dt, r.courant,
                 r.diffusive, r.steps, r.t_final, r.errors.linf_rel, r.errors.l2_rel,
                 r.order_l2 ? std::to_string(*r.order_l2).c_str() : "");
    const double dinf = r.errors.linf_rel / ref.linf_rel - 1.0;
    const double dl2 = r.errors.l2_rel / ref.l2_rel - 1.0;
    if (std::abs(dinf) > 0.3 || std::abs(dl2) > 0.3) {
      std::printf("      n=%zu deviates from reference: Linf %+.1f%%  L2 %+.1f%%\n", r.n,
                  100.0 * dinf, 100.0 * dl2);
      ok = false;
    }
    if (r.order_l2 && *r.order_l2 < 1.0) {
      std::printf("      n=%zu observed L2 order %.3f below 1\n", r.n, *r.order_l2);
      ok = false;
    }
  }
  std::fclose(f);
  return ok ? kOk : kMismatch;
}

int cmd_cavity(const cases::CavityCase& c, const fs::path& out, long every) {
  const GridPtr grid = c.make_grid();
  RunConfig cfg = c.run_config(*grid);
  cfg.output_every = every;
  Solver solver(grid, c.walls(), cfg);
  std::printf("Re %g  grid %zu  fine_ratio %g  dt %.6g  nu dt/h_min^2 %.3g\n", c.re, c.n,
              c.fine_ratio, cfg.dt, cfg.nu * cfg.dt / std::pow(grid->min_spacing(), 2));
  const RunResult res = solver.run(solver.initialize_from_streamfunction(ScalarField(grid)));
  for (const auto& w : res.warnings) std::cerr << "warning: " << w << "\n";

  fs::create_directories(out);
  io::write_diagnostics(out / "diagnostics.csv", res.history);
  io::write_profiles(out / "profiles.csv", cases::centerline_profiles(res.state, c.scheme));
  std::ostringstream echo;
  echo << "case = cavity\nre = " << c.re << "\ngrid = " << c.n << "\nfine_ratio = " << c.fine_ratio
       << "\ndt = " << cfg.dt << "\ninterpolation = " << to_string(c.scheme);
  io::write_fields(io::field_path(out, res.state.step), res.state, split_lines(echo.str()));

  const auto d = cases::cavity_diagnostics(res.state, c.scheme);
  std::printf("steps %ld  t %.6g\n", res.state.step, res.state.t);
  std::printf("u_min %.5f  u_max %.5f  v_min %.5f  v_max %.5f  omega_center %.5f\n", d.u_min,
              d.u_max, d.v_min, d.v_max, d.omega_center);

  const auto ref = cases::cavity_reference(c.re);
  if (!ref) return kOk;
  const double tol_u = c.re == 100.0 ? 0.02 : 0.05;
  const double tol_w = 0.05;
  struct Item {
    const char* name;
    double value, ref, tol;
  };
  const Item items[] = {{"|u_min|", d.u_return_magnitude(), ref->u_max, tol_u},
                        {"v_max", d.v_max, ref->v_max, tol_u},
                        {"v_min", d.v_min, ref->v_min, tol_u},
                        {"|omega_center|", d.omega_center_magnitude(), ref->omega_center, tol_w}};
  bool ok = true;
  for (const auto& it : items) {
    const bool pass = within(it.value, it.ref, it.tol);
    ok = ok && pass;
    std::printf("%-15s %9.5f  ref %9.5f  %+6.2f%%  %s\n", it.name, it.value, it.ref,
                100.0 * (it.value / it.ref - 1.0), pass ? "ok" : "outside tolerance");
  }
  return ok ? kOk : kMismatch;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Semi-Lagrangian vorticity-streamfunction Navier-Stokes solver"};
  app.require_subcommand(1);
  std::string isa;
  app.add_option("--isa", isa, "Force the kernel set (scalar or avx2)");

  fs::path run_config;
  std::optional<fs::path> run_out;
  auto* run = app.add_subcommand("run", "Run a configuration file");
  run->add_option("config", run_config, "INI configuration")->required();
  run->add_option("-o,--output", run_out, "Output directory (overrides [output] dir)");

  std::optional<std::size_t> mesh;
  fs::path conv_out = "out";
  auto* conv = app.add_subcommand("convergence", "Analytic decaying-vortex convergence table");
  conv->add_option("--mesh", mesh, "Run a single mesh (50, 100 or 200)");
  conv->add_option("-o,--output", conv_out, "Output directory");

  cases::CavityCase cav;
  fs::path cav_out = "out";
  long cav_every = 100;
  std::string cav_scheme = "spline";
  auto* cavity = app.add_subcommand("cavity", "Lid-driven cavity to steady state");
  cavity->add_option("--re", cav.re, "Reynolds number")->required();
  cavity->add_option("--grid", cav.n, "Nodes per axis")->capture_default_str();
  cavity->add_option("--fine-ratio", cav.fine_ratio, "Near-wall spacing ratio")->capture_default_str();
  cavity->add_option("--tol", cav.steady_tol, "Steady-state tolerance")->capture_default_str();
  cavity->add_option("--courant", cav.courant, "Lid Courant number on the smallest spacing");
  cavity->add_option("--wall-diffusion", cav.wall_diffusion,
                     "nu dt / h_min^2 when no Courant number is given")->capture_default_str();
  cavity->add_option("--max-steps", cav.max_steps, "Step limit")->capture_default_str();
  cavity->add_option("--interpolation", cav_scheme, "bilinear, bicubic or spline")->capture_default_str();
  cavity->add_option("--every", cav_every, "Diagnostics cadence in steps")->capture_default_str();
  cavity->add_option("-o,--output", cav_out, "Output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kValidation;
  }

  try {
    if (isa == "scalar") {
      setenv("SLNS_ISA", "scalar", 1);
    } else if (isa == "avx2") {
      if (!simd::isa_available(simd::Isa::Avx2))
        throw std::invalid_argument("avx2 kernels are not available on this host");
    } else if (!isa.empty()) {
      throw std::invalid_argument("unknown kernel set '" + isa + "'");
    }
    if (*run) return cmd_run(run_config, run_out);
    if (*conv) return cmd_convergence(mesh, conv_out);
    if (*cavity) {
      cav.scheme = parse_interpolation_scheme(cav_scheme);
      cav.validate();
      return cmd_cavity(cav, cav_out, cav_every);
    }
  } catch (const io::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kValidation;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return kValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kRuntime;
  }
  return kOk;
}
