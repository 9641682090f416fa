#include "slns/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <numbers>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

namespace slns::io {

namespace pt = boost::property_tree;

namespace {

const std::map<std::string, std::set<std::string>>& known_keys() {
  static const std::map<std::string, std::set<std::string>> keys{
      {"grid", {"nx", "ny", "x_min", "x_max", "y_min", "y_max", "periodic_x", "periodic_y",
                "refinement", "fine_ratio"}},
      {"physics", {"nu", "re", "velocity_scale"}},
      {"walls", {"top", "bottom", "left", "right"}},
      {"initial", {"field", "amplitude"}},
      {"time", {"dt", "courant", "end_time", "steady_tol", "max_steps"}},
      {"numerics", {"interpolation", "tracer", "cfl_max", "velocity_interpolation",
                    "substeps", "max_substeps", "poisson_backend", "poisson_tol", "guard_threshold"}},
      {"output", {"dir", "field_every", "diagnostics_every"}},
  };
  return keys;
}

class Reader {
 public:
  explicit Reader(const pt::ptree& tree) : tree_(tree) {}

  std::optional<std::string> raw(const std::string& key) const {
    if (auto v = tree_.get_optional<std::string>(pt::ptree::path_type(key, '.'))) return *v;
    return std::nullopt;
  }

  std::optional<double> number(const std::string& key) const {
    const auto s = raw(key);
    if (!s) return std::nullopt;
    try {
      std::size_t used = 0;
      const double v = std::stod(*s, &used);
      if (used != s->size() || !std::isfinite(v)) throw std::invalid_argument("");
      return v;
    } catch (const std::exception&) {
      throw ConfigError(key, "expected a finite number, got '" + *s + "'");
    }
  }

  std::optional<long> integer(const std::string& key) const {
    const auto s = raw(key);
    if (!s) return std::nullopt;
    try {
      std::size_t used = 0;
      const long v = std::stol(*s, &used);
      if (used != s->size()) throw std::invalid_argument("");
      return v;
    } catch (const std::exception&) {
      throw ConfigError(key, "expected an integer, got '" + *s + "'");
    }
  }

  std::optional<bool> flag(const std::string& key) const {
    const auto s = raw(key);
    if (!s) return std::nullopt;
    if (*s == "true" || *s == "1" || *s == "yes") return true;
    if (*s == "false" || *s == "0" || *s == "no") return false;
    throw ConfigError(key, "expected true or false, got '" + *s + "'");
  }

  template <class F>
  auto parsed(const std::string& key, F parse) const -> std::optional<decltype(parse(""))> {
    const auto s = raw(key);
    if (!s) return std::nullopt;
    try {
      return parse(*s);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(key, e.what());
    }
  }

 private:
  const pt::ptree& tree_;
};

void check_keys(const pt::ptree& tree) {
  const auto& keys = known_keys();
  for (const auto& [section, body] : tree) {
    const auto it = keys.find(section);
    if (it == keys.end()) throw ConfigError(section, "unknown section");
    if (!body.data().empty() && body.empty())
      throw ConfigError(section, "keys must appear inside a section");
    for (const auto& [key, value] : body) {
      if (!it->second.count(key)) throw ConfigError(section + "." + key, "unknown key");
    }
  }
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string_view to_string(InitialField f) { return f == InitialField::Rest ? "rest" : "sinsin"; }

// Largest speed of the sinusoidal initial flow on the configured box.
double sinsin_speed(const RunSpec& s) {
  const double kx = 2.0 * std::numbers::pi / (s.grid.bounds.x1 - s.grid.bounds.x0);
  const double ky = 2.0 * std::numbers::pi / (s.grid.bounds.y1 - s.grid.bounds.y0);
  return std::abs(s.amplitude) * std::max(kx, ky) / (kx * kx + ky * ky);
}

}  // namespace

RunSpec parse_config(std::istream& in) {
  pt::ptree tree;
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError("config", "line " + std::to_string(e.line()) + ": " + e.message());
  }
  check_keys(tree);
  const Reader r(tree);
  RunSpec s;

  // [grid]
  const auto nx = r.integer("grid.nx");
  if (!nx) throw ConfigError("grid.nx", "missing");
  if (*nx < 3) throw ConfigError("grid.nx", "must be >= 3");
  s.grid.nx = static_cast<std::size_t>(*nx);
  const auto ny = r.integer("grid.ny").value_or(*nx);
  if (ny < 3) throw ConfigError("grid.ny", "must be >= 3");
  s.grid.ny = static_cast<std::size_t>(ny);
  s.grid.bounds.x0 = r.number("grid.x_min").value_or(0.0);
  s.grid.bounds.x1 = r.number("grid.x_max").value_or(1.0);
  s.grid.bounds.y0 = r.number("grid.y_min").value_or(0.0);
  s.grid.bounds.y1 = r.number("grid.y_max").value_or(1.0);
  if (!(s.grid.bounds.x1 > s.grid.bounds.x0)) throw ConfigError("grid.x_max", "must exceed x_min");
  if (!(s.grid.bounds.y1 > s.grid.bounds.y0)) throw ConfigError("grid.y_max", "must exceed y_min");
  s.grid.periodic_x = r.flag("grid.periodic_x").value_or(false);
  s.grid.periodic_y = r.flag("grid.periodic_y").value_or(false);
  const std::string refinement = r.raw("grid.refinement").value_or("uniform");
  if (refinement == "boundary") {
    s.grid.boundary_refined = true;
  } else if (refinement != "uniform") {
    throw ConfigError("grid.refinement", "expected uniform or boundary, got '" + refinement + "'");
  }
  s.grid.fine_ratio = r.number("grid.fine_ratio").value_or(0.5);
  if (s.grid.boundary_refined) {
    if (s.grid.periodic_x || s.grid.periodic_y)
      throw ConfigError("grid.refinement", "boundary refinement needs walls on both axes");
    if (!(s.grid.fine_ratio > 0.0 && s.grid.fine_ratio < 1.0))
      throw ConfigError("grid.fine_ratio", "must lie in (0, 1)");
    if (s.grid.nx != s.grid.ny) throw ConfigError("grid.ny", "boundary refinement needs nx == ny");
    if (s.grid.nx < 7) throw ConfigError("grid.nx", "boundary refinement needs nx >= 7");
  }

  // [walls]
  auto wall = [&](const char* side, bool periodic_axis, double& out) {
    const std::string key = std::string("walls.") + side;
    const auto v = r.number(key);
    if (v && periodic_axis) throw ConfigError(key, "no wall on a periodic axis");
    out = v.value_or(0.0);
  };
  wall("top", s.grid.periodic_y, s.wall_top);
  wall("bottom", s.grid.periodic_y, s.wall_bottom);
  wall("left", s.grid.periodic_x, s.wall_left);
  wall("right", s.grid.periodic_x, s.wall_right);

  // [initial]
  const std::string field = r.raw("initial.field").value_or("rest");
  if (field == "rest") {
    s.initial = InitialField::Rest;
  } else if (field == "sinsin") {
    s.initial = InitialField::SinSin;
  } else {
    throw ConfigError("initial.field", "expected rest or sinsin, got '" + field + "'");
  }
  s.amplitude = r.number("initial.amplitude").value_or(1.0);

  // [physics]
  const double wall_speed = std::max({std::abs(s.wall_top), std::abs(s.wall_bottom),
                                      std::abs(s.wall_left), std::abs(s.wall_right)});
  double scale = wall_speed > 0.0 ? wall_speed
                 : s.initial == InitialField::SinSin ? sinsin_speed(s)
                                                     : 1.0;
  if (const auto v = r.number("physics.velocity_scale")) {
    if (!(*v > 0.0)) throw ConfigError("physics.velocity_scale", "must be positive");
    scale = *v;
  }
  const auto nu = r.number("physics.nu");
  const auto re = r.number("physics.re");
  if (nu && re) throw ConfigError("physics.nu", "set nu or re, not both");
  if (!nu && !re) throw ConfigError("physics.nu", "missing (set nu or re)");
  if (nu) {
    if (!(*nu >= 0.0)) throw ConfigError("physics.nu", "must be >= 0");
    s.run.nu = *nu;
  } else {
    if (!(*re > 0.0)) throw ConfigError("physics.re", "must be positive");
    s.run.nu = scale / *re;
  }

  // [numerics]
  if (s.grid.boundary_refined) s.run.scheme = InterpolationScheme::CubicSpline;
  if (auto v = r.parsed("numerics.interpolation", parse_interpolation_scheme)) s.run.scheme = *v;
  if (s.grid.boundary_refined && s.run.scheme == InterpolationScheme::MonotonizedBicubic)
    throw ConfigError("numerics.interpolation", "bicubic needs a uniform grid");
  if (auto v = r.parsed("numerics.tracer", parse_tracer_scheme)) s.run.tracer.scheme = *v;
  if (auto v = r.number("numerics.cfl_max")) s.run.tracer.cfl_max = *v;
  if (auto v = r.parsed("numerics.velocity_interpolation", parse_interpolation_scheme))
    s.run.tracer.velocity_interpolation = *v;
  if (auto v = r.integer("numerics.substeps")) {
    if (*v < 1) throw ConfigError("numerics.substeps", "must be >= 1");
    s.run.tracer.fixed_substeps = static_cast<int>(*v);
  }
  if (auto v = r.integer("numerics.max_substeps")) {
    if (*v < 1 || *v > 100000000) throw ConfigError("numerics.max_substeps", "must lie in [1, 1e8]");
    s.run.tracer.max_substeps = static_cast<int>(*v);
  }
  if (auto v = r.parsed("numerics.poisson_backend", parse_poisson_backend))
    s.run.poisson_backend = *v;
  if (auto v = r.number("numerics.poisson_tol")) s.run.poisson_tol = *v;
  if (auto v = r.number("numerics.guard_threshold")) s.run.guard_threshold = *v;
  if (!(s.run.tracer.cfl_max > 0.0)) throw ConfigError("numerics.cfl_max", "must be positive");
  if (!(s.run.poisson_tol > 0.0)) throw ConfigError("numerics.poisson_tol", "must be positive");

  // [time]
  const auto dt = r.number("time.dt");
  const auto courant = r.number("time.courant");
  if (dt && courant) throw ConfigError("time.dt", "set dt or courant, not both");
  if (!dt && !courant) throw ConfigError("time.dt", "missing (set dt or courant)");
  if (dt) {
    if (!(*dt > 0.0)) throw ConfigError("time.dt", "must be positive");
    s.run.dt = *dt;
  } else {
    if (!(*courant > 0.0)) throw ConfigError("time.courant", "must be positive");
    s.run.dt = *courant * make_grid(s.grid)->min_spacing() / scale;
  }
  s.run.end_time = r.number("time.end_time");
  s.run.steady_tol = r.number("time.steady_tol");
  if (s.run.end_time.has_value() == s.run.steady_tol.has_value())
    throw ConfigError("time.end_time", "set exactly one of end_time and steady_tol");
  if (s.run.end_time && !(*s.run.end_time >= 0.0)) throw ConfigError("time.end_time", "must be >= 0");
  if (s.run.steady_tol && !(*s.run.steady_tol > 0.0))
    throw ConfigError("time.steady_tol", "must be positive");
  if (auto v = r.integer("time.max_steps")) {
    if (*v < 1) throw ConfigError("time.max_steps", "must be >= 1");
    s.run.max_steps = *v;
  }

  // [output]
  s.output_dir = r.raw("output.dir").value_or("out");
  s.field_every = r.integer("output.field_every").value_or(0);
  if (s.field_every < 0) throw ConfigError("output.field_every", "must be >= 0");
  s.run.output_every = r.integer("output.diagnostics_every").value_or(1);
  if (s.run.output_every < 0) throw ConfigError("output.diagnostics_every", "must be >= 0");
  return s;
}

RunSpec load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config", "cannot open " + path.string());
  return parse_config(in);
}

RunSpec load_echo(const std::filesystem::path& fields_csv) {
  std::ifstream in(fields_csv);
  if (!in) throw ConfigError("config", "cannot open " + fields_csv.string());
  std::ostringstream ini;
  std::string line;
  while (std::getline(in, line) && line.rfind("# ", 0) == 0) {
    const std::string body = line.substr(2);
    if (body.rfind("step", 0) == 0 || body.rfind("t ", 0) == 0) continue;
    ini << body << '\n';
  }
  std::istringstream text(ini.str());
  return parse_config(text);
}

std::string to_ini(const RunSpec& s) {
  std::ostringstream os;
  os << "[grid]\n"
     << "nx = " << s.grid.nx << "\n"
     << "ny = " << s.grid.ny << "\n"
     << "x_min = " << fmt(s.grid.bounds.x0) << "\n"
     << "x_max = " << fmt(s.grid.bounds.x1) << "\n"
     << "y_min = " << fmt(s.grid.bounds.y0) << "\n"
     << "y_max = " << fmt(s.grid.bounds.y1) << "\n"
     << "periodic_x = " << (s.grid.periodic_x ? "true" : "false") << "\n"
     << "periodic_y = " << (s.grid.periodic_y ? "true" : "false") << "\n"
     << "refinement = " << (s.grid.boundary_refined ? "boundary" : "uniform") << "\n"
     << "fine_ratio = " << fmt(s.grid.fine_ratio) << "\n";
  os << "[physics]\n"
     << "nu = " << fmt(s.run.nu) << "\n";
  os << "[walls]\n";
  if (!s.grid.periodic_y)
    os << "top = " << fmt(s.wall_top) << "\nbottom = " << fmt(s.wall_bottom) << "\n";
  if (!s.grid.periodic_x)
    os << "left = " << fmt(s.wall_left) << "\nright = " << fmt(s.wall_right) << "\n";
  os << "[initial]\n"
     << "field = " << to_string(s.initial) << "\n"
     << "amplitude = " << fmt(s.amplitude) << "\n";
  os << "[time]\n"
     << "dt = " << fmt(s.run.dt) << "\n";
  if (s.run.end_time) os << "end_time = " << fmt(*s.run.end_time) << "\n";
  if (s.run.steady_tol) os << "steady_tol = " << fmt(*s.run.steady_tol) << "\n";
  os << "max_steps = " << s.run.max_steps << "\n";
  os << "[numerics]\n"
     << "interpolation = " << to_string(s.run.scheme) << "\n"
     << "tracer = " << to_string(s.run.tracer.scheme) << "\n"
     << "cfl_max = " << fmt(s.run.tracer.cfl_max) << "\n"
     << "velocity_interpolation = " << to_string(s.run.tracer.velocity_interpolation) << "\n";
  if (s.run.tracer.fixed_substeps) os << "substeps = " << *s.run.tracer.fixed_substeps << "\n";
  os << "max_substeps = " << s.run.tracer.max_substeps << "\n";
  os << "poisson_backend = " << to_string(s.run.poisson_backend) << "\n"
     << "poisson_tol = " << fmt(s.run.poisson_tol) << "\n"
     << "guard_threshold = " << fmt(s.run.guard_threshold) << "\n";
  os << "[output]\n"
     << "dir = " << s.output_dir.string() << "\n"
     << "field_every = " << s.field_every << "\n"
     << "diagnostics_every = " << s.run.output_every << "\n";
  return os.str();
}

GridPtr make_grid(const GridConfig& g) {
  if (g.boundary_refined)
    return std::make_shared<const Grid>(make_boundary_refined_grid(g.nx, g.bounds, g.fine_ratio));
  return std::make_shared<const Grid>(
      make_uniform_grid(g.nx, g.ny, g.bounds, g.periodic_x, g.periodic_y));
}

std::vector<WallSpec> make_walls(const RunSpec& s, const Grid& g) {
  std::vector<WallSpec> walls;
  if (!g.y().periodic()) {
    walls.push_back(wall_moving(Side::Bottom, s.wall_bottom));
    walls.push_back(wall_moving(Side::Top, s.wall_top));
  }
  if (!g.x().periodic()) {
    walls.push_back(wall_moving(Side::Left, s.wall_left));
    walls.push_back(wall_moving(Side::Right, s.wall_right));
  }
  return walls;
}

SolverState initial_state(const RunSpec& s, Solver& solver) {
  const GridPtr& g = solver.grid_ptr();
  if (s.initial == InitialField::Rest) return solver.initialize_from_streamfunction(ScalarField(g));
  const Rect b = s.grid.bounds;
  const double kx = 2.0 * std::numbers::pi / (b.x1 - b.x0);
  const double ky = 2.0 * std::numbers::pi / (b.y1 - b.y0);
  return solver.initialize_from_vorticity(ScalarField::from_function(g, [&](double x, double y) {
    return s.amplitude * std::sin(kx * (x - b.x0)) * std::sin(ky * (y - b.y0));
  }));
}

void write_fields(const std::filesystem::path& path, const SolverState& s,
                  const std::vector<std::string>& header) {
  std::FILE* f = std::fopen(path.string().c_str(), "w");
  if (!f) throw std::runtime_error("cannot write " + path.string());
  for (const auto& line : header) std::fprintf(f, "# %s\n", line.c_str());
  std::fprintf(f, "# step = %ld\n# t = %.17g\n", s.step, s.t);
  std::fprintf(f, "x,y,omega,psi,u,v\n");
  const Grid& g = s.omega.grid();
  for (std::size_t j = 0; j < g.ny(); ++j) {
    for (std::size_t i = 0; i < g.nx(); ++i) {
      std::fprintf(f, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", g.x().coord(i), g.y().coord(j),
                   s.omega(i, j), s.psi(i, j), s.u_now.u(i, j), s.u_now.v(i, j));
    }
  }
  if (std::fclose(f) != 0) throw std::runtime_error("error writing " + path.string());
}

FieldTable read_fields(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  FieldTable t;
  std::string line;
  bool header = false;
  while (std::getline(in, line)) {
    if (line.rfind("#", 0) == 0) {
      t.comments.push_back(line.size() > 2 ? line.substr(2) : "");
      continue;
    }
    if (!header) {
      if (line != "x,y,omega,psi,u,v")
        throw std::runtime_error(path.string() + ": unexpected column header '" + line + "'");
      header = true;
      continue;
    }
    double v[6];
    if (std::sscanf(line.c_str(), "%lf,%lf,%lf,%lf,%lf,%lf", &v[0], &v[1], &v[2], &v[3], &v[4],
                    &v[5]) != 6)
      throw std::runtime_error(path.string() + ": malformed row '" + line + "'");
    t.x.push_back(v[0]);
    t.y.push_back(v[1]);
    t.omega.push_back(v[2]);
    t.psi.push_back(v[3]);
    t.u.push_back(v[4]);
    t.v.push_back(v[5]);
  }
  return t;
}

void write_diagnostics(const std::filesystem::path& path,
                       const std::vector<StepDiagnostics>& history) {
  std::FILE* f = std::fopen(path.string().c_str(), "w");
  if (!f) throw std::runtime_error("cannot write " + path.string());
  std::fprintf(f, "step,t,change_rate,max_abs_omega,substeps,poisson_iterations,poisson_residual\n");
  for (const auto& d : history) {
    std::fprintf(f, "%ld,%.17g,%.17g,%.17g,%d,%d,%.17g\n", d.step, d.t, d.change_rate,
                 d.max_abs_omega, d.substeps, d.poisson_iterations, d.poisson_residual);
  }
  if (std::fclose(f) != 0) throw std::runtime_error("error writing " + path.string());
}

void write_profiles(const std::filesystem::path& path, const std::vector<cases::ProfileRow>& rows) {
  std::FILE* f = std::fopen(path.string().c_str(), "w");
  if (!f) throw std::runtime_error("cannot write " + path.string());
  std::fprintf(f, "y,u,omega\n");
  for (const auto& r : rows) std::fprintf(f, "%.17g,%.17g,%.17g\n", r.y, r.u, r.omega);
  if (std::fclose(f) != 0) throw std::runtime_error("error writing " + path.string());
}

std::filesystem::path field_path(const std::filesystem::path& dir, long step) {
  char name[48];
  std::snprintf(name, sizeof name, "fields_%06ld.csv", step);
  return dir / name;
}

}  // namespace slns::io
