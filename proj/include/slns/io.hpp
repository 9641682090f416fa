#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "slns/boundary.hpp"
#include "slns/cases.hpp"
#include "slns/driver.hpp"

namespace slns::io {

/// Invalid or incomplete run configuration. field() is "section.key".
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string field, const std::string& reason)
      : std::runtime_error(field + ": " + reason), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

enum class InitialField { Rest, SinSin };

struct GridConfig {
  std::size_t nx = 0;
  std::size_t ny = 0;
  Rect bounds{0.0, 1.0, 0.0, 1.0};
  bool periodic_x = false;
  bool periodic_y = false;
  bool boundary_refined = false;
  double fine_ratio = 0.5;
};

/// A fully resolved run description: every derived quantity (nu, dt) is
/// explicit so the echo reproduces the run.
struct RunSpec {
  GridConfig grid;
  /// Physical tangential wall velocity along +x (top/bottom) or +y (left/right).
  double wall_top = 0.0;
  double wall_bottom = 0.0;
  double wall_left = 0.0;
  double wall_right = 0.0;
  InitialField initial = InitialField::Rest;
  double amplitude = 1.0;
  RunConfig run;
  std::filesystem::path output_dir = "out";
  /// Field snapshot cadence in steps; 0 writes the initial and final fields only.
  long field_every = 0;
};

/// Parses INI text with sections [grid] [physics] [walls] [initial] [time]
/// [numerics] [output]. Unknown keys are rejected.
RunSpec parse_config(std::istream& in);
RunSpec load_config(const std::filesystem::path& path);
/// Re-reads the config echoed at the top of a field CSV.
RunSpec load_echo(const std::filesystem::path& fields_csv);

/// Resolved config as INI text (round-trips through parse_config).
std::string to_ini(const RunSpec& spec);

GridPtr make_grid(const GridConfig& g);
std::vector<WallSpec> make_walls(const RunSpec& spec, const Grid& g);
/// Initial condition: rest (psi = 0) or A sin(2 pi x~) sin(2 pi y~) vorticity.
SolverState initial_state(const RunSpec& spec, Solver& solver);

/// Node table of one field snapshot.
struct FieldTable {
  std::vector<std::string> comments;
  std::vector<double> x, y, omega, psi, u, v;
};

void write_fields(const std::filesystem::path& path, const SolverState& s,
                  const std::vector<std::string>& header);
FieldTable read_fields(const std::filesystem::path& path);

void write_diagnostics(const std::filesystem::path& path,
                       const std::vector<StepDiagnostics>& history);
void write_profiles(const std::filesystem::path& path,
                    const std::vector<cases::ProfileRow>& rows);

std::filesystem::path field_path(const std::filesystem::path& dir, long step);

}  // namespace slns::io
