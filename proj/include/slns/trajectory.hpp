#pragma once

#include <optional>
#include <stdexcept>
#include <string_view>

#include "slns/field.hpp"
#include "slns/interpolation.hpp"

namespace slns {

enum class TracerScheme { Euler, Heun };

std::string_view to_string(TracerScheme s);
TracerScheme parse_tracer_scheme(std::string_view name);

struct TracerConfig {
  TracerScheme scheme = TracerScheme::Heun;
  /// Upper bound on the substep Courant number, in (0, 1].
  double cfl_max = 0.9;
  InterpolationScheme velocity_interpolation = InterpolationScheme::Bilinear;
  /// Forces the substep count instead of deriving it from the CFL bound.
  std::optional<int> fixed_substeps;
  /// Derived substep counts above this raise TraceError.
  int max_substeps = 10000;

  void validate() const;
};

class TraceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// 3/2 u_n - 1/2 u_prev, componentwise.
VectorField extrapolate_velocity(const VectorField& u_n, const VectorField& u_prev);

/// Smallest N >= 1 with u_bound * (dt / N) <= cfl_max * h_min.
int substep_count(double u_bound, double dt, double h_min, double cfl_max);

/// Backward characteristic tracer for one time step with a frozen velocity.
///
/// The substep count is fixed at construction from the largest node speed
/// of the velocity field, so every foot of a step shares the same substep.
class Tracer {
 public:
  Tracer(const VectorField& velocity, double dt, const TracerConfig& cfg);

  /// Departure point of the trajectory that reaches x after dt.
  Vec2 foot(Vec2 x) const;

  int substeps() const { return substeps_; }
  double substep() const { return dtau_; }

 private:
  Vec2 velocity_at(Vec2 p) const;
  Vec2 confine(Vec2 p) const;

  const Grid* grid_;
  Interpolator u_;
  Interpolator v_;
  TracerScheme scheme_;
  int substeps_;
  double dtau_;
};

Vec2 trace_foot(Vec2 x, const VectorField& u_half, double dt, const TracerConfig& cfg);

}  // namespace slns
