#include "slns/trajectory.hpp"

#include <cmath>
#include <string>

#include "slns/simd/kernels.hpp"

namespace slns {

std::string_view to_string(TracerScheme s) { return s == TracerScheme::Euler ? "euler" : "heun"; }

TracerScheme parse_tracer_scheme(std::string_view name) {
  if (name == "euler") return TracerScheme::Euler;
  if (name == "heun") return TracerScheme::Heun;
  throw std::invalid_argument("unknown tracer scheme '" + std::string(name) +
                              "' (expected euler or heun)");
}

void TracerConfig::validate() const {
  if (!(cfl_max > 0.0 && cfl_max <= 1.0)) throw std::invalid_argument("cfl_max must lie in (0, 1]");
  if (fixed_substeps && *fixed_substeps < 1) throw std::invalid_argument("fixed_substeps must be >= 1");
  if (max_substeps < 1) throw std::invalid_argument("max_substeps must be >= 1");
}

VectorField extrapolate_velocity(const VectorField& u_n, const VectorField& u_prev) {
  if (!u_n.u.same_grid(u_prev.u)) throw std::invalid_argument("velocity fields on different grids");
  const auto& k = simd::kernels();
  VectorField out(u_n.u.grid_ptr());
  k.lincomb(1.5, u_n.u.data(), -0.5, u_prev.u.data(), out.u.data(), out.u.size());
  k.lincomb(1.5, u_n.v.data(), -0.5, u_prev.v.data(), out.v.data(), out.v.size());
  return out;
}

int substep_count(double u_bound, double dt, double h_min, double cfl_max) {
  const double ratio = u_bound * dt / (cfl_max * h_min);
  // The relative slack keeps an exact-fit ratio from rounding up to 2.
  const double n = std::ceil(ratio * (1.0 - 1e-12));
  return n < 1.0 ? 1 : static_cast<int>(n);
}

Tracer::Tracer(const VectorField& velocity, double dt, const TracerConfig& cfg)
    : grid_(&velocity.grid()),
      u_(velocity.u, cfg.velocity_interpolation),
      v_(velocity.v, cfg.velocity_interpolation),
      scheme_(cfg.scheme) {
  cfg.validate();
  if (!velocity.u.all_finite() || !velocity.v.all_finite())
    throw TraceError("non-finite velocity in characteristic tracing");
  if (cfg.fixed_substeps) {
    substeps_ = *cfg.fixed_substeps;
  } else {
    const double speed = velocity.max_speed();
    const double ratio = speed * dt / (cfg.cfl_max * grid_->min_spacing());
    if (ratio > cfg.max_substeps)
      throw TraceError("characteristic tracing needs more than " + std::to_string(cfg.max_substeps) +
                       " substeps (max speed " + std::to_string(speed) + ")");
    substeps_ = substep_count(speed, dt, grid_->min_spacing(), cfg.cfl_max);
  }
  dtau_ = dt / substeps_;
}

Vec2 Tracer::velocity_at(Vec2 p) const { return {u_(p), v_(p)}; }

Vec2 Tracer::confine(Vec2 p) const { return clamp_to_boundary(p, *grid_); }

Vec2 Tracer::foot(Vec2 x) const {
  Vec2 p = x;
  for (int s = 0; s < substeps_; ++s) {
    const Vec2 u0 = velocity_at(p);
    Vec2 next = confine(p - dtau_ * u0);
    if (scheme_ == TracerScheme::Heun) {
      const Vec2 u1 = velocity_at(next);
      next = confine(p - (0.5 * dtau_) * (u0 + u1));
    }
    p = next;
  }
  return p;
}

Vec2 trace_foot(Vec2 x, const VectorField& u_half, double dt, const TracerConfig& cfg) {
  return Tracer(u_half, dt, cfg).foot(x);
}

}  // namespace slns
