#include "slns/sl_update.hpp"

#include <cmath>

#include "slns/diffusion_stencil.hpp"

namespace slns {

ScalarField advance_vorticity(const ScalarField& omega_n, const WallValues& wall,
                              const VectorField& u_half, double nu, double dt,
                              const TracerConfig& cfg, InterpolationScheme scheme,
                              SlUpdateReport* report) {
  const Grid& g = omega_n.grid();
  if (!u_half.u.same_grid(omega_n)) throw std::invalid_argument("velocity and vorticity grids differ");

  ScalarField source = omega_n;
  wall.impose(source);
  const Interpolator interp(source, scheme);
  const Tracer tracer(u_half, dt, cfg);

  ScalarField out = source;
  SlUpdateReport rep;
  rep.substeps = tracer.substeps();
  for (std::size_t j = 0; j < g.ny(); ++j) {
    for (std::size_t i = 0; i < g.nx(); ++i) {
      if (g.on_wall(i, j)) continue;
      const Vec2 z = tracer.foot(g.node(i, j));
      const DiffusionStencil st = build_stencil(z, nu, dt, g);
      if (st.corrected[0] || st.corrected[1]) ++rep.corrected_stencils;
      if (st.flagged()) ++rep.flagged_stencils;
      double sum = 0.0;
      for (const StencilEntry& e : st.view()) sum += e.weight * interp(z + e.offset);
      if (!std::isfinite(sum)) {
        throw SlUpdateError(i, j, "non-finite vorticity at node (" + std::to_string(i) + ", " +
                                      std::to_string(j) + ")");
      }
      out(i, j) = sum;
    }
  }
  if (report != nullptr) *report = rep;
  return out;
}

double compatibility_ratio(double nu, double dt, double horizon, double dx) {
  return std::cbrt(nu) * dt / (std::pow(horizon, 2.0 / 3.0) * std::pow(dx, 2.0 / 3.0));
}

}  // namespace slns
