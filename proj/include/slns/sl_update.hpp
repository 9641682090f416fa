#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

#include "slns/boundary.hpp"
#include "slns/field.hpp"
#include "slns/interpolation.hpp"
#include "slns/trajectory.hpp"

namespace slns {

/// Non-finite vorticity produced at a node.
class SlUpdateError : public std::runtime_error {
 public:
  SlUpdateError(std::size_t i, std::size_t j, const std::string& what)
      : std::runtime_error(what), i_(i), j_(j) {}
  std::size_t i() const { return i_; }
  std::size_t j() const { return j_; }

 private:
  std::size_t i_, j_;
};

struct SlUpdateReport {
  int substeps = 0;
  std::size_t corrected_stencils = 0;
  std::size_t flagged_stencils = 0;
};

/// One semi-Lagrangian advection-diffusion step for the vorticity.
///
/// Every non-wall node is updated as the weighted average of the source
/// field interpolated at its characteristic foot plus the diffusion stencil
/// displacements. The source is omega_n with `wall` imposed on its wall
/// nodes, and the same wall values are copied into the result.
ScalarField advance_vorticity(const ScalarField& omega_n, const WallValues& wall,
                              const VectorField& u_half, double nu, double dt,
                              const TracerConfig& cfg, InterpolationScheme scheme,
                              SlUpdateReport* report = nullptr);

/// nu^(1/3) dt / (T^(2/3) dx^(2/3)); must stay well below 1 for a smooth
/// numerical domain of dependence.
double compatibility_ratio(double nu, double dt, double horizon, double dx);

}  // namespace slns
