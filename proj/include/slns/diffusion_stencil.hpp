#pragma once

#include <array>
#include <cstddef>
#include <span>

#include "slns/grid.hpp"

namespace slns {

/// Displacement from the characteristic foot and its averaging weight.
struct StencilEntry {
  Vec2 offset;
  double weight = 0.0;
};

/// Displaced averaging stencil that realizes the diffusion step.
///
/// Interior feet get four entries of weight 1/4 at +-delta along each axis.
/// Along an axis where one of those points would cross a wall, the pair is
/// replaced by a shortened displacement that ends on the wall and a longer
/// one on the opposite side, with weights chosen so that the pair keeps
/// total weight 1/2, zero first moment and second moment 2 nu dt.
struct DiffusionStencil {
  std::array<StencilEntry, 4> entries{};
  std::size_t count = 0;
  /// Axis received the near-wall correction.
  std::array<bool, 2> corrected{false, false};
  /// Foot sat on the wall; plain weights 1/4 with the wall-side point clamped.
  std::array<bool, 2> degenerate{false, false};
  /// Long displacement was cut at the opposite wall; second moment is off.
  std::array<bool, 2> capped{false, false};

  std::span<const StencilEntry> view() const { return {entries.data(), count}; }
  bool flagged() const {
    return degenerate[0] || degenerate[1] || capped[0] || capped[1];
  }
};

/// sqrt(4 nu dt)
double interior_delta(double nu, double dt);

DiffusionStencil build_stencil(Vec2 foot, double nu, double dt, const Grid& g);

}  // namespace slns
