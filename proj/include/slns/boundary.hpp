#pragma once

#include <array>
#include <optional>
#include <vector>

#include "slns/field.hpp"

namespace slns {

enum class Side { Left, Right, Bottom, Top };

/// A wall with a prescribed tangential speed.
///
/// The speed is signed along the counterclockwise boundary tangent
/// (bottom: +x, right: +y, top: -x, left: -y). With that orientation the
/// Thom formula takes the same form on every side. A lid on the top wall
/// moving in +x therefore has speed -1.
struct WallSpec {
  Side side;
  double speed = 0.0;

  /// Physical velocity of the wall surface.
  Vec2 velocity() const;
};

/// Builds the WallSpec for a wall moving with physical velocity component
/// `along` in the direction of its axis (+x for horizontal walls, +y for vertical).
WallSpec wall_moving(Side side, double along);

/// Walls with zero speed on every non-periodic side of the grid.
std::vector<WallSpec> no_slip_walls(const Grid& g);

/// Checks that walls sit only on non-periodic sides and appear at most once.
void validate_walls(const std::vector<WallSpec>& walls, const Grid& g);

double thom_vorticity(double psi0, double psi1, double h, double speed);

/// Dirichlet vorticity on every wall node. Corners shared by two walls
/// carry one value (the average of the two one-sided formulas).
class WallValues {
 public:
  WallValues() = default;
  explicit WallValues(GridPtr grid);

  bool empty() const { return nodes_.empty(); }
  const std::vector<std::size_t>& nodes() const { return nodes_; }
  const std::vector<double>& values() const { return values_; }
  std::optional<double> at(std::size_t i, std::size_t j) const;

  /// Overwrites the wall nodes of f.
  void impose(ScalarField& f) const;

 private:
  friend WallValues apply_wall_vorticity(const ScalarField&, const std::vector<WallSpec>&);
  GridPtr grid_;
  std::vector<std::size_t> nodes_;
  std::vector<double> values_;
  std::vector<long> slot_;
};

WallValues apply_wall_vorticity(const ScalarField& psi, const std::vector<WallSpec>& walls);

}  // namespace slns
