#include "slns/boundary.hpp"

#include <stdexcept>

namespace slns {

namespace {

Vec2 ccw_tangent(Side s) {
  switch (s) {
    case Side::Bottom:
      return {1.0, 0.0};
    case Side::Right:
      return {0.0, 1.0};
    case Side::Top:
      return {-1.0, 0.0};
    case Side::Left:
      return {0.0, -1.0};
  }
  return {};
}

int axis_of(Side s) { return (s == Side::Left || s == Side::Right) ? 0 : 1; }

double speed_on(const std::vector<WallSpec>& walls, Side s) {
  for (const auto& w : walls)
    if (w.side == s) return w.speed;
  return 0.0;
}

}  // namespace

Vec2 WallSpec::velocity() const { return speed * ccw_tangent(side); }

WallSpec wall_moving(Side side, double along) {
  const Vec2 t = ccw_tangent(side);
  return {side, along * (axis_of(side) == 0 ? t.y : t.x)};
}

std::vector<WallSpec> no_slip_walls(const Grid& g) {
  std::vector<WallSpec> walls;
  if (!g.x().periodic()) {
    walls.push_back({Side::Left, 0.0});
    walls.push_back({Side::Right, 0.0});
  }
  if (!g.y().periodic()) {
    walls.push_back({Side::Bottom, 0.0});
    walls.push_back({Side::Top, 0.0});
  }
  return walls;
}

void validate_walls(const std::vector<WallSpec>& walls, const Grid& g) {
  std::array<int, 4> seen{};
  for (const auto& w : walls) {
    if (g.axis(axis_of(w.side)).periodic())
      throw std::invalid_argument("wall specified on a periodic side");
    if (++seen[static_cast<int>(w.side)] > 1) throw std::invalid_argument("duplicate wall side");
  }
}

double thom_vorticity(double psi0, double psi1, double h, double speed) {
  if (!(h > 0.0)) throw std::invalid_argument("thom_vorticity needs h > 0");
  return -2.0 / (h * h) * (psi1 - psi0) + 2.0 * speed / h;
}

WallValues::WallValues(GridPtr grid) : grid_(std::move(grid)), slot_(grid_->size(), -1) {
  for (std::size_t j = 0; j < grid_->ny(); ++j) {
    for (std::size_t i = 0; i < grid_->nx(); ++i) {
      if (!grid_->on_wall(i, j)) continue;
      slot_[grid_->index(i, j)] = static_cast<long>(nodes_.size());
      nodes_.push_back(grid_->index(i, j));
    }
  }
  values_.assign(nodes_.size(), 0.0);
}

std::optional<double> WallValues::at(std::size_t i, std::size_t j) const {
  if (!grid_) return std::nullopt;
  const long s = slot_[grid_->index(i, j)];
  if (s < 0) return std::nullopt;
  return values_[static_cast<std::size_t>(s)];
}

void WallValues::impose(ScalarField& f) const {
  for (std::size_t k = 0; k < nodes_.size(); ++k) f[nodes_[k]] = values_[k];
}

WallValues apply_wall_vorticity(const ScalarField& psi, const std::vector<WallSpec>& walls) {
  const Grid& g = psi.grid();
  validate_walls(walls, g);
  WallValues out(psi.grid_ptr());
  const std::size_t nx = g.nx(), ny = g.ny();
  const double hl = g.x().spacing(0), hr = g.x().spacing(nx - 2);
  const double hb = g.y().spacing(0), ht = g.y().spacing(ny - 2);
  const bool wx = !g.x().periodic(), wy = !g.y().periodic();
  const double s_left = speed_on(walls, Side::Left), s_right = speed_on(walls, Side::Right);
  const double s_bottom = speed_on(walls, Side::Bottom), s_top = speed_on(walls, Side::Top);

  for (std::size_t k = 0; k < out.nodes_.size(); ++k) {
    const std::size_t i = out.nodes_[k] % nx;
    const std::size_t j = out.nodes_[k] / nx;
    double sum = 0.0;
    int count = 0;
    if (wx && i == 0) {
      sum += thom_vorticity(psi(0, j), psi(1, j), hl, s_left);
      ++count;
    }
    if (wx && i == nx - 1) {
      sum += thom_vorticity(psi(nx - 1, j), psi(nx - 2, j), hr, s_right);
      ++count;
    }
    if (wy && j == 0) {
      sum += thom_vorticity(psi(i, 0), psi(i, 1), hb, s_bottom);
      ++count;
    }
    if (wy && j == ny - 1) {
      sum += thom_vorticity(psi(i, ny - 1), psi(i, ny - 2), ht, s_top);
      ++count;
    }
    out.values_[k] = sum / count;
  }
  return out;
}

}  // namespace slns
