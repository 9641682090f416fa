#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace slns {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  double operator[](int axis) const { return axis == 0 ? x : y; }
  double& operator[](int axis) { return axis == 0 ? x : y; }
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }

struct Rect {
  double x0 = 0.0;
  double x1 = 1.0;
  double y0 = 0.0;
  double y1 = 1.0;
};

class GridError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Location of a coordinate inside an axis: the left node of the enclosing
/// interval and the normalized offset t in [0, 1] within it.
struct CellLocation {
  std::size_t index = 0;
  double t = 0.0;
};

/// One axis of a tensor-product grid.
///
/// A periodic axis with n nodes spans [lower, lower + period) and node n is
/// identified with node 0, so the last interval wraps around. A non-periodic
/// axis spans [coords.front(), coords.back()].
class Axis {
 public:
  Axis() = default;
  Axis(std::vector<double> coords, bool periodic, double period = 0.0);

  std::size_t size() const { return coords_.size(); }
  bool periodic() const { return periodic_; }
  bool uniform() const { return uniform_; }
  double period() const { return period_; }
  double coord(std::size_t i) const { return coords_[i]; }
  const std::vector<double>& coords() const { return coords_; }

  double lower() const { return coords_.front(); }
  /// Upper end of the domain: last node for walls, lower + period otherwise.
  double upper() const { return periodic_ ? coords_.front() + period_ : coords_.back(); }
  double length() const { return upper() - lower(); }

  /// Width of interval [i, i+1]; on a periodic axis i = n-1 is the wrap interval.
  double spacing(std::size_t i) const;
  std::size_t intervals() const { return periodic_ ? size() : size() - 1; }
  double min_spacing() const { return min_spacing_; }
  /// Uniform spacing; only meaningful when uniform().
  double h() const { return h_; }

  /// Maps x into [lower, upper) on periodic axes; identity otherwise.
  double wrap(double x) const;
  /// Index of neighbor i + offset with wraparound on periodic axes.
  std::size_t neighbor(std::size_t i, long offset) const;

  /// Enclosing interval of x, which must lie in the axis closure
  /// (periodic axes wrap x first).
  CellLocation locate(double x) const;
  bool contains(double x, double slack = 0.0) const;

 private:
  std::vector<double> coords_;
  bool periodic_ = false;
  double period_ = 0.0;
  bool uniform_ = false;
  double h_ = 0.0;
  double min_spacing_ = 0.0;
  // Nonuniform lookup: first interval touching each bucket of width
  // min_spacing_; empty when the table would be too large.
  std::vector<std::size_t> bucket_;
};

/// Structured Cartesian mesh, immutable after construction.
class Grid {
 public:
  Grid(Axis x, Axis y);

  const Axis& x() const { return x_; }
  const Axis& y() const { return y_; }
  const Axis& axis(int a) const { return a == 0 ? x_ : y_; }

  std::size_t nx() const { return x_.size(); }
  std::size_t ny() const { return y_.size(); }
  std::size_t size() const { return nx() * ny(); }
  std::size_t index(std::size_t i, std::size_t j) const { return j * nx() + i; }

  Vec2 node(std::size_t i, std::size_t j) const { return {x_.coord(i), y_.coord(j)}; }
  Rect bounds() const { return {x_.lower(), x_.upper(), y_.lower(), y_.upper()}; }
  double min_spacing() const;
  bool uniform() const { return x_.uniform() && y_.uniform(); }
  bool fully_periodic() const { return x_.periodic() && y_.periodic(); }

  /// True for nodes on a wall of a non-periodic axis.
  bool on_wall(std::size_t i, std::size_t j) const;

  bool operator==(const Grid& other) const;

 private:
  Axis x_;
  Axis y_;
};

Grid make_uniform_grid(std::size_t nx, std::size_t ny, const Rect& bounds, bool periodic_x,
                       bool periodic_y);

/// Non-periodic grid whose two intervals adjacent to each wall have width
/// fine_ratio * h, with h the interior spacing; same node count on both axes.
Grid make_boundary_refined_grid(std::size_t n, const Rect& bounds, double fine_ratio);

/// Per-axis coordinate clamp onto the closure of the non-periodic axes;
/// periodic coordinates are wrapped instead.
Vec2 clamp_to_boundary(Vec2 p, const Grid& g);

}  // namespace slns
