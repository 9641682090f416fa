#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "slns/grid.hpp"

namespace slns {

using GridPtr = std::shared_ptr<const Grid>;

/// Node values of a scalar on a grid, stored x-fastest (index = j * nx + i).
class ScalarField {
 public:
  ScalarField() = default;
  explicit ScalarField(GridPtr grid, double value = 0.0);
  ScalarField(GridPtr grid, std::vector<double> values);

  /// Samples f at every node.
  static ScalarField from_function(GridPtr grid, const std::function<double(double, double)>& f);

  const Grid& grid() const { return *grid_; }
  const GridPtr& grid_ptr() const { return grid_; }
  std::size_t size() const { return values_.size(); }

  double& operator()(std::size_t i, std::size_t j) { return values_[grid_->index(i, j)]; }
  double operator()(std::size_t i, std::size_t j) const { return values_[grid_->index(i, j)]; }
  double& operator[](std::size_t k) { return values_[k]; }
  double operator[](std::size_t k) const { return values_[k]; }

  std::span<double> values() { return values_; }
  std::span<const double> values() const { return values_; }
  double* data() { return values_.data(); }
  const double* data() const { return values_.data(); }

  bool all_finite() const;
  double min() const;
  double max() const;
  double max_abs() const;

  bool same_grid(const ScalarField& other) const;

 private:
  GridPtr grid_;
  std::vector<double> values_;
};

/// Velocity (u1, u2) on a common grid.
struct VectorField {
  ScalarField u;
  ScalarField v;

  VectorField() = default;
  explicit VectorField(const GridPtr& grid) : u(grid), v(grid) {}
  VectorField(ScalarField u1, ScalarField u2);

  const Grid& grid() const { return u.grid(); }
  /// Largest node speed |u|.
  double max_speed() const;
};

}  // namespace slns
