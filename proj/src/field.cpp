#include "slns/field.hpp"

#include <algorithm>
#include <cmath>

#include "slns/simd/kernels.hpp"

namespace slns {

ScalarField::ScalarField(GridPtr grid, double value)
    : grid_(std::move(grid)), values_(grid_->size(), value) {}

ScalarField::ScalarField(GridPtr grid, std::vector<double> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
  if (values_.size() != grid_->size()) throw std::invalid_argument("field size does not match grid");
}

ScalarField ScalarField::from_function(GridPtr grid,
                                       const std::function<double(double, double)>& f) {
  ScalarField out(grid);
  for (std::size_t j = 0; j < grid->ny(); ++j)
    for (std::size_t i = 0; i < grid->nx(); ++i) out(i, j) = f(grid->x().coord(i), grid->y().coord(j));
  return out;
}

bool ScalarField::all_finite() const {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

double ScalarField::min() const { return *std::min_element(values_.begin(), values_.end()); }
double ScalarField::max() const { return *std::max_element(values_.begin(), values_.end()); }

double ScalarField::max_abs() const {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

bool ScalarField::same_grid(const ScalarField& other) const {
  return grid_ == other.grid_ || (grid_ && other.grid_ && *grid_ == *other.grid_);
}

VectorField::VectorField(ScalarField u1, ScalarField u2) : u(std::move(u1)), v(std::move(u2)) {
  if (!u.same_grid(v)) throw std::invalid_argument("velocity components live on different grids");
}

double VectorField::max_speed() const {
  return std::sqrt(simd::kernels().max_norm2(u.data(), v.data(), u.size()));
}

}  // namespace slns
