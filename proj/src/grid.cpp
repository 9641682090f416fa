#include "slns/grid.hpp"

#include <algorithm>
#include <cmath>

namespace slns {

namespace {

std::vector<double> refined_axis(std::size_t n, double lo, double hi, double fine_ratio) {
  // 4 fine intervals (two per wall) and n - 5 regular ones.
  const double coarse_count = static_cast<double>(n - 1) - 4.0;
  const double h = (hi - lo) / (coarse_count + 4.0 * fine_ratio);
  std::vector<double> widths(n - 1, h);
  widths[0] = widths[1] = fine_ratio * h;
  widths[n - 2] = widths[n - 3] = fine_ratio * h;

  std::vector<double> coords(n);
  coords[0] = lo;
  for (std::size_t i = 1; i < n; ++i) coords[i] = coords[i - 1] + widths[i - 1];
  coords[n - 1] = hi;
  return coords;
}

}  // namespace

Axis::Axis(std::vector<double> coords, bool periodic, double period)
    : coords_(std::move(coords)), periodic_(periodic), period_(period) {
  if (coords_.size() < 3) throw GridError("axis needs at least 3 nodes");
  for (double c : coords_)
    if (!std::isfinite(c)) throw GridError("axis coordinates must be finite");
  for (std::size_t i = 1; i < coords_.size(); ++i)
    if (!(coords_[i] > coords_[i - 1])) throw GridError("axis coordinates must be strictly increasing");
  if (periodic_) {
    if (!(coords_.front() + period_ > coords_.back()))
      throw GridError("periodic wrap interval must be positive");
  } else {
    period_ = 0.0;
  }

  min_spacing_ = spacing(0);
  double max_spacing = min_spacing_;
  for (std::size_t i = 1; i < intervals(); ++i) {
    min_spacing_ = std::min(min_spacing_, spacing(i));
    max_spacing = std::max(max_spacing, spacing(i));
  }
  uniform_ = (max_spacing - min_spacing_) <= 1e-10 * max_spacing;
  h_ = length() / static_cast<double>(intervals());

  if (!uniform_) {
    const double nb = std::ceil(length() / min_spacing_);
    if (nb <= 64.0 * static_cast<double>(intervals())) {
      bucket_.resize(static_cast<std::size_t>(nb) + 1);
      std::size_t i = 0;
      for (std::size_t b = 0; b < bucket_.size(); ++b) {
        const double x = lower() + static_cast<double>(b) * min_spacing_;
        while (i + 1 < intervals() && coords_[i + 1] <= x) ++i;
        bucket_[b] = i;
      }
    }
  }
}

double Axis::spacing(std::size_t i) const {
  if (i + 1 < coords_.size()) return coords_[i + 1] - coords_[i];
  return coords_.front() + period_ - coords_.back();
}

double Axis::wrap(double x) const {
  if (!periodic_) return x;
  double r = std::fmod(x - lower(), period_);
  if (r < 0.0) r += period_;
  // fmod can round to exactly period_ for tiny negative inputs.
  if (r >= period_) r = 0.0;
  return lower() + r;
}

std::size_t Axis::neighbor(std::size_t i, long offset) const {
  const long n = static_cast<long>(size());
  long k = static_cast<long>(i) + offset;
  if (periodic_) {
    k %= n;
    if (k < 0) k += n;
  } else {
    k = std::clamp(k, 0L, n - 1);
  }
  return static_cast<std::size_t>(k);
}

bool Axis::contains(double x, double slack) const {
  if (periodic_) return std::isfinite(x);
  return x >= lower() - slack && x <= upper() + slack;
}

CellLocation Axis::locate(double x) const {
  x = wrap(x);
  const std::size_t last = intervals() - 1;
  std::size_t i;
  if (uniform_) {
    const double s = (x - lower()) / h_;
    const double f = std::floor(s);
    i = f <= 0.0 ? 0 : std::min(static_cast<std::size_t>(f), last);
  } else if (!bucket_.empty()) {
    const double s = (x - lower()) / min_spacing_;
    const std::size_t b = s <= 0.0 ? 0 : std::min(static_cast<std::size_t>(s), bucket_.size() - 1);
    i = bucket_[b];
    while (i < last && coords_[i + 1] <= x) ++i;
  } else {
    auto it = std::upper_bound(coords_.begin(), coords_.end(), x);
    const auto k = static_cast<std::size_t>(std::distance(coords_.begin(), it));
    i = k == 0 ? 0 : std::min(k - 1, last);
  }
  const double t = (x - coords_[i]) / spacing(i);
  return {i, std::clamp(t, 0.0, 1.0)};
}

Grid::Grid(Axis x, Axis y) : x_(std::move(x)), y_(std::move(y)) {}

double Grid::min_spacing() const { return std::min(x_.min_spacing(), y_.min_spacing()); }

bool Grid::on_wall(std::size_t i, std::size_t j) const {
  const bool wall_x = !x_.periodic() && (i == 0 || i + 1 == nx());
  const bool wall_y = !y_.periodic() && (j == 0 || j + 1 == ny());
  return wall_x || wall_y;
}

bool Grid::operator==(const Grid& other) const {
  return x_.coords() == other.x_.coords() && y_.coords() == other.y_.coords() &&
         x_.periodic() == other.x_.periodic() && y_.periodic() == other.y_.periodic() &&
         x_.period() == other.x_.period() && y_.period() == other.y_.period();
}

Grid make_uniform_grid(std::size_t nx, std::size_t ny, const Rect& bounds, bool periodic_x,
                       bool periodic_y) {
  if (nx < 3 || ny < 3) throw GridError("grid needs at least 3 nodes per axis");
  if (!(bounds.x1 > bounds.x0) || !(bounds.y1 > bounds.y0))
    throw GridError("degenerate grid bounds");

  auto axis = [](std::size_t n, double lo, double hi, bool periodic) {
    const double len = hi - lo;
    const double h = periodic ? len / static_cast<double>(n) : len / static_cast<double>(n - 1);
    std::vector<double> c(n);
    for (std::size_t i = 0; i < n; ++i) c[i] = lo + static_cast<double>(i) * h;
    if (!periodic) c.back() = hi;
    return Axis(std::move(c), periodic, periodic ? len : 0.0);
  };
  return Grid(axis(nx, bounds.x0, bounds.x1, periodic_x), axis(ny, bounds.y0, bounds.y1, periodic_y));
}

Grid make_boundary_refined_grid(std::size_t n, const Rect& bounds, double fine_ratio) {
  if (n < 7) throw GridError("boundary-refined grid needs n >= 7");
  if (!(fine_ratio > 0.0 && fine_ratio < 1.0)) throw GridError("fine_ratio must lie in (0, 1)");
  if (!(bounds.x1 > bounds.x0) || !(bounds.y1 > bounds.y0))
    throw GridError("degenerate grid bounds");
  return Grid(Axis(refined_axis(n, bounds.x0, bounds.x1, fine_ratio), false),
              Axis(refined_axis(n, bounds.y0, bounds.y1, fine_ratio), false));
}

Vec2 clamp_to_boundary(Vec2 p, const Grid& g) {
  for (int a = 0; a < 2; ++a) {
    const Axis& ax = g.axis(a);
    p[a] = ax.periodic() ? ax.wrap(p[a]) : std::clamp(p[a], ax.lower(), ax.upper());
  }
  return p;
}

}  // namespace slns
