#include "slns/interpolation.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <vector>

namespace slns {

namespace {

// Relative tolerance for points that round just outside a wall.
constexpr double kDomainSlack = 1e-10;

// In-place Thomas sweep; b and r are overwritten, the solution ends in r.
void thomas(std::size_t n, const double* a, double* b, const double* c, double* r) {
  for (std::size_t i = 1; i < n; ++i) {
    const double m = a[i] / b[i - 1];
    b[i] -= m * c[i - 1];
    r[i] -= m * r[i - 1];
  }
  r[n - 1] /= b[n - 1];
  for (std::size_t i = n - 1; i-- > 0;) r[i] = (r[i] - c[i] * r[i + 1]) / b[i];
}

// Second derivatives of the 1D interpolating cubic spline through
// values[0], values[stride], ... on the given axis.
void spline_second_derivatives(const Axis& axis, const double* values, std::size_t stride,
                               double* out) {
  const std::size_t n = axis.size();
  auto f = [&](std::size_t i) { return values[i * stride]; };
  thread_local std::vector<double> buf;
  buf.assign(6 * n, 0.0);
  double* sub = buf.data();
  double* diag = sub + n;
  double* sup = diag + n;
  double* rhs = sup + n;
  double* b2 = rhs + n;
  double* z = b2 + n;

  if (!axis.periodic()) diag[0] = diag[n - 1] = 1.0;  // natural ends
  const std::size_t first = axis.periodic() ? 0 : 1;
  const std::size_t last = axis.periodic() ? n : n - 1;
  for (std::size_t i = first; i < last; ++i) {
    const std::size_t im = axis.neighbor(i, -1);
    const std::size_t ip = axis.neighbor(i, +1);
    const double hl = axis.spacing(im);
    const double hr = axis.spacing(i);
    sub[i] = hl;
    diag[i] = 2.0 * (hl + hr);
    sup[i] = hr;
    rhs[i] = 6.0 * ((f(ip) - f(i)) / hr - (f(i) - f(im)) / hl);
  }

  if (!axis.periodic()) {
    thomas(n, sub, diag, sup, rhs);
    for (std::size_t i = 0; i < n; ++i) out[i * stride] = rhs[i];
    return;
  }
  // Cyclic system via Sherman-Morrison: corners A[0][n-1] = sub[0],
  // A[n-1][0] = sup[n-1].
  const double beta = sub[0];
  const double alpha = sup[n - 1];
  const double gamma = -diag[0];
  diag[0] -= gamma;
  diag[n - 1] -= alpha * beta / gamma;
  sub[0] = 0.0;
  sup[n - 1] = 0.0;
  std::copy(diag, diag + n, b2);
  thomas(n, sub, diag, sup, rhs);
  z[0] = gamma;
  z[n - 1] = alpha;
  thomas(n, sub, b2, sup, z);
  const double fact = (rhs[0] + beta * rhs[n - 1] / gamma) / (1.0 + z[0] + beta * z[n - 1] / gamma);
  for (std::size_t i = 0; i < n; ++i) out[i * stride] = rhs[i] - fact * z[i];
}

void check_point(const Grid& g, Vec2& p, double slack_x, double slack_y) {
  const double slack[2] = {slack_x, slack_y};
  for (int a = 0; a < 2; ++a) {
    const Axis& ax = g.axis(a);
    if (!std::isfinite(p[a]))
      throw InterpolationError("interpolation point is not finite");
    if (ax.periodic()) continue;
    if (!ax.contains(p[a], slack[a])) {
      throw InterpolationError("interpolation point (" + std::to_string(p.x) + ", " +
                               std::to_string(p.y) + ") lies outside the domain");
    }
    p[a] = std::clamp(p[a], ax.lower(), ax.upper());
  }
}

// Catmull-Rom weights for nodes i-1, i, i+1, i+2 at offset t.
std::array<double, 4> cubic_convolution_weights(double t) {
  const double t2 = t * t;
  const double t3 = t2 * t;
  return {0.5 * (-t3 + 2.0 * t2 - t), 0.5 * (3.0 * t3 - 5.0 * t2 + 2.0),
          0.5 * (-3.0 * t3 + 4.0 * t2 + t), 0.5 * (t3 - t2)};
}

}  // namespace

std::string_view to_string(InterpolationScheme s) {
  switch (s) {
    case InterpolationScheme::Bilinear:
      return "bilinear";
    case InterpolationScheme::MonotonizedBicubic:
      return "bicubic";
    case InterpolationScheme::CubicSpline:
      return "spline";
  }
  return "unknown";
}

InterpolationScheme parse_interpolation_scheme(std::string_view name) {
  if (name == "bilinear") return InterpolationScheme::Bilinear;
  if (name == "bicubic") return InterpolationScheme::MonotonizedBicubic;
  if (name == "spline") return InterpolationScheme::CubicSpline;
  throw std::invalid_argument("unknown interpolation scheme '" + std::string(name) +
                              "' (expected bilinear, bicubic or spline)");
}

SplineCoefficients build_spline_coefficients(const ScalarField& f) {
  const Grid& g = f.grid();
  const std::size_t nx = g.nx(), ny = g.ny();
  SplineCoefficients s{ScalarField(f.grid_ptr()), ScalarField(f.grid_ptr()),
                       ScalarField(f.grid_ptr())};
  for (std::size_t j = 0; j < ny; ++j)
    spline_second_derivatives(g.x(), f.data() + j * nx, 1, s.fxx.data() + j * nx);
  for (std::size_t i = 0; i < nx; ++i) {
    spline_second_derivatives(g.y(), f.data() + i, nx, s.fyy.data() + i);
    spline_second_derivatives(g.y(), s.fxx.data() + i, nx, s.fxxyy.data() + i);
  }
  return s;
}

Interpolator::Interpolator(const ScalarField& f, InterpolationScheme scheme)
    : f_(&f),
      scheme_(scheme),
      slack_x_(kDomainSlack * f.grid().x().length()),
      slack_y_(kDomainSlack * f.grid().y().length()) {
  if (scheme_ == InterpolationScheme::MonotonizedBicubic &&
      !(f.grid().x().uniform() && f.grid().y().uniform()))
    throw InterpolationError("monotonized bicubic interpolation requires uniform spacing");
  if (scheme_ == InterpolationScheme::CubicSpline) spline_ = build_spline_coefficients(f);
}

double Interpolator::operator()(Vec2 p) const {
  const Grid& g = f_->grid();
  check_point(g, p, slack_x_, slack_y_);
  const CellLocation cx = g.x().locate(p.x);
  const CellLocation cy = g.y().locate(p.y);
  switch (scheme_) {
    case InterpolationScheme::Bilinear:
      return bilinear(cx, cy);
    case InterpolationScheme::MonotonizedBicubic:
      return bicubic(cx, cy);
    case InterpolationScheme::CubicSpline:
      return spline(cx, cy);
  }
  return 0.0;
}

double Interpolator::bilinear(const CellLocation& cx, const CellLocation& cy) const {
  const Grid& g = f_->grid();
  const std::size_t i0 = cx.index, i1 = g.x().neighbor(i0, 1);
  const std::size_t j0 = cy.index, j1 = g.y().neighbor(j0, 1);
  // Difference form reproduces constants exactly.
  const double a = (*f_)(i0, j0) + cx.t * ((*f_)(i1, j0) - (*f_)(i0, j0));
  const double b = (*f_)(i0, j1) + cx.t * ((*f_)(i1, j1) - (*f_)(i0, j1));
  return a + cy.t * (b - a);
}

double Interpolator::node_or_ghost(long i, long j) const {
  const Grid& g = f_->grid();
  const long nx = static_cast<long>(g.nx());
  const long ny = static_cast<long>(g.ny());
  // Off-grid nodes on walls are linear extrapolations of the two nearest.
  if (!g.x().periodic()) {
    if (i < 0) return 2.0 * node_or_ghost(0, j) - node_or_ghost(1, j);
    if (i >= nx) return 2.0 * node_or_ghost(nx - 1, j) - node_or_ghost(nx - 2, j);
  }
  if (!g.y().periodic()) {
    if (j < 0) return 2.0 * node_or_ghost(i, 0) - node_or_ghost(i, 1);
    if (j >= ny) return 2.0 * node_or_ghost(i, ny - 1) - node_or_ghost(i, ny - 2);
  }
  const std::size_t ii = g.x().neighbor(0, i);
  const std::size_t jj = g.y().neighbor(0, j);
  return (*f_)(ii, jj);
}

double Interpolator::bicubic(const CellLocation& cx, const CellLocation& cy) const {
  const auto wx = cubic_convolution_weights(cx.t);
  const auto wy = cubic_convolution_weights(cy.t);
  const long i0 = static_cast<long>(cx.index);
  const long j0 = static_cast<long>(cy.index);
  double sum = 0.0;
  for (int b = 0; b < 4; ++b) {
    double row = 0.0;
    for (int a = 0; a < 4; ++a) row += wx[a] * node_or_ghost(i0 - 1 + a, j0 - 1 + b);
    sum += wy[b] * row;
  }
  // Limiter: no new extrema beyond the enclosing cell's corner values.
  const double c00 = node_or_ghost(i0, j0), c10 = node_or_ghost(i0 + 1, j0);
  const double c01 = node_or_ghost(i0, j0 + 1), c11 = node_or_ghost(i0 + 1, j0 + 1);
  const double lo = std::min({c00, c10, c01, c11});
  const double hi = std::max({c00, c10, c01, c11});
  return std::clamp(sum, lo, hi);
}

double Interpolator::spline(const CellLocation& cx, const CellLocation& cy) const {
  const Grid& g = f_->grid();
  const std::size_t i0 = cx.index, i1 = g.x().neighbor(i0, 1);
  const std::size_t j0 = cy.index, j1 = g.y().neighbor(j0, 1);
  const double hx = g.x().spacing(i0);
  const double hy = g.y().spacing(j0);

  const double bx = cx.t, ax = 1.0 - bx;
  const double cxw = (ax * ax * ax - ax) * hx * hx / 6.0;
  const double dxw = (bx * bx * bx - bx) * hx * hx / 6.0;
  const double by = cy.t, ay = 1.0 - by;
  const double cyw = (ay * ay * ay - ay) * hy * hy / 6.0;
  const double dyw = (by * by * by - by) * hy * hy / 6.0;

  auto along_x = [&](const ScalarField& val, const ScalarField& dxx, std::size_t j) {
    return val(i0, j) + bx * (val(i1, j) - val(i0, j)) + cxw * dxx(i0, j) + dxw * dxx(i1, j);
  };
  const double v0 = along_x(*f_, spline_.fxx, j0);
  const double v1 = along_x(*f_, spline_.fxx, j1);
  const double m0 = along_x(spline_.fyy, spline_.fxxyy, j0);
  const double m1 = along_x(spline_.fyy, spline_.fxxyy, j1);
  return v0 + by * (v1 - v0) + cyw * m0 + dyw * m1;
}

double interpolate(const ScalarField& f, Vec2 p, InterpolationScheme scheme) {
  return Interpolator(f, scheme)(p);
}

}  // namespace slns
