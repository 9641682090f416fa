#include <algorithm>
#include <cmath>

#include "slns/simd/kernels.hpp"

namespace slns::simd {

namespace {

double dot(const double* a, const double* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t k = 0; k < n; ++k) s += a[k] * b[k];
  return s;
}

void axpy(double a, const double* x, double* y, std::size_t n) {
  for (std::size_t k = 0; k < n; ++k) y[k] += a * x[k];
}

void xpay(const double* x, double a, double* y, std::size_t n) {
  for (std::size_t k = 0; k < n; ++k) y[k] = x[k] + a * y[k];
}

void lincomb(double a, const double* x, double b, const double* y, double* out, std::size_t n) {
  for (std::size_t k = 0; k < n; ++k) out[k] = a * x[k] + b * y[k];
}

void hadamard(const double* x, const double* y, double* out, std::size_t n) {
  for (std::size_t k = 0; k < n; ++k) out[k] = x[k] * y[k];
}

double max_abs_diff(const double* x, const double* y, std::size_t n) {
  double m = 0.0;
  for (std::size_t k = 0; k < n; ++k) m = std::max(m, std::abs(x[k] - y[k]));
  return m;
}

double max_norm2(const double* u, const double* v, std::size_t n) {
  double m = 0.0;
  for (std::size_t k = 0; k < n; ++k) m = std::max(m, u[k] * u[k] + v[k] * v[k]);
  return m;
}

void stencil5(const Stencil5Row& r) {
  const double* west = r.x - 1;
  const double* east = r.x + 1;
  for (std::size_t k = 0; k < r.count; ++k) {
    r.out[k] = r.c[k] * r.x[k] + r.w[k] * west[k] + r.e[k] * east[k] +
               r.s[k] * r.south[k] + r.n[k] * r.north[k];
  }
}

}  // namespace

const KernelTable& scalar_kernels() {
  static const KernelTable table{Isa::Scalar, dot,          axpy,      xpay,    lincomb,
                                 hadamard,    max_abs_diff, max_norm2, stencil5};
  return table;
}

}  // namespace slns::simd
