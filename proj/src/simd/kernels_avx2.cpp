// Compiled with -mavx2 -mfma; only reached after a CPUID check.

#include <immintrin.h>

#include <algorithm>
#include <cmath>

#include "slns/simd/kernels.hpp"

namespace slns::simd {

namespace {

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

inline double hmax(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d m = _mm_max_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_max_sd(m, _mm_unpackhi_pd(m, m)));
}

double dot(const double* a, const double* b, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t k = 0;
  for (; k + 8 <= n; k += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + k), _mm256_loadu_pd(b + k), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + k + 4), _mm256_loadu_pd(b + k + 4), acc1);
  }
  for (; k + 4 <= n; k += 4)
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + k), _mm256_loadu_pd(b + k), acc0);
  double s = hsum(_mm256_add_pd(acc0, acc1));
  for (; k < n; ++k) s += a[k] * b[k];
  return s;
}

void axpy(double a, const double* x, double* y, std::size_t n) {
  const __m256d va = _mm256_set1_pd(a);
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4)
    _mm256_storeu_pd(y + k, _mm256_fmadd_pd(va, _mm256_loadu_pd(x + k), _mm256_loadu_pd(y + k)));
  for (; k < n; ++k) y[k] += a * x[k];
}

void xpay(const double* x, double a, double* y, std::size_t n) {
  const __m256d va = _mm256_set1_pd(a);
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4)
    _mm256_storeu_pd(y + k, _mm256_fmadd_pd(va, _mm256_loadu_pd(y + k), _mm256_loadu_pd(x + k)));
  for (; k < n; ++k) y[k] = x[k] + a * y[k];
}

void lincomb(double a, const double* x, double b, const double* y, double* out, std::size_t n) {
  const __m256d va = _mm256_set1_pd(a);
  const __m256d vb = _mm256_set1_pd(b);
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4) {
    const __m256d t = _mm256_mul_pd(vb, _mm256_loadu_pd(y + k));
    _mm256_storeu_pd(out + k, _mm256_fmadd_pd(va, _mm256_loadu_pd(x + k), t));
  }
  for (; k < n; ++k) out[k] = a * x[k] + b * y[k];
}

void hadamard(const double* x, const double* y, double* out, std::size_t n) {
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4)
    _mm256_storeu_pd(out + k, _mm256_mul_pd(_mm256_loadu_pd(x + k), _mm256_loadu_pd(y + k)));
  for (; k < n; ++k) out[k] = x[k] * y[k];
}

double max_abs_diff(const double* x, const double* y, std::size_t n) {
  const __m256d sign = _mm256_set1_pd(-0.0);
  __m256d m = _mm256_setzero_pd();
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4) {
    const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(x + k), _mm256_loadu_pd(y + k));
    m = _mm256_max_pd(m, _mm256_andnot_pd(sign, d));
  }
  double r = hmax(m);
  for (; k < n; ++k) r = std::max(r, std::abs(x[k] - y[k]));
  return r;
}

double max_norm2(const double* u, const double* v, std::size_t n) {
  __m256d m = _mm256_setzero_pd();
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4) {
    const __m256d a = _mm256_loadu_pd(u + k);
    const __m256d b = _mm256_loadu_pd(v + k);
    m = _mm256_max_pd(m, _mm256_fmadd_pd(a, a, _mm256_mul_pd(b, b)));
  }
  double r = hmax(m);
  for (; k < n; ++k) r = std::max(r, u[k] * u[k] + v[k] * v[k]);
  return r;
}

void stencil5(const Stencil5Row& r) {
  const double* west = r.x - 1;
  const double* east = r.x + 1;
  std::size_t k = 0;
  for (; k + 4 <= r.count; k += 4) {
    __m256d acc = _mm256_mul_pd(_mm256_loadu_pd(r.c + k), _mm256_loadu_pd(r.x + k));
    acc = _mm256_fmadd_pd(_mm256_loadu_pd(r.w + k), _mm256_loadu_pd(west + k), acc);
    acc = _mm256_fmadd_pd(_mm256_loadu_pd(r.e + k), _mm256_loadu_pd(east + k), acc);
    acc = _mm256_fmadd_pd(_mm256_loadu_pd(r.s + k), _mm256_loadu_pd(r.south + k), acc);
    acc = _mm256_fmadd_pd(_mm256_loadu_pd(r.n + k), _mm256_loadu_pd(r.north + k), acc);
    _mm256_storeu_pd(r.out + k, acc);
  }
  for (; k < r.count; ++k) {
    r.out[k] = r.c[k] * r.x[k] + r.w[k] * west[k] + r.e[k] * east[k] +
               r.s[k] * r.south[k] + r.n[k] * r.north[k];
  }
}

}  // namespace

const KernelTable& avx2_kernel_table() {
  static const KernelTable table{Isa::Avx2, dot,          axpy,      xpay,    lincomb,
                                 hadamard,  max_abs_diff, max_norm2, stencil5};
  return table;
}

}  // namespace slns::simd
