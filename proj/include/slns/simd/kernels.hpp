#pragma once

#include <cstddef>
#include <string_view>

// Data-parallel inner loops of the solver. Every kernel has a scalar
// reference implementation and, where the host supports it, an AVX2+FMA
// variant. The active table is chosen once at startup from CPUID; set
// SLNS_ISA=scalar in the environment to force the reference kernels.

namespace slns::simd {

enum class Isa { Scalar, Avx2 };

std::string_view isa_name(Isa isa);

/// Coefficient and input pointers for one row of a five-point operator:
///   out[k] = c[k]*x[k] + w[k]*x[k-1] + e[k]*x[k+1] + s[k]*south[k] + n[k]*north[k]
/// for k in [0, count). x[-1] and x[count] must be readable.
struct Stencil5Row {
  const double* c;
  const double* w;
  const double* e;
  const double* s;
  const double* n;
  const double* x;
  const double* south;
  const double* north;
  double* out;
  std::size_t count;
};

struct KernelTable {
  Isa isa;
  double (*dot)(const double* a, const double* b, std::size_t n);
  /// y += a * x
  void (*axpy)(double a, const double* x, double* y, std::size_t n);
  /// y = x + a * y
  void (*xpay)(const double* x, double a, double* y, std::size_t n);
  /// out = a * x + b * y
  void (*lincomb)(double a, const double* x, double b, const double* y, double* out, std::size_t n);
  /// out = x * y (elementwise)
  void (*hadamard)(const double* x, const double* y, double* out, std::size_t n);
  /// max |x - y|
  double (*max_abs_diff)(const double* x, const double* y, std::size_t n);
  /// max (u^2 + v^2)
  double (*max_norm2)(const double* u, const double* v, std::size_t n);
  void (*stencil5)(const Stencil5Row& row);
};

const KernelTable& scalar_kernels();
/// nullptr when the build or the host lacks AVX2+FMA.
const KernelTable* avx2_kernels();

bool isa_available(Isa isa);
const KernelTable& kernels_for(Isa isa);
/// Best available table, honoring SLNS_ISA.
const KernelTable& kernels();

}  // namespace slns::simd
