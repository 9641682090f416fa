#include <cstdlib>
#include <string>

#include "slns/simd/kernels.hpp"

namespace slns::simd {

#if defined(SLNS_HAVE_AVX2)
const KernelTable& avx2_kernel_table();
#endif

namespace {

bool host_has_avx2() {
#if defined(SLNS_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const KernelTable& select() {
  const char* forced = std::getenv("SLNS_ISA");
  if (forced != nullptr && std::string(forced) == "scalar") return scalar_kernels();
  if (const KernelTable* t = avx2_kernels()) return *t;
  return scalar_kernels();
}

}  // namespace

std::string_view isa_name(Isa isa) {
  switch (isa) {
    case Isa::Scalar:
      return "scalar";
    case Isa::Avx2:
      return "avx2";
  }
  return "unknown";
}

const KernelTable* avx2_kernels() {
#if defined(SLNS_HAVE_AVX2)
  static const bool ok = host_has_avx2();
  return ok ? &avx2_kernel_table() : nullptr;
#else
  return nullptr;
#endif
}

bool isa_available(Isa isa) { return isa == Isa::Scalar || avx2_kernels() != nullptr; }

const KernelTable& kernels_for(Isa isa) {
  if (isa == Isa::Avx2 && avx2_kernels() != nullptr) return *avx2_kernels();
  return scalar_kernels();
}

const KernelTable& kernels() {
  static const KernelTable& active = select();
  return active;
}

}  // namespace slns::simd
