#include <atomic>
#include <cstdlib>
#include <cstring>

#include "kernels_impl.hpp"

namespace nhsw::kernels {
namespace {

constexpr KernelTable kScalar{scalar::interface_fluxes, scalar::max_wave_speed, scalar::dot,
                              scalar::axpy, scalar::xpay, scalar::band_matvec};

#if defined(NHSW_HAVE_AVX2)
constexpr KernelTable kAvx2{avx2::interface_fluxes, avx2::max_wave_speed, avx2::dot,
                            avx2::axpy, avx2::xpay, avx2::band_matvec};
#endif

bool cpu_has_avx2() noexcept {
#if defined(NHSW_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

Isa initial_isa() noexcept {
  const char* env = std::getenv("NHSW_SIMD");
  if (env != nullptr && std::strcmp(env, "scalar") == 0) return Isa::Scalar;
  return cpu_has_avx2() ? Isa::Avx2 : Isa::Scalar;
}

std::atomic<Isa>& current() noexcept {
  static std::atomic<Isa> isa{initial_isa()};
  return isa;
}

}  // namespace

const KernelTable& scalar_table() noexcept { return kScalar; }

const KernelTable* avx2_table() noexcept {
#if defined(NHSW_HAVE_AVX2)
  return cpu_has_avx2() ? &kAvx2 : nullptr;
#else
  return nullptr;
#endif
}

bool avx2_available() noexcept { return avx2_table() != nullptr; }

Isa active_isa() noexcept { return current().load(std::memory_order_relaxed); }

bool set_isa(Isa isa) noexcept {
  if (isa == Isa::Avx2 && !avx2_available()) return false;
  current().store(isa, std::memory_order_relaxed);
  return true;
}

std::string_view isa_name(Isa isa) noexcept { return isa == Isa::Avx2 ? "avx2" : "scalar"; }

const KernelTable& active() noexcept {
#if defined(NHSW_HAVE_AVX2)
  if (active_isa() == Isa::Avx2) return kAvx2;
#endif
  return kScalar;
}

}  // namespace nhsw::kernels
