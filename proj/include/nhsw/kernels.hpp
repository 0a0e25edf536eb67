#pragma once

// Data-parallel inner loops. Each kernel has a scalar reference and, on x86-64,
// an AVX2 variant; the variant is picked once at startup from CPUID and can be
// pinned with the NHSW_SIMD environment variable (scalar | avx2) or set_isa().

#include <cstddef>
#include <span>
#include <string_view>

namespace nhsw::kernels {

enum class Isa { Scalar, Avx2 };

/// Per-interface output of the hydrostatic step. Interface k separates nodes
/// k and k+1; `momentum_left` is the momentum flux seen by node k (including
/// the well-balancing correction) and `momentum_right` the one seen by k+1.
struct InterfaceFluxes {
  std::span<double> mass;
  std::span<double> momentum_left;
  std::span<double> momentum_right;
  std::span<double> vertical;
};

struct NodalFields {
  std::span<const double> H;
  std::span<const double> u;
  std::span<const double> w;
  std::span<const double> zb;
};

/// Symmetric banded matrix, diagonal-major lower storage:
/// band[d * n + i] = S(i, i - d) for d <= bw and i >= d.
struct BandView {
  std::span<const double> band;
  std::size_t n = 0;
  std::size_t bw = 0;
};

struct KernelTable {
  void (*interface_fluxes)(const NodalFields&, double g, const InterfaceFluxes&);
  double (*max_wave_speed)(std::span<const double> H, std::span<const double> u, double g,
                           double h_eps);
  double (*dot)(std::span<const double>, std::span<const double>);
  void (*axpy)(double a, std::span<const double> x, std::span<double> y);
  void (*xpay)(std::span<const double> x, double a, std::span<double> y);
  void (*band_matvec)(const BandView&, std::span<const double> x, std::span<double> y);
};

const KernelTable& scalar_table() noexcept;
/// Null when the library was built without AVX2 support.
const KernelTable* avx2_table() noexcept;

bool avx2_available() noexcept;
Isa active_isa() noexcept;
/// Returns false (and keeps the current ISA) if the request is unsupported.
bool set_isa(Isa isa) noexcept;
std::string_view isa_name(Isa isa) noexcept;

const KernelTable& active() noexcept;

// Convenience forwarders to the active table.
inline void interface_fluxes(const NodalFields& f, double g, const InterfaceFluxes& out) {
  active().interface_fluxes(f, g, out);
}
inline double max_wave_speed(std::span<const double> H, std::span<const double> u, double g,
                             double h_eps) {
  return active().max_wave_speed(H, u, g, h_eps);
}
inline double dot(std::span<const double> a, std::span<const double> b) {
  return active().dot(a, b);
}
/// y += a * x
inline void axpy(double a, std::span<const double> x, std::span<double> y) {
  active().axpy(a, x, y);
}
/// y = x + a * y
inline void xpay(std::span<const double> x, double a, std::span<double> y) {
  active().xpay(x, a, y);
}
inline void band_matvec(const BandView& s, std::span<const double> x, std::span<double> y) {
  active().band_matvec(s, x, y);
}

}  // namespace nhsw::kernels
