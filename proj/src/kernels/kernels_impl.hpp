#pragma once

#include "nhsw/kernels.hpp"

namespace nhsw::kernels {

namespace scalar {
void interface_fluxes(const NodalFields& f, double g, const InterfaceFluxes& out);
double max_wave_speed(std::span<const double> H, std::span<const double> u, double g,
                      double h_eps);
double dot(std::span<const double> a, std::span<const double> b);
void axpy(double a, std::span<const double> x, std::span<double> y);
void xpay(std::span<const double> x, double a, std::span<double> y);
void band_matvec(const BandView& s, std::span<const double> x, std::span<double> y);
// One output row, used by the vector variants for the band edges.
void band_row(const BandView& s, std::span<const double> x, std::span<double> y,
              std::size_t i);
}  // namespace scalar

#if defined(NHSW_HAVE_AVX2)
namespace avx2 {
void interface_fluxes(const NodalFields& f, double g, const InterfaceFluxes& out);
double max_wave_speed(std::span<const double> H, std::span<const double> u, double g,
                      double h_eps);
double dot(std::span<const double> a, std::span<const double> b);
void axpy(double a, std::span<const double> x, std::span<double> y);
void xpay(std::span<const double> x, double a, std::span<double> y);
void band_matvec(const BandView& s, std::span<const double> x, std::span<double> y);
}  // namespace avx2
#endif

}  // namespace nhsw::kernels
