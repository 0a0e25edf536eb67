#include "kernels_impl.hpp"

#include <cmath>

#include "nhsw/kinetic.hpp"

namespace nhsw::kernels::scalar {

void interface_fluxes(const NodalFields& f, double g, const InterfaceFluxes& out) {
  const std::size_t n_if = f.H.size() - 1;
  const double half_g = 0.5 * g;
  for (std::size_t k = 0; k < n_if; ++k) {
    const double Hl = f.H[k];
    const double Hr = f.H[k + 1];
    const auto rec = kinetic::reconstruct(Hl, Hr, f.zb[k], f.zb[k + 1]);
    const auto plus = kinetic::positive_part(rec.left, f.u[k], g);
    const auto minus = kinetic::negative_part(rec.right, f.u[k + 1], g);
    const double fm = plus.mass + minus.mass;
    const double fq = plus.momentum + minus.momentum;
    out.mass[k] = fm;
    out.momentum_left[k] = fq + half_g * (Hl * Hl - rec.left * rec.left);
    out.momentum_right[k] = fq + half_g * (Hr * Hr - rec.right * rec.right);
    out.vertical[k] = fm * (fm > 0.0 ? f.w[k] : f.w[k + 1]);
  }
}

double max_wave_speed(std::span<const double> H, std::span<const double> u, double g,
                      double h_eps) {
  double m = 0.0;
  for (std::size_t i = 0; i < H.size(); ++i) {
    if (H[i] >= h_eps) {
      const double s = std::fabs(u[i]) + std::sqrt(g * H[i]);
      m = kinetic::vmax(s, m);
    }
  }
  return m;
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

void axpy(double a, std::span<const double> x, std::span<double> y) {
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += a * x[i];
}

void xpay(std::span<const double> x, double a, std::span<double> y) {
  for (std::size_t i = 0; i < x.size(); ++i) y[i] = x[i] + a * y[i];
}

void band_row(const BandView& s, std::span<const double> x, std::span<double> y,
              std::size_t i) {
  const std::size_t n = s.n;
  double acc = s.band[i] * x[i];
  for (std::size_t d = 1; d <= s.bw; ++d) {
    if (i >= d) acc += s.band[d * n + i] * x[i - d];
    if (i + d < n) acc += s.band[d * n + i + d] * x[i + d];
  }
  y[i] = acc;
}

void band_matvec(const BandView& s, std::span<const double> x, std::span<double> y) {
  for (std::size_t i = 0; i < s.n; ++i) band_row(s, x, y, i);
}

}  // namespace nhsw::kernels::scalar
