#pragma once

// Closed-form half-space moments of the compact kinetic equilibrium
//
//   M(xi) = (H / c) chi((xi - u) / c),  c = sqrt(gH/2),
//   chi(w) = 1/(2 sqrt 3) on |w| <= sqrt 3,
//
// i.e. a constant density rho = sqrt(H / (6g)) on [u - s, u + s] with
// s = sqrt(3gH/2). These inline helpers are the scalar reference; the SIMD
// kernels reproduce the same operation sequence so results match bitwise.

#include <cmath>

namespace nhsw::kinetic {

// (a > b) ? a : b and (a < b) ? a : b, the exact semantics of maxpd/minpd.
inline double vmax(double a, double b) noexcept { return a > b ? a : b; }
inline double vmin(double a, double b) noexcept { return a < b ? a : b; }

struct HalfFlux {
  double mass;
  double momentum;
};

inline double density(double H, double g) noexcept { return std::sqrt(H / (6.0 * g)); }
inline double half_width(double H, double g) noexcept { return std::sqrt(1.5 * g * H); }

/// Moments of M over xi >= 0.
inline HalfFlux positive_part(double H, double u, double g) noexcept {
  const double rho = density(H, g);
  const double s = half_width(H, g);
  const double lo = vmax(u - s, 0.0);
  const double hi = vmax(u + s, 0.0);
  const double lo2 = lo * lo;
  const double hi2 = hi * hi;
  return {rho * (hi2 - lo2) * 0.5, rho * (hi2 * hi - lo2 * lo) / 3.0};
}

/// Moments of M over xi <= 0.
inline HalfFlux negative_part(double H, double u, double g) noexcept {
  const double rho = density(H, g);
  const double s = half_width(H, g);
  const double lo = vmin(u - s, 0.0);
  const double hi = vmin(u + s, 0.0);
  const double lo2 = lo * lo;
  const double hi2 = hi * hi;
  return {rho * (hi2 - lo2) * 0.5, rho * (hi2 * hi - lo2 * lo) / 3.0};
}

/// Hydrostatic reconstruction of the two interface depths.
struct Reconstructed {
  double left;
  double right;
};

inline Reconstructed reconstruct(double Hl, double Hr, double zl, double zr) noexcept {
  const double zs = vmax(zl, zr);
  return {vmax(Hl + zl - zs, 0.0), vmax(Hr + zr - zs, 0.0)};
}

}  // namespace nhsw::kinetic
