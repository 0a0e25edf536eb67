// Compiled with -mavx2 only (no FMA) so every lane follows the scalar
// operation sequence and the element-wise kernels agree bitwise.

#include <immintrin.h>

#include <cmath>

#include "kernels_impl.hpp"
#include "nhsw/kinetic.hpp"

namespace nhsw::kernels::avx2 {
namespace {

struct HalfFlux4 {
  __m256d mass;
  __m256d momentum;
};

inline __m256d load(std::span<const double> s, std::size_t i) { return _mm256_loadu_pd(&s[i]); }

inline HalfFlux4 positive_part(__m256d H, __m256d u, __m256d six_g, __m256d three_half_g) {
  const __m256d zero = _mm256_setzero_pd();
  const __m256d rho = _mm256_sqrt_pd(_mm256_div_pd(H, six_g));
  const __m256d s = _mm256_sqrt_pd(_mm256_mul_pd(three_half_g, H));
  const __m256d lo = _mm256_max_pd(_mm256_sub_pd(u, s), zero);
  const __m256d hi = _mm256_max_pd(_mm256_add_pd(u, s), zero);
  const __m256d lo2 = _mm256_mul_pd(lo, lo);
  const __m256d hi2 = _mm256_mul_pd(hi, hi);
  const __m256d mass =
      _mm256_mul_pd(_mm256_mul_pd(rho, _mm256_sub_pd(hi2, lo2)), _mm256_set1_pd(0.5));
  const __m256d mom = _mm256_div_pd(
      _mm256_mul_pd(rho, _mm256_sub_pd(_mm256_mul_pd(hi2, hi), _mm256_mul_pd(lo2, lo))),
      _mm256_set1_pd(3.0));
  return {mass, mom};
}

inline HalfFlux4 negative_part(__m256d H, __m256d u, __m256d six_g, __m256d three_half_g) {
  const __m256d zero = _mm256_setzero_pd();
  const __m256d rho = _mm256_sqrt_pd(_mm256_div_pd(H, six_g));
  const __m256d s = _mm256_sqrt_pd(_mm256_mul_pd(three_half_g, H));
  const __m256d lo = _mm256_min_pd(_mm256_sub_pd(u, s), zero);
  const __m256d hi = _mm256_min_pd(_mm256_add_pd(u, s), zero);
  const __m256d lo2 = _mm256_mul_pd(lo, lo);
  const __m256d hi2 = _mm256_mul_pd(hi, hi);
  const __m256d mass =
      _mm256_mul_pd(_mm256_mul_pd(rho, _mm256_sub_pd(hi2, lo2)), _mm256_set1_pd(0.5));
  const __m256d mom = _mm256_div_pd(
      _mm256_mul_pd(rho, _mm256_sub_pd(_mm256_mul_pd(hi2, hi), _mm256_mul_pd(lo2, lo))),
      _mm256_set1_pd(3.0));
  return {mass, mom};
}

}  // namespace

void interface_fluxes(const NodalFields& f, double g, const InterfaceFluxes& out) {
  const std::size_t n_if = f.H.size() - 1;
  const __m256d zero = _mm256_setzero_pd();
  const __m256d six_g = _mm256_set1_pd(6.0 * g);
  const __m256d three_half_g = _mm256_set1_pd(1.5 * g);
  const __m256d half_g = _mm256_set1_pd(0.5 * g);
  std::size_t k = 0;
  for (; k + 4 <= n_if; k += 4) {
    const __m256d Hl = load(f.H, k);
    const __m256d Hr = load(f.H, k + 1);
    const __m256d zl = load(f.zb, k);
    const __m256d zr = load(f.zb, k + 1);
    const __m256d zs = _mm256_max_pd(zl, zr);
    const __m256d rl = _mm256_max_pd(_mm256_sub_pd(_mm256_add_pd(Hl, zl), zs), zero);
    const __m256d rr = _mm256_max_pd(_mm256_sub_pd(_mm256_add_pd(Hr, zr), zs), zero);
    const auto plus = positive_part(rl, load(f.u, k), six_g, three_half_g);
    const auto minus = negative_part(rr, load(f.u, k + 1), six_g, three_half_g);
    const __m256d fm = _mm256_add_pd(plus.mass, minus.mass);
    const __m256d fq = _mm256_add_pd(plus.momentum, minus.momentum);
    const __m256d ql = _mm256_add_pd(
        fq, _mm256_mul_pd(half_g, _mm256_sub_pd(_mm256_mul_pd(Hl, Hl), _mm256_mul_pd(rl, rl))));
    const __m256d qr = _mm256_add_pd(
        fq, _mm256_mul_pd(half_g, _mm256_sub_pd(_mm256_mul_pd(Hr, Hr), _mm256_mul_pd(rr, rr))));
    const __m256d upwind_left = _mm256_cmp_pd(fm, zero, _CMP_GT_OQ);
    const __m256d w = _mm256_blendv_pd(load(f.w, k + 1), load(f.w, k), upwind_left);
    _mm256_storeu_pd(&out.mass[k], fm);
    _mm256_storeu_pd(&out.momentum_left[k], ql);
    _mm256_storeu_pd(&out.momentum_right[k], qr);
    _mm256_storeu_pd(&out.vertical[k], _mm256_mul_pd(fm, w));
  }
  if (k < n_if) {
    // Tail: rerun the scalar reference on the remaining interfaces.
    const NodalFields tail{f.H.subspan(k), f.u.subspan(k), f.w.subspan(k), f.zb.subspan(k)};
    const InterfaceFluxes tail_out{out.mass.subspan(k), out.momentum_left.subspan(k),
                                   out.momentum_right.subspan(k), out.vertical.subspan(k)};
    scalar::interface_fluxes(tail, g, tail_out);
  }
}

double max_wave_speed(std::span<const double> H, std::span<const double> u, double g,
                      double h_eps) {
  const std::size_t n = H.size();
  const __m256d zero = _mm256_setzero_pd();
  const __m256d vg = _mm256_set1_pd(g);
  const __m256d veps = _mm256_set1_pd(h_eps);
  const __m256d sign = _mm256_set1_pd(-0.0);
  __m256d m = zero;
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d h = load(H, i);
    const __m256d wet = _mm256_cmp_pd(h, veps, _CMP_GE_OQ);
    const __m256d au = _mm256_andnot_pd(sign, load(u, i));
    const __m256d s = _mm256_add_pd(au, _mm256_sqrt_pd(_mm256_mul_pd(vg, h)));
    m = _mm256_max_pd(_mm256_and_pd(wet, s), m);
  }
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, m);
  double r = kinetic::vmax(kinetic::vmax(lanes[0], lanes[1]), kinetic::vmax(lanes[2], lanes[3]));
  if (i < n) r = kinetic::vmax(scalar::max_wave_speed(H.subspan(i), u.subspan(i), g, h_eps), r);
  return r;
}

double dot(std::span<const double> a, std::span<const double> b) {
  const std::size_t n = a.size();
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_add_pd(acc0, _mm256_mul_pd(load(a, i), load(b, i)));
    acc1 = _mm256_add_pd(acc1, _mm256_mul_pd(load(a, i + 4), load(b, i + 4)));
  }
  acc0 = _mm256_add_pd(acc0, acc1);
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, acc0);
  double s = (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
  for (; i < n; ++i) s += a[i] * b[i];
  return s;
}

void axpy(double a, std::span<const double> x, std::span<double> y) {
  const std::size_t n = x.size();
  const __m256d va = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d vy = _mm256_loadu_pd(&y[i]);
    _mm256_storeu_pd(&y[i], _mm256_add_pd(vy, _mm256_mul_pd(va, load(x, i))));
  }
  for (; i < n; ++i) y[i] += a * x[i];
}

void xpay(std::span<const double> x, double a, std::span<double> y) {
  const std::size_t n = x.size();
  const __m256d va = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d vy = _mm256_loadu_pd(&y[i]);
    _mm256_storeu_pd(&y[i], _mm256_add_pd(load(x, i), _mm256_mul_pd(va, vy)));
  }
  for (; i < n; ++i) y[i] = x[i] + a * y[i];
}

void band_matvec(const BandView& s, std::span<const double> x, std::span<double> y) {
  const std::size_t n = s.n;
  const std::size_t bw = s.bw;
  if (n < 2 * bw + 4) {
    scalar::band_matvec(s, x, y);
    return;
  }
  for (std::size_t i = 0; i < bw; ++i) scalar::band_row(s, x, y, i);
  std::size_t i = bw;
  const std::size_t stop = n - bw;
  // Same accumulation order as scalar::band_row: diagonal, then for each
  // offset the lower and the upper neighbour.
  for (; i + 4 <= stop; i += 4) {
    __m256d acc = _mm256_mul_pd(load(s.band, i), load(x, i));
    for (std::size_t d = 1; d <= bw; ++d) {
      acc = _mm256_add_pd(acc, _mm256_mul_pd(load(s.band, d * n + i), load(x, i - d)));
      acc = _mm256_add_pd(acc, _mm256_mul_pd(load(s.band, d * n + i + d), load(x, i + d)));
    }
    _mm256_storeu_pd(&y[i], acc);
  }
  for (; i < n; ++i) scalar::band_row(s, x, y, i);
}

}  // namespace nhsw::kernels::avx2
