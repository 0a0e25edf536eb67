#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "nhsw/kernels.hpp"

using namespace nhsw;
using namespace nhsw::kernels;

namespace {

std::vector<double> random_vec(std::mt19937_64& rng, std::size_t n, double lo, double hi) {
  std::uniform_real_distribution<double> d(lo, hi);
  std::vector<double> v(n);
  for (auto& x : v) x = d(rng);
  return v;
}

double rel(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

const KernelTable* simd() { return avx2_table(); }

}  // namespace

TEST_CASE("isa selection") {
  const Isa before = active_isa();
  CHECK(set_isa(Isa::Scalar));
  CHECK(active_isa() == Isa::Scalar);
  CHECK(isa_name(Isa::Scalar) == "scalar");
  CHECK(set_isa(Isa::Avx2) == avx2_available());
  set_isa(before);
}

TEST_CASE("band_matvec scalar reference against dense product") {
  std::mt19937_64 rng(3);
  for (std::size_t bw : {0u, 1u, 2u}) {
    const std::size_t n = 9;
    std::vector<double> band((bw + 1) * n, 0.0);
    std::vector<double> dense(n * n, 0.0);
    for (std::size_t d = 0; d <= bw; ++d) {
      for (std::size_t i = d; i < n; ++i) {
        const double v = random_vec(rng, 1, -1, 1)[0];
        band[d * n + i] = v;
        dense[i * n + i - d] = v;
        dense[(i - d) * n + i] = v;
      }
    }
    const auto x = random_vec(rng, n, -1, 1);
    std::vector<double> y(n);
    scalar_table().band_matvec({band, n, bw}, x, y);
    for (std::size_t i = 0; i < n; ++i) {
      double s = 0.0;
      for (std::size_t j = 0; j < n; ++j) s += dense[i * n + j] * x[j];
      CHECK(y[i] == doctest::Approx(s).epsilon(1e-14));
    }
  }
}

TEST_CASE("avx2 kernels match the scalar reference") {
  if (simd() == nullptr) {
    MESSAGE("built without AVX2");
    return;
  }
  const KernelTable& s = scalar_table();
  const KernelTable& v = *simd();
  std::mt19937_64 rng(11);
  // Odd and small lengths exercise the remainder loops.
  for (std::size_t n : {1u, 2u, 3u, 4u, 5u, 7u, 8u, 13u, 64u, 1001u}) {
    const auto a = random_vec(rng, n, -2, 2);
    const auto b = random_vec(rng, n, -2, 2);
    CHECK(rel(v.dot(a, b), s.dot(a, b)) < 1e-13);

    auto ys = b, yv = b;
    s.axpy(0.37, a, ys);
    v.axpy(0.37, a, yv);
    for (std::size_t i = 0; i < n; ++i) CHECK(rel(yv[i], ys[i]) < 1e-15);
    ys = b;
    yv = b;
    s.xpay(a, -1.3, ys);
    v.xpay(a, -1.3, yv);
    for (std::size_t i = 0; i < n; ++i) CHECK(rel(yv[i], ys[i]) < 1e-15);

    for (std::size_t bw : {1u, 2u}) {
      const auto band = random_vec(rng, (bw + 1) * n, -1, 1);
      std::vector<double> outs(n), outv(n);
      s.band_matvec({band, n, bw}, a, outs);
      v.band_matvec({band, n, bw}, a, outv);
      for (std::size_t i = 0; i < n; ++i) CHECK(rel(outv[i], outs[i]) < 1e-14);
    }

    auto H = random_vec(rng, n, 0.0, 2.0);
    for (std::size_t i = 0; i < n; i += 3) H[i] = 0.0;
    const auto u = random_vec(rng, n, -3, 3);
    CHECK(rel(v.max_wave_speed(H, u, 9.81, 1e-8), s.max_wave_speed(H, u, 9.81, 1e-8)) < 1e-15);

    if (n < 2) continue;
    const auto w = random_vec(rng, n, -1, 1);
    const auto zb = random_vec(rng, n, -0.5, 0.5);
    const std::size_t m = n - 1;
    std::vector<double> fs[4], fv[4];
    for (int k = 0; k < 4; ++k) {
      fs[k].assign(m, 0.0);
      fv[k].assign(m, 0.0);
    }
    const NodalFields nf{H, u, w, zb};
    s.interface_fluxes(nf, 9.81, {fs[0], fs[1], fs[2], fs[3]});
    v.interface_fluxes(nf, 9.81, {fv[0], fv[1], fv[2], fv[3]});
    for (int k = 0; k < 4; ++k) {
      for (std::size_t i = 0; i < m; ++i) CHECK(rel(fv[k][i], fs[k][i]) < 1e-14);
    }
  }
}
