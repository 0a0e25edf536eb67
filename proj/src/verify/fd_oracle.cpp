#include "nhsw/verify.hpp"

namespace nhsw::verify {

StaggeredStencils staggered_stencils(const Mesh1D& mesh, std::span<const double> H,
                                     std::span<const double> zb) {
  const std::size_t n = mesh.size();
  if (H.size() != n || zb.size() != n) {
    throw Error(ErrorCode::SizeMismatch, "staggered_stencils: field sizes");
  }
  std::vector<double> dz(n - 1), h(n - 1);
  for (std::size_t j = 0; j + 1 < n; ++j) {
    h[j] = mesh.x(j + 1) - mesh.x(j);
    dz[j] = (H[j + 1] + 2.0 * zb[j + 1]) - (H[j] + 2.0 * zb[j]);
  }

  StaggeredStencils st;
  for (std::size_t j = 0; j + 1 < n; ++j) {
    st.div.push_back({j, j, -H[j] - 0.5 * dz[j]});
    st.div.push_back({j, j + 1, H[j + 1] - 0.5 * dz[j]});
    st.div.push_back({j, n + j, h[j]});
    st.div.push_back({j, n + j + 1, h[j]});
  }

  for (std::size_t i = 0; i < n; ++i) {
    const bool has_left = i > 0;
    const bool has_right = i + 1 < n;
    const bool interior = has_left && has_right;
    if (has_left) {
      const std::size_t c = i - 1;
      st.grad.push_back({i, c, (interior ? -H[i] : 0.0) + 0.5 * dz[c]});
      st.grad.push_back({n + i, c, -h[c]});
    }
    if (has_right) {
      const std::size_t c = i;
      st.grad.push_back({i, c, (interior ? H[i] : 0.0) + 0.5 * dz[c]});
      st.grad.push_back({n + i, c, -h[c]});
    }
  }
  st.boundary.push_back({0, 0, -H[0]});
  st.boundary.push_back({n - 1, n - 2, H[n - 1]});
  return st;
}

double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

RandomField random_field(std::mt19937_64& rng, std::size_t n, double dry_fraction) {
  std::vector<double> x(n);
  x[0] = 0.0;
  for (std::size_t i = 1; i < n; ++i) x[i] = x[i - 1] + uniform(rng, 0.5, 1.5);
  RandomField f{Mesh1D(std::move(x)), std::vector<double>(n), std::vector<double>(n)};
  for (std::size_t i = 0; i < n; ++i) {
    f.zb[i] = uniform(rng, -0.5, 0.5);
    f.H[i] = uniform(rng, 0.0, 1.0) < dry_fraction ? 0.0 : uniform(rng, 0.05, 2.0);
  }
  return f;
}

}  // namespace nhsw::verify
