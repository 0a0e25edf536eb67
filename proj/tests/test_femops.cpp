#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "doctest.h"
#include "nhsw/femops.hpp"
#include "nhsw/verify.hpp"

using namespace nhsw;

namespace {

constexpr double kGaussX[4] = {-0.8611363115940526, -0.3399810435848563, 0.3399810435848563,
                               0.8611363115940526};
constexpr double kGaussW[4] = {0.3478548451374538, 0.6521451548625461, 0.6521451548625461,
                               0.3478548451374538};

struct Dense {
  std::size_t rows, cols;
  std::vector<double> a;
  Dense(std::size_t r, std::size_t c) : rows(r), cols(c), a(r * c, 0.0) {}
  double& operator()(std::size_t i, std::size_t j) { return a[i * cols + j]; }
};

// Pressure basis written directly from its definition.
struct PressureBasis {
  PairTag tag;
  const Mesh1D& mesh;
  std::size_t size() const {
    return tag == PairTag::P1P0 ? mesh.n_elements() : (mesh.size() - 1) / 2 + 1;
  }
  // Value and derivative of q_l at x inside fine element k.
  std::pair<double, double> eval(std::size_t l, std::size_t k, double x) const {
    if (tag == PairTag::P1P0) return {l == k ? 1.0 : 0.0, 0.0};
    const std::size_t node = 2 * l;
    const double xc = mesh.x(node);
    if (k + 1 <= node && node >= 2 && k >= node - 2) {
      const double xl = mesh.x(node - 2);
      return {(x - xl) / (xc - xl), 1.0 / (xc - xl)};
    }
    if (k >= node && node + 2 < mesh.size() && k < node + 2) {
      const double xr = mesh.x(node + 2);
      return {(xr - x) / (xr - xc), -1.0 / (xr - xc)};
    }
    return {0.0, 0.0};
  }
};

// B, Bt and C by Gauss quadrature of the bilinear forms with H phi_i -> H_i phi_i.
struct QuadratureOperators {
  Dense B, Bt, C;
};

QuadratureOperators quadrature_assembly(PairTag tag, const Mesh1D& mesh,
                                        const std::vector<double>& H,
                                        const std::vector<double>& zb) {
  const std::size_t n = mesh.size();
  const PressureBasis q{tag, mesh};
  const std::size_t m = q.size();
  QuadratureOperators out{Dense(m, 2 * n), Dense(2 * n, m), Dense(2 * n, m)};
  for (std::size_t k = 0; k + 1 < n; ++k) {
    const double xa = mesh.x(k), xb = mesh.x(k + 1), h = xb - xa;
    const double dzeta = ((H[k + 1] + 2 * zb[k + 1]) - (H[k] + 2 * zb[k])) / h;
    for (int gp = 0; gp < 4; ++gp) {
      const double x = xa + 0.5 * h * (kGaussX[gp] + 1.0);
      const double wq = 0.5 * h * kGaussW[gp];
      const double phi[2] = {(xb - x) / h, (x - xa) / h};
      const double dphi[2] = {-1.0 / h, 1.0 / h};
      for (std::size_t l = 0; l < m; ++l) {
        const auto [ql, dql] = q.eval(l, k, x);
        for (int a = 0; a < 2; ++a) {
          const std::size_t i = k + a;
          out.B(l, i) += wq * (H[i] * dphi[a] - phi[a] * dzeta) * ql;
          out.B(l, n + i) += wq * 2.0 * phi[a] * ql;
          out.Bt(i, l) += wq * (H[i] * dql + ql * dzeta) * phi[a];
          out.Bt(n + i, l) += wq * -2.0 * ql * phi[a];
        }
      }
    }
  }
  if (tag == PairTag::P1P0) {
    for (std::size_t i = 1; i + 1 < n; ++i) {
      out.Bt(i, i) += H[i];
      out.Bt(i, i - 1) -= H[i];
    }
  }
  for (std::size_t l = 0; l < m; ++l) {
    out.C(0, l) = -H[0] * q.eval(l, 0, mesh.x(0)).first;
    out.C(n - 1, l) = H[n - 1] * q.eval(l, n - 2, mesh.x(n - 1)).first;
  }
  return out;
}

void check_against(const CsrMatrix& A, Dense& ref, double tol) {
  REQUIRE(A.rows() == ref.rows);
  REQUIRE(A.cols() == ref.cols);
  for (std::size_t i = 0; i < ref.rows; ++i) {
    for (std::size_t j = 0; j < ref.cols; ++j) {
      INFO("entry (" << i << ", " << j << ")");
      CHECK(std::abs(A.at(i, j) - ref(i, j)) <= tol);
    }
  }
}

}  // namespace

TEST_CASE("pointwise operators") {
  auto gs = grad_sw_pointwise(3.0, 0.0, 1.0, 0.0);
  CHECK(gs[0] == 0.0);
  CHECK(gs[1] == -6.0);
  gs = grad_sw_pointwise(0.0, 0.0, 1.0, 0.0);
  CHECK(gs[0] == 0.0);
  gs = grad_sw_pointwise(1.0, 1.0, 1.0, 0.0);
  CHECK(gs[0] == 1.0);
  CHECK(gs[1] == -2.0);
  CHECK(div_sw_pointwise(0.7, 0.0, 0.0, 1.0, 0.0, 0.0) == 0.0);
  CHECK(div_sw_pointwise(0.0, 0.25, 0.0, 1.0, 0.0, 0.0) == 0.5);
  CHECK(div_sw_pointwise(1.0, 0.0, 1.0, 1.0, 0.0, 0.0) == 1.0);
}

TEST_CASE("element pairs") {
  const Mesh1D mesh = Mesh1D::uniform(0.0, 1.0, 9);
  CHECK(ElementPair::make(PairTag::P1P0, mesh).n_pressure == 8);
  CHECK(ElementPair::make(PairTag::P1isoP2P1, mesh).n_pressure == 5);
  CHECK_THROWS_AS(ElementPair::make(PairTag::P1isoP2P1, Mesh1D::uniform(0.0, 1.0, 8)), Error);
  CHECK(pair_from_string("P1isoP2P1") == PairTag::P1isoP2P1);
  CHECK(pair_from_string("p1p0") == PairTag::P1P0);
  CHECK(to_string(PairTag::P1P0) == "P1P0");
}

TEST_CASE("constant horizontal velocity is divergence free on flat data") {
  const Mesh1D mesh = Mesh1D::uniform(0.0, 4.0, 9);
  const std::vector<double> H(9, 1.0), zb(9, 0.0);
  const auto ops = assemble(ElementPair::make(PairTag::P1P0, mesh), mesh, H, zb);
  std::vector<double> U(18, 0.0), r(8);
  std::fill(U.begin(), U.begin() + 9, 0.6);
  ops.B.multiply(U, r);
  for (double v : r) CHECK(std::abs(v) < 1e-15);
}

TEST_CASE("P1isoP2P1 on five uniform nodes matches quadrature") {
  const Mesh1D mesh = Mesh1D::uniform(0.0, 2.0, 5);
  const std::vector<double> H(5, 1.0), zb(5, 0.0);
  auto ref = quadrature_assembly(PairTag::P1isoP2P1, mesh, H, zb);
  const auto ops = assemble(ElementPair::make(PairTag::P1isoP2P1, mesh), mesh, H, zb);
  check_against(ops.B, ref.B, 1e-12);
}

TEST_CASE("both pairs match quadrature on random small meshes") {
  std::mt19937_64 rng(77);
  for (PairTag tag : {PairTag::P1P0, PairTag::P1isoP2P1}) {
    for (int trial = 0; trial < 40; ++trial) {
      std::size_t n = 3 + trial % 7;
      if (tag == PairTag::P1isoP2P1 && n % 2 == 0) ++n;
      const auto f = verify::random_field(rng, n);
      auto ref = quadrature_assembly(tag, f.mesh, f.H, f.zb);
      const auto ops = assemble(ElementPair::make(tag, f.mesh), f.mesh, f.H, f.zb);
      check_against(ops.B, ref.B, 1e-12);
      check_against(ops.Bt, ref.Bt, 1e-12);
      check_against(ops.C, ref.C, 1e-12);
    }
  }
}

TEST_CASE("gradient minus boundary term is minus the divergence transpose") {
  std::mt19937_64 rng(13);
  for (PairTag tag : {PairTag::P1P0, PairTag::P1isoP2P1}) {
    for (int trial = 0; trial < 50; ++trial) {
      std::size_t n = 3 + static_cast<std::size_t>(verify::uniform(rng, 0, 40));
      if (tag == PairTag::P1isoP2P1 && n % 2 == 0) ++n;
      const auto f = verify::random_field(rng, n, 0.2);
      const auto ops = assemble(ElementPair::make(tag, f.mesh), f.mesh, f.H, f.zb);
      double scale = 0.0;
      for (double v : ops.B.values()) scale = std::max(scale, std::abs(v));
      for (std::size_t i = 0; i < ops.Bt.rows(); ++i) {
        for (std::size_t l = 0; l < ops.B.rows(); ++l) {
          CHECK(std::abs(ops.Bt.at(i, l) - ops.C.at(i, l) + ops.B.at(l, i)) <= 1e-12 * scale);
        }
      }
    }
  }
}

TEST_CASE("P1P0 reproduces the staggered difference stencils") {
  std::mt19937_64 rng(29);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = 3 + static_cast<std::size_t>(verify::uniform(rng, 0, 20));
    const auto f = verify::random_field(rng, n);
    const auto st = verify::staggered_stencils(f.mesh, f.H, f.zb);
    const auto ops = assemble(ElementPair::make(PairTag::P1P0, f.mesh), f.mesh, f.H, f.zb);
    const auto div = CsrMatrix::from_triplets(n - 1, 2 * n, st.div);
    const auto grad = CsrMatrix::from_triplets(2 * n, n - 1, st.grad);
    const auto bnd = CsrMatrix::from_triplets(2 * n, n - 1, st.boundary);
    for (std::size_t i = 0; i < 2 * n; ++i) {
      for (std::size_t l = 0; l + 1 < n; ++l) {
        CHECK(std::abs(ops.B.at(l, i) - div.at(l, i)) <= 1e-13);
        CHECK(std::abs(ops.Bt.at(i, l) - grad.at(i, l)) <= 1e-13);
        CHECK(std::abs(ops.C.at(i, l) - bnd.at(i, l)) <= 1e-13);
      }
    }
  }
}

TEST_CASE("lumped mass") {
  const Mesh1D mesh = Mesh1D::uniform(0.0, 1.0, 11);
  const std::vector<double> one(11, 1.0);
  const auto A = lump_mass(mesh, one, 1e-8);
  CHECK(A[5] == doctest::Approx(0.1));
  CHECK(A[0] == doctest::Approx(0.05));

  // H linear 0 -> 1 on one element: row sums are int H phi_i = h/6 and h/3.
  const Mesh1D el = Mesh1D::uniform(0.0, 0.3, 2);
  const auto B = lump_mass(el, std::vector<double>{0.0, 1.0}, 1e-8);
  double oracle0 = 0.0, oracle1 = 0.0;
  for (int gp = 0; gp < 4; ++gp) {
    const double s = 0.5 * (kGaussX[gp] + 1.0);
    oracle0 += 0.15 * kGaussW[gp] * s * ((1 - s) * (1 - s) + (1 - s) * s);
    oracle1 += 0.15 * kGaussW[gp] * s * (s * s + (1 - s) * s);
  }
  CHECK(B[0] == doctest::Approx(oracle0).epsilon(1e-14));
  CHECK(B[1] == doctest::Approx(oracle1).epsilon(1e-14));
  CHECK(B[1] == doctest::Approx(0.1).epsilon(1e-14));

  const auto dry = lump_mass(el, std::vector<double>{0.0, 0.0}, 1e-8);
  CHECK(dry[0] == doctest::Approx(1e-8 * 0.15));
}

TEST_CASE("lumped mass scales with depth") {
  std::mt19937_64 rng(41);
  const auto f = verify::random_field(rng, 12);
  auto ops = assemble(ElementPair::make(PairTag::P1P0, f.mesh), f.mesh, f.H, f.zb);
  std::vector<double> H3 = f.H;
  for (double& h : H3) h *= 3.0;
  auto ops3 = assemble(ElementPair::make(PairTag::P1P0, f.mesh), f.mesh, H3, f.zb);
  REQUIRE(ops.A.size() == 24);
  for (std::size_t i = 0; i < ops.A.size(); ++i) {
    CHECK(ops3.A[i] == doctest::Approx(3.0 * ops.A[i]).epsilon(1e-14));
  }
  for (std::size_t i = 0; i < 12; ++i) CHECK(ops.A[i] == ops.A[12 + i]);
}

TEST_CASE("assembly errors and triplet dump") {
  const Mesh1D mesh = Mesh1D::uniform(0.0, 1.0, 5);
  const std::vector<double> zb(5, 0.0);
  CHECK_THROWS_AS(assemble(ElementPair::make(PairTag::P1P0, mesh), mesh,
                           std::vector<double>{1, 1, -1, 1, 1}, zb),
                  Error);
  const auto ops = assemble(ElementPair::make(PairTag::P1P0, mesh), mesh,
                            std::vector<double>(5, 1.0), zb);
  std::ostringstream os;
  ops.B.write_triplets(os);
  std::istringstream is(os.str());
  std::vector<Triplet> t;
  std::size_t r, c;
  double v;
  while (is >> r >> c >> v) t.push_back({r, c, v});
  const auto back = CsrMatrix::from_triplets(ops.B.rows(), ops.B.cols(), t);
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = 0; j < 10; ++j) CHECK(back.at(i, j) == ops.B.at(i, j));
  }
}
