#include "nhsw/femops.hpp"

#include <algorithm>
#include <cstdio>
#include <ostream>

namespace nhsw {

std::string to_string(PairTag tag) { return tag == PairTag::P1P0 ? "P1P0" : "P1isoP2P1"; }

PairTag pair_from_string(const std::string& s) {
  if (s == "P1P0" || s == "p1p0") return PairTag::P1P0;
  if (s == "P1isoP2P1" || s == "p1isop2p1") return PairTag::P1isoP2P1;
  throw Error(ErrorCode::InvalidArgument, "unknown element pair '" + s + "'");
}

ElementPair ElementPair::make(PairTag tag, const Mesh1D& mesh) {
  ElementPair p;
  p.tag = tag;
  p.n_velocity_nodes = mesh.size();
  if (tag == PairTag::P1P0) {
    p.n_pressure = mesh.n_elements();
  } else {
    if (!mesh.has_coarse_mesh() || mesh.size() < 3) {
      throw Error(ErrorCode::InvalidArgument,
                  "P1isoP2P1 needs an odd number of nodes (N >= 3), got N = " +
                      std::to_string(mesh.size()));
    }
    p.n_pressure = (mesh.size() - 1) / 2 + 1;
  }
  return p;
}

std::array<std::size_t, 2> ElementPair::support(std::size_t l) const {
  const std::size_t n_el = n_velocity_nodes - 1;
  if (tag == PairTag::P1P0) return {l, l + 1};
  const std::size_t first = l == 0 ? 0 : 2 * l - 2;
  const std::size_t last = std::min(n_el, 2 * l + 2);
  return {first, last};
}

ElementPair::LocalBasis ElementPair::local_basis(const Mesh1D& mesh, std::size_t k) const {
  LocalBasis b;
  if (tag == PairTag::P1P0) {
    b.count = 1;
    b.dof[0] = k;
    b.left[0] = 1.0;
    b.right[0] = 1.0;
    return b;
  }
  const std::size_t c = k / 2;
  const double x0 = mesh.x(2 * c);
  const double x1 = mesh.x(2 * c + 1);
  const double x2 = mesh.x(2 * c + 2);
  // Coarse hat of node 2c evaluated at the fine midpoint node 2c+1.
  const double theta = (x2 - x1) / (x2 - x0);
  b.count = 2;
  b.dof[0] = c;
  b.dof[1] = c + 1;
  if (k % 2 == 0) {
    b.left[0] = 1.0;
    b.right[0] = theta;
    b.left[1] = 0.0;
    b.right[1] = 1.0 - theta;
  } else {
    b.left[0] = theta;
    b.right[0] = 0.0;
    b.left[1] = 1.0 - theta;
    b.right[1] = 1.0;
  }
  return b;
}

std::array<double, 2> grad_sw_pointwise(double f, double df_dx, double H, double dzeta_dx) {
  return {H * df_dx + f * dzeta_dx, -2.0 * f};
}

double div_sw_pointwise(double v1, double v2, double dv1_dx, double H, double dH_dx,
                        double dzeta_dx) {
  return (H * dv1_dx + v1 * dH_dx) - v1 * dzeta_dx + 2.0 * v2;
}

std::vector<double> lump_mass(const Mesh1D& mesh, std::span<const double> H, double h_eps) {
  const std::size_t n = mesh.size();
  if (H.size() != n) throw Error(ErrorCode::SizeMismatch, "lump_mass: depth size");
  std::vector<double> a(n, 0.0);
  for (std::size_t k = 0; k + 1 < n; ++k) {
    const double h = mesh.element_width(k);
    a[k] += h * (2.0 * H[k] + H[k + 1]) / 6.0;
    a[k + 1] += h * (H[k] + 2.0 * H[k + 1]) / 6.0;
  }
  for (std::size_t i = 0; i < n; ++i) a[i] = std::max(a[i], h_eps * mesh.dual_width(i));
  return a;
}

OperatorSet assemble(const ElementPair& pair, const Mesh1D& mesh, std::span<const double> H,
                     std::span<const double> zb, double h_eps) {
  const std::size_t n = mesh.size();
  if (H.size() != n || zb.size() != n || pair.n_velocity_nodes != n) {
    throw Error(ErrorCode::SizeMismatch, "assemble: field sizes differ from the mesh");
  }
  if (pair.tag == PairTag::P1isoP2P1 && !mesh.has_coarse_mesh()) {
    throw Error(ErrorCode::InvalidArgument, "assemble: P1isoP2P1 needs an odd number of nodes");
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (H[i] < 0.0) {
      throw Error(ErrorCode::NegativeDepth, "assemble: negative depth at node " +
                                                std::to_string(i));
    }
  }

  OperatorSet ops;
  ops.pair = pair;
  ops.H.assign(H.begin(), H.end());
  ops.zeta.resize(n);
  for (std::size_t i = 0; i < n; ++i) ops.zeta[i] = H[i] + 2.0 * zb[i];
  ops.chi.resize(n - 1);
  for (std::size_t k = 0; k + 1 < n; ++k) {
    ops.chi[k] = (ops.zeta[k + 1] - ops.zeta[k]) / mesh.element_width(k);
  }
  ops.dry_node.resize(n);
  for (std::size_t i = 0; i < n; ++i) ops.dry_node[i] = H[i] < h_eps;
  ops.dry_element.resize(n - 1);
  for (std::size_t k = 0; k + 1 < n; ++k) {
    ops.dry_element[k] = ops.dry_node[k] && ops.dry_node[k + 1];
  }

  const auto a = lump_mass(mesh, H, h_eps);
  ops.A.resize(2 * n);
  std::copy(a.begin(), a.end(), ops.A.begin());
  std::copy(a.begin(), a.end(), ops.A.begin() + static_cast<std::ptrdiff_t>(n));

  const std::size_t m = pair.n_pressure;
  std::vector<Triplet> tb, tg, tc;
  tb.reserve(8 * (n - 1));
  tg.reserve(8 * (n - 1) + 2 * n);

  for (std::size_t k = 0; k + 1 < n; ++k) {
    const double h = mesh.element_width(k);
    const double chi = ops.chi[k];
    const auto lb = pair.local_basis(mesh, k);
    for (std::size_t r = 0; r < lb.count; ++r) {
      const std::size_t l = lb.dof[r];
      const double qa = lb.left[r];
      const double qb = lb.right[r];
      const double mass_a = h * (2.0 * qa + qb) / 6.0;  // int phi_k q
      const double mass_b = h * (qa + 2.0 * qb) / 6.0;  // int phi_{k+1} q
      const double dphi_q = 0.5 * (qa + qb);            // |int phi' q|

      tb.push_back({l, k, -H[k] * dphi_q - chi * mass_a});
      tb.push_back({l, k + 1, H[k + 1] * dphi_q - chi * mass_b});
      tb.push_back({l, n + k, 2.0 * mass_a});
      tb.push_back({l, n + k + 1, 2.0 * mass_b});

      const double slope_term = 0.5 * (qb - qa);  // int q' phi = (qb - qa)/2
      tg.push_back({k, l, H[k] * slope_term + chi * mass_a});
      tg.push_back({k + 1, l, H[k + 1] * slope_term + chi * mass_b});
      tg.push_back({n + k, l, -2.0 * mass_a});
      tg.push_back({n + k + 1, l, -2.0 * mass_b});
    }
  }
  // Jumps of the pressure basis at interior nodes (P0 only; P1 is continuous).
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const auto left_el = pair.local_basis(mesh, i - 1);
    const auto right_el = pair.local_basis(mesh, i);
    for (std::size_t r = 0; r < right_el.count; ++r) {
      if (right_el.left[r] != 0.0) tg.push_back({i, right_el.dof[r], H[i] * right_el.left[r]});
    }
    for (std::size_t r = 0; r < left_el.count; ++r) {
      if (left_el.right[r] != 0.0) tg.push_back({i, left_el.dof[r], -H[i] * left_el.right[r]});
    }
  }

  const auto first = pair.local_basis(mesh, 0);
  for (std::size_t r = 0; r < first.count; ++r) {
    if (first.left[r] != 0.0) tc.push_back({0, first.dof[r], -H[0] * first.left[r]});
  }
  const auto last = pair.local_basis(mesh, n - 2);
  for (std::size_t r = 0; r < last.count; ++r) {
    if (last.right[r] != 0.0) tc.push_back({n - 1, last.dof[r], H[n - 1] * last.right[r]});
  }

  ops.B = CsrMatrix::from_triplets(m, 2 * n, std::move(tb));
  ops.Bt = CsrMatrix::from_triplets(2 * n, m, std::move(tg));
  ops.C = CsrMatrix::from_triplets(2 * n, m, std::move(tc));
  return ops;
}

void OperatorSet::write_triplets(std::ostream& os) const {
  os << "# A " << A.size() << "\n";
  for (std::size_t i = 0; i < A.size(); ++i) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%zu %zu %.17g\n", i, i, A[i]);
    os << buf;
  }
  os << "# B " << B.rows() << " " << B.cols() << "\n";
  B.write_triplets(os);
  os << "# Bt " << Bt.rows() << " " << Bt.cols() << "\n";
  Bt.write_triplets(os);
  os << "# C " << C.rows() << " " << C.cols() << "\n";
  C.write_triplets(os);
}

}  // namespace nhsw
