#pragma once

#include <array>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "nhsw/core.hpp"
#include "nhsw/sparse.hpp"

namespace nhsw {

enum class PairTag { P1P0, P1isoP2P1 };

std::string to_string(PairTag tag);
PairTag pair_from_string(const std::string& s);

/// Velocity/pressure element pair on a given mesh.
///
/// Velocity dofs are ordered (u_0..u_{N-1}, w_0..w_{N-1}). Pressure dofs are
/// one per element for P1/P0 and one per even-indexed node for P1-iso-P2/P1.
struct ElementPair {
  PairTag tag = PairTag::P1P0;
  std::size_t n_velocity_nodes = 0;
  std::size_t n_pressure = 0;

  static ElementPair make(PairTag tag, const Mesh1D& mesh);

  std::size_t n_velocity() const noexcept { return 2 * n_velocity_nodes; }
  /// Half-bandwidth of the pressure Schur complement.
  std::size_t schur_bandwidth() const noexcept { return tag == PairTag::P1P0 ? 1 : 2; }
  /// Fine elements [first, last) on which pressure dof l is supported.
  std::array<std::size_t, 2> support(std::size_t l) const;
  /// Pressure basis values at the two ends of fine element k for the dofs
  /// active there: {dof, value at x_k, value at x_{k+1}}, up to two entries.
  struct LocalBasis {
    std::size_t count = 0;
    std::size_t dof[2] = {0, 0};
    double left[2] = {0.0, 0.0};
    double right[2] = {0.0, 0.0};
  };
  LocalBasis local_basis(const Mesh1D& mesh, std::size_t k) const;
};

/// Assembled discrete operators for one depth field.
///
/// B is the divergence, B(l, :) U = int div_sw(u_h) q_l dx.
/// Bt is the gradient, Bt(:, l) = int grad_sw(q_l) . phi_i dx, built from the
/// distributional derivative of q_l inside the domain only. C collects the
/// boundary products (H q v1) at the outflow end minus the inflow end, so
/// Bt - C = -B^T.
struct OperatorSet {
  ElementPair pair;
  std::vector<double> A;  // lumped H-weighted mass, size 2N
  CsrMatrix B;            // M x 2N
  CsrMatrix Bt;           // 2N x M
  CsrMatrix C;            // 2N x M
  std::vector<double> H;
  std::vector<double> zeta;  // H + 2 z_b at nodes
  std::vector<double> chi;   // element slope of zeta
  std::vector<bool> dry_node;
  std::vector<bool> dry_element;

  /// Trace weight of a boundary pressure value on the boundary u dof:
  /// -H_0 at the inflow end, +H_{N-1} at the outflow end.
  double trace_in() const { return -H.front(); }
  double trace_out() const { return H.back(); }

  void write_triplets(std::ostream& os) const;
};

/// (H df/dx + f d(H + 2 z_b)/dx, -2 f)
std::array<double, 2> grad_sw_pointwise(double f, double df_dx, double H, double dzeta_dx);

/// d(H v1)/dx - v1 d(H + 2 z_b)/dx + 2 v2
double div_sw_pointwise(double v1, double v2, double dv1_dx, double H, double dH_dx,
                        double dzeta_dx);

/// Closed-form assembly. H and z_b are nodal; H phi_i is replaced by its
/// nodal interpolant H_i phi_i and zeta is piecewise linear.
OperatorSet assemble(const ElementPair& pair, const Mesh1D& mesh, std::span<const double> H,
                     std::span<const double> zb, double h_eps = 1e-8);

/// Row sums of (int H phi_i phi_j) with P1 H, floored at h_eps * dual width.
std::vector<double> lump_mass(const Mesh1D& mesh, std::span<const double> H, double h_eps);

}  // namespace nhsw
