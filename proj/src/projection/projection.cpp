#include "nhsw/projection.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "nhsw/kernels.hpp"

namespace nhsw {
namespace {

double norm2(std::span<const double> v) { return std::sqrt(kernels::dot(v, v)); }

}  // namespace

std::string to_string(PressureBcKind kind) {
  switch (kind) {
    case PressureBcKind::Dirichlet: return "dirichlet";
    case PressureBcKind::Neumann: return "neumann";
    case PressureBcKind::Mixed: return "mixed";
  }
  return "?";
}

std::vector<double> PressureField::nodal(const Mesh1D& mesh) const {
  const std::size_t n = mesh.size();
  std::vector<double> out(n, 0.0);
  if (tag == PairTag::P1P0) {
    if (p.size() != n - 1) throw Error(ErrorCode::SizeMismatch, "pressure size (P1P0)");
    out[0] = p[0];
    out[n - 1] = p[n - 2];
    for (std::size_t i = 1; i + 1 < n; ++i) out[i] = 0.5 * (p[i - 1] + p[i]);
    return out;
  }
  if (p.size() != (n - 1) / 2 + 1) throw Error(ErrorCode::SizeMismatch, "pressure size");
  for (std::size_t j = 0; j < p.size(); ++j) out[2 * j] = p[j];
  for (std::size_t i = 1; i < n; i += 2) {
    const double t = (mesh.x(i) - mesh.x(i - 1)) / (mesh.x(i + 1) - mesh.x(i - 1));
    out[i] = (1.0 - t) * out[i - 1] + t * out[i + 1];
  }
  return out;
}

double SchurSystem::residual_target() const {
  double rhs_free = 0.0;
  for (std::size_t l = 0; l < rhs.size(); ++l) {
    if (!pinned[l]) rhs_free += rhs[l] * rhs[l];
  }
  rhs_free = std::sqrt(rhs_free);
  const double ref = std::min(rhs_free, divergence_predicted / dt);
  return std::max(tol * ref, 0.25e-12 / dt);
}

void SchurSystem::write_triplets(std::ostream& os) const {
  os << "# S " << S.size() << " " << S.size() << "\n";
  S.write_triplets(os);
  os << "# rhs " << rhs.size() << "\n";
  for (std::size_t i = 0; i < rhs.size(); ++i) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%zu 0 %.17g\n", i, rhs[i]);
    os << buf;
  }
}

std::vector<double> velocity_vector(const FlowState& state, double h_eps) {
  const std::size_t n = state.size();
  std::vector<double> U(2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    U[i] = velocity(state.H[i], state.Hu[i], h_eps);
    U[n + i] = velocity(state.H[i], state.Hw[i], h_eps);
  }
  return U;
}

SchurSystem build_schur(const OperatorSet& ops, std::span<const double> U_predicted, double dt,
                        std::span<const PressureBC> bcs, SolverMethod method, double tol) {
  if (!(dt > 0.0)) throw Error(ErrorCode::InvalidArgument, "build_schur: dt must be positive");
  if (!(tol > 0.0)) throw Error(ErrorCode::InvalidArgument, "build_schur: tol must be positive");
  const std::size_t n = ops.pair.n_velocity_nodes;
  const std::size_t nv = 2 * n;
  const std::size_t m = ops.pair.n_pressure;
  if (U_predicted.size() != nv) {
    throw Error(ErrorCode::SizeMismatch, "build_schur: velocity vector has the wrong size");
  }

  const PressureBC* side_bc[2] = {nullptr, nullptr};
  for (const auto& bc : bcs) {
    const int s = bc.side == Side::In ? 0 : 1;
    if (side_bc[s] != nullptr) {
      throw Error(ErrorCode::InvalidArgument, "build_schur: two pressure conditions on one side");
    }
    if (!std::isfinite(bc.p0) || !std::isfinite(bc.beta) ||
        (bc.u_imposed && !std::isfinite(*bc.u_imposed))) {
      throw Error(ErrorCode::InvalidArgument, "build_schur: non-finite boundary data");
    }
    side_bc[s] = &bc;
  }

  SchurSystem sys;
  sys.tag = ops.pair.tag;
  sys.method = method;
  sys.tol = tol;
  sys.dt = dt;
  sys.B = ops.B;
  sys.free_velocity.assign(nv, 1);
  sys.U_tilde.assign(U_predicted.begin(), U_predicted.end());
  sys.load.assign(nv, 0.0);
  sys.pinned.assign(m, 0);
  sys.pinned_value.assign(m, 0.0);

  for (std::size_t i = 0; i < n; ++i) {
    if (ops.dry_node[i]) {
      sys.free_velocity[i] = sys.free_velocity[n + i] = 0;
      sys.U_tilde[i] = sys.U_tilde[n + i] = 0.0;
    }
  }
  for (int s = 0; s < 2; ++s) {
    const PressureBC* bc = side_bc[s];
    const std::size_t node = s == 0 ? 0 : n - 1;
    if (bc == nullptr || bc->kind != PressureBcKind::Dirichlet) {
      sys.free_velocity[node] = 0;
      if (!ops.dry_node[node] && bc != nullptr && bc->u_imposed) {
        sys.U_tilde[node] = *bc->u_imposed;
      }
      continue;
    }
    if (sys.free_velocity[node]) {
      sys.load[node] = (s == 0 ? ops.trace_in() : ops.trace_out()) * bc->p0;
    }
    if (ops.pair.tag == PairTag::P1isoP2P1) {
      const std::size_t l = s == 0 ? 0 : m - 1;
      sys.pinned[l] = 1;
      sys.pinned_value[l] = bc->p0;
    }
  }
  sys.a_inv.assign(nv, 0.0);
  for (std::size_t v = 0; v < nv; ++v) {
    if (sys.free_velocity[v]) sys.a_inv[v] = 1.0 / ops.A[v];
  }
  for (std::size_t l = 0; l < m; ++l) {
    const auto sup = ops.pair.support(l);
    bool all_dry = true;
    for (std::size_t k = sup[0]; k < sup[1]; ++k) all_dry = all_dry && ops.dry_element[k];
    if (all_dry) {
      sys.pinned[l] = 1;
      sys.pinned_value[l] = 0.0;
    }
  }

  // S = B A^{-1} B^T over the free velocity columns.
  const std::size_t bw = ops.pair.schur_bandwidth();
  sys.S = BandedSym(m, bw);
  const CsrMatrix BT = ops.B.transpose();
  const auto ptr = BT.row_ptr();
  const auto col = BT.col_index();
  const auto val = BT.values();
  for (std::size_t v = 0; v < nv; ++v) {
    if (!sys.free_velocity[v]) continue;
    const double ai = sys.a_inv[v];
    for (std::size_t a = ptr[v]; a < ptr[v + 1]; ++a) {
      for (std::size_t b = ptr[v]; b <= a; ++b) {
        sys.S.ref(col[a], col[b]) += val[a] * val[b] * ai;
      }
    }
  }
  for (std::size_t l = 0; l < m; ++l) {
    if (!sys.pinned[l] && !(sys.S.diagonal(l) > 0.0)) {
      sys.pinned[l] = 1;
      sys.pinned_value[l] = 0.0;
    }
  }

  // rhs = -(1/dt) B U~ + B A^{-1} load
  std::vector<double> tmp(nv);
  for (std::size_t v = 0; v < nv; ++v) {
    tmp[v] = -sys.U_tilde[v] / dt + sys.a_inv[v] * sys.load[v];
  }
  sys.rhs.assign(m, 0.0);
  ops.B.multiply(tmp, sys.rhs);

  // Symmetric elimination of pinned dofs.
  for (std::size_t l = 0; l < m; ++l) {
    if (!sys.pinned[l]) continue;
    const std::size_t lo = l > bw ? l - bw : 0;
    const std::size_t hi = std::min(m - 1, l + bw);
    for (std::size_t j = lo; j <= hi; ++j) {
      if (j == l) continue;
      if (!sys.pinned[j]) sys.rhs[j] -= sys.S.at(j, l) * sys.pinned_value[l];
      sys.S.ref(j, l) = 0.0;
    }
    sys.S.ref(l, l) = 1.0;
    sys.rhs[l] = sys.pinned_value[l];
  }

  std::vector<double> div(m);
  ops.B.multiply(U_predicted, div);
  double d2 = 0.0;
  for (std::size_t l = 0; l < m; ++l) {
    if (!sys.pinned[l]) d2 += div[l] * div[l];
  }
  sys.divergence_predicted = std::sqrt(d2);
  return sys;
}

std::vector<double> correct_velocity(const SchurSystem& sys, const OperatorSet& ops,
                                     const PressureField& P) {
  const std::size_t nv = sys.U_tilde.size();
  if (P.p.size() != sys.size() || ops.Bt.rows() != nv) {
    throw Error(ErrorCode::SizeMismatch, "correct_velocity: operand sizes");
  }
  std::vector<double> g(nv), c(nv);
  ops.Bt.multiply(P.p, g);
  ops.C.multiply(P.p, c);
  std::vector<double> U = sys.U_tilde;
  for (std::size_t v = 0; v < nv; ++v) {
    if (!sys.free_velocity[v]) continue;
    U[v] -= sys.dt * sys.a_inv[v] * ((g[v] - c[v]) + sys.load[v]);
  }
  return U;
}

double constrained_divergence(const SchurSystem& sys, std::span<const double> U) {
  std::vector<double> div(sys.size());
  sys.B.multiply(U, div);
  for (std::size_t l = 0; l < div.size(); ++l) {
    if (sys.pinned[l]) div[l] = 0.0;
  }
  return norm2(div);
}

}  // namespace nhsw
