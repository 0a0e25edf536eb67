#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "nhsw/core.hpp"
#include "nhsw/femops.hpp"
#include "nhsw/hyperbolic.hpp"
#include "nhsw/sparse.hpp"

namespace nhsw {

enum class PressureBcKind { Dirichlet, Neumann, Mixed };

std::string to_string(PressureBcKind kind);

/// Pressure condition on one end of the domain.
///
/// Dirichlet leaves the boundary u dof free and adds the trace load of p0.
/// Neumann and Mixed fix the boundary u dof to `u_imposed` (or to the
/// predicted value when unset). For Mixed, the beta * H * p boundary product
/// is exactly the C contribution of the discrete gradient, so beta is
/// validated and carried for reporting only.
struct PressureBC {
  Side side = Side::In;
  PressureBcKind kind = PressureBcKind::Neumann;
  double p0 = 0.0;
  double beta = 0.0;
  std::optional<double> u_imposed;

  static PressureBC dirichlet(Side s, double p0 = 0.0) {
    return {s, PressureBcKind::Dirichlet, p0, 0.0, std::nullopt};
  }
  static PressureBC neumann(Side s, std::optional<double> u = std::nullopt) {
    return {s, PressureBcKind::Neumann, 0.0, 0.0, u};
  }
  static PressureBC mixed(Side s, double beta, std::optional<double> u = std::nullopt) {
    return {s, PressureBcKind::Mixed, 0.0, beta, u};
  }
  static PressureBC wall(Side s) { return neumann(s, 0.0); }
};

/// Non-hydrostatic pressure coefficients on the pressure space.
struct PressureField {
  PairTag tag = PairTag::P1P0;
  std::vector<double> p;
  std::size_t iterations = 0;
  double residual = 0.0;  // ||S p - rhs||_2

  /// Values at the velocity nodes (averaged across elements for P1/P0,
  /// linearly interpolated for P1-iso-P2/P1).
  std::vector<double> nodal(const Mesh1D& mesh) const;
};

/// Pressure system S P = rhs with S = B A^{-1} B^T restricted to the free
/// velocity dofs (positive definite; see OperatorSet for the sign of B).
struct SchurSystem {
  PairTag tag = PairTag::P1P0;
  BandedSym S;
  std::vector<double> rhs;
  SolverMethod method = SolverMethod::Direct;
  double tol = 1e-10;
  double dt = 0.0;

  CsrMatrix B;                     // divergence, kept for Uzawa and checks
  std::vector<double> a_inv;       // 1/A on free velocity dofs, 0 elsewhere
  std::vector<char> free_velocity; // 2N
  std::vector<double> U_tilde;     // predicted velocity with constraints applied
  std::vector<double> load;        // 2N trace load of Dirichlet pressures
  std::vector<char> pinned;        // M: pressure dofs with a fixed value
  std::vector<double> pinned_value;
  double divergence_predicted = 0.0;  // ||B U*||_2 over free pressure rows

  std::size_t size() const noexcept { return rhs.size(); }
  /// Residual the iterative solvers must reach.
  double residual_target() const;
  void write_triplets(std::ostream& os) const;
};

/// U = (u_0..u_{N-1}, w_0..w_{N-1}) from a state; dry nodes give 0.
std::vector<double> velocity_vector(const FlowState& state, double h_eps);

SchurSystem build_schur(const OperatorSet& ops, std::span<const double> U_predicted, double dt,
                        std::span<const PressureBC> bcs, SolverMethod method, double tol);

struct SolverOptions {
  /// Iterative solvers stop at residual_target() * stop_factor. The margin
  /// keeps the solution error, not only the residual, within tol.
  double stop_factor = 0.1;
  std::size_t max_iterations = 0;  // 0: method default
};

PressureField solve_pressure(const SchurSystem& sys, const SolverOptions& opt = {});

/// U = U~ - dt A^{-1} ((Bt - C) P + load) on the free dofs.
std::vector<double> correct_velocity(const SchurSystem& sys, const OperatorSet& ops,
                                     const PressureField& P);

/// ||B U||_2 over the free pressure rows of sys.
double constrained_divergence(const SchurSystem& sys, std::span<const double> U);

}  // namespace nhsw
