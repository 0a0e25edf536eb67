#include "nhsw/hyperbolic.hpp"

#include <cmath>
#include <limits>

#include "nhsw/kernels.hpp"

namespace nhsw {
namespace {

constexpr double kBisectTol = 1e-12;

// Root of a monotone function on [lo, hi] with f(lo), f(hi) of opposite sign.
template <class F>
double bisect(F&& f, double lo, double hi) {
  double flo = f(lo);
  for (int it = 0; it < 400 && hi - lo > kBisectTol * std::max(1.0, hi); ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if ((fm > 0.0) == (flo > 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

void require_subcritical(const NodeState& s, double g, double h_eps, const char* what) {
  if (s.H < h_eps) {
    throw Error(ErrorCode::UnsupportedRegime,
                std::string(what) + ": boundary node is dry, cannot resolve characteristics");
  }
  const double fr = std::fabs(s.u) / std::sqrt(g * s.H);
  if (!(fr < 1.0)) {
    throw Error(ErrorCode::UnsupportedRegime,
                std::string(what) + ": torrential boundary (Froude " + std::to_string(fr) + ")");
  }
}

// Depth on the subcritical branch with q/H + sign*2 sqrt(gH) = invariant.
double flux_depth(double q, double invariant, double sign, double g) {
  const double hc = std::cbrt(q * q / g);
  auto f = [&](double H) { return q / H + sign * 2.0 * std::sqrt(g * H) - invariant; };
  // sign = -1: f decreasing on H > hc; sign = +1: increasing.
  const double lo = hc > 0.0 ? hc : std::numeric_limits<double>::min();
  const double flo = hc > 0.0 ? f(hc) : -sign * std::numeric_limits<double>::infinity();
  if (hc == 0.0) {
    // q = 0: sign*2 sqrt(gH) = invariant has a closed form.
    const double r = sign * invariant / 2.0;
    if (!(r > 0.0)) {
      throw Error(ErrorCode::UnsupportedRegime, "imposed flux: no subcritical boundary depth");
    }
    return r * r / g;
  }
  if ((sign < 0.0 && flo < 0.0) || (sign > 0.0 && flo > 0.0)) {
    throw Error(ErrorCode::UnsupportedRegime,
                "imposed flux: invariant cannot be matched on the subcritical branch");
  }
  double hi = 2.0 * lo;
  for (int it = 0; it < 200; ++it) {
    const double fh = f(hi);
    if ((sign < 0.0 && fh <= 0.0) || (sign > 0.0 && fh >= 0.0)) break;
    hi *= 2.0;
  }
  return bisect(f, lo, hi);
}

}  // namespace

std::string to_string(HyperbolicBcKind kind) {
  switch (kind) {
    case HyperbolicBcKind::ImposedFlux: return "imposed_flux";
    case HyperbolicBcKind::ImposedDepth: return "imposed_depth";
    case HyperbolicBcKind::FreeOutflow: return "free_outflow";
    case HyperbolicBcKind::Wall: return "wall";
  }
  return "?";
}

InterfaceFlux kinetic_flux(DepthDischarge left, DepthDischarge right, double g) {
  if (left.H < 0.0 || right.H < 0.0) {
    throw Error(ErrorCode::NegativeDepth, "kinetic_flux: negative depth");
  }
  const double ul = left.H > 0.0 ? left.Hu / left.H : 0.0;
  const double ur = right.H > 0.0 ? right.Hu / right.H : 0.0;
  const auto p = kinetic::positive_part(left.H, ul, g);
  const auto m = kinetic::negative_part(right.H, ur, g);
  return {p.mass + m.mass, p.momentum + m.momentum, 0.0};
}

kinetic::Reconstructed hydrostatic_reconstruct(double Hi, double Hj, double zbi, double zbj) {
  return kinetic::reconstruct(Hi, Hj, zbi, zbj);
}

double cfl_dt(const FlowState& state, const Mesh1D& mesh, const PhysicalParams& params) {
  state.check_consistent(mesh.size());
  const std::size_t n = state.size();
  std::vector<double> u(n);
  for (std::size_t i = 0; i < n; ++i) u[i] = velocity(state.H[i], state.Hu[i], params.h_eps);
  const double speed = kernels::max_wave_speed(state.H, u, params.g, params.h_eps);
  if (!(speed > 0.0)) {
    throw Error(ErrorCode::NoAdmissibleStep, "cfl_dt: no wet node, no admissible time step");
  }
  return params.cfl * mesh.min_dual_width() / speed;
}

NodeState apply_hyperbolic_bc(const NodeState& interior, const HyperbolicBC& bc, Side side,
                              double g, double h_eps) {
  const double sign = side == Side::In ? -1.0 : 1.0;
  switch (bc.kind) {
    case HyperbolicBcKind::Wall:
      return {interior.H, -interior.u, interior.w};
    case HyperbolicBcKind::FreeOutflow:
      return interior;
    case HyperbolicBcKind::ImposedDepth: {
      if (!(bc.depth > 0.0)) throw Error(ErrorCode::InvalidArgument, "imposed depth must be > 0");
      require_subcritical(interior, g, h_eps, "imposed depth");
      // Outgoing invariant u + sign*2c is carried from the interior.
      const double inv = interior.u + sign * 2.0 * std::sqrt(g * interior.H);
      return {bc.depth, inv - sign * 2.0 * std::sqrt(g * bc.depth), interior.w};
    }
    case HyperbolicBcKind::ImposedFlux: {
      require_subcritical(interior, g, h_eps, "imposed flux");
      const double inv = interior.u + sign * 2.0 * std::sqrt(g * interior.H);
      const double H0 = flux_depth(bc.q01, inv, sign, g);
      return {H0, bc.q01 / H0, bc.q02 / H0};
    }
  }
  return interior;
}

InterfaceFlux boundary_flux(const NodeState& interior, const HyperbolicBC& bc, Side side,
                            double g, double h_eps) {
  const NodeState ghost = apply_hyperbolic_bc(interior, bc, side, g, h_eps);
  const NodeState& l = side == Side::In ? ghost : interior;
  const NodeState& r = side == Side::In ? interior : ghost;
  const auto p = kinetic::positive_part(l.H, l.u, g);
  const auto m = kinetic::negative_part(r.H, r.u, g);
  const double fm = p.mass + m.mass;
  return {fm, p.momentum + m.momentum, fm * (fm > 0.0 ? l.w : r.w)};
}

FlowState predict(const FlowState& state, const Mesh1D& mesh, const Bathymetry& bathy,
                  const PhysicalParams& params, const HyperbolicBC& bc_in,
                  const HyperbolicBC& bc_out, double dt) {
  const std::size_t n = mesh.size();
  state.check_consistent(n);
  if (bathy.size() != n) throw Error(ErrorCode::SizeMismatch, "predict: bathymetry size");
  if (!(dt > 0.0)) throw Error(ErrorCode::InvalidArgument, "predict: dt must be positive");
  const double g = params.g;
  const double h_eps = params.h_eps;

  std::vector<double> u(n), w(n);
  for (std::size_t i = 0; i < n; ++i) {
    u[i] = velocity(state.H[i], state.Hu[i], h_eps);
    w[i] = velocity(state.H[i], state.Hw[i], h_eps);
  }
  const double speed = kernels::max_wave_speed(state.H, u, g, h_eps);
  if (dt * speed > mesh.min_dual_width() * (1.0 + 1e-12)) {
    throw Error(ErrorCode::InvalidArgument, "predict: dt violates the CFL bound");
  }

  const std::size_t n_if = n - 1;
  std::vector<double> fm(n_if), fl(n_if), fr(n_if), fw(n_if);
  kernels::interface_fluxes({state.H, u, w, bathy.zb()}, g, {fm, fl, fr, fw});

  const InterfaceFlux fin =
      boundary_flux({state.H[0], u[0], w[0]}, bc_in, Side::In, g, h_eps);
  const InterfaceFlux fout =
      boundary_flux({state.H[n - 1], u[n - 1], w[n - 1]}, bc_out, Side::Out, g, h_eps);

  FlowState out(n);
  out.t = state.t + dt;
  for (std::size_t i = 0; i < n; ++i) {
    const double sigma = dt / mesh.dual_width(i);
    const double m_left = i == 0 ? fin.mass : fm[i - 1];
    const double m_right = i == n - 1 ? fout.mass : fm[i];
    const double q_left = i == 0 ? fin.momentum : fr[i - 1];
    const double q_right = i == n - 1 ? fout.momentum : fl[i];
    const double w_left = i == 0 ? fin.vertical : fw[i - 1];
    const double w_right = i == n - 1 ? fout.vertical : fw[i];
    double H = state.H[i] - sigma * (m_right - m_left);
    if (H < 0.0) {
      // Rounding can leave -1 ulp-sized depths at a drying node.
      if (H < -1e-13 * std::max(1.0, state.H[i])) {
        throw Error(ErrorCode::NegativeDepth,
                    "predict: negative depth " + std::to_string(H) + " at node " +
                        std::to_string(i));
      }
      H = 0.0;
    }
    out.H[i] = H;
    if (H < h_eps) continue;
    out.Hu[i] = state.Hu[i] - sigma * (q_right - q_left);
    out.Hw[i] = state.Hw[i] - sigma * (w_right - w_left);
    if (!std::isfinite(out.Hu[i]) || !std::isfinite(out.Hw[i])) {
      throw Error(ErrorCode::NonFinite, "predict: non-finite discharge at node " +
                                            std::to_string(i));
    }
  }
  return out;
}

}  // namespace nhsw
