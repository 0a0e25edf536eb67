#pragma once

#include "nhsw/core.hpp"
#include "nhsw/kinetic.hpp"

namespace nhsw {

/// Numerical flux components (F_H, F_Hu, F_Hw) at an interface.
struct InterfaceFlux {
  double mass = 0.0;
  double momentum = 0.0;
  double vertical = 0.0;
};

/// (H, Hu) pair entering the kinetic flux.
struct DepthDischarge {
  double H = 0.0;
  double Hu = 0.0;
};

/// Primitive nodal state used for boundary resolution.
struct NodeState {
  double H = 0.0;
  double u = 0.0;
  double w = 0.0;
};

/// In = left end (x_0), Out = right end (x_{N-1}).
enum class Side { In, Out };

enum class HyperbolicBcKind { ImposedFlux, ImposedDepth, FreeOutflow, Wall };

struct HyperbolicBC {
  HyperbolicBcKind kind = HyperbolicBcKind::Wall;
  double q01 = 0.0;    // imposed horizontal discharge (m^2/s)
  double q02 = 0.0;    // imposed vertical discharge (m^2/s)
  double depth = 0.0;  // imposed depth (m)

  static HyperbolicBC wall() { return {}; }
  static HyperbolicBC free_outflow() { return {HyperbolicBcKind::FreeOutflow, 0.0, 0.0, 0.0}; }
  static HyperbolicBC imposed_flux(double q01, double q02) {
    return {HyperbolicBcKind::ImposedFlux, q01, q02, 0.0};
  }
  static HyperbolicBC imposed_depth(double h) {
    return {HyperbolicBcKind::ImposedDepth, 0.0, 0.0, h};
  }
};

std::string to_string(HyperbolicBcKind kind);

/// F+(XL) + F-(XR) for the compact kinetic equilibrium; vertical = 0.
InterfaceFlux kinetic_flux(DepthDischarge left, DepthDischarge right, double g);

kinetic::Reconstructed hydrostatic_reconstruct(double Hi, double Hj, double zbi, double zbj);

/// cfl * min dual width / max over wet nodes of (|u| + sqrt(gH)).
double cfl_dt(const FlowState& state, const Mesh1D& mesh, const PhysicalParams& params);

/// Ghost state outside the boundary node for the given condition.
NodeState apply_hyperbolic_bc(const NodeState& interior, const HyperbolicBC& bc, Side side,
                              double g, double h_eps = 1e-8);

/// Kinetic flux through the boundary face between the ghost and the boundary node.
InterfaceFlux boundary_flux(const NodeState& interior, const HyperbolicBC& bc, Side side,
                            double g, double h_eps = 1e-8);

/// One explicit kinetic finite-volume step of the hydrostatic subsystem plus
/// upwind advection of Hw. Returns X^{n+1/2} at time state.t + dt.
FlowState predict(const FlowState& state, const Mesh1D& mesh, const Bathymetry& bathy,
                  const PhysicalParams& params, const HyperbolicBC& bc_in,
                  const HyperbolicBC& bc_out, double dt);

}  // namespace nhsw
