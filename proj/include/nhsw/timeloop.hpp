#pragma once

#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "nhsw/core.hpp"
#include "nhsw/femops.hpp"
#include "nhsw/hyperbolic.hpp"
#include "nhsw/projection.hpp"

namespace nhsw {

/// Hyperbolic condition plus the pressure condition it induces, for one end.
struct BoundarySpec {
  HyperbolicBC hyperbolic;
  PressureBC pressure;

  static BoundarySpec wall(Side s) { return {HyperbolicBC::wall(), PressureBC::wall(s)}; }
};

struct Boundaries {
  BoundarySpec in = BoundarySpec::wall(Side::In);
  BoundarySpec out = BoundarySpec::wall(Side::Out);
};

/// Everything a step needs besides the state.
struct Problem {
  Mesh1D mesh;
  Bathymetry bathy;
  PhysicalParams params;
  PairTag pair = PairTag::P1P0;
  /// Boundary data at time t (time-dependent for wavemakers).
  std::function<Boundaries(double t)> boundaries = [](double) { return Boundaries{}; };
};

struct StepReport {
  double t = 0.0;
  double dt = 0.0;
  double divergence = 0.0;        // ||B U^{n+1}||, worst substep
  double divergence_bound = 0.0;  // tol ||B U^{n+1/2}|| + 1e-12 of that substep
  std::size_t iterations = 0;
  double mass = 0.0;
  double energy = 0.0;
  double correction_mass_change = 0.0;
};

struct StepOptions {
  std::optional<double> fixed_dt;
  /// Upper bound on dt (used to land on output times).
  double dt_cap = std::numeric_limits<double>::infinity();
  SolverOptions solver;
  /// Called after every pressure solve with the system and its solution.
  std::function<void(const SchurSystem&, const PressureField&)> inspect;
  bool check_divergence = true;
};

/// One predict + correct substep with the given dt. The pressure of the
/// substep is returned through `pressure` when non-null.
FlowState projection_substep(const FlowState& state, const Problem& pb, double dt,
                             const StepOptions& opt, StepReport& report,
                             PressureField* pressure = nullptr);

/// Time step chosen from the CFL bound, the fixed dt option and the cap.
double choose_dt(const FlowState& state, const Problem& pb, const StepOptions& opt);

std::pair<FlowState, StepReport> step_euler(const FlowState& state, const Problem& pb,
                                            const StepOptions& opt = {},
                                            PressureField* pressure = nullptr);

inline double heun_average(double a, double b) { return 0.5 * (a + b); }
FlowState heun_average(const FlowState& a, const FlowState& b);

/// (y + step(step(y))) / 2
template <class Y, class Step>
Y heun_combine(const Y& y, Step&& step) {
  const Y y1 = step(y);
  const Y y2 = step(y1);
  return heun_average(y, y2);
}

std::pair<FlowState, StepReport> step_heun(const FlowState& state, const Problem& pb,
                                           const StepOptions& opt = {},
                                           PressureField* pressure = nullptr);

enum class Integrator { Euler, Heun };

std::string to_string(Integrator i);
Integrator integrator_from_string(const std::string& s);

struct RunOutputs {
  /// Snapshot times; t = 0 emits the initial state. Values beyond t_end are ignored.
  std::vector<double> times;
  std::function<void(const FlowState&, const PressureField&)> on_snapshot;
  /// Invoked after every `step_stride`-th step and after the last one.
  std::size_t step_stride = 1;
  std::function<void(const FlowState&, const StepReport&)> on_step;
  bool keep_reports = true;
};

struct RunResult {
  FlowState state;
  PressureField pressure;
  std::vector<StepReport> reports;
  std::size_t steps = 0;
};

RunResult run(const FlowState& initial, const Problem& pb, Integrator integrator, double t_end,
              const RunOutputs& outputs = {}, const StepOptions& opt = {});

}  // namespace nhsw
