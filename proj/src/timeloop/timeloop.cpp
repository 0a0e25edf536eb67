#include "nhsw/timeloop.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace nhsw {
namespace {

void check_finite(const FlowState& s) {
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (!std::isfinite(s.H[i]) || !std::isfinite(s.Hu[i]) || !std::isfinite(s.Hw[i])) {
      std::ostringstream msg;
      msg << "non-finite state at node " << i << ", t = " << s.t;
      throw Error(ErrorCode::NonFinite, msg.str());
    }
  }
}

PressureField zero_pressure(const Problem& pb) {
  PressureField p;
  p.tag = pb.pair;
  p.p.assign(ElementPair::make(pb.pair, pb.mesh).n_pressure, 0.0);
  return p;
}

}  // namespace

std::string to_string(Integrator i) { return i == Integrator::Euler ? "euler" : "heun"; }

Integrator integrator_from_string(const std::string& s) {
  if (s == "euler") return Integrator::Euler;
  if (s == "heun") return Integrator::Heun;
  throw Error(ErrorCode::InvalidArgument, "unknown integrator '" + s + "'");
}

FlowState projection_substep(const FlowState& state, const Problem& pb, double dt,
                             const StepOptions& opt, StepReport& report,
                             PressureField* pressure) {
  const auto& prm = pb.params;
  const Boundaries b = pb.boundaries(state.t);
  FlowState half = predict(state, pb.mesh, pb.bathy, prm, b.in.hyperbolic, b.out.hyperbolic, dt);

  const auto pair = ElementPair::make(pb.pair, pb.mesh);
  const OperatorSet ops = assemble(pair, pb.mesh, half.H, pb.bathy.zb(), prm.h_eps);
  const auto U_half = velocity_vector(half, prm.h_eps);
  PressureBC bcs[2] = {b.in.pressure, b.out.pressure};
  bcs[0].side = Side::In;
  bcs[1].side = Side::Out;
  const SchurSystem sys = build_schur(ops, U_half, dt, bcs, prm.method, prm.tol);
  PressureField P = solve_pressure(sys, opt.solver);
  const auto U = correct_velocity(sys, ops, P);
  if (opt.inspect) opt.inspect(sys, P);

  const double div = constrained_divergence(sys, U);
  const double bound = prm.tol * sys.divergence_predicted + 1e-12;
  if (opt.check_divergence && !(div <= bound)) {
    std::ostringstream msg;
    msg << "discrete divergence " << div << " exceeds " << bound << " at t = " << half.t;
    throw Error(ErrorCode::DivergenceBound, msg.str());
  }
  if (div - bound > report.divergence - report.divergence_bound) {
    report.divergence = div;
    report.divergence_bound = bound;
  }
  report.iterations += P.iterations;

  const std::size_t n = half.size();
  FlowState out(n);
  out.t = half.t;
  out.H = half.H;
  for (std::size_t i = 0; i < n; ++i) {
    if (half.H[i] < prm.h_eps) continue;
    out.Hu[i] = half.H[i] * U[i];
    out.Hw[i] = half.H[i] * U[n + i];
  }
  report.correction_mass_change += total_mass(out, pb.mesh) - total_mass(half, pb.mesh);
  if (pressure != nullptr) *pressure = std::move(P);
  return out;
}

double choose_dt(const FlowState& state, const Problem& pb, const StepOptions& opt) {
  double dt = opt.fixed_dt ? *opt.fixed_dt : cfl_dt(state, pb.mesh, pb.params);
  dt = std::min(dt, opt.dt_cap);
  if (!(dt > 0.0)) throw Error(ErrorCode::NoAdmissibleStep, "time step is not positive");
  return dt;
}

std::pair<FlowState, StepReport> step_euler(const FlowState& state, const Problem& pb,
                                            const StepOptions& opt, PressureField* pressure) {
  StepReport rep;
  rep.dt = choose_dt(state, pb, opt);
  rep.divergence = -std::numeric_limits<double>::infinity();
  FlowState next = projection_substep(state, pb, rep.dt, opt, rep, pressure);
  check_finite(next);
  rep.t = next.t;
  rep.mass = total_mass(next, pb.mesh);
  rep.energy = total_energy(next, pb.mesh, pb.bathy, pb.params.g, pb.params.h_eps);
  return {std::move(next), rep};
}

FlowState heun_average(const FlowState& a, const FlowState& b) {
  const std::size_t n = a.size();
  if (b.size() != n) throw Error(ErrorCode::SizeMismatch, "heun_average: state sizes");
  FlowState out(n);
  for (std::size_t i = 0; i < n; ++i) {
    out.H[i] = 0.5 * (a.H[i] + b.H[i]);
    out.Hu[i] = 0.5 * (a.Hu[i] + b.Hu[i]);
    out.Hw[i] = 0.5 * (a.Hw[i] + b.Hw[i]);
  }
  out.t = b.t;
  return out;
}

std::pair<FlowState, StepReport> step_heun(const FlowState& state, const Problem& pb,
                                           const StepOptions& opt, PressureField* pressure) {
  StepReport rep;
  rep.dt = choose_dt(state, pb, opt);
  rep.divergence = -std::numeric_limits<double>::infinity();
  FlowState next = heun_combine(state, [&](const FlowState& y) {
    return projection_substep(y, pb, rep.dt, opt, rep, pressure);
  });
  // The average lands half way between the two substep times.
  next.t = state.t + rep.dt;
  const double h_eps = pb.params.h_eps;
  for (std::size_t i = 0; i < next.size(); ++i) {
    if (next.H[i] < h_eps) next.Hu[i] = next.Hw[i] = 0.0;
  }
  check_finite(next);
  rep.t = next.t;
  rep.mass = total_mass(next, pb.mesh);
  rep.energy = total_energy(next, pb.mesh, pb.bathy, pb.params.g, h_eps);
  return {std::move(next), rep};
}

RunResult run(const FlowState& initial, const Problem& pb, Integrator integrator, double t_end,
              const RunOutputs& outputs, const StepOptions& opt) {
  if (!(t_end >= 0.0)) throw Error(ErrorCode::InvalidArgument, "run: t_end must be >= 0");
  initial.check_consistent(pb.mesh.size());
  pb.params.validate();

  std::vector<double> times;
  for (double t : outputs.times) {
    if (t >= initial.t && t <= t_end) times.push_back(t);
  }
  std::sort(times.begin(), times.end());
  times.erase(std::unique(times.begin(), times.end()), times.end());

  RunResult res;
  res.state = initial;
  res.pressure = zero_pressure(pb);
  std::size_t next_out = 0;
  const double t_eps = 1e-12 * std::max(1.0, t_end);
  auto emit_due = [&]() {
    while (next_out < times.size() && times[next_out] <= res.state.t + t_eps) {
      if (outputs.on_snapshot) outputs.on_snapshot(res.state, res.pressure);
      ++next_out;
    }
  };
  emit_due();

  StepOptions step_opt = opt;
  while (res.state.t < t_end - t_eps) {
    double target = t_end;
    if (next_out < times.size()) target = std::min(target, times[next_out]);
    step_opt.dt_cap = std::min(opt.dt_cap, target - res.state.t);
    auto [next, rep] = integrator == Integrator::Euler
                           ? step_euler(res.state, pb, step_opt, &res.pressure)
                           : step_heun(res.state, pb, step_opt, &res.pressure);
    // Snap onto the target so clipped steps land exactly.
    if (std::fabs(next.t - target) <= t_eps) next.t = target;
    rep.t = next.t;
    res.state = std::move(next);
    ++res.steps;
    if (outputs.keep_reports) res.reports.push_back(rep);
    const bool last = !(res.state.t < t_end - t_eps);
    if (outputs.on_step && (res.steps % std::max<std::size_t>(1, outputs.step_stride) == 0 || last)) {
      outputs.on_step(res.state, rep);
    }
    emit_due();
  }
  return res;
}

}  // namespace nhsw
