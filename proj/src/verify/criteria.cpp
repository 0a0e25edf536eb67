#include <Eigen/Dense>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <optional>
#include <sstream>

#include "nhsw/cli.hpp"
#include "nhsw/verify.hpp"

namespace nhsw::verify {
namespace {

std::string fmt(double v, int prec = 3) {
  std::ostringstream s;
  s.precision(prec);
  s << std::scientific << v;
  return s.str();
}

std::string fixed(double v, int prec = 3) {
  std::ostringstream s;
  s.precision(prec);
  s << std::fixed << v;
  return s.str();
}

constexpr PairTag kPairs[] = {PairTag::P1P0, PairTag::P1isoP2P1};

// ---------------------------------------------------------------- 1, 2

const std::vector<ConvergenceRow>& solitary_study() {
  static std::optional<std::vector<ConvergenceRow>> rows;
  if (!rows) {
    RunConfig cfg = parse_config("[scenario]\nname = solitary\n[mesh]\nnodes = 603\n");
    rows = convergence_study(cfg);
  }
  return *rows;
}

Result convergence_order() {
  const auto& rows = solitary_study();
  Result r{"convergence_order", true, "", 0.0};
  std::ostringstream d;
  for (PairTag pair : kPairs) {
    const double rate = fitted_rate(rows, pair);
    const bool ok = rate >= 0.8 && rate <= 1.2;
    r.pass = r.pass && ok;
    d << to_string(pair) << " fitted rate " << fixed(rate) << " (pairwise";
    for (const auto& row : rows) {
      if (row.pair == pair && !std::isnan(row.rate)) d << " " << fixed(row.rate, 2);
    }
    d << "); ";
  }
  d << "target [0.8, 1.2]";
  r.detail = d.str();
  return r;
}

Result shape_preservation() {
  const auto& rows = solitary_study();
  Result r{"shape_preservation", true, "", 0.0};
  std::ostringstream d;
  for (PairTag pair : kPairs) {
    std::vector<ConvergenceRow> mine;
    for (const auto& row : rows) {
      if (row.pair == pair) mine.push_back(row);
    }
    const auto& fine = mine[mine.size() - 1];
    const auto& coarse = mine[mine.size() - 2];
    const double extrapolated = coarse.error * static_cast<double>(coarse.nodes) /
                                static_cast<double>(fine.nodes);
    const bool ok = fine.error <= 2.0 * extrapolated;
    r.pass = r.pass && ok;
    d << to_string(pair) << " e(" << fine.nodes << ") = " << fmt(fine.error) << " vs 2 x "
      << fmt(extrapolated) << "; ";
  }
  d << "bound 2x";
  r.detail = d.str();
  return r;
}

// ---------------------------------------------------------------- 3

struct DivergenceCase {
  std::string label;
  Scenario sc;
  double t_end;
};

Result discrete_divergence() {
  PhysicalParams prm;
  std::vector<DivergenceCase> cases;
  for (PairTag pair : kPairs) {
    const std::string p = "/" + to_string(pair);
    cases.push_back({"solitary" + p, make_solitary(603, pair, prm), 5.9025});
    cases.push_back({"dam_break" + p, make_dam_break(1201, pair, prm), 10.0});
    cases.push_back({"beach" + p, make_beach(1001, pair, prm), 12.0});
    cases.push_back({"dingemans" + p, make_dingemans(1001, pair, prm), 20.0});
  }
  PhysicalParams iter = prm;
  iter.tol = 1e-5;
  for (SolverMethod m : {SolverMethod::ConjugateGradient, SolverMethod::Uzawa}) {
    iter.method = m;
    cases.push_back({"solitary/" + to_string(m), make_solitary(603, PairTag::P1P0, iter), 2.0});
  }

  Result r{"discrete_divergence", true, "", 0.0};
  std::ostringstream d;
  std::size_t steps = 0;
  double worst = 0.0;
  std::string worst_case;
  for (auto& c : cases) {
    StepOptions opt;
    opt.check_divergence = false;
    RunOutputs out;
    out.keep_reports = false;
    double ratio = 0.0;
    out.on_step = [&](const FlowState&, const StepReport& rep) {
      ratio = std::max(ratio, rep.divergence / rep.divergence_bound);
      ++steps;
    };
    run(c.sc.initial, c.sc.problem, Integrator::Heun, c.t_end, out, opt);
    if (ratio > worst) {
      worst = ratio;
      worst_case = c.label;
    }
    if (!(ratio <= 1.0)) {
      r.pass = false;
      d << c.label << " ratio " << fmt(ratio) << "; ";
    }
  }
  d << steps << " steps over " << cases.size() << " runs, worst divergence/bound "
    << fmt(worst) << " (" << worst_case << ")";
  r.detail = d.str();
  return r;
}

// ---------------------------------------------------------------- 4

Result operator_duality() {
  std::mt19937_64 rng(20240601);
  Result r{"operator_duality", true, "", 0.0};
  double worst = 0.0;
  std::size_t instances = 0;
  for (PairTag pair : kPairs) {
    for (int trial = 0; trial < 50; ++trial) {
      std::size_t n = 5 + 2 * static_cast<std::size_t>(uniform(rng, 0.0, 28.0));
      const double dry = trial % 5 == 4 ? 0.2 : 0.0;
      auto f = random_field(rng, n, dry);
      const auto ep = ElementPair::make(pair, f.mesh);
      const auto ops = assemble(ep, f.mesh, f.H, f.zb);
      double scale = 1.0;
      for (double v : ops.B.values()) scale = std::max(scale, std::fabs(v));
      for (std::size_t row = 0; row < 2 * n; ++row) {
        const bool boundary_u = row == 0 || row == n - 1;
        for (std::size_t l = 0; l < ep.n_pressure; ++l) {
          const double lhs = boundary_u ? ops.Bt.at(row, l) - ops.C.at(row, l)
                                        : ops.Bt.at(row, l);
          worst = std::max(worst, std::fabs(lhs + ops.B.at(l, row)) / scale);
        }
      }
      ++instances;
    }
  }
  r.pass = worst <= 1e-12;
  r.detail = std::to_string(instances) + " random instances, max |Bt + B^T| / max|B| = " +
             fmt(worst) + " (interior rows; boundary rows with C), bound 1e-12";
  return r;
}

// ---------------------------------------------------------------- 5

Result fd_equivalence() {
  std::mt19937_64 rng(77);
  Result r{"fd_equivalence", true, "", 0.0};
  double worst = 0.0;
  std::size_t coefficients = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 3 + static_cast<std::size_t>(uniform(rng, 0.0, 40.0));
    auto f = random_field(rng, n, trial % 4 == 3 ? 0.2 : 0.0);
    const auto ep = ElementPair::make(PairTag::P1P0, f.mesh);
    const auto ops = assemble(ep, f.mesh, f.H, f.zb);
    const auto st = staggered_stencils(f.mesh, f.H, f.zb);
    const std::size_t m = ep.n_pressure;
    const auto check = [&](const CsrMatrix& got, std::vector<Triplet> want, std::size_t rows,
                           std::size_t cols) {
      const auto oracle = CsrMatrix::from_triplets(rows, cols, std::move(want));
      for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t j = 0; j < cols; ++j) {
          const double a = got.at(i, j);
          const double b = oracle.at(i, j);
          worst = std::max(worst, std::fabs(a - b) / std::max(1.0, std::fabs(b)));
          if (a != 0.0 || b != 0.0) ++coefficients;
        }
      }
    };
    check(ops.B, st.div, m, 2 * n);
    check(ops.Bt, st.grad, 2 * n, m);
    check(ops.C, st.boundary, 2 * n, m);
  }
  r.pass = worst <= 1e-13;
  r.detail = std::to_string(coefficients) + " stencil coefficients on 50 random meshes, max rel diff " +
             fmt(worst);
  return r;
}

// ---------------------------------------------------------------- 6

Result schur_spd() {
  std::mt19937_64 rng(4242);
  Result r{"schur_spd", true, "", 0.0};
  double min_eig = std::numeric_limits<double>::infinity();
  std::size_t instances = 0;
  for (PairTag pair : kPairs) {
    for (int trial = 0; trial < 50; ++trial) {
      const std::size_t n = 5 + 2 * static_cast<std::size_t>(uniform(rng, 0.0, 8.0));
      auto f = random_field(rng, n, 0.0);
      const auto ep = ElementPair::make(pair, f.mesh);
      const auto ops = assemble(ep, f.mesh, f.H, f.zb);
      std::vector<double> U(2 * n);
      for (double& v : U) v = uniform(rng, -1.0, 1.0);
      const PressureBC bcs[2] = {PressureBC::dirichlet(Side::In, uniform(rng, -1.0, 1.0)),
                                 PressureBC::dirichlet(Side::Out, uniform(rng, -1.0, 1.0))};
      const auto sys = build_schur(ops, U, 0.01, bcs, SolverMethod::Direct, 1e-10);
      const std::size_t m = sys.size();
      Eigen::MatrixXd S(m, m);
      for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < m; ++j) S(i, j) = sys.S.at(i, j);
      }
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(S, Eigen::EigenvaluesOnly);
      const double lo = es.eigenvalues().minCoeff();
      min_eig = std::min(min_eig, lo);
      if (!(lo > 0.0)) r.pass = false;
      ++instances;
    }
  }
  r.detail = std::to_string(instances) + " random wet Dirichlet instances (N <= 21), smallest eigenvalue " +
             fmt(min_eig);
  return r;
}

// ---------------------------------------------------------------- 7

Result well_balance_positivity() {
  Result r{"well_balance_positivity", true, "", 0.0};
  std::ostringstream d;
  PhysicalParams prm;

  double drift = 0.0;
  for (PairTag pair : kPairs) {
    BeachParams still;
    still.wave.amplitude = 0.0;
    Scenario sc = make_beach(3001, pair, prm, still);
    FlowState s = sc.initial;
    for (int k = 0; k < 100; ++k) {
      s = step_heun(s, sc.problem).first;
      for (std::size_t i = 0; i < s.size(); ++i) {
        drift = std::max({drift, std::fabs(s.H[i] - sc.initial.H[i]), std::fabs(s.Hu[i]),
                          std::fabs(s.Hw[i])});
      }
    }
  }
  const bool rest_ok = drift <= 1e-12;
  d << "lake at rest drift " << fmt(drift) << " over 100 steps; ";

  std::mt19937_64 rng(99);
  double min_random = std::numeric_limits<double>::infinity();
  std::size_t failures = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = 10 + static_cast<std::size_t>(uniform(rng, 0.0, 40.0));
    auto f = random_field(rng, n, 0.3);
    FlowState st(n);
    st.H = f.H;
    for (std::size_t i = 0; i < n; ++i) {
      if (st.H[i] > 0.0) {
        st.Hu[i] = st.H[i] * uniform(rng, -2.0, 2.0);
        st.Hw[i] = st.H[i] * uniform(rng, -0.5, 0.5);
      }
    }
    const Bathymetry bathy(f.mesh, f.zb);
    try {
      const double dt = cfl_dt(st, f.mesh, prm);
      const auto next =
          predict(st, f.mesh, bathy, prm, HyperbolicBC::wall(), HyperbolicBC::wall(), dt);
      for (double h : next.H) min_random = std::min(min_random, h);
    } catch (const Error&) {
      ++failures;
    }
  }
  const bool random_ok = failures == 0 && min_random >= 0.0;
  d << "1000 random CFL steps min H " << fmt(min_random) << ", " << failures << " errors; ";

  double min_beach = std::numeric_limits<double>::infinity();
  std::size_t steps = 0;
  bool beach_ok = true;
  try {
    Scenario sc = make_beach(3000, PairTag::P1P0, prm);
    RunOutputs out;
    out.keep_reports = false;
    out.on_step = [&](const FlowState& s, const StepReport&) {
      for (double h : s.H) min_beach = std::min(min_beach, h);
      ++steps;
    };
    run(sc.initial, sc.problem, Integrator::Heun, 12.0, out);
  } catch (const Error& e) {
    beach_ok = false;
    d << "beach run aborted: " << e.what() << "; ";
  }
  beach_ok = beach_ok && min_beach >= 0.0;
  d << "beach run " << steps << " steps to t = 12 s, min H " << fmt(min_beach);
  r.pass = rest_ok && random_ok && beach_ok;
  r.detail = d.str();
  return r;
}

// ---------------------------------------------------------------- 8

Result dam_break_plateau() {
  Result r{"dam_break_plateau", true, "", 0.0};
  PhysicalParams prm;
  const DamBreakParams dp;
  const double t_end = 45.0;
  const std::size_t n = 6000;
  Scenario sc = make_dam_break(n, PairTag::P1P0, prm, dp);
  RunOutputs out;
  out.keep_reports = false;
  const auto res = run(sc.initial, sc.problem, Integrator::Heun, t_end, out);

  const ShallowWaterRiemann rp(dp.HL, 0.0, dp.HR, 0.0, prm.g);
  const auto star = rp.star();
  const double left_tail = star.u - std::sqrt(prm.g * star.H);
  const double centre = dp.x_d + t_end * 0.5 * (left_tail + rp.right_shock_speed());
  double sum_h = 0.0, sum_u = 0.0;
  std::size_t count = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = sc.problem.mesh.x(i);
    if (std::fabs(x - centre) > 10.0) continue;
    sum_h += res.state.H[i];
    sum_u += velocity(res.state.H[i], res.state.Hu[i], prm.h_eps);
    ++count;
  }
  const double mean_h = sum_h / static_cast<double>(count);
  const double mean_u = sum_u / static_cast<double>(count);
  const double eh = std::fabs(mean_h - star.H) / star.H;
  const double eu = std::fabs(mean_u - star.u) / std::fabs(star.u);
  r.pass = eh <= 0.03 && eu <= 0.03;
  r.detail = std::to_string(n) + " nodes, window [" + fixed(centre - 10.0, 1) + ", " +
             fixed(centre + 10.0, 1) + "]: mean H " + fixed(mean_h, 5) + " vs " +
             fixed(star.H, 5) + " (" + fmt(eh) + "), mean u " + fixed(mean_u, 5) + " vs " +
             fixed(star.u, 5) + " (" + fmt(eu) + "), bound 3%";
  return r;
}

// ---------------------------------------------------------------- 9

Result solver_agreement() {
  Result r{"solver_agreement", true, "", 0.0};
  const double tol = 1e-5;
  PhysicalParams prm;
  prm.tol = tol;
  Scenario sc = make_dingemans(3001, PairTag::P1P0, prm);
  const auto systems = sample_pressure_systems(sc, Integrator::Heun, 40.0, 100);
  const auto rows = compare_solvers(systems, tol, SolverOptions{}, 1);
  std::ostringstream d;
  d << systems.size() << " sampled systems (3001 nodes, t = 40 s): ";
  for (const auto& row : rows) {
    if (!(row.max_disagreement <= 10.0 * tol)) r.pass = false;
    d << to_string(row.method) << " " << fmt(row.max_disagreement) << " ";
  }
  d << "vs bound " << fmt(10.0 * tol);
  r.detail = d.str();
  return r;
}

// ---------------------------------------------------------------- 10

Result heun_order() {
  Result r{"heun_order", true, "", 0.0};
  std::ostringstream d;

  double ode_err = 0.0;
  for (double z : {-0.5, -0.1, 0.03, 0.2, 1.0}) {
    const double y = heun_combine(1.0, [z](double v) { return v + z * v; });
    ode_err = std::max(ode_err, std::fabs(y - (1.0 + z + 0.5 * z * z)));
  }
  const bool ode_ok = ode_err <= 4e-16;
  d << "scalar surrogate error " << fmt(ode_err) << "; ";

  PhysicalParams prm;
  const std::size_t n = 1501;
  const double t_end = 1.0;
  Scenario sc = make_solitary(n, PairTag::P1P0, prm);
  const double dt0 = cfl_dt(sc.initial, sc.problem.mesh, prm);
  const auto k0 = static_cast<std::size_t>(std::ceil(t_end / dt0));
  std::vector<std::vector<double>> H;
  for (int level = 0; level < 5; ++level) {
    StepOptions opt;
    opt.fixed_dt = t_end / static_cast<double>(k0 << level);
    RunOutputs out;
    out.keep_reports = false;
    H.push_back(run(sc.initial, sc.problem, Integrator::Heun, t_end, out, opt).state.H);
  }
  std::vector<double> diff;
  for (std::size_t l = 0; l + 1 < H.size(); ++l) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      s += sc.problem.mesh.dual_width(i) * (H[l][i] - H[l + 1][i]) * (H[l][i] - H[l + 1][i]);
    }
    diff.push_back(std::sqrt(s));
  }
  bool orders_ok = true;
  d << "self-convergence orders";
  for (std::size_t l = 0; l + 1 < diff.size(); ++l) {
    const double p = std::log2(diff[l] / diff[l + 1]);
    orders_ok = orders_ok && p >= 1.7 && p <= 2.2;
    d << " " << fixed(p);
  }
  d << " (N = " << n << ", t = 1 s, dt = T/" << k0 << " .. T/" << (k0 << 4)
    << "), target [1.7, 2.2]";
  r.pass = ode_ok && orders_ok;
  r.detail = d.str();
  return r;
}

// ---------------------------------------------------------------- 11

Result mass_conservation() {
  Result r{"mass_conservation", true, "", 0.0};
  PhysicalParams prm;
  double worst = 0.0;
  double correction = 0.0;
  std::size_t steps = 0;
  for (PairTag pair : kPairs) {
    for (int which = 0; which < 2; ++which) {
      Scenario sc = which == 0 ? make_solitary(603, pair, prm) : make_dam_break(1201, pair, prm);
      const double t_end = which == 0 ? 5.9025 : 10.0;
      const double m0 = total_mass(sc.initial, sc.problem.mesh);
      double prev = m0;
      RunOutputs out;
      out.keep_reports = false;
      out.on_step = [&](const FlowState&, const StepReport& rep) {
        worst = std::max(worst, std::fabs(rep.mass - prev) / m0);
        correction = std::max(correction, std::fabs(rep.correction_mass_change));
        prev = rep.mass;
        ++steps;
      };
      run(sc.initial, sc.problem, Integrator::Heun, t_end, out);
    }
  }
  r.pass = worst <= 1e-12 && correction == 0.0;
  r.detail = std::to_string(steps) + " wall-bounded steps, max relative mass change per step " +
             fmt(worst) + ", correction step mass change " + fmt(correction);
  return r;
}

using Fn = Result (*)();

const std::vector<std::pair<std::string, Fn>>& registry() {
  static const std::vector<std::pair<std::string, Fn>> table = {
      {"convergence_order", convergence_order},
      {"shape_preservation", shape_preservation},
      {"discrete_divergence", discrete_divergence},
      {"operator_duality", operator_duality},
      {"fd_equivalence", fd_equivalence},
      {"schur_spd", schur_spd},
      {"well_balance_positivity", well_balance_positivity},
      {"dam_break_plateau", dam_break_plateau},
      {"solver_agreement", solver_agreement},
      {"heun_order", heun_order},
      {"mass_conservation", mass_conservation},
  };
  return table;
}

}  // namespace

const std::vector<std::string>& criterion_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const auto& [name, fn] : registry()) v.push_back(name);
    return v;
  }();
  return names;
}

Result run_criterion(const std::string& name) {
  for (const auto& [key, fn] : registry()) {
    if (key != name) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Result r;
    try {
      r = fn();
    } catch (const Error& e) {
      r = {name, false, std::string("error: ") + e.what(), 0.0};
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return r;
  }
  throw Error(ErrorCode::InvalidArgument, "unknown criterion '" + name + "'");
}

}  // namespace nhsw::verify
