#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>

#include "nhsw/cli.hpp"

namespace nhsw {
namespace {

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

double relative_difference(const SchurSystem& sys, const std::vector<double>& p,
                           const std::vector<double>& ref) {
  double num = 0.0;
  double den = 0.0;
  for (std::size_t l = 0; l < ref.size(); ++l) {
    if (sys.pinned[l]) continue;
    num += (p[l] - ref[l]) * (p[l] - ref[l]);
    den += ref[l] * ref[l];
  }
  return std::sqrt(num) / std::max(std::sqrt(den), 1e-9);
}

}  // namespace

double relative_l2_error(const Mesh1D& mesh, std::span<const double> H,
                         const std::function<double(double)>& exact) {
  if (H.size() != mesh.size()) throw Error(ErrorCode::SizeMismatch, "relative_l2_error");
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < mesh.size(); ++i) {
    const double e = exact(mesh.x(i));
    num += mesh.dual_width(i) * (H[i] - e) * (H[i] - e);
    den += mesh.dual_width(i) * e * e;
  }
  if (!(den > 0.0)) throw Error(ErrorCode::InvalidArgument, "exact solution has zero norm");
  return std::sqrt(num / den);
}

double convergence_rate(std::size_t n0, double e0, std::size_t n1, double e1) {
  return std::log(e0 / e1) / std::log(static_cast<double>(n1) / static_cast<double>(n0));
}

double fitted_rate(const std::vector<ConvergenceRow>& rows, PairTag pair) {
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  std::size_t n = 0;
  for (const auto& r : rows) {
    if (r.pair != pair) continue;
    const double x = std::log(static_cast<double>(r.nodes));
    const double y = -std::log(r.error);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++n;
  }
  if (n < 2) return std::numeric_limits<double>::quiet_NaN();
  const double m = static_cast<double>(n);
  return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

std::vector<ConvergenceRow> convergence_study(const RunConfig& cfg, const std::string& csv_path) {
  if (cfg.scenario != "solitary") {
    throw Error(ErrorCode::InvalidArgument,
                "convergence study needs an exact solution; scenario '" + cfg.scenario +
                    "' has none");
  }
  StepOptions opt;
  opt.solver.stop_factor = cfg.stop_factor;
  RunOutputs out;
  out.keep_reports = false;
  std::vector<ConvergenceRow> rows;
  for (PairTag pair : cfg.study_pairs) {
    for (std::size_t k = 0; k < cfg.study_meshes.size(); ++k) {
      const std::size_t n = cfg.study_meshes[k];
      Scenario sc = make_scenario(cfg, n, pair);
      const RunResult res = run(sc.initial, sc.problem, cfg.integrator, cfg.t_end, out, opt);
      const double t = res.state.t;
      const double err = relative_l2_error(sc.problem.mesh, res.state.H,
                                           [&](double x) { return sc.exact_depth(x, t); });
      double rate = std::numeric_limits<double>::quiet_NaN();
      if (k > 0) rate = convergence_rate(rows.back().nodes, rows.back().error, n, err);
      rows.push_back({pair, n, err, rate});
    }
  }
  if (!csv_path.empty()) {
    std::FILE* f = std::fopen(csv_path.c_str(), "w");
    if (f == nullptr) throw Error(ErrorCode::Io, "cannot write '" + csv_path + "'");
    std::fprintf(f, "# relative L2 error of H at t = %.17g, integrator %s\n", cfg.t_end,
                 to_string(cfg.integrator).c_str());
    std::fprintf(f, "pair,nodes,error,rate\n");
    for (const auto& r : rows) {
      std::fprintf(f, "%s,%zu,%.17g,%.17g\n", to_string(r.pair).c_str(), r.nodes, r.error,
                   r.rate);
    }
    for (PairTag pair : cfg.study_pairs) {
      std::fprintf(f, "# fitted rate %s %.6f\n", to_string(pair).c_str(),
                   fitted_rate(rows, pair));
    }
    if (std::fclose(f) != 0) throw Error(ErrorCode::Io, "error writing '" + csv_path + "'");
  }
  return rows;
}

std::vector<SchurSystem> sample_pressure_systems(const Scenario& sc, Integrator integrator,
                                                 double t_end, std::size_t stride) {
  const std::size_t substeps = integrator == Integrator::Heun ? 2 : 1;
  std::vector<SchurSystem> out;
  std::size_t solves = 0;
  StepOptions opt;
  opt.inspect = [&](const SchurSystem& sys, const PressureField&) {
    if (solves++ % (stride * substeps) == 0) out.push_back(sys);
  };
  RunOutputs ro;
  ro.keep_reports = false;
  Problem pb = sc.problem;
  pb.params.method = SolverMethod::Direct;
  run(sc.initial, pb, integrator, t_end, ro, opt);
  return out;
}

std::vector<SolverTiming> compare_solvers(const std::vector<SchurSystem>& systems, double tol,
                                          const SolverOptions& opt, std::size_t repeats) {
  using clock = std::chrono::steady_clock;
  std::vector<std::vector<double>> reference;
  reference.reserve(systems.size());
  for (const auto& s : systems) {
    SchurSystem d = s;
    d.method = SolverMethod::Direct;
    reference.push_back(solve_pressure(d, opt).p);
  }
  std::vector<SolverTiming> out;
  for (SolverMethod m :
       {SolverMethod::Direct, SolverMethod::ConjugateGradient, SolverMethod::Uzawa}) {
    SolverTiming row{m, 0.0, 0.0, 0.0};
    std::vector<double> per_solve;
    for (std::size_t r = 0; r < std::max<std::size_t>(1, repeats); ++r) {
      double elapsed = 0.0;
      std::size_t iterations = 0;
      for (std::size_t k = 0; k < systems.size(); ++k) {
        SchurSystem s = systems[k];
        s.method = m;
        s.tol = tol;
        const auto t0 = clock::now();
        const PressureField P = solve_pressure(s, opt);
        elapsed += std::chrono::duration<double>(clock::now() - t0).count();
        iterations += P.iterations;
        if (r == 0) {
          row.max_disagreement =
              std::max(row.max_disagreement, relative_difference(s, P.p, reference[k]));
        }
      }
      per_solve.push_back(systems.empty() ? 0.0 : elapsed / static_cast<double>(systems.size()));
      row.mean_iterations =
          systems.empty() ? 0.0
                          : static_cast<double>(iterations) / static_cast<double>(systems.size());
    }
    row.median_seconds = median(per_solve);
    out.push_back(row);
  }
  return out;
}

BenchResult bench_solvers(const RunConfig& cfg, const std::string& csv_path) {
  BenchResult res;
  res.tol = cfg.params.tol;
  SolverOptions opt;
  opt.stop_factor = cfg.stop_factor;
  for (std::size_t n : cfg.bench_nodes) {
    const Scenario sc = make_scenario(cfg, n, cfg.pair);
    const auto systems =
        sample_pressure_systems(sc, cfg.integrator, cfg.t_end, cfg.bench_sample_stride);
    for (const auto& t : compare_solvers(systems, cfg.params.tol, opt, cfg.bench_repeats)) {
      res.rows.push_back(
          {t.method, n, systems.size(), t.median_seconds, t.mean_iterations, t.max_disagreement});
      if (!(t.max_disagreement <= 10.0 * cfg.params.tol)) res.agree = false;
    }
  }
  if (!csv_path.empty()) {
    std::FILE* f = std::fopen(csv_path.c_str(), "w");
    if (f == nullptr) throw Error(ErrorCode::Io, "cannot write '" + csv_path + "'");
    std::fprintf(f, "# tol = %.3g, median of %zu repeats\n", res.tol, cfg.bench_repeats);
    std::fprintf(f, "method,nodes,solves,median_seconds,mean_iterations,max_disagreement\n");
    for (const auto& r : res.rows) {
      std::fprintf(f, "%s,%zu,%zu,%.6e,%.3f,%.6e\n", to_string(r.method).c_str(), r.nodes,
                   r.solves, r.median_seconds, r.mean_iterations, r.max_disagreement);
    }
    if (std::fclose(f) != 0) throw Error(ErrorCode::Io, "error writing '" + csv_path + "'");
  }
  return res;
}

}  // namespace nhsw
