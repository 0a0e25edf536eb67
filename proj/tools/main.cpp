#include <cmath>
#include <cstdio>
#include <filesystem>
#include <string>

#include "CLI11.hpp"
#include "nhsw/cli.hpp"
#include "nhsw/kernels.hpp"
#include "nhsw/verify.hpp"

namespace {

using namespace nhsw;

int cmd_run(const std::string& path) {
  const RunConfig cfg = load_config(path);
  const RunSummary s = run_config(cfg);
  std::printf("%s: %zu steps to t = %.6g, mass %.17g -> %.17g, max divergence/bound %.3e\n",
              cfg.scenario.c_str(), s.steps, s.t, s.mass_initial, s.mass_final,
              s.max_divergence_ratio);
  for (const auto& f : s.files) std::printf("  wrote %s\n", f.c_str());
  return 0;
}

int cmd_convergence(const std::string& path) {
  const RunConfig cfg = load_config(path);
  const std::string dir = resolve_output_dir(cfg);
  std::filesystem::create_directories(dir);
  const std::string csv = dir + "/convergence.csv";
  const auto rows = convergence_study(cfg, csv);
  std::printf("%-10s %8s %14s %8s\n", "pair", "nodes", "rel L2 error", "rate");
  for (const auto& r : rows) {
    std::printf("%-10s %8zu %14.6e %8.3f\n", to_string(r.pair).c_str(), r.nodes, r.error, r.rate);
  }
  bool ok = true;
  for (PairTag pair : cfg.study_pairs) {
    const double rate = fitted_rate(rows, pair);
    const bool pass = rate >= 0.8 && rate <= 1.2;
    ok = ok && pass;
    std::printf("%s fitted rate %s: %.3f\n", pass ? "PASS" : "FAIL", to_string(pair).c_str(), rate);
  }
  std::printf("wrote %s\n", csv.c_str());
  return ok ? 0 : 1;
}

int cmd_bench(const std::string& path) {
  const RunConfig cfg = load_config(path);
  const std::string dir = resolve_output_dir(cfg);
  std::filesystem::create_directories(dir);
  const std::string csv = dir + "/bench.csv";
  const BenchResult res = bench_solvers(cfg, csv);
  std::printf("%-7s %8s %7s %14s %10s %14s\n", "method", "nodes", "solves", "median s/solve",
              "mean iter", "disagreement");
  for (const auto& r : res.rows) {
    std::printf("%-7s %8zu %7zu %14.4e %10.1f %14.4e\n", to_string(r.method).c_str(), r.nodes,
                r.solves, r.median_seconds, r.mean_iterations, r.max_disagreement);
  }
  std::printf("%s agreement within 10 tol = %.1e\n", res.agree ? "PASS" : "FAIL",
              10.0 * res.tol);
  std::printf("wrote %s\n", csv.c_str());
  return res.agree ? 0 : 1;
}

int cmd_verify(const std::string& which) {
  std::vector<std::string> names;
  if (which == "all") {
    names = verify::criterion_names();
  } else {
    names.push_back(which);
  }
  std::size_t failed = 0;
  for (const auto& name : names) {
    const auto r = verify::run_criterion(name);
    if (!r.pass) ++failed;
    std::printf("%s %s (%.1f s): %s\n", r.pass ? "PASS" : "FAIL", r.name.c_str(), r.seconds,
                r.detail.c_str());
    std::fflush(stdout);
  }
  if (names.size() > 1) std::printf("%zu/%zu passed\n", names.size() - failed, names.size());
  return failed == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Non-hydrostatic shallow water solver"};
  app.require_subcommand(1);
  std::string simd = "auto";
  app.add_option("--simd", simd, "Kernel variant: auto, scalar or avx2")
      ->check(CLI::IsMember({"auto", "scalar", "avx2"}));

  std::string config;
  std::string criterion;
  auto* run = app.add_subcommand("run", "Run a scenario and write CSV output");
  run->add_option("config", config, "Configuration file")->required();
  auto* conv = app.add_subcommand("convergence", "Solitary wave mesh convergence study");
  conv->add_option("config", config, "Configuration file")->required();
  auto* bench = app.add_subcommand("bench", "Time the pressure solvers");
  bench->add_option("config", config, "Configuration file")->required();
  auto* ver = app.add_subcommand("verify", "Run an acceptance criterion");
  ver->add_option("criterion", criterion, "Criterion name or 'all'")->required();

  CLI11_PARSE(app, argc, argv);

  if (simd == "scalar") {
    kernels::set_isa(kernels::Isa::Scalar);
  } else if (simd == "avx2" && !kernels::set_isa(kernels::Isa::Avx2)) {
    std::fprintf(stderr, "error: avx2 kernels are not available on this machine\n");
    return 2;
  }

  try {
    if (*run) return cmd_run(config);
    if (*conv) return cmd_convergence(config);
    if (*bench) return cmd_bench(config);
    if (*ver) return cmd_verify(criterion);
  } catch (const nhsw::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 2;
}
