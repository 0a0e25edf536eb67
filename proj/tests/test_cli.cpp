#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "nhsw/cli.hpp"

using namespace nhsw;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("nhsw_test_cli_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::vector<std::string> config_errors(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.errors();
  }
  return {};
}

bool mentions(const std::vector<std::string>& errs, const std::string& what) {
  for (const auto& e : errs) {
    if (e.find(what) != std::string::npos) return true;
  }
  return false;
}

}  // namespace

TEST_CASE("minimal solitary config gets defaults") {
  const RunConfig c = parse_config("[scenario]\nname = solitary\n[mesh]\nnodes = 603\n");
  CHECK(c.scenario == "solitary");
  CHECK(c.nodes == 603);
  CHECK(c.pair == PairTag::P1P0);
  CHECK(c.integrator == Integrator::Heun);
  CHECK(c.t_end == doctest::Approx(5.9025));
  CHECK(c.output_times == std::vector<double>{0.0, c.t_end});
  CHECK(c.params.g == 9.81);
  CHECK(c.params.cfl == 0.5);
  CHECK(c.params.h_eps == 1e-8);
  CHECK(c.solitary.a == 0.4);
  CHECK(c.solitary_length == 45.0);
  CHECK(c.study_meshes == std::vector<std::size_t>{603, 1023, 2047, 4095, 6495});
}

TEST_CASE("config values and comments") {
  const RunConfig c = parse_config(
      "# comment\n"
      "[scenario]\n"
      "name = dingemans   ; trailing\n"
      "wave_period = 2.5\n"
      "gauges = 11, 12.5\n"
      "[mesh]\nnodes = 491\npair = P1isoP2P1\n"
      "[time]\nintegrator = euler\nt_end = 3\noutput_times = 1, 2\n"
      "[solver]\nmethod = cg\ntol = 1e-6\n"
      "[study]\npairs = P1P0\n");
  CHECK(c.dingemans.wave.period == 2.5);
  CHECK(c.dingemans.wave.depth == c.dingemans.eta0);
  CHECK(c.dingemans.gauges == std::vector<double>{11.0, 12.5});
  CHECK(c.pair == PairTag::P1isoP2P1);
  CHECK(c.integrator == Integrator::Euler);
  CHECK(c.output_times == std::vector<double>{1.0, 2.0});
  CHECK(c.params.method == SolverMethod::ConjugateGradient);
  CHECK(c.params.tol == 1e-6);
  CHECK(c.study_pairs == std::vector<PairTag>{PairTag::P1P0});
}

TEST_CASE("config errors are all reported with line numbers") {
  const auto errs = config_errors(
      "[scenario]\n"
      "name = solitary\n"
      "a = big\n"
      "HL = 2\n"
      "colour = red\n"
      "[mesh]\n"
      "pair = P1isoP2P1\n"
      "nodes = 300\n"
      "nodes = 301\n");
  CHECK(errs.size() >= 5);
  CHECK(mentions(errs, "line 3"));
  CHECK(mentions(errs, "line 4"));
  CHECK(mentions(errs, "line 5"));
  CHECK(mentions(errs, "must be odd for the P1isoP2P1 pair"));
  CHECK(mentions(errs, "duplicate"));
}

TEST_CASE("missing required keys and bad values") {
  CHECK(mentions(config_errors("[scenario]\nname = solitary\n"), "mesh.nodes"));
  CHECK(mentions(config_errors("[mesh]\nnodes = 11\n"), "scenario.name"));
  CHECK_FALSE(config_errors("[scenario]\nname = tsunami\n[mesh]\nnodes = 11\n").empty());
  CHECK_FALSE(config_errors("[scenario]\nname = solitary\n[mesh]\nnodes = 11\n"
                            "[time]\ncfl = 2\n")
                  .empty());
  CHECK_FALSE(config_errors("[scenario]\nname = solitary\n[mesh]\nnodes = -4\n").empty());
  CHECK_FALSE(config_errors("[scenario]\nname = solitary\nnodes = 11\n").empty());
  CHECK_FALSE(config_errors("name = solitary\n").empty());
}

TEST_CASE("snapshot round trip is bit exact") {
  const fs::path dir = scratch("roundtrip");
  const Scenario sc = make_solitary(181, PairTag::P1P0, PhysicalParams{});
  PressureField P;
  P.tag = PairTag::P1P0;
  for (std::size_t k = 0; k + 1 < 181; ++k) P.p.push_back(std::sin(0.1 * k) / 3.0);
  const std::string path = (dir / "snap.csv").string();
  emit_fields(path, sc.problem.mesh, sc.problem.bathy, sc.initial, P, 1e-8);

  std::ifstream in(path);
  std::string header;
  std::getline(in, header);
  CHECK(header == "x,H,u,w,p,zb,eta");

  const CsvTable t = read_csv(path);
  const auto nodal = P.nodal(sc.problem.mesh);
  const auto& mesh = sc.problem.mesh;
  for (std::size_t i = 0; i < mesh.size(); ++i) {
    CHECK(t.column("x")[i] == mesh.x(i));
    CHECK(t.column("H")[i] == sc.initial.H[i]);
    CHECK(t.column("p")[i] == nodal[i]);
    const auto f = solitary_wave(mesh.x(i), 0.0, SolitaryWaveParams{}, 9.81);
    CHECK(t.column("u")[i] == doctest::Approx(f.u).epsilon(1e-14).scale(1.0));
    CHECK(t.column("w")[i] == doctest::Approx(f.w).epsilon(1e-14).scale(1.0));
  }
  CHECK_THROWS_AS(t.column("q"), Error);
  CHECK_THROWS_AS(emit_fields((dir / "missing" / "x.csv").string(), mesh, sc.problem.bathy,
                              sc.initial, P, 1e-8),
                  Error);
}

TEST_CASE("lake at rest snapshot has constant columns") {
  const fs::path dir = scratch("lake");
  const Scenario sc = make_dam_break(101, PairTag::P1P0, PhysicalParams{},
                                     DamBreakParams{1.0, 1.0, 300.0, 1e-4, 600.0, false});
  PressureField P{PairTag::P1P0, std::vector<double>(100, 0.0)};
  const std::string path = (dir / "lake.csv").string();
  emit_fields(path, sc.problem.mesh, sc.problem.bathy, sc.initial, P, 1e-8);
  const CsvTable t = read_csv(path);
  for (const char* c : {"H", "eta"}) {
    for (double v : t.column(c)) CHECK(v == 1.0);
  }
  for (const char* c : {"u", "w", "p", "zb"}) {
    for (double v : t.column(c)) CHECK(v == 0.0);
  }
}

TEST_CASE("gauge csv with measured columns") {
  const fs::path dir = scratch("gauges");
  std::vector<GaugeRecord> g{{1.0, {0.0, 0.5}, {0.4, 0.41}}, {2.0, {0.0, 0.5}, {0.4, 0.39}}};
  MeasuredSeries m{{0.0, 1.0}, {{0.0, 0.02}, {0.0, -0.02}}};
  const std::string path = (dir / "g.csv").string();
  emit_gauges(path, g, &m);
  const CsvTable t = read_csv(path);
  CHECK(t.header == std::vector<std::string>{"t", "eta_1", "eta_2", "measured_1", "measured_2"});
  CHECK(t.column("eta_2")[1] == 0.39);
  CHECK(t.column("measured_1")[1] == doctest::Approx(0.01));
}

TEST_CASE("convergence helpers") {
  const Scenario sc = make_solitary(301, PairTag::P1P0, PhysicalParams{});
  const double e = relative_l2_error(sc.problem.mesh, sc.initial.H,
                                     [&](double x) { return sc.exact_depth(x, 0.0); });
  CHECK(e == 0.0);
  CHECK(convergence_rate(100, 1e-2, 200, 5e-3) == doctest::Approx(1.0));
  std::vector<ConvergenceRow> rows;
  for (std::size_t n : {100u, 200u, 400u}) {
    rows.push_back({PairTag::P1P0, n, 3.0 / std::pow(double(n), 0.9), 0.0});
  }
  rows.push_back({PairTag::P1isoP2P1, 100, 1.0, 0.0});
  CHECK(fitted_rate(rows, PairTag::P1P0) == doctest::Approx(0.9).epsilon(1e-12));
  CHECK(std::isnan(fitted_rate(rows, PairTag::P1isoP2P1)));

  RunConfig c = parse_config("[scenario]\nname = dam_break\n[mesh]\nnodes = 11\n");
  CHECK_THROWS_AS(convergence_study(c), Error);
}

TEST_CASE("short convergence study reports decreasing errors") {
  const fs::path dir = scratch("conv");
  RunConfig c = parse_config(
      "[scenario]\nname = solitary\n[mesh]\nnodes = 101\n[time]\nt_end = 0.5\n"
      "[study]\nmeshes = 151, 301\npairs = P1P0\n");
  const auto rows = convergence_study(c, (dir / "c.csv").string());
  REQUIRE(rows.size() == 2);
  CHECK(rows[1].error < rows[0].error);
  CHECK(std::isnan(rows[0].rate));
  std::ifstream in(dir / "c.csv");
  std::string line;
  std::getline(in, line);
  CHECK(line.rfind("# relative L2 error", 0) == 0);
  std::getline(in, line);
  CHECK(line == "pair,nodes,error,rate");
  std::getline(in, line);
  CHECK(line.rfind("P1P0,151,", 0) == 0);
}

TEST_CASE("bench lists all methods and they agree") {
  const fs::path dir = scratch("bench");
  RunConfig c = parse_config(
      "[scenario]\nname = dingemans\n[mesh]\nnodes = 491\n[time]\nt_end = 1\n"
      "[solver]\ntol = 1e-5\n[study]\nbench_nodes = 245\nbench_repeats = 1\n"
      "bench_sample_stride = 20\n");
  const BenchResult r = bench_solvers(c, (dir / "b.csv").string());
  REQUIRE(r.rows.size() == 3);
  CHECK(r.rows[0].method == SolverMethod::Direct);
  CHECK(r.rows[1].method == SolverMethod::ConjugateGradient);
  CHECK(r.rows[2].method == SolverMethod::Uzawa);
  CHECK(r.agree);
  for (const auto& row : r.rows) CHECK(row.max_disagreement <= 10.0 * 1e-5);
}

TEST_CASE("run_config writes snapshots, steps and gauges deterministically") {
  const fs::path a = scratch("run_a");
  const fs::path b = scratch("run_b");
  const std::string base =
      "[scenario]\nname = dingemans\n[mesh]\nnodes = 245\n"
      "[time]\nt_end = 0.5\noutput_times = 0, 0.25, 0.5\nreport_stride = 5\n[output]\ndir = ";
  const RunSummary ra = run_config(parse_config(base + a.string() + "\n"));
  run_config(parse_config(base + b.string() + "\n"));
  CHECK(ra.t == 0.5);
  CHECK(ra.max_divergence_ratio <= 1.0);
  for (const char* f : {"snapshot_0000.csv", "snapshot_0001.csv", "snapshot_0002.csv",
                        "steps.csv", "gauges.csv"}) {
    REQUIRE(fs::exists(a / f));
    std::ifstream fa(a / f), fb(b / f);
    std::stringstream sa, sb;
    sa << fa.rdbuf();
    sb << fb.rdbuf();
    CHECK(sa.str() == sb.str());
  }
  const CsvTable steps = read_csv((a / "steps.csv").string());
  CHECK(steps.header.front() == "step");
  CHECK(steps.column("t").back() == 0.5);
  const CsvTable gauges = read_csv((a / "gauges.csv").string());
  CHECK(gauges.header.size() == 7);
}
