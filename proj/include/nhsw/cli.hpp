#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "nhsw/scenarios.hpp"
#include "nhsw/timeloop.hpp"

namespace nhsw {

// ---------------------------------------------------------------- configuration

/// Validated run configuration. See README.md for the grammar.
struct RunConfig {
  std::string scenario;
  SolitaryWaveParams solitary;
  double solitary_length = 45.0;
  DamBreakParams dam_break;
  BeachParams beach;
  DingemansParams dingemans;
  std::optional<std::string> measured;  // measured gauge file (dingemans)

  std::size_t nodes = 0;
  PairTag pair = PairTag::P1P0;

  Integrator integrator = Integrator::Heun;
  double t_end = 0.0;
  std::vector<double> output_times;
  std::size_t report_stride = 1;

  PhysicalParams params;
  double stop_factor = 0.1;

  std::string output_dir = "output";

  std::vector<std::size_t> study_meshes{603, 1023, 2047, 4095, 6495};
  std::vector<PairTag> study_pairs{PairTag::P1P0, PairTag::P1isoP2P1};
  std::vector<std::size_t> bench_nodes;
  std::size_t bench_repeats = 5;
  std::size_t bench_sample_stride = 100;
};

/// Every problem found in a config, each prefixed with its line number.
class ConfigError : public Error {
 public:
  explicit ConfigError(std::vector<std::string> errors);
  const std::vector<std::string>& errors() const noexcept { return errors_; }

 private:
  std::vector<std::string> errors_;
};

RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

/// Scenario described by the config, on its mesh size and pair.
Scenario make_scenario(const RunConfig& cfg);
Scenario make_scenario(const RunConfig& cfg, std::size_t nodes, PairTag pair);

/// Output directory: NHSW_OUTPUT_DIR when set, otherwise the config value.
std::string resolve_output_dir(const RunConfig& cfg);

// ---------------------------------------------------------------- CSV output

/// Writes `x,H,u,w,p,zb,eta` with 17 significant digits.
void emit_fields(const std::string& path, const Mesh1D& mesh, const Bathymetry& bathy,
                 const FlowState& state, const PressureField& pressure, double h_eps);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> columns;

  const std::vector<double>& column(const std::string& name) const;
};

CsvTable read_csv(const std::string& path);

/// `t,eta_1..eta_k`, followed by `measured_1..measured_k` when a series is given.
void emit_gauges(const std::string& path, const std::vector<GaugeRecord>& gauges,
                 const MeasuredSeries* measured);

struct RunSummary {
  std::size_t steps = 0;
  double t = 0.0;
  double mass_initial = 0.0;
  double mass_final = 0.0;
  double max_divergence_ratio = 0.0;  // max over steps of divergence / bound
  std::vector<std::string> files;
};

/// Runs the configured scenario and writes snapshots, gauges and a step log.
RunSummary run_config(const RunConfig& cfg);

// ---------------------------------------------------------------- studies

struct ConvergenceRow {
  PairTag pair;
  std::size_t nodes;
  double error;
  double rate;  // NaN on the coarsest mesh
};

/// sqrt(sum dx (H - He)^2) / sqrt(sum dx He^2) at the nodes.
double relative_l2_error(const Mesh1D& mesh, std::span<const double> H,
                         const std::function<double(double)>& exact);

double convergence_rate(std::size_t n0, double e0, std::size_t n1, double e1);
/// Least-squares slope of -log(error) against log(N) over the rows of one pair.
double fitted_rate(const std::vector<ConvergenceRow>& rows, PairTag pair);

std::vector<ConvergenceRow> convergence_study(const RunConfig& cfg,
                                              const std::string& csv_path = "");

/// Pressure systems of every `stride`-th step of a run with the direct solver.
std::vector<SchurSystem> sample_pressure_systems(const Scenario& sc, Integrator integrator,
                                                 double t_end, std::size_t stride);

struct SolverTiming {
  SolverMethod method;
  double median_seconds;    // per solve, median over repeats
  double mean_iterations;
  double max_disagreement;  // relative L2 against the direct solution
};

/// Solves every system with each method at `tol` and compares to the direct solution.
std::vector<SolverTiming> compare_solvers(const std::vector<SchurSystem>& systems, double tol,
                                          const SolverOptions& opt, std::size_t repeats);

struct BenchRow {
  SolverMethod method;
  std::size_t nodes;
  std::size_t solves;
  double median_seconds;       // per pressure solve
  double mean_iterations;
  double max_disagreement;     // relative L2 against the direct solution
};

struct BenchResult {
  std::vector<BenchRow> rows;
  double tol = 0.0;
  bool agree = true;  // every method within 10 tol of the direct solution
};

/// Times the three solvers on the pressure systems sampled every
/// `bench_sample_stride` steps of the configured run.
BenchResult bench_solvers(const RunConfig& cfg, const std::string& csv_path = "");

}  // namespace nhsw
