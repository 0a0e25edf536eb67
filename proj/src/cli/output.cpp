#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <memory>
#include <sstream>

#include "nhsw/cli.hpp"

namespace nhsw {
namespace {

struct FileCloser {
  void operator()(std::FILE* f) const { std::fclose(f); }
};
using File = std::unique_ptr<std::FILE, FileCloser>;

File open_for_write(const std::string& path) {
  File f(std::fopen(path.c_str(), "w"));
  if (!f) throw Error(ErrorCode::Io, "cannot write '" + path + "'");
  return f;
}

void finish(File& f, const std::string& path) {
  if (std::ferror(f.get()) != 0 || std::fclose(f.release()) != 0) {
    throw Error(ErrorCode::Io, "error while writing '" + path + "'");
  }
}

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir)) {
    throw Error(ErrorCode::Io, "cannot create output directory '" + dir + "'");
  }
}

}  // namespace

void emit_fields(const std::string& path, const Mesh1D& mesh, const Bathymetry& bathy,
                 const FlowState& state, const PressureField& pressure, double h_eps) {
  state.check_consistent(mesh.size());
  std::vector<double> p(mesh.size(), 0.0);
  if (!pressure.p.empty()) p = pressure.nodal(mesh);
  File f = open_for_write(path);
  std::fprintf(f.get(), "x,H,u,w,p,zb,eta\n");
  for (std::size_t i = 0; i < mesh.size(); ++i) {
    const double H = state.H[i];
    std::fprintf(f.get(), "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", mesh.x(i), H,
                 velocity(H, state.Hu[i], h_eps), velocity(H, state.Hw[i], h_eps), p[i],
                 bathy.zb(i), H + bathy.zb(i));
  }
  finish(f, path);
}

const std::vector<double>& CsvTable::column(const std::string& name) const {
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (header[c] == name) return columns[c];
  }
  throw Error(ErrorCode::InvalidArgument, "no column '" + name + "'");
}

CsvTable read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open '" + path + "'");
  CsvTable t;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string cell;
    if (t.header.empty()) {
      while (std::getline(ls, cell, ',')) t.header.push_back(cell);
      t.columns.resize(t.header.size());
      continue;
    }
    std::size_t c = 0;
    while (std::getline(ls, cell, ',')) {
      if (c >= t.columns.size()) break;
      char* end = nullptr;
      const double v = std::strtod(cell.c_str(), &end);
      if (end == cell.c_str()) {
        throw Error(ErrorCode::Io, path + ":" + std::to_string(lineno) + ": bad number");
      }
      t.columns[c++].push_back(v);
    }
    if (c != t.columns.size()) {
      throw Error(ErrorCode::Io, path + ":" + std::to_string(lineno) + ": wrong column count");
    }
  }
  return t;
}

void emit_gauges(const std::string& path, const std::vector<GaugeRecord>& gauges,
                 const MeasuredSeries* measured) {
  File f = open_for_write(path);
  std::fprintf(f.get(), "t");
  for (std::size_t k = 0; k < gauges.size(); ++k) std::fprintf(f.get(), ",eta_%zu", k + 1);
  const std::size_t n_meas = measured ? std::min(measured->eta.size(), gauges.size()) : 0;
  for (std::size_t k = 0; k < n_meas; ++k) std::fprintf(f.get(), ",measured_%zu", k + 1);
  std::fprintf(f.get(), "\n");
  const std::size_t n_samples = gauges.empty() ? 0 : gauges.front().times.size();
  for (std::size_t s = 0; s < n_samples; ++s) {
    const double t = gauges.front().times[s];
    std::fprintf(f.get(), "%.17g", t);
    for (const auto& g : gauges) std::fprintf(f.get(), ",%.17g", g.eta[s]);
    for (std::size_t k = 0; k < n_meas; ++k) {
      std::fprintf(f.get(), ",%.17g", measured->at(k, t));
    }
    std::fprintf(f.get(), "\n");
  }
  finish(f, path);
}

RunSummary run_config(const RunConfig& cfg) {
  Scenario sc = make_scenario(cfg);
  const std::string dir = resolve_output_dir(cfg);
  ensure_dir(dir);
  const auto& pb = sc.problem;

  std::optional<MeasuredSeries> measured;
  if (cfg.measured) measured = read_measured_series(*cfg.measured);

  RunSummary summary;
  summary.mass_initial = total_mass(sc.initial, pb.mesh);
  auto gauges = make_gauges(sc.gauges, pb.mesh);
  if (!gauges.empty()) record_gauges(sc.initial, pb.mesh, pb.bathy, gauges);

  const std::string log_path = dir + "/steps.csv";
  File log = open_for_write(log_path);
  std::fprintf(log.get(), "step,t,dt,mass,energy,divergence,divergence_bound,iterations\n");
  std::size_t step = 0;

  RunOutputs out;
  out.times = cfg.output_times;
  out.keep_reports = false;
  std::size_t snap = 0;
  out.on_snapshot = [&](const FlowState& s, const PressureField& p) {
    char name[64];
    std::snprintf(name, sizeof name, "/snapshot_%04zu.csv", snap++);
    emit_fields(dir + name, pb.mesh, pb.bathy, s, p, pb.params.h_eps);
    summary.files.push_back(dir + name);
  };
  out.step_stride = 1;
  out.on_step = [&](const FlowState& s, const StepReport& r) {
    ++step;
    if (r.divergence_bound > 0.0) {
      summary.max_divergence_ratio =
          std::max(summary.max_divergence_ratio, r.divergence / r.divergence_bound);
    }
    const bool last = !(s.t < cfg.t_end - 1e-12 * std::max(1.0, cfg.t_end));
    if (step % cfg.report_stride != 0 && !last) return;
    std::fprintf(log.get(), "%zu,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%zu\n", step, r.t, r.dt,
                 r.mass, r.energy, r.divergence, r.divergence_bound, r.iterations);
    if (!gauges.empty()) record_gauges(s, pb.mesh, pb.bathy, gauges);
  };

  StepOptions opt;
  opt.solver.stop_factor = cfg.stop_factor;
  RunResult res = run(sc.initial, pb, cfg.integrator, cfg.t_end, out, opt);
  finish(log, log_path);
  summary.files.push_back(log_path);

  if (!gauges.empty()) {
    const std::string gpath = dir + "/gauges.csv";
    emit_gauges(gpath, gauges, measured ? &*measured : nullptr);
    summary.files.push_back(gpath);
  }
  summary.steps = res.steps;
  summary.t = res.state.t;
  summary.mass_final = total_mass(res.state, pb.mesh);
  return summary;
}

}  // namespace nhsw
