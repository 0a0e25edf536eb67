#include "nhsw/scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>

namespace nhsw {

double SolitaryWaveParams::l() const { return std::sqrt(H0 * H0 * H0 / a + H0 * H0); }

double SolitaryWaveParams::c0(double g) const {
  const double ll = l();
  return (ll / d) * std::sqrt(g * H0 * H0 * H0 / (ll * ll - H0 * H0));
}

void SolitaryWaveParams::validate() const {
  if (!(a > 0.0) || !(H0 > 0.0) || !(d > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "solitary wave: a, H0 and d must be positive");
  }
}

SolitaryFields solitary_wave(double x, double t, const SolitaryWaveParams& sp, double g) {
  const double l = sp.l();
  const double c0 = sp.c0(g);
  const double xi = (x - sp.x0 - c0 * t) / l;
  const double sech = 1.0 / std::cosh(xi);
  const double th = std::tanh(xi);
  const double dsech = -sech * th;
  const double d2sech = sech * (2.0 * th * th - 1.0);
  const double H = sp.H0 + sp.a * sech * sech;
  const double u = c0 * (1.0 - sp.d / H);
  const double w = -sp.a * c0 * sp.d / (l * H) * sech * dsech;
  const double p = sp.a * c0 * c0 * sp.d * sp.d / (2.0 * l * l * H * H) *
                   ((2.0 * sp.H0 - H) * dsech * dsech + H * sech * d2sech);
  return {H, u, w, p};
}

double dam_break_init(double x, const DamBreakParams& dp) {
  if (!(dp.HL > 0.0) || !(dp.HR > 0.0) || !(dp.eps > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "dam break: depths and eps must be positive");
  }
  const double s = std::tanh((x - dp.x_d) / dp.eps);
  if (dp.printed_amplitude) {
    const double a = dp.HR - dp.HL;
    return (dp.HR + a) - a * s;
  }
  const double a = 0.5 * (dp.HL - dp.HR);
  return 0.5 * (dp.HL + dp.HR) - a * s;
}

double Wavemaker::elevation(double t) const {
  return amplitude * std::sin(2.0 * std::numbers::pi * t / period);
}

double Wavemaker::discharge(double t, double g) const {
  return amplitude * std::sqrt(g / depth) * depth * std::sin(2.0 * std::numbers::pi * t / period);
}

std::vector<GaugeRecord> make_gauges(const std::vector<double>& positions, const Mesh1D& mesh) {
  std::vector<GaugeRecord> out;
  for (double p : positions) {
    if (p < mesh.x().front() || p > mesh.x().back()) {
      std::ostringstream msg;
      msg << "gauge at " << p << " m lies outside the domain";
      throw Error(ErrorCode::InvalidArgument, msg.str());
    }
    out.push_back({p, {}, {}});
  }
  return out;
}

void record_gauges(const FlowState& state, const Mesh1D& mesh, const Bathymetry& bathy,
                   std::vector<GaugeRecord>& gauges) {
  for (auto& g : gauges) {
    if (g.position < mesh.x().front() || g.position > mesh.x().back()) {
      throw Error(ErrorCode::InvalidArgument, "gauge outside the domain");
    }
    if (!g.times.empty() && !(state.t > g.times.back())) {
      throw Error(ErrorCode::InvalidArgument, "gauge times must increase");
    }
    const std::size_t k = mesh.locate(g.position);
    const double s = (g.position - mesh.x(k)) / mesh.element_width(k);
    const double e0 = state.H[k] + bathy.zb(k);
    const double e1 = state.H[k + 1] + bathy.zb(k + 1);
    g.times.push_back(state.t);
    g.eta.push_back(s == 0.0 ? e0 : (s == 1.0 ? e1 : (1.0 - s) * e0 + s * e1));
  }
}

double MeasuredSeries::at(std::size_t sensor, double time) const {
  if (sensor >= eta.size() || t.empty() || time < t.front() || time > t.back()) {
    return std::numeric_limits<double>::quiet_NaN();
  }
  const auto it = std::upper_bound(t.begin(), t.end(), time);
  if (it == t.end()) return eta[sensor].back();
  const std::size_t k = static_cast<std::size_t>(it - t.begin());
  if (k == 0) return eta[sensor].front();
  const double s = (time - t[k - 1]) / (t[k] - t[k - 1]);
  return (1.0 - s) * eta[sensor][k - 1] + s * eta[sensor][k];
}

MeasuredSeries read_measured_series(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open measured data file '" + path + "'");
  MeasuredSeries ms;
  std::string line;
  std::size_t lineno = 0;
  std::size_t cols = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto h = line.find('#'); h != std::string::npos) line.erase(h);
    std::replace_if(line.begin(), line.end(),
                    [](char c) { return c == ',' || c == ';' || c == '\t'; }, ' ');
    std::istringstream ls(line);
    std::vector<double> row;
    std::string tok;
    while (ls >> tok) {
      try {
        std::size_t used = 0;
        row.push_back(std::stod(tok, &used));
        if (used != tok.size()) throw std::invalid_argument(tok);
      } catch (const std::exception&) {
        if (ms.t.empty() && row.empty()) {
          row.clear();
          break;  // header line
        }
        throw Error(ErrorCode::Io, path + ":" + std::to_string(lineno) + ": bad number '" +
                                       tok + "'");
      }
    }
    if (row.empty()) continue;
    if (cols == 0) {
      if (row.size() < 2) throw Error(ErrorCode::Io, path + ": need a time and one sensor");
      cols = row.size();
      ms.eta.assign(cols - 1, {});
    }
    if (row.size() != cols) {
      throw Error(ErrorCode::Io, path + ":" + std::to_string(lineno) + ": expected " +
                                     std::to_string(cols) + " columns");
    }
    if (!ms.t.empty() && !(row[0] > ms.t.back())) {
      throw Error(ErrorCode::Io, path + ":" + std::to_string(lineno) + ": time must increase");
    }
    ms.t.push_back(row[0]);
    for (std::size_t c = 1; c < cols; ++c) ms.eta[c - 1].push_back(row[c]);
  }
  return ms;
}

ScenarioSetup solitary_init(const Mesh1D& mesh, const SolitaryWaveParams& sp, double g,
                            double h_eps) {
  sp.validate();
  ScenarioSetup s{Bathymetry::flat(mesh), FlowState(mesh.size()), {}, {}};
  for (std::size_t i = 0; i < mesh.size(); ++i) {
    const auto f = solitary_wave(mesh.x(i), 0.0, sp, g);
    s.state.H[i] = f.H;
    s.state.Hu[i] = f.H >= h_eps ? f.H * f.u : 0.0;
    s.state.Hw[i] = f.H >= h_eps ? f.H * f.w : 0.0;
  }
  s.boundaries = [](double) { return Boundaries{}; };
  return s;
}

ScenarioSetup dam_break_setup(const Mesh1D& mesh, const DamBreakParams& dp) {
  ScenarioSetup s{Bathymetry::flat(mesh), FlowState(mesh.size()), {}, {}};
  for (std::size_t i = 0; i < mesh.size(); ++i) {
    const double H = dam_break_init(mesh.x(i), dp);
    if (H < 0.0) {
      throw Error(ErrorCode::InvalidArgument, "dam break: initial depth is negative");
    }
    s.state.H[i] = H;
  }
  s.boundaries = [](double) { return Boundaries{}; };
  return s;
}

double beach_bottom(double x, const BeachParams& bp) {
  if (x <= bp.flat_until) return 0.0;
  return bp.crest_height * (x - bp.flat_until) / (bp.length - bp.flat_until);
}

ScenarioSetup beach_init(const Mesh1D& mesh, const BeachParams& bp, double g) {
  if (std::fabs(mesh.length() - bp.length) > 1e-9 * bp.length) {
    throw Error(ErrorCode::InvalidArgument, "beach: mesh does not span the beach domain");
  }
  std::vector<double> zb(mesh.size());
  for (std::size_t i = 0; i < mesh.size(); ++i) zb[i] = beach_bottom(mesh.x(i) - mesh.x(0), bp);
  ScenarioSetup s{Bathymetry(mesh, zb), FlowState(mesh.size()), {}, {}};
  for (std::size_t i = 0; i < mesh.size(); ++i) s.state.H[i] = std::max(bp.H0 - zb[i], 0.0);
  const Wavemaker wave = bp.wave;
  s.boundaries = [wave, g](double t) {
    Boundaries b;
    b.in = {HyperbolicBC::imposed_flux(wave.discharge(t, g), 0.0),
            PressureBC::dirichlet(Side::In, 0.0)};
    return b;
  };
  return s;
}

double dingemans_bottom(double x, const DingemansParams& dp) {
  const double top = dp.eta0 - dp.crest_depth;
  const double up_end = dp.toe + top / dp.up_slope;
  const double crest_end = up_end + dp.crest_length;
  const double down_end = crest_end + top / dp.down_slope;
  if (x <= dp.toe) return 0.0;
  if (x <= up_end) return dp.up_slope * (x - dp.toe);
  if (x <= crest_end) return top;
  if (x <= down_end) return top - dp.down_slope * (x - crest_end);
  return 0.0;
}

ScenarioSetup dingemans_init(const Mesh1D& mesh, const DingemansParams& dp, double g) {
  if (std::fabs(mesh.length() - dp.length) > 1e-9 * dp.length) {
    throw Error(ErrorCode::InvalidArgument, "dingemans: mesh does not span the flume");
  }
  if (!(dp.crest_depth > 0.0) || !(dp.crest_depth < dp.eta0)) {
    throw Error(ErrorCode::InvalidArgument, "dingemans: crest depth must lie in (0, eta0)");
  }
  std::vector<double> zb(mesh.size());
  for (std::size_t i = 0; i < mesh.size(); ++i) {
    zb[i] = dingemans_bottom(mesh.x(i) - mesh.x(0), dp);
  }
  ScenarioSetup s{Bathymetry(mesh, zb), FlowState(mesh.size()), {}, dp.gauges};
  for (std::size_t i = 0; i < mesh.size(); ++i) s.state.H[i] = dp.eta0 - zb[i];
  const Wavemaker wave = dp.wave;
  s.boundaries = [wave, g](double t) {
    Boundaries b;
    b.in = {HyperbolicBC::imposed_flux(wave.discharge(t, g), 0.0),
            PressureBC::dirichlet(Side::In, 0.0)};
    b.out = {HyperbolicBC::free_outflow(), PressureBC::neumann(Side::Out)};
    return b;
  };
  make_gauges(dp.gauges, mesh);
  return s;
}

namespace {

Scenario assemble_scenario(std::string name, Mesh1D mesh, ScenarioSetup setup, PairTag pair,
                           const PhysicalParams& prm) {
  prm.validate();
  ElementPair::make(pair, mesh);
  Scenario sc{std::move(name),
              Problem{std::move(mesh), std::move(setup.bathy), prm, pair, setup.boundaries},
              std::move(setup.state),
              std::move(setup.gauges),
              {}};
  return sc;
}

}  // namespace

Scenario make_solitary(std::size_t n_nodes, PairTag pair, const PhysicalParams& prm,
                       const SolitaryWaveParams& sp, double length) {
  Mesh1D mesh = Mesh1D::uniform(0.0, length, n_nodes);
  auto setup = solitary_init(mesh, sp, prm.g, prm.h_eps);
  Scenario sc = assemble_scenario("solitary", std::move(mesh), std::move(setup), pair, prm);
  const double g = prm.g;
  sc.exact_depth = [sp, g](double x, double t) { return solitary_wave(x, t, sp, g).H; };
  return sc;
}

Scenario make_dam_break(std::size_t n_nodes, PairTag pair, const PhysicalParams& prm,
                        const DamBreakParams& dp) {
  Mesh1D mesh = Mesh1D::uniform(0.0, dp.length, n_nodes);
  auto setup = dam_break_setup(mesh, dp);
  return assemble_scenario("dam_break", std::move(mesh), std::move(setup), pair, prm);
}

Scenario make_beach(std::size_t n_nodes, PairTag pair, const PhysicalParams& prm,
                    const BeachParams& bp) {
  Mesh1D mesh = Mesh1D::uniform(0.0, bp.length, n_nodes);
  auto setup = beach_init(mesh, bp, prm.g);
  return assemble_scenario("beach", std::move(mesh), std::move(setup), pair, prm);
}

Scenario make_dingemans(std::size_t n_nodes, PairTag pair, const PhysicalParams& prm,
                        const DingemansParams& dp) {
  Mesh1D mesh = Mesh1D::uniform(0.0, dp.length, n_nodes);
  auto setup = dingemans_init(mesh, dp, prm.g);
  return assemble_scenario("dingemans", std::move(mesh), std::move(setup), pair, prm);
}

}  // namespace nhsw
