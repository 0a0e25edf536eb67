#pragma once

#include <functional>
#include <string>
#include <vector>

#include "nhsw/core.hpp"
#include "nhsw/timeloop.hpp"

namespace nhsw {

// ---------------------------------------------------------------- solitary wave

struct SolitaryWaveParams {
  double a = 0.4;    // amplitude (m)
  double H0 = 1.0;   // reference depth (m)
  double d = 1.0;    // scale depth (m)
  double x0 = 12.0;  // crest position at t = 0 (m)

  double l() const;
  /// Speed with H read as H0: (l/d) sqrt(g H0^3 / (l^2 - H0^2)).
  double c0(double g) const;
  void validate() const;
};

struct SolitaryFields {
  double H;
  double u;
  double w;
  double p;
};

/// Fields at (x, t); the crest sits at x0 + c0 t.
SolitaryFields solitary_wave(double x, double t, const SolitaryWaveParams& sp, double g);

// ---------------------------------------------------------------- dam break

struct DamBreakParams {
  double HL = 1.8;
  double HR = 1.0;
  double x_d = 300.0;
  double eps = 1e-4;
  double length = 600.0;
  /// Printed variant H = (HR + a) - a tanh(.), a = HR - HL (left limit 3HR - 2HL).
  bool printed_amplitude = false;
};

double dam_break_init(double x, const DamBreakParams& dp);

struct RiemannStar {
  double H;
  double u;
};

/// Exact two-wave solution of the shallow water Riemann problem.
class ShallowWaterRiemann {
 public:
  ShallowWaterRiemann(double HL, double uL, double HR, double uR, double g);

  RiemannStar star() const noexcept { return star_; }
  /// State on the ray x/t = xi.
  RiemannStar sample(double xi) const;

  bool left_is_shock() const noexcept { return star_.H > HL_; }
  bool right_is_shock() const noexcept { return star_.H > HR_; }
  /// Shock speed of the left/right wave (only meaningful when it is a shock).
  double left_shock_speed() const;
  double right_shock_speed() const;
  std::size_t iterations() const noexcept { return iterations_; }

 private:
  double HL_, uL_, HR_, uR_, g_;
  RiemannStar star_{};
  std::size_t iterations_ = 0;
};

RiemannStar exact_sw_riemann(double HL, double uL, double HR, double uR, double g);

// ---------------------------------------------------------------- wavemaker

struct Wavemaker {
  double amplitude = 0.02;  // surface amplitude A (m)
  double period = 2.02;     // T (s)
  double depth = 0.4;       // still-water depth at the paddle (m)

  /// A sin(2 pi t / T), the surface elevation above eta0.
  double elevation(double t) const;
  /// Linear long-wave discharge A sqrt(g / H0) H0 sin(2 pi t / T).
  double discharge(double t, double g) const;
};

// ---------------------------------------------------------------- gauges

struct GaugeRecord {
  double position = 0.0;
  std::vector<double> times;
  std::vector<double> eta;
};

std::vector<GaugeRecord> make_gauges(const std::vector<double>& positions, const Mesh1D& mesh);

/// Appends eta = H + z_b interpolated linearly at every gauge.
void record_gauges(const FlowState& state, const Mesh1D& mesh, const Bathymetry& bathy,
                   std::vector<GaugeRecord>& gauges);

/// Measured series: column 0 is time, the rest are per-sensor elevations.
struct MeasuredSeries {
  std::vector<double> t;
  std::vector<std::vector<double>> eta;  // [sensor][sample]

  /// Linear interpolation in time; NaN outside the measured window.
  double at(std::size_t sensor, double time) const;
};

/// Comma, semicolon, tab or space separated; '#' starts a comment.
MeasuredSeries read_measured_series(const std::string& path);

// ---------------------------------------------------------------- scenarios

struct BeachParams {
  double length = 35.0;
  double H0 = 1.0;
  double flat_until = 15.0;
  double crest_height = 1.5;  // bottom elevation at the right end
  Wavemaker wave{0.2, 4.0, 1.0};
};

struct DingemansParams {
  double length = 49.0;
  double eta0 = 0.4;
  double toe = 6.0;
  double up_slope = 1.0 / 20.0;
  double crest_depth = 0.1;
  double crest_length = 2.0;
  double down_slope = 1.0 / 10.0;
  Wavemaker wave{0.02, 2.02, 0.4};
  std::vector<double> gauges{10.5, 12.5, 13.5, 14.5, 15.7, 17.3};
};

/// Bottom, initial state and boundary data of a scenario on a given mesh.
struct ScenarioSetup {
  Bathymetry bathy;
  FlowState state;
  std::function<Boundaries(double t)> boundaries;
  std::vector<double> gauges;
};

ScenarioSetup solitary_init(const Mesh1D& mesh, const SolitaryWaveParams& sp, double g,
                            double h_eps);
ScenarioSetup dam_break_setup(const Mesh1D& mesh, const DamBreakParams& dp);
ScenarioSetup beach_init(const Mesh1D& mesh, const BeachParams& bp, double g);
ScenarioSetup dingemans_init(const Mesh1D& mesh, const DingemansParams& dp, double g);

double dingemans_bottom(double x, const DingemansParams& dp);
double beach_bottom(double x, const BeachParams& bp);

/// A runnable problem with its initial state.
struct Scenario {
  std::string name;
  Problem problem;
  FlowState initial;
  std::vector<double> gauges;
  /// Exact depth H(x, t) when known (solitary wave only).
  std::function<double(double x, double t)> exact_depth;
};

Scenario make_solitary(std::size_t n_nodes, PairTag pair, const PhysicalParams& prm,
                       const SolitaryWaveParams& sp = {}, double length = 45.0);
Scenario make_dam_break(std::size_t n_nodes, PairTag pair, const PhysicalParams& prm,
                        const DamBreakParams& dp = {});
Scenario make_beach(std::size_t n_nodes, PairTag pair, const PhysicalParams& prm,
                    const BeachParams& bp = {});
Scenario make_dingemans(std::size_t n_nodes, PairTag pair, const PhysicalParams& prm,
                        const DingemansParams& dp = {});

}  // namespace nhsw
