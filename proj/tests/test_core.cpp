#include <cmath>
#include <random>

#include "doctest.h"
#include "nhsw/core.hpp"
#include "nhsw/scenarios.hpp"

using namespace nhsw;

namespace {

// Midpoint quadrature of the solitary wave on [0, 45] with 4e6 cells, frozen.
constexpr double kSolitaryMass = 46.49665893903157;
constexpr double kSolitaryEnergy = 239.57895723230484;

template <class F>
double midpoint(double a, double b, std::size_t n, F f) {
  const double h = (b - a) / static_cast<double>(n);
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += f(a + (static_cast<double>(i) + 0.5) * h);
  return s * h;
}

}  // namespace

TEST_CASE("mesh dual widths sum to the domain length") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> dx(0.1, 2.0);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> x{0.0};
    for (int i = 0; i < 2 + trial; ++i) x.push_back(x.back() + dx(rng));
    const Mesh1D mesh(x);
    double s = 0.0;
    for (std::size_t i = 0; i < mesh.size(); ++i) s += mesh.dual_width(i);
    CHECK(s == doctest::Approx(mesh.length()).epsilon(1e-14));
    CHECK(mesh.dual_width(0) == doctest::Approx(0.5 * mesh.element_width(0)));
  }
}

TEST_CASE("mesh rejects bad node lists") {
  CHECK_THROWS_AS(Mesh1D(std::vector<double>{0.0}), Error);
  CHECK_THROWS_AS(Mesh1D(std::vector<double>{0.0, 1.0, 1.0}), Error);
  CHECK_THROWS_AS(Mesh1D::uniform(1.0, 0.0, 5), Error);
}

TEST_CASE("locate returns the containing element") {
  const Mesh1D mesh = Mesh1D::uniform(0.0, 10.0, 11);
  CHECK(mesh.locate(0.0) == 0);
  CHECK(mesh.locate(3.5) == 3);
  CHECK(mesh.locate(10.0) == 9);
  CHECK(mesh.locate(-4.0) == 0);
  CHECK(mesh.coarse_nodes().size() == 6);
}

TEST_CASE("bathymetry slopes are element differences") {
  const Mesh1D mesh(std::vector<double>{0.0, 1.0, 3.0, 3.5});
  const Bathymetry b(mesh, {0.0, 0.5, -0.5, 0.0});
  CHECK(b.slope(0) == 0.5);
  CHECK(b.slope(1) == -0.5);
  CHECK(b.slope(2) == 1.0);
  CHECK(b.bottom_normal_x(2) == -1.0);
  CHECK_THROWS_AS(Bathymetry(mesh, {0.0, 1.0}), Error);
}

TEST_CASE("physical parameters are validated") {
  PhysicalParams p;
  CHECK_NOTHROW(p.validate());
  p.cfl = 1.5;
  CHECK_THROWS_AS(p.validate(), Error);
  p = {};
  p.h_eps = 0.0;
  CHECK_THROWS_AS(p.validate(), Error);
  CHECK(solver_method_from_string("uzawa") == SolverMethod::Uzawa);
  CHECK(to_string(SolverMethod::ConjugateGradient) == "cg");
  CHECK_THROWS_AS(solver_method_from_string("lu"), Error);
}

TEST_CASE("total mass") {
  const Mesh1D mesh = Mesh1D::uniform(0.0, 10.0, 41);
  FlowState s(mesh.size());
  CHECK(total_mass(s, mesh) == 0.0);
  std::fill(s.H.begin(), s.H.end(), 1.0);
  CHECK(total_mass(s, mesh) == doctest::Approx(10.0).epsilon(1e-15));
  FlowState bad(3);
  CHECK_THROWS_AS(total_mass(bad, mesh), Error);
}

TEST_CASE("total energy of still water") {
  const double g = 9.81;
  const Mesh1D mesh = Mesh1D::uniform(0.0, 7.0, 15);
  FlowState s(mesh.size());
  std::fill(s.H.begin(), s.H.end(), 1.0);
  CHECK(total_energy(s, mesh, Bathymetry::flat(mesh), g) == doctest::Approx(g * 7.0 / 2.0));

  const Mesh1D unit = Mesh1D::uniform(0.0, 1.0, 2);
  FlowState two(2);
  two.H = {2.0, 2.0};
  CHECK(total_energy(two, unit, Bathymetry::flat(unit), g) == doctest::Approx(2.0 * g));
}

TEST_CASE("dry nodes carry no kinetic energy") {
  const Mesh1D mesh = Mesh1D::uniform(0.0, 1.0, 2);
  FlowState s(2);
  s.H = {1e-12, 0.0};
  s.Hu = {1.0, 0.0};
  CHECK(total_energy(s, mesh, Bathymetry::flat(mesh), 9.81) < 1e-20);
}

TEST_CASE("solitary wave mass and energy goldens") {
  const SolitaryWaveParams sp;
  const double g = 9.81;
  // The oracle integrates the analytic fields directly.
  const double mass = midpoint(0.0, 45.0, 400000, [&](double x) {
    return solitary_wave(x, 0.0, sp, g).H;
  });
  CHECK(mass == doctest::Approx(kSolitaryMass).epsilon(1e-9));

  const Mesh1D mesh = Mesh1D::uniform(0.0, 45.0, 45001);
  const ScenarioSetup set = solitary_init(mesh, sp, g, 1e-8);
  CHECK(total_mass(set.state, mesh) == doctest::Approx(kSolitaryMass).epsilon(1e-8));
  CHECK(total_energy(set.state, mesh, set.bathy, g) ==
        doctest::Approx(kSolitaryEnergy).epsilon(1e-8));
}
