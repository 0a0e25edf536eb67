#include <cmath>
#include <sstream>

#include "nhsw/scenarios.hpp"

namespace nhsw {
namespace {

struct DepthFunction {
  double f;
  double df;
};

// Toro's depth function for one side: rarefaction below h_K, shock above.
DepthFunction depth_function(double h, double hK, double g) {
  if (h <= hK) {
    const double c = std::sqrt(g * h);
    return {2.0 * (c - std::sqrt(g * hK)), g / c};
  }
  const double gk = std::sqrt(0.5 * g * (h + hK) / (h * hK));
  const double f = (h - hK) * gk;
  const double df = gk - g * (h - hK) / (4.0 * h * h * gk);
  return {f, df};
}

}  // namespace

ShallowWaterRiemann::ShallowWaterRiemann(double HL, double uL, double HR, double uR, double g)
    : HL_(HL), uL_(uL), HR_(HR), uR_(uR), g_(g) {
  if (!(HL > 0.0) || !(HR > 0.0) || !(g > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "riemann: depths and g must be positive");
  }
  const double cL = std::sqrt(g * HL);
  const double cR = std::sqrt(g * HR);
  const double du = uR - uL;
  if (2.0 * (cL + cR) <= du) {
    throw Error(ErrorCode::UnsupportedRegime, "riemann: data generate a dry (vacuum) region");
  }
  // Two-rarefaction estimate as the starting point.
  const double c0 = 0.5 * (cL + cR) - 0.25 * du;
  double h = std::max(c0 * c0 / g, 1e-8 * std::min(HL, HR));
  for (iterations_ = 1; iterations_ <= 100; ++iterations_) {
    const auto l = depth_function(h, HL, g);
    const auto r = depth_function(h, HR, g);
    const double F = l.f + r.f + du;
    double step = F / (l.df + r.df);
    double h_new = h - step;
    while (h_new <= 0.0) {
      step *= 0.5;
      h_new = h - step;
    }
    const double change = std::fabs(h_new - h) / (0.5 * (h_new + h));
    h = h_new;
    if (change <= 1e-14) break;
  }
  if (iterations_ > 100) {
    throw Error(ErrorCode::IterationCap, "riemann: Newton iteration did not converge");
  }
  const auto l = depth_function(h, HL, g);
  const auto r = depth_function(h, HR, g);
  star_ = {h, 0.5 * (uL + uR) + 0.5 * (r.f - l.f)};
}

double ShallowWaterRiemann::left_shock_speed() const {
  const double q = std::sqrt(0.5 * (star_.H + HL_) * star_.H / (HL_ * HL_));
  return uL_ - std::sqrt(g_ * HL_) * q;
}

double ShallowWaterRiemann::right_shock_speed() const {
  const double q = std::sqrt(0.5 * (star_.H + HR_) * star_.H / (HR_ * HR_));
  return uR_ + std::sqrt(g_ * HR_) * q;
}

RiemannStar ShallowWaterRiemann::sample(double xi) const {
  const double cL = std::sqrt(g_ * HL_);
  const double cR = std::sqrt(g_ * HR_);
  const double cs = std::sqrt(g_ * star_.H);
  if (xi <= star_.u) {
    if (left_is_shock()) return xi < left_shock_speed() ? RiemannStar{HL_, uL_} : star_;
    const double head = uL_ - cL;
    const double tail = star_.u - cs;
    if (xi <= head) return {HL_, uL_};
    if (xi >= tail) return star_;
    const double c = (uL_ + 2.0 * cL - xi) / 3.0;
    return {c * c / g_, xi + c};
  }
  if (right_is_shock()) return xi > right_shock_speed() ? RiemannStar{HR_, uR_} : star_;
  const double head = uR_ + cR;
  const double tail = star_.u + cs;
  if (xi >= head) return {HR_, uR_};
  if (xi <= tail) return star_;
  const double c = (-uR_ + 2.0 * cR + xi) / 3.0;
  return {c * c / g_, xi - c};
}

RiemannStar exact_sw_riemann(double HL, double uL, double HR, double uR, double g) {
  return ShallowWaterRiemann(HL, uL, HR, uR, g).star();
}

}  // namespace nhsw
