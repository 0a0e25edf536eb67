#include <algorithm>
#include <cmath>
#include <sstream>

#include "nhsw/kernels.hpp"
#include "nhsw/projection.hpp"

namespace nhsw {
namespace {

double norm2(std::span<const double> v) { return std::sqrt(kernels::dot(v, v)); }

double residual_norm(const SchurSystem& sys, std::span<const double> p) {
  std::vector<double> r(sys.size());
  sys.S.multiply(p, r);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = sys.rhs[i] - r[i];
  return norm2(r);
}

[[noreturn]] void cap_reached(const char* method, std::size_t it, double res, double target) {
  std::ostringstream msg;
  msg << method << ": iteration cap " << it << " reached with residual " << res
      << " (target " << target << ")";
  throw Error(ErrorCode::IterationCap, msg.str());
}

// Banded LDL^T without pivoting; L shares the diagonal-major layout of S.
std::vector<double> solve_direct(const SchurSystem& sys) {
  const std::size_t n = sys.size();
  const std::size_t bw = sys.S.bandwidth();
  std::vector<double> L(sys.S.storage().begin(), sys.S.storage().end());
  auto at = [&](std::size_t i, std::size_t j) -> double& { return L[(i - j) * n + i]; };
  std::vector<double> d(n);
  for (std::size_t j = 0; j < n; ++j) {
    const std::size_t k0 = j > bw ? j - bw : 0;
    double dj = at(j, j);
    for (std::size_t k = k0; k < j; ++k) dj -= at(j, k) * at(j, k) * d[k];
    if (!(dj > 0.0)) {
      std::ostringstream msg;
      msg << "direct solve: non-positive pivot " << dj << " at row " << j;
      throw Error(ErrorCode::IndefinitePivot, msg.str());
    }
    d[j] = dj;
    const std::size_t i1 = std::min(n - 1, j + bw);
    for (std::size_t i = j + 1; i <= i1; ++i) {
      const std::size_t k1 = i > bw ? i - bw : 0;
      double s = at(i, j);
      for (std::size_t k = std::max(k0, k1); k < j; ++k) s -= at(i, k) * at(j, k) * d[k];
      at(i, j) = s / dj;
    }
  }
  std::vector<double> x(sys.rhs);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t k0 = i > bw ? i - bw : 0;
    for (std::size_t k = k0; k < i; ++k) x[i] -= at(i, k) * x[k];
  }
  for (std::size_t i = 0; i < n; ++i) x[i] /= d[i];
  for (std::size_t i = n; i-- > 0;) {
    const std::size_t k1 = std::min(n - 1, i + bw);
    for (std::size_t k = i + 1; k <= k1; ++k) x[i] -= at(k, i) * x[k];
  }
  return x;
}

PressureField solve_cg(const SchurSystem& sys, double target, std::size_t cap) {
  const std::size_t n = sys.size();
  PressureField out;
  out.p.assign(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    if (sys.pinned[i]) out.p[i] = sys.pinned_value[i];
  }
  std::vector<double> r(n), z(n), d(n), q(n), dinv(n);
  for (std::size_t i = 0; i < n; ++i) dinv[i] = 1.0 / sys.S.diagonal(i);
  sys.S.multiply(out.p, r);
  for (std::size_t i = 0; i < n; ++i) r[i] = sys.rhs[i] - r[i];
  double rnorm = norm2(r);
  if (rnorm <= target) {
    out.residual = rnorm;
    return out;
  }
  for (std::size_t i = 0; i < n; ++i) d[i] = z[i] = dinv[i] * r[i];
  double rz = kernels::dot(r, z);
  for (std::size_t it = 1; it <= cap; ++it) {
    sys.S.multiply(d, q);
    const double alpha = rz / kernels::dot(d, q);
    kernels::axpy(alpha, d, out.p);
    kernels::axpy(-alpha, q, r);
    rnorm = norm2(r);
    if (rnorm <= target) {
      // Replace the recurrence residual by the true one before reporting.
      out.residual = residual_norm(sys, out.p);
      out.iterations = it;
      if (out.residual <= target) return out;
      sys.S.multiply(out.p, r);
      for (std::size_t i = 0; i < n; ++i) r[i] = sys.rhs[i] - r[i];
    }
    for (std::size_t i = 0; i < n; ++i) z[i] = dinv[i] * r[i];
    const double rz_new = kernels::dot(r, z);
    kernels::xpay(z, rz_new / rz, d);
    rz = rz_new;
  }
  cap_reached("conjugate gradient", cap, rnorm, target);
}

// Fixed-step Uzawa on the saddle form: the velocity is recomputed from the
// momentum equation and the pressure follows the constraint defect.
PressureField solve_uzawa(const SchurSystem& sys, double target, std::size_t cap) {
  const std::size_t m = sys.size();
  const std::size_t nv = sys.U_tilde.size();
  double dmax = 0.0;
  for (std::size_t l = 0; l < m; ++l) {
    if (!sys.pinned[l]) dmax = std::max(dmax, sys.S.diagonal(l));
  }
  PressureField out;
  out.p.assign(m, 0.0);
  for (std::size_t l = 0; l < m; ++l) {
    if (sys.pinned[l]) out.p[l] = sys.pinned_value[l];
  }
  if (dmax == 0.0) return out;
  const double rho = 1.0 / dmax;
  std::vector<double> force(nv), U(nv), r(m);
  double rnorm = 0.0;
  for (std::size_t it = 0; it <= cap; ++it) {
    sys.B.multiply_transpose(out.p, force);
    for (std::size_t v = 0; v < nv; ++v) {
      U[v] = sys.free_velocity[v]
                 ? sys.U_tilde[v] - sys.dt * sys.a_inv[v] * (sys.load[v] - force[v])
                 : sys.U_tilde[v];
    }
    sys.B.multiply(U, r);
    for (std::size_t l = 0; l < m; ++l) r[l] = sys.pinned[l] ? 0.0 : -r[l] / sys.dt;
    rnorm = norm2(r);
    if (rnorm <= target) {
      out.iterations = it;
      out.residual = residual_norm(sys, out.p);
      return out;
    }
    kernels::axpy(rho, r, out.p);
  }
  cap_reached("uzawa", cap, rnorm, target);
}

}  // namespace

PressureField solve_pressure(const SchurSystem& sys, const SolverOptions& opt) {
  const std::size_t m = sys.size();
  if (m == 0 || sys.S.size() != m) throw Error(ErrorCode::SizeMismatch, "solve_pressure: empty");
  const double target = sys.residual_target() * opt.stop_factor;
  PressureField out;
  switch (sys.method) {
    case SolverMethod::Direct:
      out.p = solve_direct(sys);
      out.residual = residual_norm(sys, out.p);
      break;
    case SolverMethod::ConjugateGradient:
      out = solve_cg(sys, target, opt.max_iterations ? opt.max_iterations : 10 * m + 100);
      break;
    case SolverMethod::Uzawa:
      out = solve_uzawa(sys, target, opt.max_iterations ? opt.max_iterations : 10 * m);
      break;
  }
  out.tag = sys.tag;
  for (double v : out.p) {
    if (!std::isfinite(v)) throw Error(ErrorCode::NonFinite, "solve_pressure: non-finite result");
  }
  return out;
}

}  // namespace nhsw
