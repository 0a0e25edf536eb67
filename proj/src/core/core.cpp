#include "nhsw/core.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace nhsw {

Mesh1D::Mesh1D(std::vector<double> nodes) : x_(std::move(nodes)) {
  if (x_.size() < 2) {
    throw Error(ErrorCode::InvalidArgument, "mesh needs at least two nodes");
  }
  const std::size_t n = x_.size();
  element_width_.resize(n - 1);
  for (std::size_t k = 0; k + 1 < n; ++k) {
    const double h = x_[k + 1] - x_[k];
    if (!(h > 0.0)) {
      std::ostringstream msg;
      msg << "mesh nodes must be strictly increasing (element " << k << ")";
      throw Error(ErrorCode::InvalidArgument, msg.str());
    }
    element_width_[k] = h;
  }
  dual_width_.resize(n);
  dual_width_[0] = 0.5 * element_width_[0];
  dual_width_[n - 1] = 0.5 * element_width_[n - 2];
  for (std::size_t i = 1; i + 1 < n; ++i) {
    dual_width_[i] = 0.5 * (element_width_[i - 1] + element_width_[i]);
  }
  min_dual_ = *std::min_element(dual_width_.begin(), dual_width_.end());
}

Mesh1D Mesh1D::uniform(double x_left, double x_right, std::size_t n_nodes) {
  if (n_nodes < 2 || !(x_right > x_left)) {
    throw Error(ErrorCode::InvalidArgument, "uniform mesh needs N >= 2 and a positive length");
  }
  std::vector<double> x(n_nodes);
  const double h = (x_right - x_left) / static_cast<double>(n_nodes - 1);
  for (std::size_t i = 0; i < n_nodes; ++i) {
    x[i] = x_left + h * static_cast<double>(i);
  }
  x.back() = x_right;
  return Mesh1D(std::move(x));
}

std::vector<std::size_t> Mesh1D::coarse_nodes() const {
  if (!has_coarse_mesh()) {
    throw Error(ErrorCode::InvalidArgument,
                "the P1-iso-P2/P1 pair needs an odd number of nodes");
  }
  std::vector<std::size_t> idx;
  idx.reserve(x_.size() / 2 + 1);
  for (std::size_t i = 0; i < x_.size(); i += 2) idx.push_back(i);
  return idx;
}

std::size_t Mesh1D::locate(double pos) const {
  if (pos <= x_.front()) return 0;
  if (pos >= x_.back()) return n_elements() - 1;
  auto it = std::upper_bound(x_.begin(), x_.end(), pos);
  return static_cast<std::size_t>(it - x_.begin()) - 1;
}

void FlowState::check_consistent(std::size_t n_nodes) const {
  if (H.size() != n_nodes || Hu.size() != n_nodes || Hw.size() != n_nodes) {
    std::ostringstream msg;
    msg << "state has sizes (" << H.size() << ", " << Hu.size() << ", " << Hw.size()
        << ") but the mesh has " << n_nodes << " nodes";
    throw Error(ErrorCode::SizeMismatch, msg.str());
  }
}

Bathymetry::Bathymetry(const Mesh1D& mesh, std::vector<double> zb) : zb_(std::move(zb)) {
  if (zb_.size() != mesh.size()) {
    throw Error(ErrorCode::SizeMismatch, "bathymetry size differs from the mesh");
  }
  slope_.resize(mesh.n_elements());
  for (std::size_t k = 0; k < slope_.size(); ++k) {
    slope_[k] = (zb_[k + 1] - zb_[k]) / mesh.element_width(k);
  }
}

double Bathymetry::surface_normal_x(const Mesh1D& mesh, std::span<const double> H,
                                    std::size_t k) const {
  const double eta_l = H[k] + zb_[k];
  const double eta_r = H[k + 1] + zb_[k + 1];
  return -(eta_r - eta_l) / mesh.element_width(k);
}

void PhysicalParams::validate() const {
  if (!(g > 0.0)) throw Error(ErrorCode::InvalidArgument, "gravity must be positive");
  if (!(cfl > 0.0 && cfl <= 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "cfl must lie in (0, 1]");
  }
  if (!(h_eps > 0.0)) throw Error(ErrorCode::InvalidArgument, "dry threshold must be positive");
  if (!(tol > 0.0)) throw Error(ErrorCode::InvalidArgument, "solver tolerance must be positive");
}

std::string to_string(SolverMethod m) {
  switch (m) {
    case SolverMethod::Direct: return "direct";
    case SolverMethod::ConjugateGradient: return "cg";
    case SolverMethod::Uzawa: return "uzawa";
  }
  return "direct";
}

SolverMethod solver_method_from_string(const std::string& s) {
  if (s == "direct") return SolverMethod::Direct;
  if (s == "cg") return SolverMethod::ConjugateGradient;
  if (s == "uzawa") return SolverMethod::Uzawa;
  throw Error(ErrorCode::InvalidArgument, "unknown solver method '" + s + "'");
}

double total_mass(const FlowState& state, const Mesh1D& mesh) {
  state.check_consistent(mesh.size());
  double m = 0.0;
  for (std::size_t i = 0; i < mesh.size(); ++i) m += mesh.dual_width(i) * state.H[i];
  return m;
}

double total_energy(const FlowState& state, const Mesh1D& mesh, const Bathymetry& bathy,
                    double g, double h_eps) {
  state.check_consistent(mesh.size());
  if (bathy.size() != mesh.size()) {
    throw Error(ErrorCode::SizeMismatch, "bathymetry size differs from the mesh");
  }
  double e = 0.0;
  for (std::size_t i = 0; i < mesh.size(); ++i) {
    const double H = state.H[i];
    const double u = velocity(H, state.Hu[i], h_eps);
    const double w = velocity(H, state.Hw[i], h_eps);
    const double zb = bathy.zb(i);
    // gH(eta + z_b)/2 with eta = H + z_b
    const double density = 0.5 * H * (u * u + w * w) + 0.5 * g * H * (H + 2.0 * zb);
    e += mesh.dual_width(i) * density;
  }
  return e;
}

}  // namespace nhsw
