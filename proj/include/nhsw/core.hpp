#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace nhsw {

enum class ErrorCode {
  InvalidArgument,
  SizeMismatch,
  NegativeDepth,
  NoAdmissibleStep,
  UnsupportedRegime,
  SingularSystem,
  IndefinitePivot,
  IterationCap,
  DivergenceBound,
  NonFinite,
  Io,
};

/// Error raised by every module; `code()` tells callers what went wrong
/// without parsing the message.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// One-dimensional vertex mesh x_0 < ... < x_{N-1}.
///
/// Element k spans [x_k, x_{k+1}]. The finite-volume cell of node i is
/// [x_{i-1/2}, x_{i+1/2}] clipped to the domain, so the two boundary cells
/// are half elements and the dual widths sum to the domain length.
class Mesh1D {
 public:
  explicit Mesh1D(std::vector<double> nodes);

  static Mesh1D uniform(double x_left, double x_right, std::size_t n_nodes);

  std::size_t size() const noexcept { return x_.size(); }
  std::size_t n_elements() const noexcept { return x_.size() - 1; }

  std::span<const double> x() const noexcept { return x_; }
  double x(std::size_t i) const { return x_[i]; }

  /// Width of element k, x_{k+1} - x_k.
  double element_width(std::size_t k) const { return element_width_[k]; }
  std::span<const double> element_widths() const noexcept { return element_width_; }

  /// Dual (finite-volume) cell width of node i.
  double dual_width(std::size_t i) const { return dual_width_[i]; }
  std::span<const double> dual_widths() const noexcept { return dual_width_; }

  double length() const noexcept { return x_.back() - x_.front(); }
  double min_dual_width() const noexcept { return min_dual_; }

  /// Coarse (pressure) mesh of the P1-iso-P2/P1 pair: even-indexed nodes.
  bool has_coarse_mesh() const noexcept { return x_.size() % 2 == 1; }
  std::vector<std::size_t> coarse_nodes() const;

  /// Index of the element containing position `pos` (clamped to the domain).
  std::size_t locate(double pos) const;

 private:
  std::vector<double> x_;
  std::vector<double> element_width_;
  std::vector<double> dual_width_;
  double min_dual_ = 0.0;
};

/// Nodal conserved variables X = (H, Hu, Hw) at time t.
struct FlowState {
  std::vector<double> H;
  std::vector<double> Hu;
  std::vector<double> Hw;
  double t = 0.0;

  FlowState() = default;
  explicit FlowState(std::size_t n) : H(n, 0.0), Hu(n, 0.0), Hw(n, 0.0) {}

  std::size_t size() const noexcept { return H.size(); }
  void check_consistent(std::size_t n_nodes) const;
};

/// Nodal velocity (Hu/H or Hw/H) with the dry convention: zero below h_eps.
inline double velocity(double H, double HV, double h_eps) noexcept {
  return H >= h_eps ? HV / H : 0.0;
}

/// Bottom elevation at nodes; slopes are per-element finite differences.
class Bathymetry {
 public:
  Bathymetry() = default;
  Bathymetry(const Mesh1D& mesh, std::vector<double> zb);
  static Bathymetry flat(const Mesh1D& mesh) {
    return Bathymetry(mesh, std::vector<double>(mesh.size(), 0.0));
  }

  std::span<const double> zb() const noexcept { return zb_; }
  double zb(std::size_t i) const { return zb_[i]; }
  std::size_t size() const noexcept { return zb_.size(); }

  /// dz_b/dx on element k.
  double slope(std::size_t k) const { return slope_[k]; }
  std::span<const double> slopes() const noexcept { return slope_; }

  /// Non-unit normals (x component only; the vertical component is 1).
  /// n_b = (-dz_b/dx, 1) on element k.
  double bottom_normal_x(std::size_t k) const { return -slope_[k]; }
  /// n_s = (-d(eta)/dx, 1) on element k for the given depth field.
  double surface_normal_x(const Mesh1D& mesh, std::span<const double> H,
                          std::size_t k) const;

 private:
  std::vector<double> zb_;
  std::vector<double> slope_;
};

enum class SolverMethod { Direct, ConjugateGradient, Uzawa };

struct PhysicalParams {
  double g = 9.81;
  double cfl = 0.5;
  double h_eps = 1e-8;
  double tol = 1e-10;
  SolverMethod method = SolverMethod::Direct;

  void validate() const;
};

std::string to_string(SolverMethod m);
SolverMethod solver_method_from_string(const std::string& s);

/// Sum over nodes of dual width times depth.
double total_mass(const FlowState& state, const Mesh1D& mesh);

/// Sum over nodes of dual width times H(u^2 + w^2)/2 + gH(eta + z_b)/2.
double total_energy(const FlowState& state, const Mesh1D& mesh,
                    const Bathymetry& bathy, double g, double h_eps = 1e-8);

}  // namespace nhsw
