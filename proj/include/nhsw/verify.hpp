#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "nhsw/core.hpp"
#include "nhsw/sparse.hpp"

namespace nhsw::verify {

struct Result {
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

/// Acceptance criteria in their canonical order.
const std::vector<std::string>& criterion_names();

/// Runs one criterion; unknown names throw InvalidArgument.
Result run_criterion(const std::string& name);

// ---------------------------------------------------------------- oracles

/// Staggered finite-difference stencils for element-constant pressure.
///
/// Cell j sits between nodes j and j+1 with width h_j. With zeta = H + 2 z_b
/// and dz_j = zeta_{j+1} - zeta_j:
///   div_j   = H_{j+1} u_{j+1} - H_j u_j - dz_j (u_j + u_{j+1}) / 2 + h_j (w_j + w_{j+1})
///   grad_u_i = H_i (p_{i+1/2} - p_{i-1/2}) + (dz_{i-1} p_{i-1/2} + dz_i p_{i+1/2}) / 2
///   grad_w_i = -(h_{i-1} p_{i-1/2} + h_i p_{i+1/2})
/// The H_i jump term is dropped at the two end nodes and collected in the
/// boundary stencil instead.
struct StaggeredStencils {
  std::vector<Triplet> div;       // M x 2N
  std::vector<Triplet> grad;      // 2N x M
  std::vector<Triplet> boundary;  // 2N x M
};

StaggeredStencils staggered_stencils(const Mesh1D& mesh, std::span<const double> H,
                                     std::span<const double> zb);

// ---------------------------------------------------------------- generators

struct RandomField {
  Mesh1D mesh;
  std::vector<double> H;
  std::vector<double> zb;
};

/// Random non-uniform mesh on [0, n - 1] with spacings in [0.5, 1.5] and
/// random depth and bottom; each node is dry with probability `dry_fraction`.
RandomField random_field(std::mt19937_64& rng, std::size_t n, double dry_fraction = 0.0);

double uniform(std::mt19937_64& rng, double lo, double hi);

}  // namespace nhsw::verify
