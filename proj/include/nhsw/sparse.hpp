#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

#include "nhsw/kernels.hpp"

namespace nhsw {

struct Triplet {
  std::size_t row;
  std::size_t col;
  double value;
};

/// Compressed sparse row matrix. Immutable after construction.
class CsrMatrix {
 public:
  CsrMatrix() = default;
  CsrMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), ptr_(rows + 1, 0) {}

  /// Duplicates are summed; entries come out sorted by (row, col).
  static CsrMatrix from_triplets(std::size_t rows, std::size_t cols, std::vector<Triplet> t);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t nnz() const noexcept { return val_.size(); }

  std::span<const std::size_t> row_ptr() const noexcept { return ptr_; }
  std::span<const std::size_t> col_index() const noexcept { return col_; }
  std::span<const double> values() const noexcept { return val_; }

  /// Entry (i, j), zero when not stored.
  double at(std::size_t i, std::size_t j) const;

  /// y = A x
  void multiply(std::span<const double> x, std::span<double> y) const;
  /// y = A^T x
  void multiply_transpose(std::span<const double> x, std::span<double> y) const;

  CsrMatrix transpose() const;
  std::vector<Triplet> triplets() const;

  /// One "row col value" line per stored entry, 0-based, 17 significant digits.
  void write_triplets(std::ostream& os) const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<std::size_t> ptr_;
  std::vector<std::size_t> col_;
  std::vector<double> val_;
};

/// Symmetric banded matrix with lower diagonal-major storage (see BandView).
class BandedSym {
 public:
  BandedSym() = default;
  BandedSym(std::size_t n, std::size_t bw) : n_(n), bw_(bw), band_((bw + 1) * n, 0.0) {}

  std::size_t size() const noexcept { return n_; }
  std::size_t bandwidth() const noexcept { return bw_; }

  /// Entry (i, j); zero outside the band.
  double at(std::size_t i, std::size_t j) const;
  /// Reference to the stored entry of (i, j) (either triangle). |i - j| <= bw.
  double& ref(std::size_t i, std::size_t j);

  double diagonal(std::size_t i) const { return band_[i]; }

  kernels::BandView view() const noexcept { return {band_, n_, bw_}; }
  std::span<const double> storage() const noexcept { return band_; }

  void multiply(std::span<const double> x, std::span<double> y) const {
    kernels::band_matvec(view(), x, y);
  }

  void write_triplets(std::ostream& os) const;

 private:
  std::size_t n_ = 0;
  std::size_t bw_ = 0;
  std::vector<double> band_;
};

}  // namespace nhsw
