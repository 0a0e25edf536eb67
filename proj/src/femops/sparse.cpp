#include "nhsw/sparse.hpp"

#include <algorithm>
#include <cstdio>
#include <ostream>

#include "nhsw/core.hpp"

namespace nhsw {
namespace {

void write_line(std::ostream& os, std::size_t i, std::size_t j, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%zu %zu %.17g\n", i, j, v);
  os << buf;
}

}  // namespace

CsrMatrix CsrMatrix::from_triplets(std::size_t rows, std::size_t cols, std::vector<Triplet> t) {
  for (const auto& e : t) {
    if (e.row >= rows || e.col >= cols) {
      throw Error(ErrorCode::SizeMismatch, "triplet outside the matrix shape");
    }
  }
  std::sort(t.begin(), t.end(), [](const Triplet& a, const Triplet& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });
  CsrMatrix m(rows, cols);
  m.col_.reserve(t.size());
  m.val_.reserve(t.size());
  std::size_t k = 0;
  for (std::size_t i = 0; i < rows; ++i) {
    while (k < t.size() && t[k].row == i) {
      const std::size_t j = t[k].col;
      double v = 0.0;
      while (k < t.size() && t[k].row == i && t[k].col == j) v += t[k++].value;
      m.col_.push_back(j);
      m.val_.push_back(v);
    }
    m.ptr_[i + 1] = m.col_.size();
  }
  return m;
}

double CsrMatrix::at(std::size_t i, std::size_t j) const {
  const auto first = col_.begin() + static_cast<std::ptrdiff_t>(ptr_[i]);
  const auto last = col_.begin() + static_cast<std::ptrdiff_t>(ptr_[i + 1]);
  const auto it = std::lower_bound(first, last, j);
  if (it == last || *it != j) return 0.0;
  return val_[static_cast<std::size_t>(it - col_.begin())];
}

void CsrMatrix::multiply(std::span<const double> x, std::span<double> y) const {
  if (x.size() != cols_ || y.size() != rows_) {
    throw Error(ErrorCode::SizeMismatch, "CsrMatrix::multiply: operand sizes");
  }
  for (std::size_t i = 0; i < rows_; ++i) {
    double s = 0.0;
    for (std::size_t k = ptr_[i]; k < ptr_[i + 1]; ++k) s += val_[k] * x[col_[k]];
    y[i] = s;
  }
}

void CsrMatrix::multiply_transpose(std::span<const double> x, std::span<double> y) const {
  if (x.size() != rows_ || y.size() != cols_) {
    throw Error(ErrorCode::SizeMismatch, "CsrMatrix::multiply_transpose: operand sizes");
  }
  std::fill(y.begin(), y.end(), 0.0);
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t k = ptr_[i]; k < ptr_[i + 1]; ++k) y[col_[k]] += val_[k] * x[i];
  }
}

CsrMatrix CsrMatrix::transpose() const {
  std::vector<Triplet> t;
  t.reserve(nnz());
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t k = ptr_[i]; k < ptr_[i + 1]; ++k) t.push_back({col_[k], i, val_[k]});
  }
  return from_triplets(cols_, rows_, std::move(t));
}

std::vector<Triplet> CsrMatrix::triplets() const {
  std::vector<Triplet> t;
  t.reserve(nnz());
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t k = ptr_[i]; k < ptr_[i + 1]; ++k) t.push_back({i, col_[k], val_[k]});
  }
  return t;
}

void CsrMatrix::write_triplets(std::ostream& os) const {
  for (const auto& e : triplets()) write_line(os, e.row, e.col, e.value);
}

double BandedSym::at(std::size_t i, std::size_t j) const {
  if (i < j) std::swap(i, j);
  const std::size_t d = i - j;
  return d > bw_ ? 0.0 : band_[d * n_ + i];
}

double& BandedSym::ref(std::size_t i, std::size_t j) {
  if (i < j) std::swap(i, j);
  const std::size_t d = i - j;
  if (d > bw_ || i >= n_) throw Error(ErrorCode::InvalidArgument, "BandedSym: outside the band");
  return band_[d * n_ + i];
}

void BandedSym::write_triplets(std::ostream& os) const {
  for (std::size_t i = 0; i < n_; ++i) {
    const std::size_t lo = i > bw_ ? i - bw_ : 0;
    const std::size_t hi = std::min(n_ - 1, i + bw_);
    for (std::size_t j = lo; j <= hi; ++j) write_line(os, i, j, at(i, j));
  }
}

}  // namespace nhsw
