#pragma once

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace specflow {

using cdouble = std::complex<double>;

// Dense complex matrix, row-major. Value type: copy/move semantics, no views.
class CMatrix {
 public:
  CMatrix() = default;
  CMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols, cdouble(0.0, 0.0)) {}

  static CMatrix identity(std::size_t n) {
    CMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return data_.empty(); }

  cdouble& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const cdouble& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  cdouble* data() { return data_.data(); }
  const cdouble* data() const { return data_.data(); }

  CMatrix& operator+=(const CMatrix& o);
  CMatrix& operator-=(const CMatrix& o);
  CMatrix& operator*=(cdouble z);

  friend CMatrix operator+(CMatrix a, const CMatrix& b) { return a += b; }
  friend CMatrix operator-(CMatrix a, const CMatrix& b) { return a -= b; }
  friend CMatrix operator*(cdouble z, CMatrix a) { return a *= z; }

  CMatrix adjoint() const;
  cdouble trace() const;

  double max_abs() const;        // entrywise max modulus
  double frobenius_norm() const;
  // Largest singular value (matrix 2-norm) of a general matrix.
  double operator_norm() const;

  bool is_hermitian(double tol = 0.0) const;

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<cdouble> data_;
};

CMatrix matmul(const CMatrix& a, const CMatrix& b);
CMatrix commutator(const CMatrix& a, const CMatrix& b);

// Kronecker product a (x) b.
CMatrix kron(const CMatrix& a, const CMatrix& b);

inline void require(bool cond, const char* msg) {
  if (!cond) throw std::invalid_argument(msg);
}

}  // namespace specflow
