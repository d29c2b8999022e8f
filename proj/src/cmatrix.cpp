#include "specflow/cmatrix.hpp"

#include <algorithm>
#include <cmath>

namespace specflow {

CMatrix& CMatrix::operator+=(const CMatrix& o) {
  require(rows_ == o.rows_ && cols_ == o.cols_, "matrix shape mismatch");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
  return *this;
}

CMatrix& CMatrix::operator-=(const CMatrix& o) {
  require(rows_ == o.rows_ && cols_ == o.cols_, "matrix shape mismatch");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
  return *this;
}

CMatrix& CMatrix::operator*=(cdouble z) {
  for (auto& v : data_) v *= z;
  return *this;
}

CMatrix CMatrix::adjoint() const {
  CMatrix r(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) r(j, i) = std::conj((*this)(i, j));
  return r;
}

cdouble CMatrix::trace() const {
  cdouble t = 0.0;
  for (std::size_t i = 0; i < std::min(rows_, cols_); ++i) t += (*this)(i, i);
  return t;
}

double CMatrix::max_abs() const {
  double m = 0.0;
  for (const auto& v : data_) m = std::max(m, std::abs(v));
  return m;
}

double CMatrix::frobenius_norm() const {
  double s = 0.0;
  for (const auto& v : data_) s += std::norm(v);
  return std::sqrt(s);
}

double CMatrix::operator_norm() const {
  if (empty()) return 0.0;
  // Power iteration on A^H A with a fixed deterministic start vector.
  const std::size_t n = cols_;
  std::vector<cdouble> v(n), w(rows_), u(n);
  for (std::size_t j = 0; j < n; ++j) v[j] = cdouble(1.0 + 1.0 / double(j + 1), 0.3 * double(j % 7));
  double norm = 0.0;
  for (int it = 0; it < 200; ++it) {
    for (std::size_t i = 0; i < rows_; ++i) {
      cdouble acc = 0.0;
      for (std::size_t j = 0; j < n; ++j) acc += (*this)(i, j) * v[j];
      w[i] = acc;
    }
    for (std::size_t j = 0; j < n; ++j) {
      cdouble acc = 0.0;
      for (std::size_t i = 0; i < rows_; ++i) acc += std::conj((*this)(i, j)) * w[i];
      u[j] = acc;
    }
    double s = 0.0;
    for (const auto& z : u) s += std::norm(z);
    s = std::sqrt(s);
    if (s == 0.0) return 0.0;
    double new_norm = std::sqrt(s);
    for (std::size_t j = 0; j < n; ++j) v[j] = u[j] / s;
    if (it > 4 && std::abs(new_norm - norm) <= 1e-13 * (1.0 + new_norm)) return new_norm;
    norm = new_norm;
  }
  return norm;
}

bool CMatrix::is_hermitian(double tol) const {
  if (rows_ != cols_) return false;
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = i; j < cols_; ++j)
      if (std::abs((*this)(i, j) - std::conj((*this)(j, i))) > tol) return false;
  return true;
}

CMatrix matmul(const CMatrix& a, const CMatrix& b) {
  require(a.cols() == b.rows(), "matmul shape mismatch");
  CMatrix r(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const cdouble aik = a(i, k);
      if (aik == cdouble(0.0, 0.0)) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) r(i, j) += aik * b(k, j);
    }
  return r;
}

CMatrix commutator(const CMatrix& a, const CMatrix& b) {
  return matmul(a, b) - matmul(b, a);
}

CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix r(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      const cdouble aij = a(i, j);
      if (aij == cdouble(0.0, 0.0)) continue;
      for (std::size_t p = 0; p < b.rows(); ++p)
        for (std::size_t q = 0; q < b.cols(); ++q)
          r(i * b.rows() + p, j * b.cols() + q) = aij * b(p, q);
    }
  return r;
}

}  // namespace specflow
