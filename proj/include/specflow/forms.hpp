#pragma once

#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "specflow/cmatrix.hpp"
#include "specflow/modes.hpp"

namespace specflow {

// Differential form with k x k matrix coefficients and finite Fourier support
// on a flat torus. A coefficient is addressed by an increasing multi-index
// (stored as a bitmask over directions 1..n) and a Fourier mode. Mixed-degree
// content is allowed; `pure_degree()` reports the common degree when there is
// one. Forms of degree above n vanish identically and are never stored.
class MatrixForm {
 public:
  using Key = std::pair<std::uint32_t, Mode>;  // (index mask, mode)

  MatrixForm() = default;
  MatrixForm(int n, int k) : n_(n), k_(k) {}

  int manifold_dim() const { return n_; }
  int rank() const { return k_; }
  bool zero() const;
  const std::map<Key, CMatrix>& terms() const { return terms_; }

  // Accumulate coeff * dx^mask * e^{i m.x}; drops degree > n and exact zeros.
  void add_term(std::uint32_t mask, const Mode& m, const CMatrix& coeff);
  CMatrix coefficient(std::uint32_t mask, const Mode& m) const;  // zero matrix if absent

  int pure_degree() const;  // -1 if mixed or zero

  MatrixForm& operator+=(const MatrixForm& o);
  MatrixForm& operator*=(cdouble z);
  friend MatrixForm operator+(MatrixForm a, const MatrixForm& b) { return a += b; }
  friend MatrixForm operator*(cdouble z, MatrixForm a) { return a *= z; }

  // Pointwise value of the degree-p component on increasing index I at x.
  CMatrix value_at(std::uint32_t mask, const std::array<double, 3>& x) const;

 private:
  int n_ = 0, k_ = 1;
  std::map<Key, CMatrix> terms_;
};

// Shuffle sign merging two disjoint increasing multi-indices.
int shuffle_sign(std::uint32_t a, std::uint32_t b);

MatrixForm wedge(const MatrixForm& w1, const MatrixForm& w2);
MatrixForm exterior_d(const MatrixForm& w);

// exp(F) = sum_j F^j / j! for a degree-2 form; finite by nilpotency.
MatrixForm exp_form(const MatrixForm& f);

// Trace over the matrix index; returns a rank-1 form.
MatrixForm trace_form(const MatrixForm& w);

// Zero-Fourier-mode coefficient of the top-degree (degree n) part, times
// (2 pi)^n: the integral over the model manifold, exact for trigonometric
// polynomial data. Requires rank 1.
cdouble integrate_top(const MatrixForm& w);

// A-hat genus form det^{1/2}((Omega/4pi)/sinh(Omega/4pi)) for a degree-2
// tangent-curvature input (matrix index = tangent index), expanded through
// exp(-1/2 tr log(sinh y / y)), y = Omega/4pi. Returns the constant 1 when
// Omega = 0. max_degree truncates the expansion.
MatrixForm a_hat(const MatrixForm& omega_tm, int max_degree);

// Taylor coefficients of log(sinh x / x) = sum_j c_j x^{2j}, j = 1..count.
std::vector<double> log_sinh_over_x_coefficients(int count);

}  // namespace specflow
