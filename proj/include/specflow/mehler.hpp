#pragma once

#include <array>
#include <vector>

#include "specflow/cmatrix.hpp"

namespace specflow {

// Mehler kernel evaluation for the generalized harmonic oscillator
// L = -sum_i (d_i + (1/4) Omega_ij X^j)^2 with a numeric real antisymmetric
// Omega standing in for the curvature coefficients:
//
//   K(u; X, 0) = (4 pi u)^{-n/2} det^{1/2}(g1(u Omega / 2))
//                exp(-(1/4u) <X, g2(u Omega / 2) X>),
//   g1(x) = x / sinh(x), g2(x) = x / tanh(x).
//
// The matrix functions act through honest analytic functional calculus: on
// the +-i theta eigenvalue pairs of a real antisymmetric matrix the even
// functions evaluate on the circular branch (theta/sin theta, theta/tan
// theta), which is what makes the closed form agree with the PDE oracle for
// the operator as written. Both even functions are computed from series in
// x^2 near zero (removable singularity) and closed forms elsewhere.
struct MehlerInput {
  int n = 2;
  CMatrix omega;             // n x n real antisymmetric
  double u = 0.0;            // > 0
  std::array<double, 3> X{0.0, 0.0, 0.0};
  CMatrix twist;             // optional Hermitian F; empty = absent
};

// Scalar kernel (twist absent).
double mehler_kernel(const MehlerInput& in);
// Twisted kernel: scalar Mehler value times exp(-F).
CMatrix mehler_kernel_twisted(const MehlerInput& in);

// Even matrix functions evaluated at xi = x^2 (xi < 0 on the antisymmetric
// spectrum); exposed for the series/closed-form agreement tests.
double even_x_over_sinh(double xi);
double even_x_over_tanh(double xi);

struct OracleSpec {
  double box = 8.0;       // domain [-box, box)^n
  int grid = 128;         // points per axis, power of two
  double dt_target = 0.0; // 0: stability-based choice
  double tol = 1e-6;      // refuse if the refinement estimate exceeds this
};

struct OracleResult {
  double value = 0.0;
  double error_estimate = 0.0;  // time-halving + spatial-coarsening deltas
  double mass = 0.0;            // grid integral of the kernel
};

// Brute-force verification of the kernel: spectral discretization of
// d_t K = -L K on a periodic box from a discrete delta, integrated with RK4.
// n <= 2. Throws if the Richardson-style estimate exceeds spec.tol.
OracleResult oscillator_oracle(const CMatrix& omega, double u, const std::array<double, 3>& X,
                               const OracleSpec& spec);

// Radix-2 in-place FFT, forward for sign = -1 (exp(-i k x) analysis).
void fft_inplace(std::vector<cdouble>& data, int sign);

}  // namespace specflow
