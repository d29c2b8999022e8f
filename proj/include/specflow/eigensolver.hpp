#pragma once

#include <vector>

#include "specflow/cmatrix.hpp"

namespace specflow {

// Dense Hermitian eigensolver: Householder reduction to real symmetric
// tridiagonal form followed by implicit-shift QL sweeps. Eigenvalues are
// returned in ascending order; eigenvector phases are normalized so the
// largest-modulus component of each column is real positive (deterministic
// output for identical input).
//
// Throws std::runtime_error if a QL eigenvalue fails to converge within the
// sweep budget (does not happen for Hermitian input in practice).
struct EighResult {
  std::vector<double> eigenvalues;
  CMatrix eigenvectors;  // columns; empty unless requested
};

EighResult hermitian_eigh(const CMatrix& a, bool want_vectors);

// Residual max_i ||A v_i - lambda_i v_i||_2, for diagnostics and tests.
double eigh_residual(const CMatrix& a, const EighResult& r);

// max_ij |V^H V - I|_ij
double eigh_orthonormality_defect(const EighResult& r);

}  // namespace specflow
