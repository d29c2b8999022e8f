#pragma once

#include <cstdint>
#include <vector>

#include "specflow/cmatrix.hpp"

namespace specflow {

// Concrete matrix representation of the complex Clifford algebra Cl(n) for
// odd n, with the sign convention c(v)^2 = -|v|^2. Generators are built as
// -i times a Hermitian anticommuting family obtained by tensor doubling with
// Pauli matrices, so each c(e_i) is skew-Hermitian and any assembled Dirac
// matrix is Hermitian by construction.
struct CliffordRep {
  int n = 0;                       // odd dimension, 1 <= n <= 7
  std::size_t dim_spinor = 0;      // 2^((n-1)/2)
  std::vector<CMatrix> generators; // generators[i] = c(e_{i+1})
};

CliffordRep build_generators(int n);

// tr[c(e_{i1}) ... c(e_{ik})] for a strictly increasing multi-index with
// entries in 1..n, computed from the generator matrices.
cdouble monomial_trace(const CliffordRep& rep, const std::vector<int>& index);

// Closed-form value of the same trace: 2^((n-1)/2) for the empty index,
// 2^((n-1)/2) (-i)^((n+1)/2) for the full index (1,...,n), zero otherwise.
cdouble monomial_trace_rule(int n, const std::vector<int>& index);

// Exterior-algebra model of the spinor space: the 2^n-dimensional algebra
// Lambda^*(R^n)^* with exterior multiplication eps(e^i) and contraction
// iota(e_i). Basis states are index subsets encoded as bitmasks, ordered by
// increasing mask value.
struct ExteriorRep {
  int n = 0;
  std::size_t dim() const { return std::size_t(1) << n; }

  // Action of eps(e^i) on basis state `mask` (i in 1..n). Returns the image
  // basis mask and writes the shuffle sign; zero sign means the image is 0.
  std::uint32_t apply_wedge(int i, std::uint32_t mask, int* sign) const;
  std::uint32_t apply_contraction(int i, std::uint32_t mask, int* sign) const;

  // Dense matrix of eps(e^i) - iota(e_i), squaring to -Id.
  CMatrix clifford_action(int i) const;
};

ExteriorRep build_exterior(int n);

}  // namespace specflow
