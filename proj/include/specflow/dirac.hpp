#pragma once

#include <cstdint>
#include <vector>

#include "specflow/clifford.hpp"
#include "specflow/gauge.hpp"

namespace specflow {

// Basis descriptor for the truncated Fourier (x) spinor (x) C^k space.
// Global index = (mode_index * dim_spinor + spinor) * k + fiber, with modes
// enumerated lexicographically over {-N..N}^n (last coordinate fastest).
struct DiracBasis {
  ManifoldModel model;
  int n = 1;
  int cutoff = 0;       // N
  std::size_t dim_spinor = 1;
  int k = 1;

  std::size_t modes_per_axis() const { return std::size_t(2 * cutoff + 1); }
  std::size_t mode_count() const;
  std::size_t dim() const { return mode_count() * dim_spinor * std::size_t(k); }

  std::size_t mode_index(const Mode& m) const;
  Mode mode_at(std::size_t idx) const;
  bool mode_in_range(const Mode& m) const;
};

// Hermitian matrix of D_s = D_0 + s c(a_hat), a_hat = r a, in the truncated
// basis. Hermiticity is exact by construction: entry (q,p) is stored as the
// conjugate of (p,q).
struct DiracMatrix {
  DiracBasis basis;
  double s = 0.0, r = 1.0;
  CMatrix matrix;
};

// Assemble D_s. Requires cutoff >= mode_radius(a) + 1 (Nyquist margin) and a
// rank matching k.
DiracMatrix assemble(const ManifoldModel& model, const GaugeField& a, int k, int cutoff, double s,
                     double r);

// Operator 2-norm of the coupling term r c(a) (the s-Lipschitz constant of
// the family), via power iteration on the assembled coupling block.
double coupling_norm(const ManifoldModel& model, const GaugeField& a, int k, int cutoff, double r);

}  // namespace specflow
