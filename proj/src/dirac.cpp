#include "specflow/dirac.hpp"

#include <cmath>

namespace specflow {

std::size_t DiracBasis::mode_count() const {
  std::size_t c = 1;
  for (int i = 0; i < n; ++i) c *= modes_per_axis();
  return c;
}

std::size_t DiracBasis::mode_index(const Mode& m) const {
  std::size_t idx = 0;
  for (int i = 0; i < n; ++i) idx = idx * modes_per_axis() + std::size_t(m[std::size_t(i)] + cutoff);
  return idx;
}

Mode DiracBasis::mode_at(std::size_t idx) const {
  Mode m{0, 0, 0};
  for (int i = n - 1; i >= 0; --i) {
    m[std::size_t(i)] = int(idx % modes_per_axis()) - cutoff;
    idx /= modes_per_axis();
  }
  return m;
}

bool DiracBasis::mode_in_range(const Mode& m) const {
  for (int i = 0; i < n; ++i)
    if (std::abs(m[std::size_t(i)]) > cutoff) return false;
  return true;
}

DiracMatrix assemble(const ManifoldModel& model, const GaugeField& a, int k, int cutoff, double s,
                     double r) {
  require(k == a.rank(), "assemble: bundle rank mismatch");
  require(model.dim() == a.model().dim() && model.kind == a.model().kind,
          "assemble: gauge field lives on a different model");
  if (cutoff < a.mode_radius() + 1) throw std::invalid_argument("truncation below Nyquist margin");

  const CliffordRep cl = build_generators(model.dim());
  DiracMatrix dm;
  dm.basis = DiracBasis{model, model.dim(), cutoff, cl.dim_spinor, k};
  dm.s = s;
  dm.r = r;

  const std::size_t nmodes = dm.basis.mode_count();
  const std::size_t block = cl.dim_spinor * std::size_t(k);
  const std::size_t dim = nmodes * block;
  dm.matrix = CMatrix(dim, dim);
  CMatrix& M = dm.matrix;

  // D_0: block-diagonal over modes, sum_j (i m_j) c(e_j) (x) Id_k. With the
  // generators c(e_j) = -i h_j this is sum_j m_j h_j, Hermitian per block.
  for (std::size_t mi = 0; mi < nmodes; ++mi) {
    const Mode m = dm.basis.mode_at(mi);
    const std::size_t base = mi * block;
    for (int j = 0; j < model.dim(); ++j) {
      const double mj = double(m[std::size_t(j)]);
      if (mj == 0.0) continue;
      const CMatrix& c = cl.generators[std::size_t(j)];
      for (std::size_t p = 0; p < cl.dim_spinor; ++p)
        for (std::size_t q = 0; q < cl.dim_spinor; ++q) {
          const cdouble v = cdouble(0.0, mj) * c(p, q);
          if (v == cdouble(0.0, 0.0)) continue;
          for (int f = 0; f < k; ++f)
            M(base + p * std::size_t(k) + std::size_t(f), base + q * std::size_t(k) + std::size_t(f)) += v;
        }
    }
  }

  // Coupling s c(a_hat) = s r sum_j c(e_j) (x) a_j: mode q -> q + m' with
  // coefficient s r c(e_j) (x) coeff_{j,m'}. Fill the upper-mode half and
  // mirror the conjugate so Hermiticity is exact by construction.
  const double sr = s * r;
  if (sr != 0.0) {
    for (const auto& [key, mat] : a.coeffs()) {
      const auto& [dir, mshift] = key;
      const CMatrix& c = cl.generators[std::size_t(dir - 1)];
      for (std::size_t qi = 0; qi < nmodes; ++qi) {
        const Mode src = dm.basis.mode_at(qi);
        const Mode dst = src + mshift;
        if (!dm.basis.mode_in_range(dst)) continue;
        const std::size_t pi = dm.basis.mode_index(dst);
        if (pi < qi) continue;  // lower half filled by mirroring
        const bool diag_block = (pi == qi);
        for (std::size_t p = 0; p < cl.dim_spinor; ++p)
          for (std::size_t q = 0; q < cl.dim_spinor; ++q) {
            if (c(p, q) == cdouble(0.0, 0.0)) continue;
            for (int fp = 0; fp < k; ++fp)
              for (int fq = 0; fq < k; ++fq) {
                const cdouble v = sr * c(p, q) * mat(std::size_t(fp), std::size_t(fq));
                if (v == cdouble(0.0, 0.0)) continue;
                const std::size_t row = pi * block + p * std::size_t(k) + std::size_t(fp);
                const std::size_t col = qi * block + q * std::size_t(k) + std::size_t(fq);
                M(row, col) += v;
                if (!diag_block) M(col, row) += std::conj(v);
              }
          }
      }
    }
  }

  return dm;
}

double coupling_norm(const ManifoldModel& model, const GaugeField& a, int k, int cutoff, double r) {
  const DiracMatrix d1 = assemble(model, a, k, cutoff, 1.0, r);
  const DiracMatrix d0 = assemble(model, a, k, cutoff, 0.0, r);
  CMatrix diff = d1.matrix;
  diff -= d0.matrix;
  return diff.operator_norm();
}

}  // namespace specflow
