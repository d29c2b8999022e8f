#include "specflow/eigensolver.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace specflow {

namespace {

// Implicit-shift QL with Wilkinson shifts on a real symmetric tridiagonal
// matrix. d has length n, e has length >= n with e[i] coupling i and i+1
// (e[n-1] is scratch). Rotations are accumulated into the complex column
// basis z when present.
void tridiag_ql(std::vector<double>& d, std::vector<double>& e, CMatrix* z) {
  const std::size_t n = d.size();
  if (n <= 1) return;
  const int max_sweeps = 60;
  for (std::size_t l = 0; l < n; ++l) {
    int iter = 0;
    std::size_t m;
    do {
      for (m = l; m + 1 < n; ++m) {
        const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
        if (std::abs(e[m]) <= 1e-300 || std::abs(e[m]) <= 2.3e-16 * dd) break;
      }
      if (m != l) {
        if (iter++ == max_sweeps) throw std::runtime_error("eigensolver: QL failed to converge");
        double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
        double r = std::hypot(g, 1.0);
        g = d[m] - d[l] + e[l] / (g + (g >= 0.0 ? std::abs(r) : -std::abs(r)));
        double s = 1.0, c = 1.0, p = 0.0;
        bool underflow = false;
        for (std::size_t i = m; i-- > l;) {
          double f = s * e[i];
          const double b = c * e[i];
          r = std::hypot(f, g);
          e[i + 1] = r;
          if (r == 0.0) {
            d[i + 1] -= p;
            e[m] = 0.0;
            underflow = true;
            break;
          }
          s = f / r;
          c = g / r;
          g = d[i + 1] - p;
          r = (d[i] - g) * s + 2.0 * c * b;
          p = s * r;
          d[i + 1] = g + p;
          g = c * r - b;
          if (z) {
            CMatrix& v = *z;
            const std::size_t dim = v.rows();
            for (std::size_t k = 0; k < dim; ++k) {
              const cdouble f2 = v(k, i + 1);
              v(k, i + 1) = s * v(k, i) + c * f2;
              v(k, i) = c * v(k, i) - s * f2;
            }
          }
        }
        if (underflow) continue;
        d[l] -= p;
        e[l] = g;
        e[m] = 0.0;
      }
    } while (m != l);
  }
}

}  // namespace

EighResult hermitian_eigh(const CMatrix& a_in, bool want_vectors) {
  require(a_in.rows() == a_in.cols(), "eigh: matrix must be square");
  const std::size_t n = a_in.rows();
  EighResult res;
  res.eigenvalues.resize(n);
  if (n == 0) return res;

  if (n == 1) {
    res.eigenvalues[0] = a_in(0, 0).real();
    if (want_vectors) {
      res.eigenvectors = CMatrix(1, 1);
      res.eigenvectors(0, 0) = 1.0;
    }
    return res;
  }

  // Fast path: already diagonal (circle families with constant gauge).
  bool diagonal = true;
  for (std::size_t i = 0; i < n && diagonal; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j && a_in(i, j) != cdouble(0.0, 0.0)) {
        diagonal = false;
        break;
      }
  if (diagonal) {
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t i, std::size_t j) { return a_in(i, i).real() < a_in(j, j).real(); });
    for (std::size_t i = 0; i < n; ++i) res.eigenvalues[i] = a_in(order[i], order[i]).real();
    if (want_vectors) {
      res.eigenvectors = CMatrix(n, n);
      for (std::size_t i = 0; i < n; ++i) res.eigenvectors(order[i], i) = 1.0;
    }
    return res;
  }

  CMatrix a = a_in;
  CMatrix q;
  if (want_vectors) q = CMatrix::identity(n);

  // Householder reduction to Hermitian tridiagonal form. Skips columns that
  // are already in tridiagonal shape, so banded input costs O(n^2).
  std::vector<cdouble> w(n), u(n);
  for (std::size_t k = 0; k + 2 < n; ++k) {
    double scale = 0.0;
    for (std::size_t i = k + 1; i < n; ++i) scale = std::max(scale, std::abs(a(i, k)));
    if (scale == 0.0) continue;
    bool below_zero = true;
    for (std::size_t i = k + 2; i < n && below_zero; ++i)
      if (a(i, k) != cdouble(0.0, 0.0)) below_zero = false;
    if (below_zero) continue;

    double sigma2 = 0.0;
    for (std::size_t i = k + 1; i < n; ++i) {
      const cdouble x = a(i, k) / scale;
      w[i] = x;
      sigma2 += std::norm(x);
    }
    const double sigma = std::sqrt(sigma2);
    const cdouble alpha = w[k + 1];
    const cdouble phase = (alpha == cdouble(0.0, 0.0)) ? cdouble(1.0, 0.0) : alpha / std::abs(alpha);
    const cdouble beta = -phase * sigma;
    w[k + 1] -= beta;
    double wnorm2 = 0.0;
    for (std::size_t i = k + 1; i < n; ++i) wnorm2 += std::norm(w[i]);
    const double inv = 1.0 / std::sqrt(wnorm2);
    for (std::size_t i = k + 1; i < n; ++i) w[i] *= inv;

    // Two-sided update A := (I - 2ww^H) A (I - 2ww^H) on the trailing block,
    // written as A -= 2 w v^H + 2 v w^H with v = Aw - (w^H A w) w.
    for (std::size_t i = k + 1; i < n; ++i) {
      cdouble acc = 0.0;
      for (std::size_t j = k + 1; j < n; ++j) acc += a(i, j) * w[j];
      u[i] = acc;
    }
    cdouble wu = 0.0;
    for (std::size_t i = k + 1; i < n; ++i) wu += std::conj(w[i]) * u[i];
    const double gamma = wu.real();  // real for Hermitian A
    for (std::size_t i = k + 1; i < n; ++i) u[i] -= gamma * w[i];
    for (std::size_t i = k + 1; i < n; ++i) {
      const cdouble wi = w[i];
      const cdouble vi = u[i];
      for (std::size_t j = k + 1; j < n; ++j)
        a(i, j) -= 2.0 * wi * std::conj(u[j]) + 2.0 * vi * std::conj(w[j]);
    }
    a(k + 1, k) = beta * scale;
    a(k, k + 1) = std::conj(beta * scale);
    for (std::size_t i = k + 2; i < n; ++i) a(i, k) = a(k, i) = 0.0;

    if (want_vectors) {
      // Q := Q (I - 2ww^H)
      for (std::size_t r = 0; r < n; ++r) {
        cdouble acc = 0.0;
        for (std::size_t j = k + 1; j < n; ++j) acc += q(r, j) * w[j];
        acc *= 2.0;
        for (std::size_t j = k + 1; j < n; ++j) q(r, j) -= acc * std::conj(w[j]);
      }
    }
  }

  // Unitary diagonal similarity rotating the subdiagonal onto the real
  // nonnegative axis: phi[i+1] = a(i+1,i) phi[i] / |a(i+1,i)|.
  std::vector<double> d(n), e(n, 0.0);
  std::vector<cdouble> phi(n, cdouble(1.0, 0.0));
  for (std::size_t i = 0; i < n; ++i) d[i] = a(i, i).real();
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const cdouble sub = a(i + 1, i);
    const double mag = std::abs(sub);
    e[i] = mag;
    phi[i + 1] = (mag > 0.0) ? sub * phi[i] / mag : phi[i];
  }
  if (want_vectors) {
    for (std::size_t j = 0; j < n; ++j) {
      if (phi[j] == cdouble(1.0, 0.0)) continue;
      for (std::size_t r = 0; r < n; ++r) q(r, j) *= phi[j];
    }
  }

  tridiag_ql(d, e, want_vectors ? &q : nullptr);

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return d[i] < d[j]; });
  for (std::size_t i = 0; i < n; ++i) res.eigenvalues[i] = d[order[i]];

  if (want_vectors) {
    res.eigenvectors = CMatrix(n, n);
    for (std::size_t c = 0; c < n; ++c) {
      const std::size_t src = order[c];
      std::size_t imax = 0;
      double vmax = -1.0;
      for (std::size_t r = 0; r < n; ++r) {
        const double v = std::abs(q(r, src));
        if (v > vmax + 1e-15) {
          vmax = v;
          imax = r;
        }
      }
      cdouble ph(1.0, 0.0);
      if (vmax > 0.0) ph = std::conj(q(imax, src)) / vmax;
      for (std::size_t r = 0; r < n; ++r) res.eigenvectors(r, c) = q(r, src) * ph;
    }
  }
  return res;
}

double eigh_residual(const CMatrix& a, const EighResult& r) {
  if (r.eigenvectors.empty()) return 0.0;
  const std::size_t n = a.rows();
  double worst = 0.0;
  for (std::size_t c = 0; c < n; ++c) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      cdouble acc = 0.0;
      for (std::size_t j = 0; j < n; ++j) acc += a(i, j) * r.eigenvectors(j, c);
      acc -= r.eigenvalues[c] * r.eigenvectors(i, c);
      s += std::norm(acc);
    }
    worst = std::max(worst, std::sqrt(s));
  }
  return worst;
}

double eigh_orthonormality_defect(const EighResult& r) {
  if (r.eigenvectors.empty()) return 0.0;
  const std::size_t n = r.eigenvectors.cols();
  const std::size_t dim = r.eigenvectors.rows();
  double worst = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) {
      cdouble acc = 0.0;
      for (std::size_t k = 0; k < dim; ++k) acc += std::conj(r.eigenvectors(k, i)) * r.eigenvectors(k, j);
      if (i == j) acc -= 1.0;
      worst = std::max(worst, std::abs(acc));
    }
  return worst;
}

}  // namespace specflow
