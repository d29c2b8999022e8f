#include "specflow/clifford.hpp"

#include <bit>
#include <cmath>

namespace specflow {

namespace {

CMatrix pauli(int which) {
  CMatrix m(2, 2);
  switch (which) {
    case 1:
      m(0, 1) = 1.0;
      m(1, 0) = 1.0;
      break;
    case 2:
      m(0, 1) = cdouble(0.0, -1.0);
      m(1, 0) = cdouble(0.0, 1.0);
      break;
    default:
      m(0, 0) = 1.0;
      m(1, 1) = -1.0;
      break;
  }
  return m;
}

// Hermitian anticommuting family h_1..h_n with h_i^2 = Id, by doubling:
// n=1: (1); n -> n+2: sigma_1 (x) h_i, plus sigma_2 (x) I and sigma_3 (x) I.
std::vector<CMatrix> hermitian_family(int n) {
  std::vector<CMatrix> h;
  h.push_back(CMatrix::identity(1));
  int cur = 1;
  while (cur < n) {
    const std::size_t d = h[0].rows();
    std::vector<CMatrix> next;
    next.reserve(h.size() + 2);
    for (const auto& hi : h) next.push_back(kron(pauli(1), hi));
    next.push_back(kron(pauli(2), CMatrix::identity(d)));
    next.push_back(kron(pauli(3), CMatrix::identity(d)));
    h = std::move(next);
    cur += 2;
  }
  return h;
}

}  // namespace

CliffordRep build_generators(int n) {
  require(n >= 1 && n % 2 == 1, "dimension must be odd");
  require(n <= 7, "dimension above supported range (n <= 7)");
  CliffordRep rep;
  rep.n = n;
  rep.dim_spinor = std::size_t(1) << ((n - 1) / 2);
  auto h = hermitian_family(n);
  rep.generators.reserve(n);
  for (auto& hi : h) {
    hi *= cdouble(0.0, -1.0);  // c(e_i) = -i h_i, skew-Hermitian, square -Id
    rep.generators.push_back(std::move(hi));
  }
  return rep;
}

cdouble monomial_trace(const CliffordRep& rep, const std::vector<int>& index) {
  int prev = 0;
  for (int i : index) {
    require(i >= 1 && i <= rep.n, "monomial index out of range");
    require(i > prev, "monomial index must be strictly increasing");
    prev = i;
  }
  CMatrix prod = CMatrix::identity(rep.dim_spinor);
  for (int i : index) prod = matmul(prod, rep.generators[std::size_t(i - 1)]);
  return prod.trace();
}

cdouble monomial_trace_rule(int n, const std::vector<int>& index) {
  const double dim = std::pow(2.0, (n - 1) / 2);
  if (index.empty()) return dim;
  if (int(index.size()) == n) {
    // full monomial: dim * (-i)^((n+1)/2)
    cdouble f(1.0, 0.0);
    for (int j = 0; j < (n + 1) / 2; ++j) f *= cdouble(0.0, -1.0);
    return dim * f;
  }
  return 0.0;
}

std::uint32_t ExteriorRep::apply_wedge(int i, std::uint32_t mask, int* sign) const {
  const std::uint32_t bit = std::uint32_t(1) << (i - 1);
  if (mask & bit) {
    *sign = 0;
    return mask;
  }
  // sign from moving e^i past the lower-index factors already present
  const int swaps = std::popcount(mask & (bit - 1));
  *sign = (swaps % 2 == 0) ? 1 : -1;
  return mask | bit;
}

std::uint32_t ExteriorRep::apply_contraction(int i, std::uint32_t mask, int* sign) const {
  const std::uint32_t bit = std::uint32_t(1) << (i - 1);
  if (!(mask & bit)) {
    *sign = 0;
    return mask;
  }
  const int swaps = std::popcount(mask & (bit - 1));
  *sign = (swaps % 2 == 0) ? 1 : -1;
  return mask & ~bit;
}

CMatrix ExteriorRep::clifford_action(int i) const {
  const std::size_t d = dim();
  CMatrix m(d, d);
  for (std::uint32_t mask = 0; mask < d; ++mask) {
    int sw = 0, sc = 0;
    const std::uint32_t w = apply_wedge(i, mask, &sw);
    const std::uint32_t c = apply_contraction(i, mask, &sc);
    if (sw != 0) m(w, mask) += double(sw);
    if (sc != 0) m(c, mask) -= double(sc);
  }
  return m;
}

ExteriorRep build_exterior(int n) {
  require(n >= 1 && n % 2 == 1, "dimension must be odd");
  require(n <= 7, "dimension above supported range (n <= 7)");
  ExteriorRep rep;
  rep.n = n;
  return rep;
}

}  // namespace specflow
