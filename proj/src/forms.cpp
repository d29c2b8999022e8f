#include "specflow/forms.hpp"

#include <bit>
#include <cmath>

namespace specflow {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;
}

bool MatrixForm::zero() const { return terms_.empty(); }

void MatrixForm::add_term(std::uint32_t mask, const Mode& m, const CMatrix& coeff) {
  if (std::popcount(mask) > n_) return;
  require(int(coeff.rows()) == k_ && int(coeff.cols()) == k_, "form coefficient rank mismatch");
  auto it = terms_.find({mask, m});
  if (it == terms_.end()) {
    if (coeff.max_abs() == 0.0) return;
    terms_.emplace(Key{mask, m}, coeff);
  } else {
    it->second += coeff;
    if (it->second.max_abs() == 0.0) terms_.erase(it);
  }
}

CMatrix MatrixForm::coefficient(std::uint32_t mask, const Mode& m) const {
  auto it = terms_.find({mask, m});
  if (it == terms_.end()) return CMatrix(k_, k_);
  return it->second;
}

int MatrixForm::pure_degree() const {
  int deg = -1;
  for (const auto& [key, coeff] : terms_) {
    const int d = std::popcount(key.first);
    if (deg == -1) deg = d;
    else if (deg != d) return -1;
  }
  return deg;
}

MatrixForm& MatrixForm::operator+=(const MatrixForm& o) {
  require(n_ == o.n_ && k_ == o.k_, "form shape mismatch");
  for (const auto& [key, coeff] : o.terms_) add_term(key.first, key.second, coeff);
  return *this;
}

MatrixForm& MatrixForm::operator*=(cdouble z) {
  if (z == cdouble(0.0, 0.0)) {
    terms_.clear();
    return *this;
  }
  for (auto& [key, coeff] : terms_) coeff *= z;
  return *this;
}

CMatrix MatrixForm::value_at(std::uint32_t mask, const std::array<double, 3>& x) const {
  CMatrix v(k_, k_);
  for (const auto& [key, coeff] : terms_) {
    if (key.first != mask) continue;
    const Mode& m = key.second;
    const double ph = m[0] * x[0] + m[1] * x[1] + m[2] * x[2];
    v += cdouble(std::cos(ph), std::sin(ph)) * coeff;
  }
  return v;
}

int shuffle_sign(std::uint32_t a, std::uint32_t b) {
  // (-1)^{# pairs (i in a, j in b) with i > j}
  int inversions = 0;
  for (std::uint32_t bits = a; bits;) {
    const std::uint32_t low = bits & (~bits + 1);
    inversions += std::popcount(b & (low - 1));
    bits ^= low;
  }
  return (inversions % 2 == 0) ? 1 : -1;
}

MatrixForm wedge(const MatrixForm& w1, const MatrixForm& w2) {
  require(w1.manifold_dim() == w2.manifold_dim() && w1.rank() == w2.rank(), "wedge shape mismatch");
  MatrixForm out(w1.manifold_dim(), w1.rank());
  for (const auto& [ka, ca] : w1.terms()) {
    for (const auto& [kb, cb] : w2.terms()) {
      if (ka.first & kb.first) continue;
      if (std::popcount(ka.first | kb.first) > w1.manifold_dim()) continue;
      const int sign = shuffle_sign(ka.first, kb.first);
      out.add_term(ka.first | kb.first, ka.second + kb.second, double(sign) * matmul(ca, cb));
    }
  }
  return out;
}

MatrixForm exterior_d(const MatrixForm& w) {
  MatrixForm out(w.manifold_dim(), w.rank());
  for (const auto& [key, coeff] : w.terms()) {
    const Mode& m = key.second;
    for (int j = 1; j <= w.manifold_dim(); ++j) {
      if (m[j - 1] == 0) continue;
      const std::uint32_t bit = std::uint32_t(1) << (j - 1);
      if (key.first & bit) continue;
      const int sign = shuffle_sign(bit, key.first);
      out.add_term(key.first | bit, m, cdouble(0.0, double(m[j - 1])) * double(sign) * coeff);
    }
  }
  return out;
}

namespace {

// exp of a form with even degrees >= 2; terminates by nilpotency.
MatrixForm exp_even(const MatrixForm& f) {
  MatrixForm acc(f.manifold_dim(), f.rank());
  CMatrix one = CMatrix::identity(std::size_t(f.rank()));
  acc.add_term(0, mode_zero(), one);
  MatrixForm power = acc;
  double fact = 1.0;
  const int max_j = f.manifold_dim() / 2;
  for (int j = 1; j <= max_j; ++j) {
    power = wedge(power, f);
    if (power.zero()) break;
    fact *= double(j);
    acc += (1.0 / fact) * power;
  }
  return acc;
}

}  // namespace

MatrixForm exp_form(const MatrixForm& f) {
  if (!f.zero()) require(f.pure_degree() == 2, "exp_form expects a degree-2 form");
  return exp_even(f);
}

MatrixForm trace_form(const MatrixForm& w) {
  MatrixForm out(w.manifold_dim(), 1);
  for (const auto& [key, coeff] : w.terms()) {
    CMatrix t(1, 1);
    t(0, 0) = coeff.trace();
    out.add_term(key.first, key.second, t);
  }
  return out;
}

cdouble integrate_top(const MatrixForm& w) {
  require(w.rank() == 1, "integrate_top expects a rank-1 form");
  const std::uint32_t full = (std::uint32_t(1) << w.manifold_dim()) - 1;
  const CMatrix c = w.coefficient(full, mode_zero());
  double vol = 1.0;
  for (int i = 0; i < w.manifold_dim(); ++i) vol *= kTwoPi;
  return c.empty() ? cdouble(0.0, 0.0) : vol * c(0, 0);
}

std::vector<double> log_sinh_over_x_coefficients(int count) {
  // log(sinh x / x) = x^2/6 - x^4/180 + x^6/2835 - x^8/37800 + x^10/467775 - ...
  static const double c[5] = {1.0 / 6.0, -1.0 / 180.0, 1.0 / 2835.0, -1.0 / 37800.0, 1.0 / 467775.0};
  require(count >= 0 && count <= 5, "log sinh series: unsupported order");
  return std::vector<double>(c, c + count);
}

MatrixForm a_hat(const MatrixForm& omega_tm, int max_degree) {
  if (!omega_tm.zero()) require(omega_tm.pure_degree() % 2 == 0, "a_hat expects an even-degree input");
  const int n = omega_tm.manifold_dim();
  MatrixForm unit(n, 1);
  CMatrix one(1, 1);
  one(0, 0) = 1.0;
  unit.add_term(0, mode_zero(), one);
  if (omega_tm.zero()) return unit;
  require(omega_tm.pure_degree() == 2, "a_hat expects a degree-2 curvature");

  const double inv4pi = 1.0 / (2.0 * kTwoPi);
  MatrixForm y = cdouble(inv4pi, 0.0) * omega_tm;

  // L = sum_j c_j y^{2j}, truncated by degree; tr over the tangent index.
  const int max_j = std::min(max_degree, n) / 4;
  auto coeffs = log_sinh_over_x_coefficients(std::max(1, max_j));
  MatrixForm log_term(n, 1);
  MatrixForm y2 = wedge(y, y);
  MatrixForm power = y2;
  for (int j = 1; j <= max_j; ++j) {
    log_term += cdouble(coeffs[std::size_t(j - 1)], 0.0) * trace_form(power);
    if (j < max_j) power = wedge(power, y2);
  }
  return exp_even(cdouble(-0.5, 0.0) * log_term);
}

}  // namespace specflow
