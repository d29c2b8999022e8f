#include "specflow/eta.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <sstream>
#include <stdexcept>

#include "specflow/cmatrix.hpp"

namespace specflow {

namespace {
constexpr double kSqrtPi = 1.7724538509055160272981674833411;

struct Windowed {
  std::vector<double> vals;  // ascending, |v| <= window
  double eps_ker = 0.0;
  double min_nonzero = 0.0;
  long long dim_ker = 0;
};

Windowed window_spectrum(const std::vector<double>& eigs, double lam) {
  Windowed w;
  w.vals.reserve(eigs.size());
  double max_abs = 0.0;
  for (double v : eigs) max_abs = std::max(max_abs, std::abs(v));
  for (double v : eigs)
    if (lam <= 0.0 || std::abs(v) <= lam) w.vals.push_back(v);
  if (w.vals.empty()) throw std::invalid_argument("eta: empty spectral window");
  for (std::size_t i = 0; i + 1 < w.vals.size(); ++i)
    if (w.vals[i] > w.vals[i + 1]) throw std::invalid_argument("eta: spectrum must be sorted");

  const double machine_floor = 1e-12 * (1.0 + max_abs);
  double min_nonzero = 0.0;
  for (double v : w.vals) {
    const double a = std::abs(v);
    if (a > machine_floor && (min_nonzero == 0.0 || a < min_nonzero)) min_nonzero = a;
  }
  w.min_nonzero = min_nonzero;
  w.eps_ker = 1e-8 * (1.0 + min_nonzero);
  for (double v : w.vals)
    if (std::abs(v) < w.eps_ker) ++w.dim_ker;
  return w;
}

}  // namespace

EtaResult eta_heat_trace(const std::vector<double>& eigs, double R, const EtaOptions& opts) {
  Windowed w = window_spectrum(eigs, opts.lambda_window);
  EtaResult res;
  res.lambda_window = opts.lambda_window;
  res.window_count = w.vals.size();
  res.eps_ker = w.eps_ker;
  res.min_nonzero_abs = w.min_nonzero;
  res.dim_ker = w.dim_ker;
  res.flat_family = (R <= 0.0);
  res.t0 = res.flat_family ? 1.0 : 1.0 / (2.0 * R);

  // tail beyond the window
  double tail = 0.0;
  double tail_estimate = 0.0;
  if (opts.tail == TailModel::UnitLattice) {
    const double lmax = w.vals.back();
    const double lmin = w.vals.front();
    if (lmax < 5.0 || -lmin < 5.0) {
      std::ostringstream msg;
      msg << "eta: window too small for the lattice tail; need >= 5 levels per side, suggest "
             "lambda_window >= "
          << 8.0;
      throw std::invalid_argument(msg.str());
    }
    // zeta_H(0, a) = 1/2 - a applied to both lattice tails
    tail = std::abs(lmin) - lmax;
  } else {
    // symmetric model: diagnostic asymmetry of the outer half-window
    long long outer = 0;
    const double lam_eff = (opts.lambda_window > 0.0)
                               ? opts.lambda_window
                               : std::max(std::abs(w.vals.front()), std::abs(w.vals.back()));
    for (double v : w.vals) {
      if (std::abs(v) <= 0.5 * lam_eff || std::abs(v) < w.eps_ker) continue;
      outer += (v > 0.0) ? 1 : -1;
    }
    tail_estimate = double(std::llabs(outer));  // zero when the shell is symmetric
    if (tail_estimate > opts.tail_tol) {
      std::ostringstream msg;
      msg << "eta: window too small (outer-shell sign asymmetry " << outer
          << " under the symmetric tail model); suggest doubling lambda_window";
      throw std::invalid_argument(msg.str());
    }
  }
  res.tail_correction = tail;
  res.tail_estimate = tail_estimate;

  // integer sign sum over the window
  long long sign_sum = 0;
  for (double v : w.vals) {
    if (std::abs(v) < w.eps_ker) continue;
    sign_sum += (v > 0.0) ? 1 : -1;
  }
  res.eta = double(sign_sum) + tail;
  res.reduced_eta = 0.5 * (res.eta + double(res.dim_ker));

  // t0-split diagnostics from the closed-form time integrals; the tail is
  // booked into the small-time part (it is a UV object).
  const double sqrt_t0 = std::sqrt(res.t0);
  double small = 0.0, large = 0.0;
  for (double v : w.vals) {
    if (std::abs(v) < w.eps_ker) continue;
    const double sgn = (v > 0.0) ? 1.0 : -1.0;
    small += sgn * std::erf(std::abs(v) * sqrt_t0);
    large += sgn * std::erfc(std::abs(v) * sqrt_t0);
  }
  res.small_time_part = kSqrtPi * (small + tail);
  res.large_time_part = kSqrtPi * large;
  return res;
}

double hurwitz_zeta_em(double z, double a) {
  require(a > 0.0, "hurwitz zeta: a must be positive");
  require(z != 1.0, "hurwitz zeta: pole at z = 1");
  require(z > -7.0, "hurwitz zeta: Euler-Maclaurin order supports z > -7");
  const int M = 24;
  // direct part
  double acc = 0.0;
  for (int j = 0; j < M; ++j) acc += std::pow(a + j, -z);
  const double am = a + M;
  acc += std::pow(am, 1.0 - z) / (z - 1.0);
  acc += 0.5 * std::pow(am, -z);
  // Bernoulli corrections B_2, B_4, ..., rising factorial z(z+1)...(z+2k-2)
  static const double bern[] = {1.0 / 6.0, -1.0 / 30.0, 1.0 / 42.0, -1.0 / 30.0, 5.0 / 66.0};
  double rising = z;            // k = 1: (z)_1
  double fact = 2.0;            // (2k)!
  double power = std::pow(am, -z - 1.0);
  for (int k = 1; k <= 5; ++k) {
    acc += bern[k - 1] / fact * rising * power;
    // advance to k+1
    rising *= (z + 2.0 * k - 1.0) * (z + 2.0 * k);
    fact *= (2.0 * k + 1.0) * (2.0 * k + 2.0);
    power /= am * am;
  }
  return acc;
}

double circle_eta_oracle(double c) {
  double frac = c - std::floor(c);
  if (frac < 1e-12 || frac > 1.0 - 1e-12) return 0.0;  // integer shift: symmetric spectrum
  return hurwitz_zeta_em(0.0, frac) - hurwitz_zeta_em(0.0, 1.0 - frac);
}

LargeTimeCheckResult large_time_check(const std::vector<double>& eigs, double R, int n_dim,
                                      const EtaOptions& opts) {
  LargeTimeCheckResult out;
  if (R <= 0.0) {
    out.flat_family = true;
    return out;
  }
  const double t0 = 1.0 / (2.0 * R);
  double trace = 0.0;
  for (double v : eigs) trace += std::exp(-0.5 * t0 * v * v);
  out.trace_value = trace;
  out.bound_ratio = trace / std::pow(R, 0.5 * n_dim);

  EtaResult eta = eta_heat_trace(eigs, R, opts);
  out.large_time_part = eta.large_time_part;
  out.bound_holds = std::abs(eta.large_time_part) <= 0.5 * kSqrtPi * trace * (1.0 + 1e-12);
  return out;
}

}  // namespace specflow
