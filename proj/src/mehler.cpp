#include "specflow/mehler.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "specflow/eigensolver.hpp"

namespace specflow {

namespace {
constexpr double kPi = 3.14159265358979323846;

void validate_omega(const CMatrix& omega, int n) {
  require(int(omega.rows()) == n && int(omega.cols()) == n, "mehler: omega shape mismatch");
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      require(std::abs(omega(std::size_t(i), std::size_t(j)).imag()) == 0.0,
              "mehler: omega must be real");
      const double defect =
          std::abs(omega(std::size_t(i), std::size_t(j)) + omega(std::size_t(j), std::size_t(i)));
      require(defect <= 1e-12, "mehler: omega must be antisymmetric");
    }
}

}  // namespace

double even_x_over_sinh(double xi) {
  if (std::abs(xi) < 1e-8) {
    // x/sinh x = 1 - xi/6 + 7 xi^2/360 - 31 xi^3/15120, xi = x^2
    return 1.0 - xi / 6.0 + 7.0 * xi * xi / 360.0 - 31.0 * xi * xi * xi / 15120.0;
  }
  if (xi > 0.0) {
    const double w = std::sqrt(xi);
    return w / std::sinh(w);
  }
  const double y = std::sqrt(-xi);
  if (y >= kPi) throw std::invalid_argument("mehler: u too large, kernel focal point reached");
  return y / std::sin(y);
}

double even_x_over_tanh(double xi) {
  if (std::abs(xi) < 1e-8) {
    // x/tanh x = 1 + xi/3 - xi^2/45 + 2 xi^3/945
    return 1.0 + xi / 3.0 - xi * xi / 45.0 + 2.0 * xi * xi * xi / 945.0;
  }
  if (xi > 0.0) {
    const double w = std::sqrt(xi);
    return w / std::tanh(w);
  }
  const double y = std::sqrt(-xi);
  if (y >= kPi) throw std::invalid_argument("mehler: u too large, kernel focal point reached");
  return y / std::tan(y);
}

double mehler_kernel(const MehlerInput& in) {
  require(in.u > 0.0, "mehler: u must be positive");
  validate_omega(in.omega, in.n);
  const int n = in.n;

  // Spectral decomposition of the Hermitian matrix i Omega; an eigenvalue mu
  // of i Omega corresponds to x = -i mu for Omega, i.e. xi = x^2 = -mu^2.
  CMatrix h{std::size_t(n), std::size_t(n)};
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      h(std::size_t(i), std::size_t(j)) = cdouble(0.0, 1.0) * in.omega(std::size_t(i), std::size_t(j));
  const EighResult eig = hermitian_eigh(h, true);

  double logdet_half = 0.0;
  for (int a = 0; a < n; ++a) {
    const double y = 0.5 * in.u * eig.eigenvalues[std::size_t(a)];
    logdet_half += 0.5 * std::log(even_x_over_sinh(-y * y));
  }

  // <X, g2(u Omega/2) X> through the same eigenbasis; real by evenness.
  cdouble quad(0.0, 0.0);
  for (int a = 0; a < n; ++a) {
    const double y = 0.5 * in.u * eig.eigenvalues[std::size_t(a)];
    const double g2 = even_x_over_tanh(-y * y);
    cdouble proj(0.0, 0.0);
    for (int i = 0; i < n; ++i)
      proj += std::conj(eig.eigenvectors(std::size_t(i), std::size_t(a))) * in.X[std::size_t(i)];
    quad += g2 * std::norm(proj);
  }
  const double qform = quad.real();

  const double prefactor = std::pow(4.0 * kPi * in.u, -0.5 * n);
  return prefactor * std::exp(logdet_half) * std::exp(-qform / (4.0 * in.u));
}

CMatrix mehler_kernel_twisted(const MehlerInput& in) {
  const double scalar = mehler_kernel(in);
  if (in.twist.empty()) {
    CMatrix one(1, 1);
    one(0, 0) = scalar;
    return one;
  }
  require(in.twist.is_hermitian(1e-12), "mehler: twist must be Hermitian");
  const EighResult eig = hermitian_eigh(in.twist, true);
  const std::size_t k = in.twist.rows();
  CMatrix out(k, k);
  for (std::size_t a = 0; a < k; ++a) {
    const double w = std::exp(-eig.eigenvalues[a]);
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < k; ++j)
        out(i, j) += w * eig.eigenvectors(i, a) * std::conj(eig.eigenvectors(j, a));
  }
  out *= cdouble(scalar, 0.0);
  return out;
}

void fft_inplace(std::vector<cdouble>& data, int sign) {
  const std::size_t n = data.size();
  require((n & (n - 1)) == 0 && n > 0, "fft: length must be a power of two");
  // bit reversal
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(data[i], data[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const double ang = double(sign) * 2.0 * kPi / double(len);
    const cdouble wlen(std::cos(ang), std::sin(ang));
    for (std::size_t i = 0; i < n; i += len) {
      cdouble w(1.0, 0.0);
      for (std::size_t j = 0; j < len / 2; ++j) {
        const cdouble u = data[i + j];
        const cdouble v = data[i + j + len / 2] * w;
        data[i + j] = u + v;
        data[i + j + len / 2] = u - v;
        w *= wlen;
      }
    }
  }
}

namespace {

// Spectral evolution state for the 2-D (or 1-D) oscillator oracle.
struct GridOp {
  int n = 2;
  int ng = 128;
  double box = 8.0;
  double h = 0.0;
  std::vector<double> xs;       // grid coordinates per axis
  std::vector<double> ks;       // wavenumbers per axis index
  CMatrix omega;

  std::size_t points() const { return n == 1 ? std::size_t(ng) : std::size_t(ng) * std::size_t(ng); }

  // forward transform along each axis; sign=-1 forward
  void fft2(std::vector<cdouble>& f, int sign) const {
    if (n == 1) {
      fft_inplace(f, sign);
      if (sign > 0)
        for (auto& v : f) v /= double(ng);
      return;
    }
    std::vector<cdouble> line(static_cast<std::size_t>(ng));
    // rows
    for (int r = 0; r < ng; ++r) {
      for (int c = 0; c < ng; ++c) line[std::size_t(c)] = f[std::size_t(r) * ng + c];
      fft_inplace(line, sign);
      for (int c = 0; c < ng; ++c) f[std::size_t(r) * ng + c] = line[std::size_t(c)];
    }
    // columns
    for (int c = 0; c < ng; ++c) {
      for (int r = 0; r < ng; ++r) line[std::size_t(r)] = f[std::size_t(r) * ng + c];
      fft_inplace(line, sign);
      for (int r = 0; r < ng; ++r) f[std::size_t(r) * ng + c] = line[std::size_t(r)];
    }
    if (sign > 0) {
      const double inv = 1.0 / (double(ng) * double(ng));
      for (auto& v : f) v *= inv;
    }
  }

  // exact free half-step: multiply Fourier modes by e^{-k^2 dt}
  void free_flow(std::vector<cdouble>& f, double dt) const {
    fft2(f, -1);
    if (n == 1) {
      for (int i = 0; i < ng; ++i) {
        const double k1 = ks[std::size_t(i)];
        f[std::size_t(i)] *= std::exp(-k1 * k1 * dt);
      }
    } else {
      for (int r = 0; r < ng; ++r)
        for (int c = 0; c < ng; ++c) {
          const double k1 = ks[std::size_t(r)], k2 = ks[std::size_t(c)];
          f[std::size_t(r) * ng + c] *= std::exp(-(k1 * k1 + k2 * k2) * dt);
        }
    }
    fft2(f, +1);
  }

  // apply B f = -(1/2)(Omega X)_i d_i f - (1/16)|Omega X|^2 f (bounded part)
  void apply_b(const std::vector<cdouble>& f, std::vector<cdouble>& out,
               std::vector<cdouble>& hat, std::vector<cdouble>& d1,
               std::vector<cdouble>& d2) const {
    const std::size_t np = points();
    out.assign(np, cdouble(0.0, 0.0));
    const double w12 = (n == 2) ? omega(0, 1).real() : 0.0;
    if (w12 == 0.0) return;  // B vanishes for n = 1 or zero omega

    hat = f;
    fft2(hat, -1);
    d1.assign(np, cdouble(0.0, 0.0));
    d2.assign(np, cdouble(0.0, 0.0));
    for (int r = 0; r < ng; ++r)
      for (int c = 0; c < ng; ++c) {
        const std::size_t id = std::size_t(r) * ng + c;
        d1[id] = cdouble(0.0, ks[std::size_t(r)]) * hat[id];
        d2[id] = cdouble(0.0, ks[std::size_t(c)]) * hat[id];
      }
    fft2(d1, +1);
    fft2(d2, +1);

    for (std::size_t id = 0; id < np; ++id) {
      const double x1 = xs[id / std::size_t(ng)];
      const double x2 = xs[id % std::size_t(ng)];
      const double a1 = w12 * x2;   // (Omega X)_1
      const double a2 = -w12 * x1;  // (Omega X)_2
      const double pot = (a1 * a1 + a2 * a2) / 16.0;
      out[id] = -(0.5 * (a1 * d1[id] + a2 * d2[id])) - pot * f[id];
    }
  }
};

struct EvolveOut {
  double value = 0.0;
  double mass = 0.0;
  double tail_amp = 0.0;  // top-octave spectral amplitude of the final state
};

EvolveOut evolve_and_sample(const GridOp& op, double u, const std::array<double, 3>& X, double dt) {
  const std::size_t np = op.points();
  std::vector<cdouble> f(np, cdouble(0.0, 0.0));
  // discrete delta at the origin index (x = 0 is on the grid)
  const int zero_idx = op.ng / 2;
  const double cell = (op.n == 1) ? op.h : op.h * op.h;
  if (op.n == 1)
    f[std::size_t(zero_idx)] = 1.0 / cell;
  else
    f[std::size_t(zero_idx) * op.ng + zero_idx] = 1.0 / cell;

  const int steps = std::max(1, int(std::ceil(u / dt)));
  const double step = u / steps;
  std::vector<cdouble> k1(np), k2(np), k3(np), k4(np), tmp(np), hat, d1, d2;
  for (int t = 0; t < steps; ++t) {
    // Strang splitting: exact free flow around an RK4 substep of the bounded
    // drift/potential part (f' = -B f)
    op.free_flow(f, 0.5 * step);
    op.apply_b(f, k1, hat, d1, d2);
    for (std::size_t i = 0; i < np; ++i) tmp[i] = f[i] - 0.5 * step * k1[i];
    op.apply_b(tmp, k2, hat, d1, d2);
    for (std::size_t i = 0; i < np; ++i) tmp[i] = f[i] - 0.5 * step * k2[i];
    op.apply_b(tmp, k3, hat, d1, d2);
    for (std::size_t i = 0; i < np; ++i) tmp[i] = f[i] - step * k3[i];
    op.apply_b(tmp, k4, hat, d1, d2);
    for (std::size_t i = 0; i < np; ++i)
      f[i] -= step / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    op.free_flow(f, 0.5 * step);
  }

  EvolveOut out;
  {
    cdouble m(0.0, 0.0);
    for (const auto& v : f) m += v;
    out.mass = (m * cell).real();
  }

  // spectral interpolation at X, plus the unresolved-tail amplitude
  std::vector<cdouble> hatf = f;
  op.fft2(hatf, -1);
  const double norm = (op.n == 1) ? 1.0 / double(op.ng) : 1.0 / (double(op.ng) * double(op.ng));
  const double kmax = kPi * (op.ng / 2) / op.box;
  cdouble val(0.0, 0.0);
  if (op.n == 1) {
    for (int i = 0; i < op.ng; ++i) {
      val += hatf[std::size_t(i)] * std::polar(1.0, op.ks[std::size_t(i)] * (X[0] + op.box));
      if (std::abs(op.ks[std::size_t(i)]) >= 0.75 * kmax)
        out.tail_amp = std::max(out.tail_amp, std::abs(hatf[std::size_t(i)]) * norm);
    }
  } else {
    for (int r = 0; r < op.ng; ++r)
      for (int c = 0; c < op.ng; ++c) {
        const cdouble hv = hatf[std::size_t(r) * op.ng + c];
        val += hv * std::polar(1.0, op.ks[std::size_t(r)] * (X[0] + op.box) +
                                        op.ks[std::size_t(c)] * (X[1] + op.box));
        if (std::max(std::abs(op.ks[std::size_t(r)]), std::abs(op.ks[std::size_t(c)])) >= 0.75 * kmax)
          out.tail_amp = std::max(out.tail_amp, std::abs(hv) * norm);
      }
  }
  out.value = (val * norm).real();
  return out;
}

GridOp make_grid(const CMatrix& omega, int n, int ng, double box) {
  GridOp op;
  op.n = n;
  op.ng = ng;
  op.box = box;
  op.h = 2.0 * box / ng;
  op.omega = omega;
  op.xs.resize(std::size_t(ng));
  op.ks.resize(std::size_t(ng));
  for (int i = 0; i < ng; ++i) {
    op.xs[std::size_t(i)] = -box + i * op.h;
    const int k = (i <= ng / 2) ? i : i - ng;
    op.ks[std::size_t(i)] = kPi * double(k) / box;
  }
  return op;
}

}  // namespace

OracleResult oscillator_oracle(const CMatrix& omega, double u, const std::array<double, 3>& X,
                               const OracleSpec& spec) {
  require(u > 0.0, "oscillator oracle: u must be positive");
  const int n = int(omega.rows());
  require(n >= 1 && n <= 2, "oscillator oracle: n <= 2 only");
  validate_omega(omega, n);
  require((spec.grid & (spec.grid - 1)) == 0, "oscillator oracle: grid must be a power of two");

  const double theta = (n == 2) ? std::abs(omega(0, 1).real()) : 0.0;
  const double kmax = kPi * (spec.grid / 2) / spec.box;
  // the split substep only sees the bounded drift/potential part
  const double rho_b = theta * theta * spec.box * spec.box / 16.0 + 0.5 * theta * spec.box * kmax;
  double dt = (spec.dt_target > 0.0) ? spec.dt_target : std::min(1.0 / (1.0 + rho_b), u / 16.0);

  GridOp op = make_grid(omega, n, spec.grid, spec.box);
  const EvolveOut coarse_t = evolve_and_sample(op, u, X, dt);
  const EvolveOut fine_t = evolve_and_sample(op, u, X, 0.5 * dt);

  OracleResult res;
  // Strang splitting is second order: Richardson-extrapolate the halved step
  res.value = (4.0 * fine_t.value - coarse_t.value) / 3.0;
  res.mass = fine_t.mass;
  res.error_estimate = std::abs(fine_t.value - coarse_t.value) / 3.0 + fine_t.tail_amp;
  if (res.error_estimate > spec.tol) {
    std::ostringstream msg;
    msg << "oscillator oracle: refinement estimate " << res.error_estimate
        << " above tolerance; suggest grid " << 2 * spec.grid << " with box " << spec.box;
    throw std::runtime_error(msg.str());
  }
  return res;
}

}  // namespace specflow
