#include <cmath>

#include "doctest.h"
#include "specflow/mehler.hpp"

using namespace specflow;

namespace {

constexpr double kPi = 3.14159265358979323846;

CMatrix rotation_omega(double theta) {
  CMatrix o(2, 2);
  o(0, 1) = theta;
  o(1, 0) = -theta;
  return o;
}

}  // namespace

TEST_SUITE_BEGIN("mehler");

TEST_CASE("fft round trip") {
  std::vector<cdouble> v(16);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = cdouble(std::sin(0.3 * double(i)), 0.1 * double(i));
  auto w = v;
  fft_inplace(w, -1);
  fft_inplace(w, +1);
  for (std::size_t i = 0; i < v.size(); ++i) CHECK(std::abs(w[i] / 16.0 - v[i]) < 1e-14);
}

TEST_CASE("even matrix functions: series matches closed form at the threshold") {
  for (double xi : {9.9e-9, -9.9e-9, 1.1e-8, -1.1e-8}) {
    const double s1 = even_x_over_sinh(xi);
    const double t1 = even_x_over_tanh(xi);
    // reference values from the opposite branch
    const double w = std::sqrt(std::abs(xi));
    const double ref_s = xi > 0.0 ? w / std::sinh(w) : w / std::sin(w);
    const double ref_t = xi > 0.0 ? w / std::tanh(w) : w / std::tan(w);
    CHECK(s1 == doctest::Approx(ref_s).epsilon(1e-13));
    CHECK(t1 == doctest::Approx(ref_t).epsilon(1e-13));
  }
}

TEST_CASE("Omega = 0 reduces to the flat Gaussian exactly") {
  for (int n : {1, 2}) {
    MehlerInput in;
    in.n = n;
    in.omega = CMatrix(std::size_t(n), std::size_t(n));
    in.u = 0.37;
    in.X = {0.4, n == 2 ? -0.2 : 0.0, 0.0};
    double x2 = in.X[0] * in.X[0] + in.X[1] * in.X[1];
    const double expect = std::pow(4.0 * kPi * in.u, -0.5 * n) * std::exp(-x2 / (4.0 * in.u));
    CHECK(mehler_kernel(in) == doctest::Approx(expect).epsilon(1e-12));
  }
}

TEST_CASE("rotation generator: closed form and X -> -X symmetry") {
  MehlerInput in;
  in.n = 2;
  in.omega = rotation_omega(1.0);
  in.u = 0.5;
  in.X = {0.0, 0.0, 0.0};
  // at X = 0 the kernel is (4 pi u)^{-1} (y / sin y), y = u theta / 2, on the
  // antisymmetric (circular) branch
  const double y = 0.5 * in.u * 1.0;
  const double expect = 1.0 / (4.0 * kPi * in.u) * (y / std::sin(y));
  CHECK(mehler_kernel(in) == doctest::Approx(expect).epsilon(1e-12));

  in.X = {0.3, -0.4, 0.0};
  const double k1 = mehler_kernel(in);
  in.X = {-0.3, 0.4, 0.0};
  CHECK(mehler_kernel(in) == doctest::Approx(k1).epsilon(1e-13));
}

TEST_CASE("Omega -> -Omega invariance and orthogonal covariance") {
  MehlerInput in;
  in.n = 2;
  in.omega = rotation_omega(0.8);
  in.u = 0.4;
  in.X = {0.5, 0.1, 0.0};
  const double base = mehler_kernel(in);
  in.omega = rotation_omega(-0.8);
  CHECK(mehler_kernel(in) == doctest::Approx(base).epsilon(1e-12));
  // reflection O = diag(1, -1): Omega -> O^T Omega O = -Omega, X -> O^T X
  in.X = {0.5, -0.1, 0.0};
  CHECK(mehler_kernel(in) == doctest::Approx(base).epsilon(1e-12));
}

TEST_CASE("twist factor multiplies by exp(-F)") {
  MehlerInput in;
  in.n = 2;
  in.omega = CMatrix(2, 2);
  in.u = 0.25;
  in.X = {0.2, 0.0, 0.0};
  in.twist = CMatrix(2, 2);
  in.twist(0, 0) = 0.7;
  in.twist(1, 1) = -0.2;
  const double scalar = mehler_kernel(in);
  const CMatrix m = mehler_kernel_twisted(in);
  CHECK(m(0, 0).real() == doctest::Approx(scalar * std::exp(-0.7)).epsilon(1e-12));
  CHECK(m(1, 1).real() == doctest::Approx(scalar * std::exp(0.2)).epsilon(1e-12));
  CHECK(std::abs(m(0, 1)) < 1e-15);
}

TEST_CASE("twist combines with a nonflat kernel multiplicatively") {
  MehlerInput in;
  in.n = 2;
  in.omega = rotation_omega(0.9);
  in.u = 0.3;
  in.X = {0.1, 0.2, 0.0};
  const double scalar = mehler_kernel(in);
  in.twist = CMatrix(1, 1);
  in.twist(0, 0) = 0.45;
  const CMatrix m = mehler_kernel_twisted(in);
  CHECK(m(0, 0).real() == doctest::Approx(scalar * std::exp(-0.45)).epsilon(1e-12));
}

TEST_CASE("u <= 0 and focal-point inputs are rejected") {
  MehlerInput in;
  in.n = 2;
  in.omega = rotation_omega(1.0);
  in.u = 0.0;
  CHECK_THROWS_AS(mehler_kernel(in), std::invalid_argument);
  in.u = 7.0;  // u theta / 2 = 3.5 >= pi
  CHECK_THROWS_AS(mehler_kernel(in), std::invalid_argument);
}

TEST_CASE("short-time limit approaches the flat normalization monotonically") {
  MehlerInput in;
  in.n = 2;
  in.omega = rotation_omega(1.0);
  in.X = {0.3, 0.0, 0.0};
  double prev_dev = 1e300;
  for (double u : {0.1, 0.05, 0.025}) {
    in.u = u;
    const double x2 = 0.09;
    const double normalized = std::pow(4.0 * kPi * u, 1.0) * mehler_kernel(in) * std::exp(x2 / (4.0 * u));
    const double dev = std::abs(normalized - 1.0);
    CHECK(dev < prev_dev);
    prev_dev = dev;
  }
  CHECK(prev_dev < 1e-3);
}

TEST_CASE("oracle: free kernel reproduced and mass conserved") {
  OracleSpec spec;
  spec.grid = 64;
  spec.box = 8.0;
  spec.tol = 1e-6;
  const CMatrix zero(2, 2);
  const std::array<double, 3> X{0.4, -0.3, 0.0};
  const OracleResult res = oscillator_oracle(zero, 0.5, X, spec);
  const double expect = 1.0 / (4.0 * kPi * 0.5) * std::exp(-(0.16 + 0.09) / 2.0);
  CHECK(res.value == doctest::Approx(expect).epsilon(1e-8));
  CHECK(res.mass == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("oracle agrees with the closed form for the rotation generator") {
  OracleSpec spec;
  spec.grid = 64;
  spec.box = 8.0;
  spec.tol = 1e-5;
  MehlerInput in;
  in.n = 2;
  in.omega = rotation_omega(1.0);
  in.u = 0.5;
  in.X = {0.3, 0.0, 0.0};
  const OracleResult res = oscillator_oracle(in.omega, in.u, in.X, spec);
  CHECK(std::abs(res.value - mehler_kernel(in)) < 2e-6);
}

TEST_SUITE_END();
