#include <cmath>
#include <random>
#include <sstream>

#include "doctest.h"
#include "specflow/gauge.hpp"

using namespace specflow;

namespace {

// k=2 field with constant noncommuting components a_1 = i sigma_1 / sqrt 2,
// a_2 = i sigma_2 / sqrt 2, so that ||[a_1, a_2]||_2 = 1.
GaugeField k2_constant_field() {
  GaugeField::CoeffMap coeffs;
  CMatrix a1(2, 2), a2(2, 2);
  const double s = 1.0 / std::sqrt(2.0);
  a1(0, 1) = cdouble(0.0, s);
  a1(1, 0) = cdouble(0.0, s);
  a2(0, 1) = cdouble(s, 0.0);
  a2(1, 0) = cdouble(-s, 0.0);
  coeffs[{1, mode_zero()}] = a1;
  coeffs[{2, mode_zero()}] = a2;
  return GaugeField(ManifoldModel{ModelKind::Torus3}, 2, std::move(coeffs));
}

}  // namespace

TEST_SUITE_BEGIN("gauge_geometry");

TEST_CASE("reality condition is enforced") {
  GaugeField::CoeffMap bad;
  CMatrix c(1, 1);
  c(0, 0) = cdouble(1.0, 0.0);  // constant real coefficient: not skew
  bad[{1, mode_zero()}] = c;
  CHECK_THROWS_AS(GaugeField(ManifoldModel{ModelKind::Circle}, 1, std::move(bad)),
                  std::invalid_argument);

  GaugeField::CoeffMap missing;
  CMatrix up(1, 1);
  up(0, 0) = 0.5;
  missing[{2, Mode{1, 0, 0}}] = up;  // no mirror mode
  CHECK_THROWS_AS(GaugeField(ManifoldModel{ModelKind::Torus3}, 1, std::move(missing)),
                  std::invalid_argument);
}

TEST_CASE("pointwise values are skew-Hermitian at random points") {
  const GaugeField a = t3_sin_field();
  const GaugeField b = k2_constant_field();
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> dist(0.0, 6.283185307179586);
  for (int t = 0; t < 64; ++t) {
    const std::array<double, 3> x{dist(rng), dist(rng), dist(rng)};
    for (int j = 1; j <= 3; ++j) {
      CMatrix va = a.value(j, x);
      CMatrix defect = va.adjoint();
      defect += va;
      CHECK(defect.max_abs() < 1e-12);
      CMatrix vb = b.value(j, x);
      CMatrix defect2 = vb.adjoint();
      defect2 += vb;
      CHECK(defect2.max_abs() < 1e-12);
    }
  }
}

TEST_CASE("curvature of a constant abelian circle field vanishes") {
  const GaugeField a = circle_constant_field(0.3);
  for (double s : {0.0, 0.5, 1.0})
    for (double r : {1.0, 10.0}) {
      const CurvatureForm f = curvature(a, s, r);
      CHECK(f.coeffs.empty());
    }
}

TEST_CASE("curvature of i sin(x1) dx2 is s r i cos(x1) dx1^dx2") {
  const GaugeField a = t3_sin_field();
  const double s = 0.7, r = 8.0;
  const CurvatureForm f = curvature(a, s, r);
  // symbolic differentiation oracle: d(i sin x1 dx2) = i cos x1 dx1^dx2
  for (double x1 : {0.0, 0.3, 1.4, 3.0}) {
    const CMatrix v = f.value(1, 2, {x1, 0.0, 0.0});
    const cdouble want = cdouble(0.0, s * r * std::cos(x1));
    CHECK(std::abs(v(0, 0) - want) < 1e-13 * s * r);
  }
  CHECK(f.value(1, 3, {0.3, 0.0, 0.0}).max_abs() < 1e-15);
  CHECK(f.value(2, 3, {0.3, 0.0, 0.0}).max_abs() < 1e-15);
}

TEST_CASE("k=2 constant field: F_s(d1,d2) = s^2 r^2 [a1,a2]") {
  const GaugeField a = k2_constant_field();
  const double s = 0.6, r = 3.0;
  const CurvatureForm f = curvature(a, s, r);
  const CMatrix got = f.value(1, 2, {0.0, 0.0, 0.0});
  const CMatrix want = commutator(a.value(1, {0.0, 0.0, 0.0}), a.value(2, {0.0, 0.0, 0.0}));
  CMatrix defect = got;
  defect -= cdouble(s * s * r * r, 0.0) * want;
  CHECK(defect.max_abs() < 1e-12);
}

TEST_CASE("k=1 curvature is linear in s r coefficientwise") {
  const GaugeField a = t3_sin_field();
  const CurvatureForm base = curvature(a, 1.0, 1.0);
  const CurvatureForm scaled = curvature(a, 0.25, 12.0);
  for (const auto& [key, mat] : base.coeffs) {
    const auto it = scaled.coeffs.find(key);
    REQUIRE(it != scaled.coeffs.end());
    CMatrix defect = it->second;
    defect -= cdouble(0.25 * 12.0, 0.0) * mat;
    CHECK(defect.max_abs() < 1e-14 * 12.0);
  }
}

TEST_CASE("sup norm R: sin field gives exactly r, flat gives 0, k=2 gives r^2") {
  CHECK(sup_norm_F1(t3_sin_field(), 10.0) == doctest::Approx(10.0).epsilon(1e-12));
  CHECK(sup_norm_F1(circle_constant_field(0.3), 10.0) == 0.0);
  // ||[a1,a2]||_2 = 1 by construction, so R = r^2
  CHECK(sup_norm_F1(k2_constant_field(), 10.0) == doctest::Approx(100.0).epsilon(1e-9));
}

TEST_CASE("R is monotone nondecreasing in r; exactly linear for k=1") {
  const GaugeField a = t3_sin_field();
  double prev = 0.0;
  for (double r : {1.0, 2.0, 5.0, 9.0}) {
    const double R = sup_norm_F1(a, r);
    CHECK(R >= prev);
    CHECK(R == doctest::Approx(r).epsilon(1e-12));
    prev = R;
  }
  const GaugeField b = k2_constant_field();
  for (double r : {2.0, 3.0})
    CHECK(sup_norm_F1(b, r) == doctest::Approx(r * r).epsilon(1e-9));
}

TEST_CASE("serialization round-trips exactly") {
  const GaugeField fields[] = {circle_constant_field(0.3178), t3_sin_field(), k2_constant_field()};
  for (const auto& a : fields) {
    std::ostringstream os;
    write_gauge_field(os, a);
    std::istringstream is(os.str());
    const GaugeField b = read_gauge_field(is);
    CHECK(b.rank() == a.rank());
    CHECK(b.model().kind == a.model().kind);
    REQUIRE(b.coeffs().size() == a.coeffs().size());
    for (const auto& [key, mat] : a.coeffs()) {
      const auto it = b.coeffs().find(key);
      REQUIRE(it != b.coeffs().end());
      for (std::size_t p = 0; p < mat.rows(); ++p)
        for (std::size_t q = 0; q < mat.cols(); ++q) CHECK(it->second(p, q) == mat(p, q));
    }
    // and the round-trip of the round-trip is byte-identical
    std::ostringstream os2;
    write_gauge_field(os2, b);
    CHECK(os.str() == os2.str());
  }
}

TEST_SUITE_END();
