#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <utility>

#include "specflow/cmatrix.hpp"
#include "specflow/forms.hpp"
#include "specflow/modes.hpp"

namespace specflow {

// Flat model manifolds with coordinate periods 2*pi, trivial spin structure,
// and A-hat = 1 in all positive degrees.
enum class ModelKind { Circle, Torus3 };

struct ManifoldModel {
  ModelKind kind = ModelKind::Circle;
  int dim() const { return kind == ModelKind::Circle ? 1 : 3; }
  std::string name() const { return kind == ModelKind::Circle ? "s1" : "t3"; }
};

ManifoldModel model_from_name(const std::string& name);

// u(k)-valued gauge 1-form with finite Fourier support: a_j(x) =
// sum_m coeff[(j,m)] e^{i m.x}, pointwise skew-Hermitian, which is enforced
// through the reality condition coeff[(j,-m)] = -coeff[(j,m)]^H.
class GaugeField {
 public:
  using CoeffMap = std::map<std::pair<int, Mode>, CMatrix>;

  GaugeField() = default;
  GaugeField(ManifoldModel model, int k, CoeffMap coeffs);

  const ManifoldModel& model() const { return model_; }
  int rank() const { return k_; }
  const CoeffMap& coeffs() const { return coeffs_; }
  int mode_radius() const { return mode_radius_; }

  CMatrix value(int direction, const std::array<double, 3>& x) const;

  // The 1-form scale * a as a MatrixForm.
  MatrixForm as_form(cdouble scale) const;

 private:
  ManifoldModel model_;
  int k_ = 1;
  CoeffMap coeffs_;
  int mode_radius_ = 0;
};

// Curvature F_s = s r da + s^2 r^2 a^a of the connection d + s r a, stored by
// coordinate 2-plane (i < j) and Fourier mode.
struct CurvatureForm {
  ManifoldModel model;
  int k = 1;
  double s = 0.0, r = 1.0;
  std::map<std::pair<std::pair<int, int>, Mode>, CMatrix> coeffs;

  CMatrix value(int i, int j, const std::array<double, 3>& x) const;
  MatrixForm as_form() const;
};

CurvatureForm curvature(const GaugeField& a, double s, double r);

// R = sup over a uniform sample grid (>= 8 x mode_radius points per axis) of
// the largest coordinate-plane component of |F_1| in the matrix 2-norm.
double sup_norm_F1(const GaugeField& a, double r);

// Upper bound on ||r c(a)|| (the s-Lipschitz constant of the Dirac family):
// r sum_j sup_x ||a_j(x)||_2 over the same sample grid. Never underestimates
// the truncated coupling norm.
double coupling_sup_bound(const GaugeField& a, double r);

// Structured text serialization with exact (17 significant digit) round-trip.
void write_gauge_field(std::ostream& os, const GaugeField& a);
GaugeField read_gauge_field(std::istream& is);

// Common fields: constant a = i alpha dtheta on the circle, and
// a = i sin(x1) dx2 on the flat 3-torus.
GaugeField circle_constant_field(double alpha);
GaugeField t3_sin_field();

}  // namespace specflow
