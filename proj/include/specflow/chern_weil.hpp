#pragma once

#include <utility>
#include <vector>

#include "specflow/forms.hpp"
#include "specflow/gauge.hpp"

namespace specflow {

// (1/(2 pi i))^{(n+1)/2} as a complex number.
cdouble flow_normalization(int n);

// Integrand of the spectral-flow predictor at parameter s: the manifold
// integral of A-hat wedge tr[a_hat wedge exp(F_s)], a_hat = r a, normalized
// by (1/(2 pi i))^{(n+1)/2}. Flat models only (A-hat = 1). Throws
// "normalization inconsistency" if the imaginary residue exceeds 1e-9.
double variation_integrand(const GaugeField& a, double r, double s);

struct PredictionResult {
  double predictor = 0.0;  // int_0^1 of the integrand, Gauss-Legendre exact
  std::vector<std::pair<double, double>> integrand_samples;  // (s node, value)
  double leading_term = 0.0;
  cdouble normalization;  // the resolved (1/(2 pi i))^{(n+1)/2}
  int quadrature_order = 0;
  double max_imag_residue = 0.0;
  bool leading_consistent = true;  // |leading - predictor| consistency flag
};

// Gauss-Legendre in s of order >= ceil((n+1)/2); the integrand is polynomial
// in s of degree < n, so the quadrature is exact. leading_term follows the
// displayed leading-order shapes: for k = 1,
// (1/(2 pi i))^h (1/h!) r^h int a (da)^{h-1} with h = (n+1)/2, and for k > 1
// the same constant with r^n int tr(a^n).
PredictionResult predict_flow(const GaugeField& a, double r, int quad_order);

// Nodes and weights on [0, 1].
std::vector<std::pair<double, double>> gauss_legendre_01(int order);

}  // namespace specflow
