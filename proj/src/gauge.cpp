#include "specflow/gauge.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

namespace specflow {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;

std::uint32_t dir_bit(int j) { return std::uint32_t(1) << (j - 1); }
}  // namespace

ManifoldModel model_from_name(const std::string& name) {
  if (name == "s1" || name == "circle") return ManifoldModel{ModelKind::Circle};
  if (name == "t3" || name == "torus3") return ManifoldModel{ModelKind::Torus3};
  throw std::invalid_argument("unknown model: " + name);
}

GaugeField::GaugeField(ManifoldModel model, int k, CoeffMap coeffs)
    : model_(model), k_(k), coeffs_(std::move(coeffs)) {
  require(k_ >= 1, "bundle rank must be >= 1");
  const int n = model_.dim();
  for (const auto& [key, mat] : coeffs_) {
    const auto& [j, m] = key;
    require(j >= 1 && j <= n, "gauge coefficient direction out of range");
    for (int d = n; d < 3; ++d) require(m[std::size_t(d)] == 0, "gauge mode outside manifold dimension");
    require(int(mat.rows()) == k_ && int(mat.cols()) == k_, "gauge coefficient rank mismatch");
    mode_radius_ = std::max(mode_radius_, specflow::mode_radius(m));
    // reality condition a_j(x)^H = -a_j(x)
    auto it = coeffs_.find({j, -m});
    require(it != coeffs_.end(), "gauge field violates reality condition (missing mirror mode)");
    const CMatrix defect = it->second + mat.adjoint();
    require(defect.max_abs() <= 1e-12 * (1.0 + mat.max_abs()),
            "gauge field violates reality condition (not skew-Hermitian)");
  }
}

CMatrix GaugeField::value(int direction, const std::array<double, 3>& x) const {
  CMatrix v(k_, k_);
  for (const auto& [key, mat] : coeffs_) {
    if (key.first != direction) continue;
    const Mode& m = key.second;
    const double ph = m[0] * x[0] + m[1] * x[1] + m[2] * x[2];
    v += cdouble(std::cos(ph), std::sin(ph)) * mat;
  }
  return v;
}

MatrixForm GaugeField::as_form(cdouble scale) const {
  MatrixForm f(model_.dim(), k_);
  for (const auto& [key, mat] : coeffs_) f.add_term(dir_bit(key.first), key.second, scale * mat);
  return f;
}

CMatrix CurvatureForm::value(int i, int j, const std::array<double, 3>& x) const {
  CMatrix v(k, k);
  for (const auto& [key, mat] : coeffs) {
    if (key.first != std::make_pair(i, j)) continue;
    const Mode& m = key.second;
    const double ph = m[0] * x[0] + m[1] * x[1] + m[2] * x[2];
    v += cdouble(std::cos(ph), std::sin(ph)) * mat;
  }
  return v;
}

MatrixForm CurvatureForm::as_form() const {
  MatrixForm f(model.dim(), k);
  for (const auto& [key, mat] : coeffs)
    f.add_term(dir_bit(key.first.first) | dir_bit(key.first.second), key.second, mat);
  return f;
}

CurvatureForm curvature(const GaugeField& a, double s, double r) {
  CurvatureForm f;
  f.model = a.model();
  f.k = a.rank();
  f.s = s;
  f.r = r;
  const int n = a.model().dim();

  // s r da: mode-wise differentiation d/dx_i <-> i m_i
  for (const auto& [key, mat] : a.coeffs()) {
    const auto& [j, m] = key;
    for (int i = 1; i <= n; ++i) {
      if (i == j || m[std::size_t(i - 1)] == 0) continue;
      const cdouble deriv = cdouble(0.0, double(m[std::size_t(i - 1)])) * s * r;
      if (i < j) {
        auto& slot = f.coeffs[{{i, j}, m}];
        if (slot.empty()) slot = CMatrix(a.rank(), a.rank());
        slot += deriv * mat;
      } else {
        auto& slot = f.coeffs[{{j, i}, m}];
        if (slot.empty()) slot = CMatrix(a.rank(), a.rank());
        slot -= deriv * mat;
      }
    }
  }

  // s^2 r^2 a^a with commutator ordering; identically zero for k = 1.
  if (a.rank() > 1) {
    const double c2 = s * s * r * r;
    for (const auto& [ka, ma] : a.coeffs()) {
      for (const auto& [kb, mb] : a.coeffs()) {
        const int i = ka.first, j = kb.first;
        if (i >= j) continue;
        auto& slot = f.coeffs[{{i, j}, ka.second + kb.second}];
        if (slot.empty()) slot = CMatrix(a.rank(), a.rank());
        slot += c2 * (matmul(ma, mb) - matmul(mb, ma));
      }
    }
  }

  // drop exact zeros for clean sparsity
  for (auto it = f.coeffs.begin(); it != f.coeffs.end();) {
    if (it->second.max_abs() == 0.0) it = f.coeffs.erase(it);
    else ++it;
  }
  return f;
}

double sup_norm_F1(const GaugeField& a, double r) {
  const CurvatureForm f1 = curvature(a, 1.0, r);
  if (f1.coeffs.empty()) return 0.0;
  const int n = a.model().dim();
  const int pts = std::max(8, 8 * a.mode_radius());
  double best = 0.0;
  std::array<double, 3> x{0.0, 0.0, 0.0};
  const int p1 = pts;
  const int p2 = (n >= 2) ? pts : 1;
  const int p3 = (n >= 3) ? pts : 1;
  for (int t1 = 0; t1 < p1; ++t1) {
    x[0] = kTwoPi * t1 / p1;
    for (int t2 = 0; t2 < p2; ++t2) {
      x[1] = kTwoPi * t2 / p2;
      for (int t3 = 0; t3 < p3; ++t3) {
        x[2] = kTwoPi * t3 / p3;
        for (int i = 1; i <= n; ++i)
          for (int j = i + 1; j <= n; ++j) {
            const CMatrix v = f1.value(i, j, x);
            const double nv = (a.rank() == 1) ? std::abs(v(0, 0)) : v.operator_norm();
            best = std::max(best, nv);
          }
      }
    }
  }
  return best;
}

double coupling_sup_bound(const GaugeField& a, double r) {
  const int n = a.model().dim();
  const int pts = std::max(8, 8 * a.mode_radius());
  double total = 0.0;
  std::array<double, 3> x{0.0, 0.0, 0.0};
  const int p1 = pts;
  const int p2 = (n >= 2) ? pts : 1;
  const int p3 = (n >= 3) ? pts : 1;
  for (int j = 1; j <= n; ++j) {
    double best = 0.0;
    for (int t1 = 0; t1 < p1; ++t1) {
      x[0] = kTwoPi * t1 / p1;
      for (int t2 = 0; t2 < p2; ++t2) {
        x[1] = kTwoPi * t2 / p2;
        for (int t3 = 0; t3 < p3; ++t3) {
          x[2] = kTwoPi * t3 / p3;
          const CMatrix v = a.value(j, x);
          best = std::max(best, (a.rank() == 1) ? std::abs(v(0, 0)) : v.operator_norm());
        }
      }
    }
    total += best;
  }
  // grid sampling can sit slightly below the true sup of a trigonometric
  // polynomial; pad so the bound stays an upper bound
  return 1.02 * r * total;
}

namespace {

void write_double(std::ostream& os, double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  os << buf;
}

}  // namespace

void write_gauge_field(std::ostream& os, const GaugeField& a) {
  os << "gaugefield v1\n";
  os << "model " << a.model().name() << "\n";
  os << "k " << a.rank() << "\n";
  os << "coeffs " << a.coeffs().size() << "\n";
  for (const auto& [key, mat] : a.coeffs()) {
    os << "a " << key.first << " " << key.second[0] << " " << key.second[1] << " " << key.second[2];
    for (std::size_t p = 0; p < mat.rows(); ++p)
      for (std::size_t q = 0; q < mat.cols(); ++q) {
        os << " ";
        write_double(os, mat(p, q).real());
        os << " ";
        write_double(os, mat(p, q).imag());
      }
    os << "\n";
  }
}

GaugeField read_gauge_field(std::istream& is) {
  std::string tok, version;
  is >> tok >> version;
  require(tok == "gaugefield" && version == "v1", "unrecognized gauge field header");
  std::string key, model_name;
  int k = 0;
  std::size_t count = 0;
  is >> key >> model_name;
  require(key == "model", "gauge field: expected model line");
  is >> key >> k;
  require(key == "k", "gauge field: expected k line");
  is >> key >> count;
  require(key == "coeffs", "gauge field: expected coeffs line");
  GaugeField::CoeffMap coeffs;
  for (std::size_t c = 0; c < count; ++c) {
    is >> key;
    require(key == "a", "gauge field: expected coefficient line");
    int j = 0;
    Mode m{};
    is >> j >> m[0] >> m[1] >> m[2];
    CMatrix mat{std::size_t(k), std::size_t(k)};
    for (std::size_t p = 0; p < mat.rows(); ++p)
      for (std::size_t q = 0; q < mat.cols(); ++q) {
        double re = 0.0, im = 0.0;
        is >> re >> im;
        mat(p, q) = cdouble(re, im);
      }
    require(bool(is), "gauge field: truncated coefficient data");
    coeffs[{j, m}] = mat;
  }
  return GaugeField(model_from_name(model_name), k, std::move(coeffs));
}

GaugeField circle_constant_field(double alpha) {
  GaugeField::CoeffMap coeffs;
  CMatrix c(1, 1);
  c(0, 0) = cdouble(0.0, alpha);
  coeffs[{1, mode_zero()}] = c;
  return GaugeField(ManifoldModel{ModelKind::Circle}, 1, std::move(coeffs));
}

GaugeField t3_sin_field() {
  // i sin(x1) dx2 = ((e^{i x1} - e^{-i x1}) / 2) dx2
  GaugeField::CoeffMap coeffs;
  CMatrix up(1, 1), dn(1, 1);
  up(0, 0) = 0.5;
  dn(0, 0) = -0.5;
  coeffs[{2, Mode{1, 0, 0}}] = up;
  coeffs[{2, Mode{-1, 0, 0}}] = dn;
  return GaugeField(ManifoldModel{ModelKind::Torus3}, 1, std::move(coeffs));
}

}  // namespace specflow
