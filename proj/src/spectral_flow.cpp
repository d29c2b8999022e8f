#include "specflow/spectral_flow.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace specflow {

namespace {

enum class SignClass { Neg, NonNeg };

SignClass classify(double v, double eps) { return v < -eps ? SignClass::Neg : SignClass::NonNeg; }

}  // namespace

SpectralFlowResult spectral_flow(const FlowTrajectory& traj) {
  SpectralFlowResult res;
  const std::size_t npaths = traj.path_count();
  const std::size_t nnodes = traj.s_nodes.size();
  require(nnodes >= 2, "spectral_flow: trajectory too short");

  const double lam = traj.lambda_window;
  double max_abs_window = 0.0;
  std::vector<std::vector<double>> paths = traj.all_paths();
  for (const auto& path : paths)
    for (double v : path)
      if (lam <= 0.0 || std::abs(v) <= lam) max_abs_window = std::max(max_abs_window, std::abs(v));
  const double eps = 1e-8 * (1.0 + max_abs_window);
  res.eps_zero = eps;

  long long untrusted_net = 0;
  std::size_t untrusted_count = 0;
  for (std::size_t p = 0; p < npaths; ++p) {
    const auto& path = paths[p];
    double min_abs = std::abs(path.front());
    double max_abs = min_abs;
    for (double v : path) {
      min_abs = std::min(min_abs, std::abs(v));
      max_abs = std::max(max_abs, std::abs(v));
    }

    // endpoint rule
    const SignClass c0 = classify(path.front(), eps);
    const SignClass c1 = classify(path.back(), eps);
    int contribution = 0;
    if (c0 == SignClass::Neg && c1 == SignClass::NonNeg) contribution = +1;
    if (c0 == SignClass::NonNeg && c1 == SignClass::Neg) contribution = -1;
    res.sf += contribution;

    if (lam > 0.0) {
      // Sign decisions carried by paths leaving the truncation-trusted
      // window are only acceptable when they cancel among themselves (edge
      // sectors of a symmetric truncation); net flow from untrusted paths is
      // a hard error.
      if (contribution != 0 && max_abs > lam) {
        untrusted_net += contribution;
        ++untrusted_count;
        std::ostringstream msg;
        msg << "sign-changing path " << p << " attains |lambda|=" << max_abs
            << " beyond the window " << lam;
        res.warnings.push_back(msg.str());
      } else if (min_abs < 0.5 * lam && max_abs > lam) {
        std::ostringstream msg;
        msg << "path " << p << " grazes the zero region (min |lambda|=" << min_abs
            << ") but exceeds the window (max |lambda|=" << max_abs << ")";
        res.warnings.push_back(msg.str());
      }
    }

    // interior sign changes for the crossing table
    for (std::size_t t = 0; t + 1 < nnodes; ++t) {
      const SignClass a = classify(path[t], eps);
      const SignClass b = classify(path[t + 1], eps);
      if (a == b) {
        if (t + 1 < nnodes - 1 && std::abs(path[t + 1]) <= eps) {
          std::ostringstream msg;
          msg << "tangential touch of path " << p << " at s=" << traj.s_nodes[t + 1];
          res.warnings.push_back(msg.str());
        }
        continue;
      }
      Crossing cr;
      cr.path_id = p;
      cr.direction = (b == SignClass::NonNeg) ? +1 : -1;
      const double va = path[t], vb = path[t + 1];
      if (std::abs(vb - va) > 0.0 && va * vb < 0.0)
        cr.s_star = traj.s_nodes[t] + (traj.s_nodes[t + 1] - traj.s_nodes[t]) * (va / (va - vb));
      else
        cr.s_star = traj.s_nodes[t + 1];
      res.crossings.push_back(cr);
    }
  }
  if (untrusted_net != 0) {
    std::ostringstream msg;
    msg << "window violation: " << untrusted_count
        << " sign-changing path(s) beyond the window carry net flow " << untrusted_net;
    throw std::runtime_error(msg.str());
  }
  return res;
}

long long spectral_flow_between(const FlowTrajectory& traj, double s_a, double s_b) {
  require(s_a < s_b, "spectral_flow_between: need s_a < s_b");
  std::size_t ia = SIZE_MAX, ib = SIZE_MAX;
  for (std::size_t t = 0; t < traj.s_nodes.size(); ++t) {
    if (traj.s_nodes[t] == s_a) ia = t;
    if (traj.s_nodes[t] == s_b) ib = t;
  }
  require(ia != SIZE_MAX && ib != SIZE_MAX, "spectral_flow_between: endpoints must be grid nodes");

  double max_abs = 0.0;
  for (std::size_t p = 0; p < traj.path_count(); ++p) {
    const auto path = traj.path_values(p);
    for (std::size_t t = ia; t <= ib; ++t) max_abs = std::max(max_abs, std::abs(path[t]));
  }
  const double eps = 1e-8 * (1.0 + max_abs);
  long long sf = 0;
  for (std::size_t p = 0; p < traj.path_count(); ++p) {
    const auto path = traj.path_values(p);
    const SignClass c0 = classify(path[ia], eps);
    const SignClass c1 = classify(path[ib], eps);
    if (c0 == SignClass::Neg && c1 == SignClass::NonNeg) sf += 1;
    if (c0 == SignClass::NonNeg && c1 == SignClass::Neg) sf -= 1;
  }
  return sf;
}

long long circle_flow_oracle(double alpha, double r) {
  if (alpha == 0.0) return 0;
  // Spectrum {m + s r alpha}: with the zero-counts-as-nonnegative endpoint
  // convention the net count is floor(r alpha) for either sign of alpha
  // (for alpha > 0 this is #{m : -r alpha <= m < 0}; for alpha < 0 the m = 0
  // path descends from the endpoint zero and is counted).
  return (long long)std::floor(r * alpha);
}

void write_crossings_csv(std::ostream& os, const SpectralFlowResult& res) {
  os << "s_star,path_id,direction\n";
  char buf[64];
  for (const auto& c : res.crossings) {
    std::snprintf(buf, sizeof buf, "%.17g,%zu,%d", c.s_star, c.path_id, c.direction);
    os << buf << "\n";
  }
}

}  // namespace specflow
