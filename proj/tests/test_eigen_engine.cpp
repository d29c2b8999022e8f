#include <algorithm>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "specflow/dirac.hpp"
#include "specflow/spectrum.hpp"
#include "specflow/tracking.hpp"

using namespace specflow;

namespace {

const ManifoldModel kCircle{ModelKind::Circle};
const ManifoldModel kTorus{ModelKind::Torus3};

std::vector<double> uniform_grid(int pts) {
  std::vector<double> g;
  for (int i = 0; i < pts; ++i) g.push_back(double(i) / double(pts - 1));
  g.front() = 0.0;
  g.back() = 1.0;
  return g;
}

}  // namespace

TEST_SUITE_BEGIN("eigen_engine");

TEST_CASE("block partition splits a direct sum and conforms") {
  CMatrix m(4, 4);
  m(0, 2) = 1.0;
  m(2, 0) = 1.0;
  m(1, 1) = 2.0;
  m(3, 3) = -1.0;
  const BlockPartition p = partition_from_pattern(m);
  CHECK(p.components.size() == 3);  // {0,2}, {1}, {3}
  CHECK(p.component_of[0] == p.component_of[2]);
  CHECK(p.component_of[1] != p.component_of[0]);
  CHECK(p.conforms(m));
  CMatrix bad = m;
  bad(0, 3) = 1.0;
  bad(3, 0) = 1.0;
  CHECK(!p.conforms(bad));
}

TEST_CASE("eigh splits the torus matrix into momentum sectors") {
  const DiracMatrix d = assemble(kTorus, t3_sin_field(), 1, 3, 0.8, 8.0);
  EighOptions eo;
  eo.want_vectors = true;
  const SpectrumSnapshot snap = eigh(d, eo);
  // the sin field conserves (m2, m3): (2N+1)^2 sectors
  CHECK(snap.partition->components.size() == 49);
  CHECK(snap.eigenvalues.size() == d.basis.dim());
  for (std::size_t i = 0; i + 1 < snap.eigenvalues.size(); ++i)
    CHECK(snap.eigenvalues[i] <= snap.eigenvalues[i + 1]);
  // windowed eigenvalue sum vs trace of the windowed spectral projection
  const double lam = 2.0;
  double sum = 0.0, proj_trace = 0.0;
  for (std::size_t i = 0; i < snap.eigenvalues.size(); ++i) {
    if (std::abs(snap.eigenvalues[i]) > lam) continue;
    sum += snap.eigenvalues[i];
    const auto v = snap.dense_vector(i);
    cdouble q(0.0, 0.0);
    for (std::size_t a = 0; a < v.size(); ++a)
      for (std::size_t b = 0; b < v.size(); ++b) q += std::conj(v[a]) * d.matrix(a, b) * v[b];
    proj_trace += q.real();
  }
  CHECK(sum == doctest::Approx(proj_trace).epsilon(1e-8));
}

TEST_CASE("eigh on the exact S1 family matches the closed-form spectrum") {
  const DiracMatrix d = assemble(kCircle, circle_constant_field(0.3), 1, 50, 0.5, 10.0);
  EighOptions eo;
  const SpectrumSnapshot snap = eigh(d, eo);
  std::vector<double> expect;
  for (int m = -50; m <= 50; ++m) expect.push_back(double(m) + 1.5);
  std::sort(expect.begin(), expect.end());
  double worst = 0.0;
  for (std::size_t i = 0; i < expect.size(); ++i)
    worst = std::max(worst, std::abs(snap.eigenvalues[i] - expect[i]));
  CHECK(worst < 1e-10);
}

TEST_CASE("track: constant family gives identity matching and constant paths") {
  const auto family = [](double) {
    return assemble(kTorus, t3_sin_field(), 1, 2, 0.0, 8.0);  // s ignored: D_0
  };
  TrackOptions topt;
  topt.lambda_window = 1.0;
  const FlowTrajectory traj = track(family, uniform_grid(5), topt);
  for (const auto& perm : traj.matching)
    for (std::size_t i = 0; i < perm.size(); ++i) CHECK(perm[i] == i);
  for (std::size_t p = 0; p < traj.path_count(); ++p) {
    const auto vals = traj.path_values(p);
    for (double v : vals) CHECK(v == doctest::Approx(vals.front()).epsilon(1e-13));
  }
}

TEST_CASE("track: circle paths are the lines m + 3s") {
  const auto family = [](double s) {
    return assemble(kCircle, circle_constant_field(0.3), 1, 12, s, 10.0);
  };
  TrackOptions topt;
  topt.lambda_window = 6.0;
  const FlowTrajectory traj = track(family, uniform_grid(11), topt);
  // locate the path starting at -2: it should be the line -2 + 3s
  for (std::size_t p = 0; p < traj.path_count(); ++p) {
    const auto vals = traj.path_values(p);
    if (std::abs(vals.front() + 2.0) < 1e-12) {
      for (std::size_t t = 0; t < traj.s_nodes.size(); ++t)
        CHECK(vals[t] == doctest::Approx(-2.0 + 3.0 * traj.s_nodes[t]).epsilon(1e-12));
    }
  }
}

TEST_CASE("track satisfies the Lipschitz (Weyl) bound on matched moves") {
  const auto family = [](double s) {
    return assemble(kTorus, t3_sin_field(), 1, 3, s, 8.0);
  };
  TrackOptions topt;
  topt.lambda_window = 1.5;
  const FlowTrajectory traj = track(family, uniform_grid(17), topt);
  // truncated coupling norm approaches r sup|sin| = 8 from below
  CHECK(traj.lipschitz == doctest::Approx(coupling_norm(kTorus, t3_sin_field(), 1, 3, 8.0))
                              .epsilon(1e-6));
  CHECK(traj.lipschitz <= 8.0 * (1.0 + 1e-9));
  CHECK(traj.lipschitz > 6.0);
  for (std::size_t p = 0; p < traj.path_count(); ++p) {
    const auto vals = traj.path_values(p);
    for (std::size_t t = 0; t + 1 < traj.s_nodes.size(); ++t) {
      const double ds = traj.s_nodes[t + 1] - traj.s_nodes[t];
      CHECK(std::abs(vals[t + 1] - vals[t]) <= traj.lipschitz * ds * (1.0 + 1e-6) + 1e-9);
    }
  }
}

TEST_CASE("sorted eigenvalues obey Weyl monotonicity between any two snapshots") {
  EighOptions eo;
  const auto s1 = eigh(assemble(kTorus, t3_sin_field(), 1, 2, 0.3, 8.0), eo);
  const auto s2 = eigh(assemble(kTorus, t3_sin_field(), 1, 2, 0.9, 8.0), eo);
  const double L = coupling_norm(kTorus, t3_sin_field(), 1, 2, 8.0);
  for (std::size_t i = 0; i < s1.eigenvalues.size(); ++i)
    CHECK(std::abs(s1.eigenvalues[i] - s2.eigenvalues[i]) <= L * 0.6 * (1.0 + 1e-9) + 1e-10);
}

TEST_CASE("truncation stability: windowed paths agree between N=4 and N=5") {
  TrackOptions topt;
  topt.lambda_window = 2.0;
  const auto fam4 = [](double s) { return assemble(kTorus, t3_sin_field(), 1, 4, s, 8.0); };
  const auto fam5 = [](double s) { return assemble(kTorus, t3_sin_field(), 1, 5, s, 8.0); };
  const FlowTrajectory t4 = track(fam4, uniform_grid(9), topt);
  const FlowTrajectory t5 = track(fam5, uniform_grid(9), topt);
  // windowed endpoint multisets agree loosely (truncation level), and the
  // kernel paths agree exactly
  auto windowed_final = [](const FlowTrajectory& tr) {
    std::vector<double> out;
    for (std::size_t p = 0; p < tr.path_count(); ++p) {
      const auto vals = tr.path_values(p);
      bool inside = true;
      for (double v : vals)
        if (std::abs(v) > 2.0) inside = false;
      if (inside) out.push_back(vals.back());
    }
    std::sort(out.begin(), out.end());
    return out;
  };
  const auto w4 = windowed_final(t4), w5 = windowed_final(t5);
  REQUIRE(w4.size() == w5.size());
  // endpoint values drift at the truncation level (~1e-1 at r=8), but the
  // zero-crossing structure is identical: the exact kernel pair stays pinned
  for (std::size_t i = 0; i < w4.size(); ++i) CHECK(std::abs(w4[i] - w5[i]) < 0.3);
  auto pinned = [](const std::vector<double>& w) {
    std::size_t c = 0;
    for (double v : w)
      if (std::abs(v) < 1e-10) ++c;
    return c;
  };
  CHECK(pinned(w4) == 2);
  CHECK(pinned(w5) == 2);
}

TEST_CASE("reversing the family inverts the matching permutations") {
  // banded circle field (modes 0, +-1) so eigenvectors actually rotate
  GaugeField::CoeffMap coeffs;
  CMatrix c0(1, 1), cp(1, 1), cm(1, 1);
  c0(0, 0) = cdouble(0.0, 0.2);
  cp(0, 0) = cdouble(0.0, 0.05);
  cm(0, 0) = cdouble(0.0, 0.05);
  coeffs[{1, mode_zero()}] = c0;
  coeffs[{1, Mode{1, 0, 0}}] = cp;
  coeffs[{1, Mode{-1, 0, 0}}] = cm;
  const GaugeField a(kCircle, 1, std::move(coeffs));

  const auto fwd = [&](double s) { return assemble(kCircle, a, 1, 10, s, 6.0); };
  const auto rev = [&](double s) { return fwd(1.0 - s); };
  TrackOptions topt;
  topt.lambda_window = 5.0;
  const std::vector<double> grid = uniform_grid(9);
  const FlowTrajectory tf = track(fwd, grid, topt);
  const FlowTrajectory tr = track(rev, grid, topt);
  REQUIRE(tf.s_nodes.size() == tr.s_nodes.size());
  const std::size_t nt = tf.s_nodes.size();
  for (std::size_t t = 0; t + 1 < nt; ++t) {
    // matching of fwd on (s_t, s_{t+1}) inverts the reversed family's
    // matching on the mirrored interval
    const auto& pf = tf.matching[t];
    const auto& pr = tr.matching[nt - 2 - t];
    for (std::size_t i = 0; i < pf.size(); ++i) CHECK(pr[pf[i]] == i);
  }
}

TEST_CASE("eigh residual contract is enforced") {
  // a deliberately non-conforming partition must be rejected
  CMatrix m(3, 3);
  m(0, 1) = 1.0;
  m(1, 0) = 1.0;
  m(2, 2) = 5.0;
  auto part = std::make_shared<BlockPartition>();
  part->components = {{0}, {1}, {2}};
  part->component_of = {0, 1, 2};
  EighOptions eo;
  eo.partition = part;
  CHECK_THROWS_AS(eigh(m, 0.0, eo), std::invalid_argument);
}

TEST_SUITE_END();
