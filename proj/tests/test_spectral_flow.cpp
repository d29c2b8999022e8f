#include <cmath>
#include <random>

#include "doctest.h"
#include "specflow/dirac.hpp"
#include "specflow/spectral_flow.hpp"

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

FlowTrajectory circle_trajectory(double alpha, double r, int cutoff, int pts) {
  const auto family = [=](double s) {
    return assemble(kCircle, circle_constant_field(alpha), 1, cutoff, s, r);
  };
  TrackOptions topt;
  topt.lambda_window = 0.5 * cutoff;
  return track(family, uniform_grid(pts), topt);
}

}  // namespace

TEST_SUITE_BEGIN("spectral_flow");

TEST_CASE("constant family has zero flow") {
  const auto family = [](double) { return assemble(kTorus, t3_sin_field(), 1, 2, 0.0, 8.0); };
  TrackOptions topt;
  topt.lambda_window = 1.0;
  const FlowTrajectory traj = track(family, uniform_grid(5), topt);
  const auto res = spectral_flow(traj);
  CHECK(res.sf == 0);
  CHECK(res.crossings.empty());
}

TEST_CASE("circle family alpha=0.3 r=10 gives sf=3 with localized crossings") {
  const FlowTrajectory traj = circle_trajectory(0.3, 10.0, 24, 101);
  const auto res = spectral_flow(traj);
  CHECK(res.sf == 3);
  // paths m = -1,-2 cross at s = 1/3, 2/3; m=-3 reaches zero exactly at s=1
  std::vector<double> stars;
  for (const auto& c : res.crossings) {
    CHECK(c.direction == +1);
    stars.push_back(c.s_star);
  }
  std::sort(stars.begin(), stars.end());
  REQUIRE(stars.size() == 3);
  CHECK(stars[0] == doctest::Approx(1.0 / 3.0).epsilon(1e-9));
  CHECK(stars[1] == doctest::Approx(2.0 / 3.0).epsilon(1e-9));
  CHECK(stars[2] == doctest::Approx(1.0).epsilon(1e-9));
  // crossing directions sum to sf
  long long sum = 0;
  for (const auto& c : res.crossings) sum += c.direction;
  CHECK(sum == res.sf);
}

TEST_CASE("concatenation at an interior grid point") {
  // grid containing tau = 0.37 exactly
  std::vector<double> grid{0.0, 0.1, 0.2, 0.3, 0.37, 0.5, 0.75, 1.0};
  const auto family = [](double s) {
    return assemble(kCircle, circle_constant_field(0.3), 1, 16, s, 10.0);
  };
  TrackOptions topt;
  topt.lambda_window = 8.0;
  const FlowTrajectory traj = track(family, grid, topt);
  const long long total = spectral_flow(traj).sf;
  const long long left = spectral_flow_between(traj, 0.0, 0.37);
  const long long right = spectral_flow_between(traj, 0.37, 1.0);
  CHECK(total == left + right);
  CHECK(total == 3);
}

TEST_CASE("oracle: closed-form counts") {
  CHECK(circle_flow_oracle(0.3, 10.0) == 3);
  CHECK(circle_flow_oracle(0.3, 9.0) == 2);
  CHECK(circle_flow_oracle(-0.3, 10.0) == -3);
  CHECK(circle_flow_oracle(0.0, 10.0) == 0);
}

TEST_CASE("tracked flow equals the oracle for random parameters") {
  std::mt19937 rng(2024);
  std::uniform_real_distribution<double> alpha_dist(0.05, 0.45);
  std::uniform_real_distribution<double> r_dist(1.0, 25.0);
  for (int trial = 0; trial < 10; ++trial) {
    double alpha = alpha_dist(rng);
    double r = r_dist(rng);
    if (std::abs(r * alpha - std::round(r * alpha)) < 1e-3) r += 0.01;
    if (trial % 2 == 1) alpha = -alpha;
    const FlowTrajectory traj = circle_trajectory(alpha, r, 40, 101);
    const auto res = spectral_flow(traj);
    CHECK(res.sf == circle_flow_oracle(alpha, r));
    CHECK(std::abs(double(res.sf) - r * alpha) <= 1.0);
  }
}

TEST_CASE("path reversal negates the flow") {
  const auto family_fwd = [](double s) {
    return assemble(kCircle, circle_constant_field(0.3), 1, 16, s, 10.0);
  };
  const auto family_rev = [&](double s) { return family_fwd(1.0 - s); };
  TrackOptions topt;
  topt.lambda_window = 8.0;
  const auto fwd = spectral_flow(track(family_fwd, uniform_grid(51), topt));
  const auto rev = spectral_flow(track(family_rev, uniform_grid(51), topt));
  CHECK(fwd.sf == 3);
  CHECK(rev.sf == -fwd.sf);
}

TEST_CASE("torus sin family: exact kernel stays pinned, flow is zero") {
  const auto family = [](double s) { return assemble(kTorus, t3_sin_field(), 1, 4, s, 8.0); };
  TrackOptions topt;
  topt.lambda_window = 2.0;
  const FlowTrajectory traj = track(family, uniform_grid(17), topt);
  const auto res = spectral_flow(traj);
  CHECK(res.sf == 0);
}

TEST_CASE("window violation on a synthetic sign-changing path") {
  FlowTrajectory traj;
  traj.s_nodes = {0.0, 0.5, 1.0};
  traj.lambda_window = 1.0;
  traj.lipschitz = 10.0;
  // one path descending from +3 through zero: crosses while exceeding the window
  traj.eigenvalues = {{3.0}, {0.5}, {-1.0 + 0.9}};  // stays matched trivially
  traj.eigenvalues[2][0] = -0.4;
  traj.matching = {{0}, {0}};
  CHECK_THROWS_AS(spectral_flow(traj), std::runtime_error);
}

TEST_CASE("grazing paths produce warnings, not errors") {
  FlowTrajectory traj;
  traj.s_nodes = {0.0, 0.5, 1.0};
  traj.lambda_window = 1.0;
  traj.lipschitz = 10.0;
  // dips inside the half-window, exits above the window, no sign change
  traj.eigenvalues = {{0.4}, {0.9}, {1.5}};
  traj.matching = {{0}, {0}};
  const auto res = spectral_flow(traj);
  CHECK(res.sf == 0);
  REQUIRE(!res.warnings.empty());
}

TEST_SUITE_END();
