#pragma once

#include <string>
#include <vector>

#include "specflow/tracking.hpp"

namespace specflow {

struct Crossing {
  double s_star = 0.0;
  std::size_t path_id = 0;
  int direction = 0;  // +1 up through zero, -1 down
};

// Net signed count of eigenvalue paths crossing zero, with the endpoint
// convention that an exact zero counts as nonnegative. The net count equals
// #{paths with lambda(0) < 0 <= lambda(1)} - #{paths with lambda(1) < 0 <=
// lambda(0)} by telescoping, which is how sf is computed; the crossings list
// records every interior sign change for reporting.
struct SpectralFlowResult {
  long long sf = 0;
  std::vector<Crossing> crossings;
  std::string convention = "endpoint zero counts nonnegative";
  double eps_zero = 0.0;
  std::vector<std::string> warnings;  // tangential touches, window grazing
};

SpectralFlowResult spectral_flow(const FlowTrajectory& traj);

// sf restricted to [s_a, s_b]; both values must be grid nodes.
long long spectral_flow_between(const FlowTrajectory& traj, double s_a, double s_b);

// Exact count for the constant-gauge circle family with spectrum
// {m + s r alpha}: #{m : -r alpha <= m < 0} for alpha > 0, negated for
// alpha < 0.
long long circle_flow_oracle(double alpha, double r);

void write_crossings_csv(std::ostream& os, const SpectralFlowResult& res);

}  // namespace specflow
