#pragma once

#include <functional>
#include <iosfwd>
#include <vector>

#include "specflow/spectrum.hpp"

namespace specflow {

struct TrackOptions {
  double lambda_window = 0.0;   // 0 = N/2 default chosen by the caller
  double overlap_min = 0.7;
  double ds_min = 1.0 / 8192.0;
  double lipschitz = 0.0;       // ||dD/ds||; measured from the family when 0
  std::size_t max_snapshots = 20000;
};

// Matched eigenvalue paths of an affine family s -> D_0 + s C over [0, 1].
// matching[t][i] gives the index at node t+1 continuing eigenvalue i of node
// t; paths are recovered by composing the matchings from node 0.
struct FlowTrajectory {
  std::vector<double> s_nodes;
  std::vector<std::vector<double>> eigenvalues;      // [node][sorted index]
  std::vector<std::vector<std::size_t>> matching;    // [node, size nodes-1]
  double lambda_window = 0.0;
  double lipschitz = 0.0;

  std::size_t path_count() const { return eigenvalues.empty() ? 0 : eigenvalues.front().size(); }
  // Eigenvalue of path p (index at s=0) at every node.
  std::vector<double> path_values(std::size_t p) const;
  std::vector<std::vector<double>> all_paths() const;

  // CSV dump: header s,path_id,eigenvalue.
  void write_csv(std::ostream& os) const;
};

// Track the family over the given grid (endpoints 0 and 1 required), with
// adaptive bisection wherever matching is ambiguous: overlap below
// overlap_min, a matched eigenvalue moving beyond the Lipschitz bound, or a
// non-degenerate eigenvalue moving more than half its spectral gap. Exactly
// degenerate groups are matched as clusters through their subspace overlap.
FlowTrajectory track(const std::function<DiracMatrix(double)>& family,
                     const std::vector<double>& s_grid, const TrackOptions& opts);

}  // namespace specflow
