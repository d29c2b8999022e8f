#include "specflow/tracking.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace specflow {

namespace {

struct MatchOutcome {
  bool ok = false;
  std::vector<std::size_t> perm;  // global index at t -> global index at t+1
};

// Clusters of indices (positions into a sorted value list) whose values are
// numerically degenerate.
std::vector<std::vector<std::size_t>> degeneracy_clusters(const std::vector<double>& vals,
                                                          double tol) {
  std::vector<std::vector<std::size_t>> out;
  for (std::size_t i = 0; i < vals.size(); ++i) {
    if (!out.empty() && vals[i] - vals[out.back().back()] <= tol)
      out.back().push_back(i);
    else
      out.push_back({i});
  }
  return out;
}

// Smallest singular value of the cross-Gram of two eigenvector groups: 1 for
// identical subspaces, 0 for orthogonal ones.
double subspace_overlap(const SpectrumSnapshot& a, const std::vector<std::size_t>& ia,
                        const SpectrumSnapshot& b, const std::vector<std::size_t>& ib) {
  const std::size_t g = ia.size();
  CMatrix gram(g, g);
  for (std::size_t p = 0; p < g; ++p) {
    const auto [ca, la] = a.slot_of[ia[p]];
    for (std::size_t q = 0; q < g; ++q) {
      const auto [cb, lb] = b.slot_of[ib[q]];
      if (ca != cb) continue;
      const CMatrix& va = a.block_vectors[ca];
      const CMatrix& vb = b.block_vectors[cb];
      cdouble acc = 0.0;
      for (std::size_t r = 0; r < va.rows(); ++r) acc += std::conj(va(r, la)) * vb(r, lb);
      gram(p, q) = acc;
    }
  }
  const CMatrix gsq = matmul(gram.adjoint(), gram);
  const auto ev = hermitian_eigh(gsq, false);
  return std::sqrt(std::max(0.0, ev.eigenvalues.front()));
}

// Attempt a full matching between adjacent snapshots. Vector-confident
// assignments (overlap >= 0.9) are accepted directly; marginal overlaps must
// also satisfy the half-gap movement rule, and anything weaker requests a
// bisection. At the resolution floor, `final_level` widens the degeneracy
// clusters to the value resolution 2 L ds so that unresolved pinches are
// matched through their subspace instead of failing.
MatchOutcome match_adjacent(const SpectrumSnapshot& a, const SpectrumSnapshot& b, double ds,
                            const TrackOptions& opts, double lipschitz, bool final_level,
                            std::string* fail_where) {
  const std::size_t dim = a.eigenvalues.size();
  MatchOutcome out;
  out.perm.assign(dim, SIZE_MAX);

  double scale = 1.0;
  if (dim) scale += std::max(std::abs(a.eigenvalues.front()), std::abs(a.eigenvalues.back()));
  const double deg_tol = 1e-7 * scale;
  const double cluster_tol =
      final_level ? std::max(deg_tol, 2.0 * lipschitz * ds) : deg_tol;
  const double weyl_slack = lipschitz * ds * (1.0 + 1e-6) + 1e-10 * scale;
  const double confident = std::max(opts.overlap_min, 0.9);

  const auto& comps = a.partition->components;
  for (std::size_t c = 0; c < comps.size(); ++c) {
    std::vector<std::size_t> ia, ib;
    for (std::size_t i = 0; i < dim; ++i) {
      if (a.slot_of[i].first == c) ia.push_back(i);
      if (b.slot_of[i].first == c) ib.push_back(i);
    }
    const std::size_t g = ia.size();
    if (g == 0) continue;

    std::vector<double> va(g), vb(g);
    for (std::size_t p = 0; p < g; ++p) {
      va[p] = a.eigenvalues[ia[p]];
      vb[p] = b.eigenvalues[ib[p]];
    }
    const auto clusters = degeneracy_clusters(va, cluster_tol);

    std::vector<bool> taken(g, false);
    for (const auto& cluster : clusters) {
      if (cluster.size() == 1) {
        const std::size_t p = cluster.front();
        double best = -1.0;
        std::size_t best_q = SIZE_MAX;
        for (std::size_t q = 0; q < g; ++q) {
          if (taken[q]) continue;
          const double ov = a.overlap(ia[p], b, ib[q]);
          if (ov > best + 1e-12) {
            best = ov;
            best_q = q;
          }
        }
        if (best_q == SIZE_MAX) {
          out.ok = false;
          return out;
        }
        const double move = std::abs(vb[best_q] - va[p]);
        double gap = std::numeric_limits<double>::infinity();
        for (std::size_t p2 = 0; p2 < g; ++p2)
          if (p2 != p) gap = std::min(gap, std::abs(va[p2] - va[p]));
        bool ok = move <= weyl_slack;
        if (ok && best < confident) {
          // marginal vector evidence: demand the half-gap movement rule
          ok = best >= opts.overlap_min && (move <= 0.5 * gap + deg_tol || final_level);
        }
        if (!ok) {
          if (fail_where) {
            std::ostringstream msg;
            msg << "overlap " << best << ", move " << move << " in component " << c;
            *fail_where = msg.str();
          }
          out.ok = false;
          return out;
        }
        taken[best_q] = true;
        out.perm[ia[p]] = ib[best_q];
      } else {
        // degenerate (or resolution-limited) group: candidates are the free
        // indices closest in value; validated through the subspace overlap
        std::vector<std::size_t> cand;
        std::vector<std::pair<double, std::size_t>> ranked;
        const double center = 0.5 * (va[cluster.front()] + va[cluster.back()]);
        for (std::size_t q = 0; q < g; ++q)
          if (!taken[q]) ranked.push_back({std::abs(vb[q] - center), q});
        std::stable_sort(ranked.begin(), ranked.end());
        if (ranked.size() < cluster.size()) {
          out.ok = false;
          return out;
        }
        for (std::size_t t = 0; t < cluster.size(); ++t) cand.push_back(ranked[t].second);
        std::stable_sort(cand.begin(), cand.end());

        std::vector<std::size_t> ga, gb;
        for (std::size_t p : cluster) ga.push_back(ia[p]);
        for (std::size_t q : cand) gb.push_back(ib[q]);
        const double sub = subspace_overlap(a, ga, b, gb);
        double max_move = 0.0;
        for (std::size_t t = 0; t < cluster.size(); ++t)
          max_move = std::max(max_move, std::abs(vb[cand[t]] - va[cluster[t]]));
        if (sub < opts.overlap_min || max_move > weyl_slack) {
          if (fail_where) {
            std::ostringstream msg;
            msg << "cluster subspace overlap " << sub << ", move " << max_move << " in component "
                << c;
            *fail_where = msg.str();
          }
          out.ok = false;
          return out;
        }
        for (std::size_t t = 0; t < cluster.size(); ++t) {
          taken[cand[t]] = true;
          out.perm[ga[t]] = gb[t];
        }
      }
    }
  }
  out.ok = true;
  return out;
}

}  // namespace

std::vector<double> FlowTrajectory::path_values(std::size_t p) const {
  std::vector<double> vals;
  vals.reserve(s_nodes.size());
  std::size_t idx = p;
  for (std::size_t t = 0; t < s_nodes.size(); ++t) {
    vals.push_back(eigenvalues[t][idx]);
    if (t + 1 < s_nodes.size()) idx = matching[t][idx];
  }
  return vals;
}

std::vector<std::vector<double>> FlowTrajectory::all_paths() const {
  std::vector<std::vector<double>> out;
  out.reserve(path_count());
  for (std::size_t p = 0; p < path_count(); ++p) out.push_back(path_values(p));
  return out;
}

void FlowTrajectory::write_csv(std::ostream& os) const {
  os << "s,path_id,eigenvalue\n";
  char buf[64];
  for (std::size_t p = 0; p < path_count(); ++p) {
    const auto vals = path_values(p);
    for (std::size_t t = 0; t < s_nodes.size(); ++t) {
      std::snprintf(buf, sizeof buf, "%.17g,%zu,%.17g", s_nodes[t], p, vals[t]);
      os << buf << "\n";
    }
  }
}

FlowTrajectory track(const std::function<DiracMatrix(double)>& family,
                     const std::vector<double>& s_grid, const TrackOptions& opts) {
  require(s_grid.size() >= 2, "track: need at least two grid points");
  require(s_grid.front() == 0.0 && s_grid.back() == 1.0, "track: grid endpoints must be 0 and 1");
  for (std::size_t i = 0; i + 1 < s_grid.size(); ++i)
    require(s_grid[i] < s_grid[i + 1], "track: grid must be strictly increasing");

  // The family is affine in s, so the union of the sparsity patterns at two
  // distinct nonzero parameters covers the whole family. Probes are assembled
  // one at a time to keep a single dense matrix alive.
  std::shared_ptr<BlockPartition> partition;
  double lipschitz = opts.lipschitz;
  {
    DiracMatrix probe = family(1.0);
    PartitionBuilder builder(probe.matrix.rows());
    builder.add_pattern(probe.matrix);
    if (lipschitz <= 0.0) {
      // ||dD/ds|| from the endpoint difference, reusing the probe storage
      probe.matrix -= family(0.0).matrix;
      lipschitz = probe.matrix.operator_norm();
      probe = family(0.70710678118654752);
      builder.add_pattern(probe.matrix);
    } else {
      probe = family(0.70710678118654752);
      builder.add_pattern(probe.matrix);
    }
    partition = std::make_shared<BlockPartition>(builder.finish());
  }

  EighOptions eopts;
  eopts.want_vectors = true;
  eopts.partition = partition;

  std::map<double, SpectrumSnapshot> snaps;
  auto snapshot_at = [&](double s) -> const SpectrumSnapshot& {
    auto it = snaps.find(s);
    if (it == snaps.end()) {
      if (snaps.size() >= opts.max_snapshots)
        throw std::runtime_error("track: refinement budget exceeded");
      it = snaps.emplace(s, eigh(family(s), eopts)).first;
    }
    return it->second;
  };

  struct Leaf {
    double l, r;
    std::vector<std::size_t> perm;
  };
  std::vector<Leaf> leaves;

  // Eigenvectors are only needed while an interval is being matched; interior
  // nodes release them once their enclosing interval is done.
  auto drop_vectors_inside = [&](double l, double r) {
    for (auto it = snaps.upper_bound(l); it != snaps.end() && it->first < r; ++it)
      it->second.block_vectors.clear();
  };

  const std::function<void(double, double)> process = [&](double l, double r) {
    const SpectrumSnapshot& sa = snapshot_at(l);
    const SpectrumSnapshot& sb = snapshot_at(r);
    const double ds = r - l;
    const bool final_level = (ds <= 2.0 * opts.ds_min);
    std::string where;
    MatchOutcome mo = match_adjacent(sa, sb, ds, opts, lipschitz, final_level, &where);
    if (mo.ok) {
      leaves.push_back({l, r, std::move(mo.perm)});
      return;
    }
    if (final_level) {
      std::ostringstream msg;
      msg << "unresolved crossing cluster at s=" << 0.5 * (l + r) << " (" << where << ")";
      throw std::runtime_error(msg.str());
    }
    const double mid = 0.5 * (l + r);
    process(l, mid);
    process(mid, r);
    drop_vectors_inside(l, r);
  };

  for (std::size_t i = 0; i + 1 < s_grid.size(); ++i) {
    process(s_grid[i], s_grid[i + 1]);
    snaps.at(s_grid[i]).block_vectors.clear();
  }

  std::stable_sort(leaves.begin(), leaves.end(),
                   [](const Leaf& a, const Leaf& b) { return a.l < b.l; });

  FlowTrajectory traj;
  traj.lambda_window = opts.lambda_window;
  traj.lipschitz = lipschitz;
  traj.s_nodes.reserve(leaves.size() + 1);
  traj.s_nodes.push_back(leaves.front().l);
  for (const Leaf& leaf : leaves) traj.s_nodes.push_back(leaf.r);
  traj.eigenvalues.reserve(traj.s_nodes.size());
  for (double s : traj.s_nodes) traj.eigenvalues.push_back(snaps.at(s).eigenvalues);
  traj.matching.reserve(leaves.size());
  for (Leaf& leaf : leaves) traj.matching.push_back(std::move(leaf.perm));
  return traj;
}

}  // namespace specflow
