#include "specflow/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace specflow {

bool BlockPartition::conforms(const CMatrix& m) const {
  const std::size_t n = m.rows();
  if (n != dim()) return false;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (m(i, j) != cdouble(0.0, 0.0) && component_of[i] != component_of[j]) return false;
  return true;
}

BlockPartition partition_from_pattern(const CMatrix& m) {
  return partition_from_patterns({&m});
}

BlockPartition partition_from_patterns(const std::vector<const CMatrix*>& ms) {
  require(!ms.empty(), "partition: no matrices");
  PartitionBuilder builder(ms.front()->rows());
  for (const CMatrix* m : ms) builder.add_pattern(*m);
  return builder.finish();
}

PartitionBuilder::PartitionBuilder(std::size_t dim) : dim_(dim), parent_(dim) {
  std::iota(parent_.begin(), parent_.end(), 0);
}

std::size_t PartitionBuilder::find(std::size_t i) const {
  while (parent_[i] != i) {
    parent_[i] = parent_[parent_[i]];
    i = parent_[i];
  }
  return i;
}

void PartitionBuilder::add_pattern(const CMatrix& m) {
  require(m.rows() == dim_ && m.cols() == dim_, "partition: shape mismatch");
  for (std::size_t i = 0; i < dim_; ++i)
    for (std::size_t j = i + 1; j < dim_; ++j)
      if (m(i, j) != cdouble(0.0, 0.0)) {
        const std::size_t a = find(i), b = find(j);
        if (a != b) parent_[std::max(a, b)] = std::min(a, b);
      }
}

BlockPartition PartitionBuilder::finish() const {
  BlockPartition p;
  p.component_of.assign(dim_, 0);
  std::vector<std::size_t> root_to_comp(dim_, SIZE_MAX);
  for (std::size_t i = 0; i < dim_; ++i) {
    const std::size_t r = find(i);
    if (root_to_comp[r] == SIZE_MAX) {
      root_to_comp[r] = p.components.size();
      p.components.emplace_back();
    }
    p.component_of[i] = root_to_comp[r];
    p.components[root_to_comp[r]].push_back(i);
  }
  return p;
}

double SpectrumSnapshot::overlap(std::size_t i, const SpectrumSnapshot& other, std::size_t j) const {
  const auto [ci, li] = slot_of[i];
  const auto [cj, lj] = other.slot_of[j];
  if (ci != cj) return 0.0;
  const CMatrix& a = block_vectors[ci];
  const CMatrix& b = other.block_vectors[cj];
  cdouble acc = 0.0;
  for (std::size_t r = 0; r < a.rows(); ++r) acc += std::conj(a(r, li)) * b(r, lj);
  return std::abs(acc);
}

std::vector<cdouble> SpectrumSnapshot::dense_vector(std::size_t i) const {
  std::vector<cdouble> v(partition->dim(), cdouble(0.0, 0.0));
  const auto [c, l] = slot_of[i];
  const auto& idx = partition->components[c];
  for (std::size_t r = 0; r < idx.size(); ++r) v[idx[r]] = block_vectors[c](r, l);
  return v;
}

SpectrumSnapshot eigh(const CMatrix& m, double s, const EighOptions& opts) {
  require(m.rows() == m.cols(), "eigh: matrix must be square");
  SpectrumSnapshot snap;
  snap.s = s;

  std::shared_ptr<const BlockPartition> part = opts.partition;
  if (!part) part = std::make_shared<BlockPartition>(partition_from_pattern(m));
  require(part->dim() == m.rows(), "eigh: partition dimension mismatch");
  require(part->conforms(m), "eigh: matrix does not conform to the supplied partition");
  snap.partition = part;

  const std::size_t ncomp = part->components.size();
  std::vector<EighResult> locals(ncomp);
  double matrix_scale = 0.0;
  for (std::size_t c = 0; c < ncomp; ++c) {
    const auto& idx = part->components[c];
    CMatrix sub(idx.size(), idx.size());
    for (std::size_t i = 0; i < idx.size(); ++i)
      for (std::size_t j = 0; j < idx.size(); ++j) sub(i, j) = m(idx[i], idx[j]);
    matrix_scale = std::max(matrix_scale, sub.max_abs());
    try {
      locals[c] = hermitian_eigh(sub, opts.want_vectors);
    } catch (const std::runtime_error& e) {
      std::ostringstream msg;
      msg << e.what() << " (component " << c << " of " << ncomp << ", size " << idx.size()
          << ", s=" << s << ", max entry " << sub.max_abs() << ")";
      throw std::runtime_error(msg.str());
    }
    if (opts.want_vectors && opts.residual_tol > 0.0) {
      const double res = eigh_residual(sub, locals[c]);
      const double scale = std::max(1.0, sub.max_abs() * double(idx.size()));
      if (res > opts.residual_tol * scale)
        throw std::runtime_error("eigh: residual contract violated on a component");
    }
  }

  // Merge: globally ascending eigenvalues with component/local references.
  std::vector<std::pair<double, std::pair<std::size_t, std::size_t>>> all;
  all.reserve(m.rows());
  for (std::size_t c = 0; c < ncomp; ++c)
    for (std::size_t l = 0; l < locals[c].eigenvalues.size(); ++l)
      all.push_back({locals[c].eigenvalues[l], {c, l}});
  std::stable_sort(all.begin(), all.end(),
                   [](const auto& x, const auto& y) { return x.first < y.first; });
  snap.eigenvalues.reserve(all.size());
  snap.slot_of.reserve(all.size());
  for (const auto& [ev, slot] : all) {
    snap.eigenvalues.push_back(ev);
    snap.slot_of.push_back(slot);
  }
  if (opts.want_vectors) {
    snap.block_vectors.resize(ncomp);
    for (std::size_t c = 0; c < ncomp; ++c) snap.block_vectors[c] = std::move(locals[c].eigenvectors);
  }
  return snap;
}

SpectrumSnapshot eigh(const DiracMatrix& d, const EighOptions& opts) {
  return eigh(d.matrix, d.s, opts);
}

}  // namespace specflow
