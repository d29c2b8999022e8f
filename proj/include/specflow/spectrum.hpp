#pragma once

#include <memory>
#include <vector>

#include "specflow/dirac.hpp"
#include "specflow/eigensolver.hpp"

namespace specflow {

// Partition of basis indices into non-interacting components (connected
// components of the sparsity graph). Dirac families on the model manifolds
// split into small momentum sectors; exploiting this keeps full tracking
// runs at desk scale. A single component recovers the dense path.
struct BlockPartition {
  std::vector<std::vector<std::size_t>> components;   // sorted index lists
  std::vector<std::size_t> component_of;              // index -> component id

  std::size_t dim() const { return component_of.size(); }
  // True if every nonzero of m couples indices within one component.
  bool conforms(const CMatrix& m) const;
};

BlockPartition partition_from_pattern(const CMatrix& m);
// Partition refined jointly over several matrices (union of sparsity graphs).
BlockPartition partition_from_patterns(const std::vector<const CMatrix*>& ms);

// Incremental construction: feed sparsity patterns one matrix at a time, so
// only one dense matrix needs to be alive during probing.
class PartitionBuilder {
 public:
  explicit PartitionBuilder(std::size_t dim);
  void add_pattern(const CMatrix& m);
  BlockPartition finish() const;

 private:
  std::size_t dim_;
  mutable std::vector<std::size_t> parent_;
  std::size_t find(std::size_t i) const;
};

// Full spectrum of one Hermitian matrix, eigenvalues ascending. Eigenvectors
// are stored per component (block columns), which keeps memory proportional
// to the component sizes. `slot_of[i]` locates eigenvalue i as
// (component id, local column).
struct SpectrumSnapshot {
  double s = 0.0;
  std::vector<double> eigenvalues;
  std::shared_ptr<const BlockPartition> partition;
  std::vector<std::pair<std::size_t, std::size_t>> slot_of;
  std::vector<CMatrix> block_vectors;  // per component, empty if not requested

  bool has_vectors() const { return !block_vectors.empty(); }
  // |<v_i, v_j>| between eigenvector i of this snapshot and j of another
  // one sharing the same partition; zero across components.
  double overlap(std::size_t i, const SpectrumSnapshot& other, std::size_t j) const;
  // Dense eigenvector accessor (tests / small cases).
  std::vector<cdouble> dense_vector(std::size_t i) const;
};

struct EighOptions {
  bool want_vectors = false;
  // Use this partition instead of the one detected from the matrix.
  std::shared_ptr<const BlockPartition> partition;
  double residual_tol = 1e-9;  // relative to ||D||; checked when vectors are on
};

// Full eigendecomposition of a Hermitian Dirac matrix. Throws on
// non-convergence or residual violation.
SpectrumSnapshot eigh(const DiracMatrix& d, const EighOptions& opts);
SpectrumSnapshot eigh(const CMatrix& m, double s, const EighOptions& opts);

}  // namespace specflow
