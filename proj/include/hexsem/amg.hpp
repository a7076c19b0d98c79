// Copyright (c) 2026 hexsem contributors
// SPDX-License-Identifier: Apache-2.0

#ifndef HEXSEM_AMG_HPP
#define HEXSEM_AMG_HPP

#include <memory>
#include <span>

#include "hexsem/types.hpp"

namespace hexsem {

struct CsrMatrix {
  gid n = 0;
  std::vector<std::size_t> ptr;
  std::vector<gid> col;
  std::vector<Real> val;

  void multiply(std::span<const Real> x, std::span<Real> y) const;
  std::size_t nnz() const { return val.size(); }
};

// Sorted (row, col, value) triplets with duplicates summed.
CsrMatrix csr_from_triplets(gid n, std::vector<std::array<Real, 1>>&&) = delete;
CsrMatrix csr_from_triplets(gid n, std::vector<std::pair<std::pair<gid, gid>, Real>> trips);

struct AmgLevelStats {
  gid rows = 0;
  std::size_t nnz = 0;
};

struct AmgStats {
  std::vector<AmgLevelStats> levels;
  double operator_complexity = 0;
};

/// Unsmoothed-aggregation hierarchy: three composed pairwise-matching passes
/// per level (aggregates of up to 8 nodes), piecewise-constant transfers, and
/// Galerkin coarse matrices (exact aggregate sums). Applied as one K-cycle
/// with damped Jacobi (omega = 2/3) pre/post smoothing and two inner
/// PCG-accelerated corrections per level; sparse Cholesky at the coarsest
/// level. The cycle shape is frozen so repeated applications act as a fixed
/// preconditioner.
class AmgHierarchy {
public:
  explicit AmgHierarchy(CsrMatrix fine);
  ~AmgHierarchy();
  AmgHierarchy(AmgHierarchy&&) noexcept;
  AmgHierarchy& operator=(AmgHierarchy&&) noexcept;

  void apply(std::span<const Real> r, std::span<Real> z) const; // one K-cycle
  AmgStats stats() const;
  int num_levels() const;
  const CsrMatrix& level_matrix(int l) const;
  // this level's row -> aggregate on the next level
  const std::vector<gid>& aggregates(int l) const;

private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

} // namespace hexsem

#endif
