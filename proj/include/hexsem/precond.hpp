// Copyright (c) 2026 hexsem contributors
// SPDX-License-Identifier: Apache-2.0

#ifndef HEXSEM_PRECOND_HPP
#define HEXSEM_PRECOND_HPP

#include "hexsem/coarse.hpp"
#include "hexsem/fine.hpp"

namespace hexsem {

enum class PrecondMode { two_scale, fine_only, coarse_only, none };

/// P = P_coarse + P_fine on the masked (non-Dirichlet) space, identity on the
/// Dirichlet mask. In concurrent mode the coarse correction runs on a second
/// worker while the fine subdomain solves run here; the two contributions are
/// independent, so the sum is bitwise identical to the sequential mode.
class TwoScalePreconditioner {
public:
  TwoScalePreconditioner(const IndexMaps& maps, FinePreconditioner* fine,
                         CoarsePreconditioner* coarse, PrecondMode mode,
                         bool concurrent = false, int fine_threads = 1);

  void apply(std::span<const Real> r, std::span<Real> z);

  PrecondMode mode() const { return mode_; }

private:
  const IndexMaps* maps_;
  FinePreconditioner* fine_;
  CoarsePreconditioner* coarse_;
  PrecondMode mode_;
  bool concurrent_;
  int fine_threads_;
  Vector rm_, zf_, zc_;
};

} // namespace hexsem

#endif
