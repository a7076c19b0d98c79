// Copyright (c) 2026 hexsem contributors
// SPDX-License-Identifier: Apache-2.0

#include "hexsem/precond.hpp"

#include <future>
#include <stdexcept>

namespace hexsem {

TwoScalePreconditioner::TwoScalePreconditioner(const IndexMaps& maps, FinePreconditioner* fine,
                                               CoarsePreconditioner* coarse, PrecondMode mode,
                                               bool concurrent, int fine_threads)
    : maps_(&maps), fine_(fine), coarse_(coarse), mode_(mode), concurrent_(concurrent),
      fine_threads_(fine_threads)
{
  const bool need_fine = mode == PrecondMode::two_scale || mode == PrecondMode::fine_only;
  const bool need_coarse = mode == PrecondMode::two_scale || mode == PrecondMode::coarse_only;
  if (need_fine && !fine_) throw std::invalid_argument("preconditioner mode needs a fine part");
  if (need_coarse && !coarse_)
    throw std::invalid_argument("preconditioner mode needs a coarse part");
  rm_.resize(maps.num_global);
  zf_.resize(maps.num_global);
  zc_.resize(maps.num_global);
}

void TwoScalePreconditioner::apply(std::span<const Real> r, std::span<Real> z)
{
  const gid n = maps_->num_global;
  if (mode_ == PrecondMode::none) {
    for (gid g = 0; g < n; ++g) z[g] = r[g];
    return;
  }

  for (gid g = 0; g < n; ++g) rm_[g] = maps_->dirichlet_mask[g] ? Real(0) : r[g];

  const bool do_fine = mode_ != PrecondMode::coarse_only;
  const bool do_coarse = mode_ != PrecondMode::fine_only;

  if (do_fine && do_coarse && concurrent_) {
    auto coarse_task = std::async(std::launch::async, [&] { coarse_->apply(rm_, zc_); });
    if (fine_threads_ > 1)
      fine_->apply_parallel(rm_, zf_, fine_threads_);
    else
      fine_->apply(rm_, zf_);
    coarse_task.get();
  } else {
    if (do_fine) {
      if (fine_threads_ > 1)
        fine_->apply_parallel(rm_, zf_, fine_threads_);
      else
        fine_->apply(rm_, zf_);
    }
    if (do_coarse) coarse_->apply(rm_, zc_);
  }

  for (gid g = 0; g < n; ++g) {
    if (maps_->dirichlet_mask[g]) {
      z[g] = r[g];
    } else {
      Real s = 0;
      if (do_fine) s += zf_[g];
      if (do_coarse) s += zc_[g];
      z[g] = s;
    }
  }
}

} // namespace hexsem
