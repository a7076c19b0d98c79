// Copyright (c) 2026 hexsem contributors
// SPDX-License-Identifier: Apache-2.0

#ifndef HEXSEM_KRYLOV_HPP
#define HEXSEM_KRYLOV_HPP

#include <functional>
#include <span>
#include <string>

#include "hexsem/types.hpp"

namespace hexsem {

struct PcgConfig {
  Real rel_tolerance = Real(1e-6); // on ||r_k|| / ||r_0||
  int max_iterations = 500;
  bool record_history = true;
};

enum class PcgStatus { converged, max_iterations, breakdown };

struct PcgResult {
  PcgStatus status = PcgStatus::converged;
  int iterations = 0;
  Vector u;
  std::vector<Real> residual_history; // ||r_k||_2, k = 0..iterations
  std::vector<Real> zr_history;       // z_k . r_k per accepted iteration
  std::string diagnostic;
};

using LinearOp = std::function<void(std::span<const Real>, std::span<Real>)>;

// Preconditioned conjugate gradients with u_0 = 0 (so r_0 = b). Dot products
// always accumulate in double, sequentially, for machine-stable iteration
// counts. Aborts with status breakdown if p.Ap <= 0.
PcgResult pcg(const LinearOp& apply_A, const LinearOp& apply_P, std::span<const Real> b,
              const PcgConfig& config = {});

double dot(std::span<const Real> a, std::span<const Real> b);
double norm2(std::span<const Real> a);

} // namespace hexsem

#endif
