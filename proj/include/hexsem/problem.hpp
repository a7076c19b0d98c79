// Copyright (c) 2026 hexsem contributors
// SPDX-License-Identifier: Apache-2.0

#ifndef HEXSEM_PROBLEM_HPP
#define HEXSEM_PROBLEM_HPP

#include <functional>
#include <memory>
#include <string>

#include "hexsem/mesh_io.hpp"
#include "hexsem/precond.hpp"
#include "hexsem/report.hpp"
#include "hexsem/vtk.hpp"

namespace hexsem {

struct HeatConfig {
  Real dt = Real(0.04);
  int steps = 70;
  Real rho = Real(7000);
  Real cp = Real(0.8);
  Real q_power = Real(1000);
  Real source_radius = Real(0.5);
  bool has_source = true;
  bool auto_trajectory = true; // straight line along the longest mesh axis
  std::array<Real, 3> source_start{0, 0, 0};
  std::array<Real, 3> source_end{0, 0, 0};
  Real initial_value = 0;
};

struct ProblemConfig {
  std::string label = "poisson";
  // mesh source: file, or generated cube family, or generated bar
  std::string mesh_file;
  MeshFamily family = MeshFamily::uniform;
  int k = 8;
  int refine = 0;
  std::array<int, 3> bar{0, 0, 0};
  std::array<Real, 3> bar_size{Real(1), Real(1), Real(8)};
  BoundaryTag boundary = BoundaryTag::dirichlet;

  int order = 3;
  Real kappa = 1;
  Real c = 0;

  PcgConfig pcg;
  PrecondMode precond = PrecondMode::two_scale;
  OperatorVariant variant = OperatorVariant::stored;
  CoarseSolve coarse_solve = CoarseSolve::automatic;
  gid coarse_direct_threshold = 64000;
  bool concurrent_precond = false;
  int fine_threads = 1;
  bool deterministic = true;
  int word_size = static_cast<int>(sizeof(Real));

  HeatConfig heat;

  std::string report_path;
  std::string history_path;
  std::string vtk_path;
};

HexMesh make_mesh(const ProblemConfig& config);

/// Everything assembled for one problem: mesh, numbering, operator, and the
/// requested preconditioner parts.
struct SemSystem {
  HexMesh mesh;
  GllBasis basis;
  IndexMaps maps;
  std::unique_ptr<SemOperator> op;
  std::unique_ptr<FinePreconditioner> fine;
  std::unique_ptr<CoarsePreconditioner> coarse;
  std::unique_ptr<TwoScalePreconditioner> precond;
  double setup_seconds = 0;

  LinearOp operator_fn();
  LinearOp preconditioner_fn();
  // b_N = m_N s(x_N), zero on the Dirichlet mask
  Vector assemble_load(const std::function<Real(const std::array<Real, 3>&)>& s) const;
  SolveReport make_report(const ProblemConfig& config, const PcgResult& pcg) const;
};

SemSystem build_system(const ProblemConfig& config);

struct PoissonResult {
  SolveReport report;
  Vector u;
};

// kappa = config.kappa, c = config.c, s = 1.
PoissonResult solve_poisson(const ProblemConfig& config);

// Backward Euler: per step c = 1/dt and r = u_prev/dt + Q/(rho cp) on a
// moving ball; warm-started PCG per step.
HeatReport solve_heat(const ProblemConfig& config);

// Manufactured solution u* = sin(pi x) sin(pi y) sin(pi z) on the unit cube,
// sweeping polynomial orders; reports the discrete L2 error per order.
MmsReport mms_convergence(const ProblemConfig& config, int min_order = 1, int max_order = 6);

} // namespace hexsem

#endif
