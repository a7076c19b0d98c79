// Copyright (c) 2026 hexsem contributors
// SPDX-License-Identifier: Apache-2.0

#include "hexsem/problem.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <stdexcept>

namespace hexsem {

HexMesh make_mesh(const ProblemConfig& config)
{
  HexMesh mesh;
  if (!config.mesh_file.empty()) {
    mesh = read_mesh_file(config.mesh_file);
  } else if (config.bar[0] > 0) {
    mesh = generate_box_mesh(config.bar[0], config.bar[1], config.bar[2], config.bar_size,
                             config.boundary);
  } else {
    mesh = generate_cube_mesh(config.k, config.family, config.boundary);
  }
  for (int r = 0; r < config.refine; ++r) mesh = refine_uniform(mesh);
  return mesh;
}

LinearOp SemSystem::operator_fn()
{
  return [this](std::span<const Real> u, std::span<Real> r) { op->apply(u, r); };
}

LinearOp SemSystem::preconditioner_fn()
{
  return [this](std::span<const Real> r, std::span<Real> z) { precond->apply(r, z); };
}

Vector SemSystem::assemble_load(const std::function<Real(const std::array<Real, 3>&)>& s) const
{
  const auto coords = global_node_coords(mesh, basis, maps);
  const Vector& m = op->lumped_mass();
  Vector b(maps.num_global);
  for (gid g = 0; g < maps.num_global; ++g)
    b[g] = maps.dirichlet_mask[g] ? Real(0) : m[g] * s(coords[g]);
  return b;
}

SolveReport SemSystem::make_report(const ProblemConfig& config, const PcgResult& result) const
{
  SolveReport rep;
  rep.label = config.label;
  rep.status = result.status;
  rep.iterations = result.iterations;
  rep.residual_history = result.residual_history;
  rep.zr_history = result.zr_history;
  rep.num_global = maps.num_global;
  rep.num_elements = mesh.num_elements();
  rep.order = basis.order;
  rep.op_counters = op->counters();
  if (fine) {
    rep.fine_counters = fine->counters();
    rep.has_fine = true;
  }
  if (coarse) {
    rep.coarse_n = coarse->num_coarse();
    rep.coarse_amg = coarse->uses_amg();
    if (coarse->hierarchy()) rep.coarse_stats = coarse->hierarchy()->stats();
  }
  rep.deterministic = config.deterministic;
  return rep;
}

SemSystem build_system(const ProblemConfig& config)
{
  const auto t0 = std::chrono::steady_clock::now();
  SemSystem sys;
  sys.mesh = make_mesh(config);
  sys.basis = make_gll_basis(config.order);
  sys.maps = build_index_maps(sys.mesh, sys.basis);

  const gid ne = sys.mesh.num_elements();
  Vector kappa(ne, config.kappa), c(ne, config.c);

  GeometricFactors factors = compute_factors(sys.mesh, sys.basis);

  const bool need_fine =
      config.precond == PrecondMode::two_scale || config.precond == PrecondMode::fine_only;
  const bool need_coarse =
      config.precond == PrecondMode::two_scale || config.precond == PrecondMode::coarse_only;

  if (need_coarse)
    sys.coarse = std::make_unique<CoarsePreconditioner>(sys.mesh, sys.basis, sys.maps, factors,
                                                        kappa, c, config.coarse_solve,
                                                        config.coarse_direct_threshold);
  if (need_fine)
    sys.fine = std::make_unique<FinePreconditioner>(sys.mesh, sys.basis, sys.maps, kappa, c);

  sys.op = std::make_unique<SemOperator>(sys.mesh, sys.basis, sys.maps, std::move(factors),
                                         std::move(kappa), std::move(c), config.variant);
  sys.op->set_word_size(config.word_size);

  sys.precond = std::make_unique<TwoScalePreconditioner>(
      sys.maps, sys.fine.get(), sys.coarse.get(), config.precond, config.concurrent_precond,
      config.fine_threads);

  sys.setup_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return sys;
}

namespace {

void write_outputs(const ProblemConfig& config, const SolveReport& report, const SemSystem& sys,
                   std::span<const Real> u)
{
  if (!config.report_path.empty()) {
    std::ofstream out(config.report_path);
    if (!out) throw std::runtime_error("cannot write report " + config.report_path);
    out << report.to_json().dump(2) << "\n";
  }
  if (!config.history_path.empty()) write_history_csv(report, config.history_path);
  if (!config.vtk_path.empty()) export_vtk(sys.mesh, sys.basis, sys.maps, u, config.vtk_path);
}

} // namespace

PoissonResult solve_poisson(const ProblemConfig& config)
{
  SemSystem sys = build_system(config);
  const Vector b = sys.assemble_load([](const std::array<Real, 3>&) { return Real(1); });

  const auto t0 = std::chrono::steady_clock::now();
  PcgResult result = pcg(sys.operator_fn(), sys.preconditioner_fn(), b, config.pcg);
  const double solve_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  PoissonResult out;
  out.report = sys.make_report(config, result);
  out.report.timings = {sys.setup_seconds, solve_s};
  out.report.diagnostic = result.diagnostic;
  out.u = std::move(result.u);
  write_outputs(config, out.report, sys, out.u);
  return out;
}

HeatReport solve_heat(const ProblemConfig& config)
{
  if (!(config.heat.dt > 0)) throw std::invalid_argument("heat: dt must be positive");
  ProblemConfig cfg = config;
  cfg.c = 1 / cfg.heat.dt; // backward Euler consistency, enforced
  SemSystem sys = build_system(cfg);
  const gid n = sys.maps.num_global;
  const Vector& m = sys.op->lumped_mass();
  const auto coords = global_node_coords(sys.mesh, sys.basis, sys.maps);

  // default trajectory: straight line along the longest bounding-box axis
  std::array<Real, 3> lo = coords.empty() ? std::array<Real, 3>{0, 0, 0} : coords[0];
  std::array<Real, 3> hi = lo;
  for (const auto& p : coords)
    for (int d = 0; d < 3; ++d) {
      lo[d] = std::min(lo[d], p[d]);
      hi[d] = std::max(hi[d], p[d]);
    }
  std::array<Real, 3> src0 = cfg.heat.source_start, src1 = cfg.heat.source_end;
  if (cfg.heat.auto_trajectory) {
    int axis = 0;
    for (int d = 1; d < 3; ++d)
      if (hi[d] - lo[d] > hi[axis] - lo[axis]) axis = d;
    for (int d = 0; d < 3; ++d) src0[d] = src1[d] = Real(0.5) * (lo[d] + hi[d]);
    src0[axis] = lo[axis] + cfg.heat.source_radius;
    src1[axis] = hi[axis] - cfg.heat.source_radius;
  }

  const Real qdensity = cfg.heat.q_power / (cfg.heat.rho * cfg.heat.cp);
  const Real r2 = cfg.heat.source_radius * cfg.heat.source_radius;
  const Real total_time = cfg.heat.dt * cfg.heat.steps;

  Vector u(n, cfg.heat.initial_value);
  for (gid g = 0; g < n; ++g)
    if (sys.maps.dirichlet_mask[g]) u[g] = 0;

  double mass_total = 0;
  for (gid g = 0; g < n; ++g) mass_total += static_cast<double>(m[g]);

  HeatReport report;
  Vector b(n), au(n), q(n);
  auto apply_A = sys.operator_fn();
  auto apply_P = sys.preconditioner_fn();

  const auto t0 = std::chrono::steady_clock::now();
  PcgResult last;
  std::string failure;
  for (int step = 1; step <= cfg.heat.steps; ++step) {
    const Real t = cfg.heat.dt * step;
    std::array<Real, 3> center;
    const Real frac = total_time > 0 ? std::min(Real(1), t / total_time) : Real(0);
    for (int d = 0; d < 3; ++d) center[d] = src0[d] + frac * (src1[d] - src0[d]);

    double source_integral = 0;
    for (gid g = 0; g < n; ++g) {
      Real dist2 = 0;
      for (int d = 0; d < 3; ++d) {
        const Real dd = coords[g][d] - center[d];
        dist2 += dd * dd;
      }
      q[g] = (cfg.heat.has_source && dist2 <= r2) ? qdensity : Real(0);
      b[g] = sys.maps.dirichlet_mask[g] ? Real(0) : m[g] * (u[g] / cfg.heat.dt + q[g]);
      if (!sys.maps.dirichlet_mask[g]) source_integral += static_cast<double>(m[g]) * q[g];
    }

    // warm start: solve A du = b - A u_prev, u = u_prev + du
    sys.op->apply(u, au);
    for (gid g = 0; g < n; ++g) b[g] -= au[g];
    last = pcg(apply_A, apply_P, b, cfg.pcg);
    for (gid g = 0; g < n; ++g) u[g] += last.u[g];

    double mean = 0, l2 = 0;
    for (gid g = 0; g < n; ++g) {
      mean += static_cast<double>(m[g]) * u[g];
      l2 += static_cast<double>(m[g]) * u[g] * u[g];
    }
    mean /= mass_total;

    HeatStep rec;
    rec.step = step;
    rec.iterations = last.iterations;
    rec.residual = last.residual_history.empty() ? Real(0) : last.residual_history.back();
    rec.mean_temperature = mean;
    rec.l2_norm = std::sqrt(l2);
    rec.source_integral = source_integral;
    report.steps.push_back(rec);

    if (last.status != PcgStatus::converged) {
      report.all_converged = false;
      failure = "step " + std::to_string(step) + " did not converge: " + last.diagnostic;
      break;
    }
  }
  const double solve_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  report.final_field = std::move(u);
  report.base = sys.make_report(cfg, last);
  report.base.label = cfg.label;
  report.base.timings = {sys.setup_seconds, solve_s};
  report.base.diagnostic = failure;

  if (!cfg.report_path.empty()) {
    std::ofstream out(cfg.report_path);
    if (!out) throw std::runtime_error("cannot write report " + cfg.report_path);
    out << report.to_json().dump(2) << "\n";
  }
  if (!cfg.vtk_path.empty())
    export_vtk(sys.mesh, sys.basis, sys.maps, report.final_field, cfg.vtk_path, "T");
  return report;
}

MmsReport mms_convergence(const ProblemConfig& config, int min_order, int max_order)
{
  MmsReport report;
  const Real pi = Real(M_PI);
  auto ustar = [pi](const std::array<Real, 3>& x) {
    return std::sin(pi * x[0]) * std::sin(pi * x[1]) * std::sin(pi * x[2]);
  };
  for (int n = min_order; n <= max_order; ++n) {
    ProblemConfig cfg = config;
    cfg.order = n;
    cfg.boundary = BoundaryTag::dirichlet;
    cfg.c = 0;
    SemSystem sys = build_system(cfg);
    const Vector b = sys.assemble_load([&](const std::array<Real, 3>& x) {
      return 3 * pi * pi * cfg.kappa * ustar(x);
    });
    const PcgResult result = pcg(sys.operator_fn(), sys.preconditioner_fn(), b, cfg.pcg);
    const auto coords = global_node_coords(sys.mesh, sys.basis, sys.maps);
    const Vector& m = sys.op->lumped_mass();
    double err2 = 0;
    for (gid g = 0; g < sys.maps.num_global; ++g) {
      const double d = static_cast<double>(result.u[g]) - ustar(coords[g]);
      err2 += static_cast<double>(m[g]) * d * d;
    }
    report.rows.push_back({n, sys.maps.num_global, std::sqrt(err2), result.iterations});
  }
  return report;
}

} // namespace hexsem
