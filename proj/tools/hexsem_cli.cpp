// Copyright (c) 2026 hexsem contributors
// SPDX-License-Identifier: Apache-2.0

#include <chrono>
#include <cstdio>
#include <exception>
#include <fstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "hexsem/problem.hpp"

namespace {

using namespace hexsem;

std::uint64_t mix64(std::uint64_t& s)
{
  s += 0x9E3779B97F4A7C15ull;
  std::uint64_t z = s;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

Vector random_vector(std::size_t n, std::uint64_t seed)
{
  Vector v(n);
  for (auto& x : v) x = static_cast<Real>((mix64(seed) >> 11) * 0x1.0p-53) - Real(0.5);
  return v;
}

void add_mesh_options(CLI::App* cmd, ProblemConfig& cfg, std::string& family)
{
  cmd->add_option("--mesh", cfg.mesh_file, "mesh file (.msh or native) instead of a generator");
  cmd->add_option("--family", family, "generated cube family")
      ->check(CLI::IsMember({"uniform", "distorted_domain", "distorted_elements"}));
  cmd->add_option("-k,--k", cfg.k, "elements per cube edge");
  cmd->add_option("--refine", cfg.refine, "uniform refinement steps");
}

void add_solver_options(CLI::App* cmd, ProblemConfig& cfg, std::string& precond,
                        std::string& variant, std::string& boundary)
{
  cmd->add_option("-n,--order", cfg.order, "polynomial order");
  cmd->add_option("--kappa", cfg.kappa, "diffusivity (per-element constant)");
  cmd->add_option("--tol", cfg.pcg.rel_tolerance, "relative residual tolerance");
  cmd->add_option("--max-iters", cfg.pcg.max_iterations, "CG iteration cap");
  cmd->add_option("--precond", precond, "preconditioner mode")
      ->check(CLI::IsMember({"two_scale", "fine_only", "coarse_only", "none"}));
  cmd->add_option("--variant", variant, "residual kernel variant")
      ->check(CLI::IsMember({"stored", "on_the_fly"}));
  cmd->add_option("--boundary", boundary, "boundary condition on generated meshes")
      ->check(CLI::IsMember({"dirichlet", "neumann"}));
  cmd->add_option("--coarse-threshold", cfg.coarse_direct_threshold,
                  "max coarse unknowns for the direct solve (AMG above)");
  cmd->add_flag("--concurrent-precond", cfg.concurrent_precond,
                "run coarse and fine preconditioners on separate workers");
  cmd->add_option("--fine-threads", cfg.fine_threads, "workers for the subdomain solves");
  cmd->add_flag("--timings", [&cfg](std::int64_t) { cfg.deterministic = false; },
                "include wall-clock timings in reports (non-deterministic output)");
  cmd->add_option("--word-size", cfg.word_size, "word size for the byte models (4 or 8)");
  cmd->add_option("--report", cfg.report_path, "write JSON report");
  cmd->add_option("--history", cfg.history_path, "write CSV convergence history");
  cmd->add_option("--export-vtk", cfg.vtk_path, "write the solved field (legacy VTK)");
}

void apply_enums(ProblemConfig& cfg, const std::string& family, const std::string& precond,
                 const std::string& variant, const std::string& boundary)
{
  if (family == "distorted_domain") cfg.family = MeshFamily::distorted_domain;
  else if (family == "distorted_elements") cfg.family = MeshFamily::distorted_elements;
  else cfg.family = MeshFamily::uniform;
  if (precond == "fine_only") cfg.precond = PrecondMode::fine_only;
  else if (precond == "coarse_only") cfg.precond = PrecondMode::coarse_only;
  else if (precond == "none") cfg.precond = PrecondMode::none;
  else cfg.precond = PrecondMode::two_scale;
  cfg.variant = variant == "on_the_fly" ? OperatorVariant::on_the_fly : OperatorVariant::stored;
  cfg.boundary = boundary == "neumann" ? BoundaryTag::neumann : BoundaryTag::dirichlet;
}

int run_poisson(const ProblemConfig& cfg)
{
  const PoissonResult result = solve_poisson(cfg);
  std::printf("%s: N=%lld n=%d iterations=%d status=%s\n", cfg.label.c_str(),
              result.report.num_global, result.report.order, result.report.iterations,
              to_string(result.report.status));
  return result.report.status == PcgStatus::converged ? 0 : 2;
}

int run_heat(const ProblemConfig& cfg)
{
  const HeatReport report = solve_heat(cfg);
  for (const auto& s : report.steps)
    std::printf("step %3d: iterations=%3d residual=%.3e mean_T=%.8f\n", s.step, s.iterations,
                static_cast<double>(s.residual), s.mean_temperature);
  std::printf("heat: %zu steps, %s\n", report.steps.size(),
              report.all_converged ? "all converged" : report.base.diagnostic.c_str());
  return report.all_converged ? 0 : 2;
}

int run_mms(const ProblemConfig& cfg, int min_order, int max_order)
{
  const MmsReport report = mms_convergence(cfg, min_order, max_order);
  std::printf("%3s %9s %13s %6s\n", "n", "N", "L2_error", "iters");
  for (const auto& r : report.rows)
    std::printf("%3d %9lld %13.6e %6d\n", r.order, r.num_global, r.error, r.iterations);
  if (!cfg.report_path.empty()) {
    std::ofstream out(cfg.report_path);
    out << report.to_json().dump(2) << "\n";
  }
  return 0;
}

int run_bench(ProblemConfig cfg, int min_order, int max_order, int repeats)
{
  nlohmann::json rows = nlohmann::json::array();
  std::printf("%3s %9s | %14s %14s %8s | %14s %14s %8s | %10s %10s\n", "n", "N", "O_R_model",
              "O_R_measured", "GF/s", "O_P_model", "O_P_measured", "GF/s", "B_R(st)MB",
              "B_R(otf)MB");
  for (int n = min_order; n <= max_order; ++n) {
    cfg.order = n;
    cfg.precond = PrecondMode::fine_only;
    SemSystem sys = build_system(cfg);
    const Vector u = random_vector(sys.maps.num_global, 0xC0FFEEull + n);
    Vector r(sys.maps.num_global), z(sys.maps.num_global);

    sys.op->reset_counters();
    for (int it = 0; it < repeats; ++it) sys.op->apply(u, r);
    const KernelCounters stored = sys.op->counters();

    ProblemConfig otf_cfg = cfg;
    otf_cfg.variant = OperatorVariant::on_the_fly;
    SemSystem otf_sys = build_system(otf_cfg);
    otf_sys.op->set_includes_geometry_flops(true);
    for (int it = 0; it < repeats; ++it) otf_sys.op->apply(u, r);
    const KernelCounters otf = otf_sys.op->counters();

    sys.fine->reset_counters();
    const auto tf0 = std::chrono::steady_clock::now();
    for (int it = 0; it < repeats; ++it) sys.fine->apply(u, z);
    const double fine_wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - tf0).count();
    const FineCounters fine = sys.fine->counters();

    const double gfr = stored.wall_seconds > 0
                           ? stored.flops_measured / stored.wall_seconds * 1e-9 : 0.0;
    const double gfp = fine_wall > 0 ? fine.ops_measured / fine_wall * 1e-9 : 0.0;
    std::printf("%3d %9d | %14llu %14llu %8.2f | %14llu %14llu %8.2f | %10.2f %10.2f\n", n,
                sys.maps.num_global, stored.flops_model() / repeats,
                stored.flops_measured / repeats, gfr, fine.total_ops_model() / repeats,
                fine.ops_measured / repeats, gfp,
                stored.bytes_model() / repeats / 1e6,
                otf.bytes_model() / repeats / 1e6);

    nlohmann::json row;
    row["n"] = n;
    row["N"] = sys.maps.num_global;
    row["stored"] = counters_to_json(stored);
    row["on_the_fly"] = counters_to_json(otf);
    row["fine"] = counters_to_json(fine);
    rows.push_back(row);
  }
  if (!cfg.report_path.empty()) {
    std::ofstream out(cfg.report_path);
    out << rows.dump(2) << "\n";
  }
  return 0;
}

} // namespace

int main(int argc, char** argv)
{
  CLI::App app{"spectral finite element solver for elliptic problems on all-hex meshes"};
  app.require_subcommand(1);
  // key = value config file with one [section] per subcommand; flags override
  app.set_config("--config", "", "TOML-like config file, e.g. [poisson] k=8 ...");

  ProblemConfig cfg;
  std::string family = "uniform", precond = "two_scale", variant = "stored",
              boundary = "dirichlet";
  int min_order = 1, max_order = 6, repeats = 10;

  auto* poisson = app.add_subcommand("poisson", "solve c u - div(kappa grad u) = 1");
  add_mesh_options(poisson, cfg, family);
  add_solver_options(poisson, cfg, precond, variant, boundary);
  poisson->add_option("--c", cfg.c, "reaction coefficient");

  auto* heat = app.add_subcommand("heat", "backward Euler heat equation with moving source");
  add_mesh_options(heat, cfg, family);
  add_solver_options(heat, cfg, precond, variant, boundary);
  heat->add_option("--bar", cfg.bar, "bar generator: elements per axis (3 values)");
  heat->add_option("--bar-size", cfg.bar_size, "bar dimensions in meters (3 values)");
  heat->add_option("--dt", cfg.heat.dt, "time step (seconds)");
  heat->add_option("--steps", cfg.heat.steps, "number of backward Euler steps");
  heat->add_option("--rho", cfg.heat.rho, "density");
  heat->add_option("--cp", cfg.heat.cp, "specific heat");
  heat->add_option("--Q", cfg.heat.q_power, "source power (W)");
  heat->add_option("--source-radius", cfg.heat.source_radius, "moving ball radius");
  heat->add_option("--initial", cfg.heat.initial_value, "initial temperature");
  heat->add_flag("--no-source", [&cfg](std::int64_t) { cfg.heat.has_source = false; },
                 "disable the heat source");

  auto* mms = app.add_subcommand("mms", "manufactured-solution convergence study");
  add_mesh_options(mms, cfg, family);
  add_solver_options(mms, cfg, precond, variant, boundary);
  mms->add_option("--min-order", min_order, "first polynomial order");
  mms->add_option("--max-order", max_order, "last polynomial order");

  auto* bench = app.add_subcommand("bench", "kernel cost models vs instrumented counters");
  add_mesh_options(bench, cfg, family);
  add_solver_options(bench, cfg, precond, variant, boundary);
  bench->add_option("--min-order", min_order, "first polynomial order");
  bench->add_option("--max-order", max_order, "last polynomial order");
  bench->add_option("--repeats", repeats, "kernel applications per order");

  std::string out_path;
  auto* meshgen = app.add_subcommand("meshgen", "generate and write a mesh");
  add_mesh_options(meshgen, cfg, family);
  meshgen->add_option("--boundary", boundary, "boundary tag for all outer faces")
      ->check(CLI::IsMember({"dirichlet", "neumann"}));
  meshgen->add_option("-o,--out", out_path, "output path (.msh or native)")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    apply_enums(cfg, family, precond, variant, boundary);
    if (poisson->parsed()) {
      cfg.label = "poisson";
      return run_poisson(cfg);
    }
    if (heat->parsed()) {
      cfg.label = "heat";
      if (cfg.bar[0] == 0 && cfg.mesh_file.empty()) cfg.bar = {8, 8, 64};
      if (!heat->count("--boundary")) cfg.boundary = BoundaryTag::neumann;
      return run_heat(cfg);
    }
    if (mms->parsed()) {
      cfg.label = "mms";
      if (!mms->count("--k")) cfg.k = 4;
      if (!mms->count("--tol")) cfg.pcg.rel_tolerance = Real(1e-12);
      return run_mms(cfg, min_order, max_order);
    }
    if (bench->parsed()) {
      cfg.label = "bench";
      if (!bench->count("--max-order")) max_order = 7;
      if (!bench->count("--min-order")) min_order = 2;
      if (!bench->count("--k")) cfg.k = 4;
      return run_bench(cfg, min_order, max_order, repeats);
    }
    if (meshgen->parsed()) {
      write_mesh_file(make_mesh(cfg), out_path);
      std::printf("wrote %s\n", out_path.c_str());
      return 0;
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  }
  return 0;
}
