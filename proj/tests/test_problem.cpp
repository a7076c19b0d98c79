// Copyright (c) 2026 hexsem contributors
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "hexsem/problem.hpp"
#include "support/oracles.hpp"

using namespace hexsem;

namespace {
ProblemConfig small_poisson(int k = 3, int n = 2)
{
  ProblemConfig cfg;
  cfg.k = k;
  cfg.order = n;
  return cfg;
}

double rel_diff(const Vector& a, const Vector& b)
{
  double num = 0, den = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    num += static_cast<double>(a[i] - b[i]) * (a[i] - b[i]);
    den += static_cast<double>(a[i]) * a[i];
  }
  return std::sqrt(num / den);
}
} // namespace

TEST_CASE("preconditioner modes reach the same solution")
{
  ProblemConfig cfg = small_poisson();
  cfg.pcg.rel_tolerance = Real(1e-8);
  cfg.precond = PrecondMode::two_scale;
  const PoissonResult ts = solve_poisson(cfg);
  cfg.precond = PrecondMode::none;
  const PoissonResult un = solve_poisson(cfg);
  REQUIRE(ts.report.status == PcgStatus::converged);
  REQUIRE(un.report.status == PcgStatus::converged);
  CHECK(rel_diff(ts.u, un.u) <= 1e-6);
}

TEST_CASE("two-scale needs no more iterations than fine-only")
{
  for (MeshFamily fam : {MeshFamily::uniform, MeshFamily::distorted_elements}) {
    ProblemConfig cfg = small_poisson(4, 3);
    cfg.family = fam;
    cfg.precond = PrecondMode::two_scale;
    const int its_ts = solve_poisson(cfg).report.iterations;
    cfg.precond = PrecondMode::fine_only;
    const int its_f = solve_poisson(cfg).report.iterations;
    CHECK(its_ts <= its_f);
  }
}

TEST_CASE("AMG and direct coarse solves give nearly the same outer counts")
{
  ProblemConfig cfg;
  cfg.k = 8;
  cfg.order = 3;
  cfg.coarse_solve = CoarseSolve::direct;
  const int its_direct = solve_poisson(cfg).report.iterations;
  cfg.coarse_solve = CoarseSolve::amg;
  const int its_amg = solve_poisson(cfg).report.iterations;
  CHECK(std::abs(its_amg - its_direct) <= 2);
}

TEST_CASE("concurrent and parallel modes reproduce the sequential solution")
{
  ProblemConfig cfg = small_poisson(3, 3);
  const PoissonResult seq = solve_poisson(cfg);
  cfg.concurrent_precond = true;
  cfg.fine_threads = 4;
  const PoissonResult par = solve_poisson(cfg);
  CHECK(par.report.iterations == seq.report.iterations);
  CHECK(rel_diff(seq.u, par.u) <= 1e-12);
}

TEST_CASE("deterministic mode: identical reports on repeated runs")
{
  ProblemConfig cfg = small_poisson();
  const std::string a = solve_poisson(cfg).report.to_json().dump();
  const std::string b = solve_poisson(cfg).report.to_json().dump();
  CHECK(a == b);
}

TEST_CASE("mms errors decrease steeply with order")
{
  ProblemConfig cfg;
  cfg.k = 2;
  cfg.pcg.rel_tolerance = Real(1e-12);
  const MmsReport rep = mms_convergence(cfg, 1, 4);
  REQUIRE(rep.rows.size() == 4);
  for (std::size_t i = 1; i < rep.rows.size(); ++i)
    CHECK(rep.rows[i].error < rep.rows[i - 1].error);
  // spectral: at least 10x per order from n=2 on
  CHECK(rep.rows[2].error * 10 <= rep.rows[1].error);
  CHECK(rep.rows[3].error * 10 <= rep.rows[2].error);
}

TEST_CASE("mms is linear: scaling kappa and s together changes nothing")
{
  ProblemConfig cfg;
  cfg.k = 2;
  cfg.pcg.rel_tolerance = Real(1e-12);
  cfg.kappa = 1;
  const MmsReport a = mms_convergence(cfg, 3, 3);
  cfg.kappa = 10; // the driver scales s = 3 pi^2 kappa u*, so u is unchanged
  const MmsReport b = mms_convergence(cfg, 3, 3);
  CHECK(a.rows[0].error == doctest::Approx(b.rows[0].error).epsilon(1e-9));
}

TEST_CASE("interpolating the manufactured solution beats the order n-1 solve")
{
  // continuous-norm comparison via fine sampling of the element interpolant
  ProblemConfig cfg;
  cfg.k = 2;
  cfg.order = 3;
  cfg.pcg.rel_tolerance = Real(1e-12);
  SemSystem sys = build_system(cfg);
  const Real pi = Real(M_PI);
  auto ustar = [pi](const std::array<Real, 3>& x) {
    return std::sin(pi * x[0]) * std::sin(pi * x[1]) * std::sin(pi * x[2]);
  };

  // order n-1 = 2 solution error, nodal discrete norm
  const MmsReport coarse_solve = mms_convergence(cfg, 2, 2);

  // interpolant error sampled on a dense per-element lattice
  const auto coords = global_node_coords(sys.mesh, sys.basis, sys.maps);
  const int np = sys.basis.npts();
  const std::size_t nloc = sys.maps.nodes_per_element();
  double err2 = 0;
  std::size_t samples = 0;
  auto lagrange = [&](int a, Real t) {
    Real v = 1;
    for (int m = 0; m < np; ++m)
      if (m != a) v *= (t - sys.basis.nodes[m]) / (sys.basis.nodes[a] - sys.basis.nodes[m]);
    return v;
  };
  for (gid e = 0; e < sys.mesh.num_elements(); ++e)
    for (int sz = 0; sz < 4; ++sz)
      for (int sy = 0; sy < 4; ++sy)
        for (int sx = 0; sx < 4; ++sx) {
          const Real xi = Real(-0.9) + Real(0.6) * sx;
          const Real eta = Real(-0.9) + Real(0.6) * sy;
          const Real zeta = Real(-0.9) + Real(0.6) * sz;
          Real interp = 0;
          for (int k = 0; k < np; ++k)
            for (int j = 0; j < np; ++j)
              for (int i = 0; i < np; ++i)
                interp += ustar(coords[sys.maps.l2g[e * nloc + (k * np + j) * np + i]]) *
                          lagrange(i, xi) * lagrange(j, eta) * lagrange(k, zeta);
          const auto x = trilinear_map(sys.mesh, e, xi, eta, zeta);
          const Real diff = interp - ustar(x);
          err2 += static_cast<double>(diff) * diff;
          ++samples;
        }
  const double interp_err = std::sqrt(err2 / samples);
  CHECK(interp_err < coarse_solve.rows[0].error);
}

TEST_CASE("heat: constant temperature is preserved with no source")
{
  ProblemConfig cfg;
  cfg.bar = {2, 2, 8};
  cfg.bar_size = {Real(0.25), Real(0.25), Real(1)};
  cfg.order = 2;
  cfg.boundary = BoundaryTag::neumann;
  cfg.kappa = Real(1e-2);
  cfg.heat.steps = 10;
  cfg.heat.has_source = false;
  cfg.heat.initial_value = 5;
  const HeatReport rep = solve_heat(cfg);
  REQUIRE(rep.all_converged);
  REQUIRE(rep.steps.size() == 10);
  for (const auto& s : rep.steps)
    CHECK(std::abs(s.mean_temperature - 5.0) < 1e-10);
  for (Real v : rep.final_field) CHECK(std::abs(static_cast<double>(v) - 5.0) < 1e-10);
}

TEST_CASE("heat: discrete mean-temperature balance with an active source")
{
  ProblemConfig cfg;
  cfg.bar = {2, 2, 6};
  cfg.bar_size = {Real(0.5), Real(0.5), Real(3)};
  cfg.order = 2;
  cfg.boundary = BoundaryTag::neumann;
  cfg.kappa = Real(1e-2);
  cfg.pcg.rel_tolerance = Real(1e-12);
  cfg.heat.steps = 5;
  cfg.heat.source_radius = Real(0.4);
  const HeatReport rep = solve_heat(cfg);
  REQUIRE(rep.all_converged);
  const double volume = 0.5 * 0.5 * 3.0;
  double mean_prev = cfg.heat.initial_value;
  for (const auto& s : rep.steps) {
    const double predicted = mean_prev + cfg.heat.dt * s.source_integral / volume;
    CHECK(std::abs(s.mean_temperature - predicted) < 1e-8 * std::max(1.0, predicted));
    mean_prev = s.mean_temperature;
  }
}

TEST_CASE("heat: Dirichlet decay is monotone")
{
  ProblemConfig cfg;
  cfg.bar = {2, 2, 4};
  cfg.bar_size = {Real(0.5), Real(0.5), Real(1)};
  cfg.order = 2;
  cfg.boundary = BoundaryTag::dirichlet;
  cfg.kappa = Real(0.1);
  cfg.heat.steps = 8;
  cfg.heat.has_source = false;
  cfg.heat.initial_value = 1;
  const HeatReport rep = solve_heat(cfg);
  REQUIRE(rep.all_converged);
  double prev = 1e300;
  for (const auto& s : rep.steps) {
    CHECK(s.l2_norm < prev);
    prev = s.l2_norm;
  }
}

TEST_CASE("heat rejects a non-positive time step")
{
  ProblemConfig cfg;
  cfg.bar = {2, 2, 2};
  cfg.heat.dt = 0;
  CHECK_THROWS(solve_heat(cfg));
}

TEST_CASE("load vector for s = 1 equals the masked lumped mass")
{
  ProblemConfig cfg = small_poisson(2, 2);
  SemSystem sys = build_system(cfg);
  const Vector b = sys.assemble_load([](const std::array<Real, 3>&) { return Real(1); });
  const Vector& m = sys.op->lumped_mass();
  for (gid g = 0; g < sys.maps.num_global; ++g)
    CHECK(b[g] == (sys.maps.dirichlet_mask[g] ? Real(0) : m[g]));
}
