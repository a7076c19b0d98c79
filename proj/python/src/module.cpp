// Copyright (c) 2026 hexsem contributors
// SPDX-License-Identifier: Apache-2.0

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "hexsem/problem.hpp"

namespace py = pybind11;
using namespace hexsem;

namespace {

ProblemConfig config_from_kwargs(const py::kwargs& kw)
{
  ProblemConfig cfg;
  auto get = [&](const char* name, auto& out) {
    if (kw.contains(name)) out = py::cast<std::decay_t<decltype(out)>>(kw[name]);
  };
  get("mesh_file", cfg.mesh_file);
  get("k", cfg.k);
  get("refine", cfg.refine);
  get("order", cfg.order);
  get("kappa", cfg.kappa);
  get("c", cfg.c);
  std::string family = "uniform", precond = "two_scale", variant = "stored",
              boundary = "dirichlet";
  get("family", family);
  get("precond", precond);
  get("variant", variant);
  get("boundary", boundary);
  cfg.family = family == "distorted_domain"     ? MeshFamily::distorted_domain
               : family == "distorted_elements" ? MeshFamily::distorted_elements
                                                : MeshFamily::uniform;
  cfg.precond = precond == "fine_only"     ? PrecondMode::fine_only
                : precond == "coarse_only" ? PrecondMode::coarse_only
                : precond == "none"        ? PrecondMode::none
                                           : PrecondMode::two_scale;
  cfg.variant = variant == "on_the_fly" ? OperatorVariant::on_the_fly : OperatorVariant::stored;
  cfg.boundary = boundary == "neumann" ? BoundaryTag::neumann : BoundaryTag::dirichlet;
  double tol = cfg.pcg.rel_tolerance;
  get("tol", tol);
  cfg.pcg.rel_tolerance = static_cast<Real>(tol);
  get("max_iterations", cfg.pcg.max_iterations);
  get("concurrent_precond", cfg.concurrent_precond);
  get("fine_threads", cfg.fine_threads);
  get("vtk_path", cfg.vtk_path);
  get("report_path", cfg.report_path);
  // heat block
  get("dt", cfg.heat.dt);
  get("steps", cfg.heat.steps);
  get("rho", cfg.heat.rho);
  get("cp", cfg.heat.cp);
  get("Q", cfg.heat.q_power);
  get("source_radius", cfg.heat.source_radius);
  get("has_source", cfg.heat.has_source);
  get("initial_value", cfg.heat.initial_value);
  if (kw.contains("bar")) cfg.bar = py::cast<std::array<int, 3>>(kw["bar"]);
  if (kw.contains("bar_size")) {
    const auto bs = py::cast<std::array<double, 3>>(kw["bar_size"]);
    for (int d = 0; d < 3; ++d) cfg.bar_size[d] = static_cast<Real>(bs[d]);
  }
  return cfg;
}

py::object json_to_py(const nlohmann::json& j)
{
  return py::module_::import("json").attr("loads")(j.dump());
}

} // namespace

PYBIND11_MODULE(_hexsem, m)
{
  m.doc() = "matrix-free spectral element solver for elliptic problems on all-hex meshes";

  m.def("gll_nodes_weights", [](int n) {
    std::vector<Real> nodes, weights;
    gll_nodes_weights(n, nodes, weights);
    return py::make_tuple(nodes, weights);
  });

  m.def("derivation_matrix", [](int n) {
    const GllBasis b = make_gll_basis(n);
    std::vector<std::vector<Real>> rows(n + 1, std::vector<Real>(n + 1));
    for (int i = 0; i <= n; ++i)
      for (int j = 0; j <= n; ++j) rows[i][j] = b.d(i, j);
    return rows;
  });

  m.def("mesh_info", [](const py::kwargs& kw) {
    const ProblemConfig cfg = config_from_kwargs(kw);
    const HexMesh mesh = make_mesh(cfg);
    const IndexMaps maps = build_index_maps(mesh, make_gll_basis(cfg.order));
    py::dict out;
    out["num_elements"] = mesh.num_elements();
    out["num_vertices"] = mesh.num_vertices();
    out["num_nodes"] = maps.num_global;
    return out;
  });

  m.def("write_mesh", [](const std::string& path, const py::kwargs& kw) {
    write_mesh_file(make_mesh(config_from_kwargs(kw)), path);
  });

  m.def("solve_poisson", [](const py::kwargs& kw) {
    ProblemConfig cfg = config_from_kwargs(kw);
    cfg.label = "poisson";
    const PoissonResult res = solve_poisson(cfg);
    py::dict out;
    out["report"] = json_to_py(res.report.to_json());
    out["u"] = res.u;
    return out;
  });

  m.def("solve_heat", [](const py::kwargs& kw) {
    ProblemConfig cfg = config_from_kwargs(kw);
    cfg.label = "heat";
    if (cfg.bar[0] == 0 && cfg.mesh_file.empty()) cfg.bar = {8, 8, 64};
    if (!kw.contains("boundary")) cfg.boundary = BoundaryTag::neumann;
    const HeatReport rep = solve_heat(cfg);
    py::dict out;
    out["report"] = json_to_py(rep.to_json());
    out["converged"] = rep.all_converged;
    out["final_field"] = rep.final_field;
    return out;
  });

  m.def("mms_convergence", [](int min_order, int max_order, const py::kwargs& kw) {
    ProblemConfig cfg = config_from_kwargs(kw);
    if (!kw.contains("k")) cfg.k = 4;
    if (!kw.contains("tol")) cfg.pcg.rel_tolerance = Real(1e-12);
    return json_to_py(mms_convergence(cfg, min_order, max_order).to_json());
  });

  m.def("residual_flops_model",
        [](long long ne, int n) { return KernelCounters::contraction_flops_model(ne, n); });
  m.def("residual_words_model", [](long long ne, int n, const std::string& variant) {
    return KernelCounters::words_model(
        ne, n, variant == "on_the_fly" ? OperatorVariant::on_the_fly : OperatorVariant::stored);
  });
  m.def("fine_ops_model", [](long long ne, int n) { return FineCounters::ops_model(ne, n); });
}
