// Copyright (c) 2026 hexsem contributors
// SPDX-License-Identifier: Apache-2.0

#include "hexsem/report.hpp"

#include <cstdio>
#include <stdexcept>

namespace hexsem {

const char* to_string(PcgStatus s)
{
  switch (s) {
    case PcgStatus::converged: return "converged";
    case PcgStatus::max_iterations: return "max_iterations";
    case PcgStatus::breakdown: return "breakdown";
  }
  return "unknown";
}

nlohmann::json counters_to_json(const KernelCounters& c)
{
  nlohmann::json j;
  j["variant"] = c.variant == OperatorVariant::stored ? "stored" : "on_the_fly";
  j["n"] = c.order;
  j["N_E"] = c.num_elements;
  j["applications"] = c.applications;
  j["word_size"] = c.word_size;
  j["includes_geometry_flops"] = c.includes_geometry_flops;
  j["flops_model"] = c.flops_model();
  j["flops_measured"] = c.flops_measured;
  j["geometry_flops_measured"] = c.geometry_flops_measured;
  j["bytes_model"] = c.bytes_model();
  j["wall_seconds"] = c.wall_seconds;
  return j;
}

nlohmann::json counters_to_json(const FineCounters& c)
{
  nlohmann::json j;
  j["n"] = c.order;
  j["N_E"] = c.num_elements;
  j["applications"] = c.applications;
  j["ops_model"] = c.total_ops_model();
  j["ops_measured"] = c.ops_measured;
  j["bytes_model"] = c.bytes_model();
  return j;
}

nlohmann::json stats_to_json(const AmgStats& s)
{
  nlohmann::json j;
  j["operator_complexity"] = s.operator_complexity;
  nlohmann::json levels = nlohmann::json::array();
  for (const auto& l : s.levels) levels.push_back({{"rows", l.rows}, {"nnz", l.nnz}});
  j["levels"] = levels;
  return j;
}

nlohmann::json SolveReport::to_json() const
{
  nlohmann::json j;
  j["label"] = label;
  j["status"] = to_string(status);
  j["iterations"] = iterations;
  j["N"] = num_global;
  j["N_E"] = num_elements;
  j["n"] = order;
  j["residual_history"] = residual_history;
  j["zr_history"] = zr_history;
  j["operator"] = counters_to_json(op_counters);
  if (has_fine) j["fine_preconditioner"] = counters_to_json(fine_counters);
  if (coarse_n > 0) {
    j["coarse"] = {{"unknowns", coarse_n}, {"solver", coarse_amg ? "amg" : "direct"}};
    if (coarse_amg) j["coarse"]["hierarchy"] = stats_to_json(coarse_stats);
  }
  if (!diagnostic.empty()) j["diagnostic"] = diagnostic;
  j["deterministic"] = deterministic;
  if (deterministic) {
    j["operator"].erase("wall_seconds"); // keep repeated runs byte-identical
  } else {
    j["timings"] = {{"setup_seconds", timings.setup_seconds},
                    {"solve_seconds", timings.solve_seconds}};
  }
  return j;
}

void write_history_csv(const SolveReport& report, const std::string& path)
{
  std::FILE* f = std::fopen(path.c_str(), "w");
  if (!f) throw std::runtime_error("cannot write history csv " + path);
  std::fprintf(f, "iteration,residual_norm,zr\n");
  for (std::size_t i = 0; i < report.residual_history.size(); ++i) {
    if (i < report.zr_history.size())
      std::fprintf(f, "%zu,%.17g,%.17g\n", i, static_cast<double>(report.residual_history[i]),
                   static_cast<double>(report.zr_history[i]));
    else
      std::fprintf(f, "%zu,%.17g,\n", i, static_cast<double>(report.residual_history[i]));
  }
  std::fclose(f);
}

nlohmann::json HeatReport::to_json() const
{
  nlohmann::json j = base.to_json();
  j["all_converged"] = all_converged;
  nlohmann::json steps_json = nlohmann::json::array();
  for (const auto& s : steps)
    steps_json.push_back({{"step", s.step},
                          {"iterations", s.iterations},
                          {"residual", s.residual},
                          {"mean_temperature", s.mean_temperature},
                          {"l2_norm", s.l2_norm},
                          {"source_integral", s.source_integral}});
  j["steps"] = steps_json;
  return j;
}

nlohmann::json MmsReport::to_json() const
{
  nlohmann::json j = nlohmann::json::array();
  for (const auto& r : rows)
    j.push_back({{"n", r.order}, {"N", r.num_global}, {"error", r.error},
                 {"iterations", r.iterations}});
  return j;
}

} // namespace hexsem
