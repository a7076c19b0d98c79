// Copyright (c) 2026 hexsem contributors
// SPDX-License-Identifier: Apache-2.0

#ifndef HEXSEM_REPORT_HPP
#define HEXSEM_REPORT_HPP

#include <string>

#include "json.hpp"

#include "hexsem/amg.hpp"
#include "hexsem/fine.hpp"
#include "hexsem/krylov.hpp"
#include "hexsem/operator.hpp"

namespace hexsem {

struct SolveTimings {
  double setup_seconds = 0;
  double solve_seconds = 0;
};

/// Everything a solve run reports: iteration history, counters, timings.
/// In deterministic mode the JSON omits wall-clock fields so that repeated
/// runs serialize bitwise identically.
struct SolveReport {
  std::string label;
  PcgStatus status = PcgStatus::converged;
  int iterations = 0;
  std::vector<Real> residual_history;
  std::vector<Real> zr_history;
  long long num_global = 0;
  long long num_elements = 0;
  int order = 0;
  KernelCounters op_counters;
  FineCounters fine_counters;
  bool has_fine = false;
  bool coarse_amg = false;
  gid coarse_n = 0;
  AmgStats coarse_stats;
  bool deterministic = true;
  SolveTimings timings;
  std::string diagnostic;

  nlohmann::json to_json() const;
};

const char* to_string(PcgStatus s);

nlohmann::json counters_to_json(const KernelCounters& c);
nlohmann::json counters_to_json(const FineCounters& c);
nlohmann::json stats_to_json(const AmgStats& s);

// iteration, residual_norm, zr
void write_history_csv(const SolveReport& report, const std::string& path);

struct HeatStep {
  int step = 0;
  int iterations = 0;
  Real residual = 0;
  double mean_temperature = 0;
  double l2_norm = 0;         // mass-weighted L2 norm of the field
  double source_integral = 0; // sum_N m_N q_N for this step
};

struct HeatReport {
  SolveReport base;
  std::vector<HeatStep> steps;
  Vector final_field;
  bool all_converged = true;
  nlohmann::json to_json() const;
};

struct MmsRow {
  int order = 0;
  long long num_global = 0;
  double error = 0;
  int iterations = 0;
};

struct MmsReport {
  std::vector<MmsRow> rows;
  nlohmann::json to_json() const;
};

} // namespace hexsem

#endif
