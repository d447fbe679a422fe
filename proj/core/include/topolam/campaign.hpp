#pragma once

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "topolam/evaluation.hpp"
#include "topolam/optimizer.hpp"
#include "topolam/stats.hpp"

namespace topolam {

// One optimization run = one optimizer, one strategy, one seed, a fixed
// evaluation budget, and a trace row per objective evaluation. The
// sequential strategy splits the budget proportionally to the variable-block
// dimensions, optimizes the 15 topology variables with the lamination block
// frozen quasi-isotropic, then optimizes the 3 lamination variables on the
// frozen best topology.

enum class StrategyMode { kConcurrent, kSequential };

StrategyMode strategy_from_string(const std::string& name);
std::string to_string(StrategyMode mode);

// B1 = round-half-to-even(B n1/(n1+n2)), B2 = B - B1.
std::pair<int, int> budget_split(int budget, int n1, int n2);

struct RunConfig {
  OptimizerKind algorithm = OptimizerKind::kRandom;
  StrategyMode mode = StrategyMode::kConcurrent;
  int budget = 1000;
  std::uint64_t seed = 0;
  int nx = 100;
  int ny = 50;
  double gamma1 = 0.02;
  double gamma2 = 200.0;
  VolumeBasis volume_basis = VolumeBasis::kElementCount;
  double v_max = 0.0;  // 0: half the mesh (count) or 0.5 (fraction)
  std::optional<Eigen::VectorXd> bounds_lower;
  std::optional<Eigen::VectorXd> bounds_upper;
  std::string output_dir;

  // Optimizer overrides; 0 keeps the kind's default.
  int cmaes_lambda = 0;
  int de_population = 0;
  int n_init = 0;
  int n_candidates = 0;

  Domain domain() const { return Domain{100.0, 50.0, nx, ny}; }
  PenaltyConfig penalty_config() const;
  Bounds bounds() const;
};

struct TraceRow {
  int eval = 0;
  int stage = 1;
  Eigen::VectorXd x;  // physical coordinates, 18 entries
  std::optional<double> compliance;
  int volume_count = 0;
  double psi = 0.0;
  double objective = 0.0;
  double best = 0.0;
  double seconds = 0.0;
};

struct Trace {
  // Cell identity (not serialized into the CSV; encoded in the file name).
  std::string algorithm;
  std::string mode;
  std::uint64_t seed = 0;
  std::vector<TraceRow> rows;
};

struct RunOptions {
  // Off by default: wall-clock timing is the one nondeterministic field, and
  // traces must be byte-identical across reruns of the same config.
  bool record_timing = false;
  // Called after each row is appended (streaming trace writer).
  std::function<void(const TraceRow&)> on_row;
};

Trace run(const RunConfig& cfg, const RunOptions& options = {});

// CSV with header eval,stage,x0..x17,compliance,volume_count,psi,objective,
// best,seconds; floats at 17 significant digits; empty compliance field when
// the FE solve was skipped.
void write_trace_csv(const Trace& trace, std::ostream& out);
void write_trace_header(std::ostream& out);
void write_trace_row(const TraceRow& row, std::ostream& out);
Trace read_trace_csv(std::istream& in);

// File name a campaign uses for one run's trace.
std::string trace_file_name(const RunConfig& cfg);

struct CampaignConfig {
  std::vector<OptimizerKind> algorithms;
  std::vector<StrategyMode> modes;
  std::vector<std::uint64_t> seeds;
  RunConfig base;  // budget, mesh, penalties, bounds, output_dir, overrides
};

struct CellSummary {
  std::string algorithm;
  std::string mode;
  int runs = 0;
  FiveNumberSummary final_objective{};
  std::vector<double> mean_best_curve;  // per-evaluation mean best-so-far
};

struct StrategyComparison {
  std::string algorithm;
  double concurrent_median = 0.0;
  double sequential_median = 0.0;
  double p_value = 1.0;
  double statistic = 0.0;
};

struct CampaignSummary {
  std::vector<CellSummary> cells;
  std::vector<StrategyComparison> comparisons;
};

CampaignSummary aggregate(const std::vector<Trace>& traces);

// Runs every (algorithm x mode x seed) cell, writing one trace CSV per run
// into output_dir plus summary.json. workers <= 0 reads the TOPOLAM_WORKERS
// environment variable (default 1). Returns the summary.
CampaignSummary run_campaign(const CampaignConfig& cfg, int workers = 0,
                             const RunOptions& options = {});

std::string summary_to_json(const CampaignSummary& summary);

// Config file parsing (JSON).
RunConfig run_config_from_json(const std::string& text);
CampaignConfig campaign_config_from_json(const std::string& text);

}  // namespace topolam
