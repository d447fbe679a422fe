#include "topolam/campaign.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

namespace topolam {

namespace {

using nlohmann::json;

std::string format_g17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// Distinct deterministic stream for the stage-2 optimizer.
std::uint64_t stage2_seed(std::uint64_t seed) {
  return seed + 0x9e3779b97f4a7c15ULL;
}

OptimizerSpec make_spec(const RunConfig& cfg, OptimizerKind kind, int d,
                        std::uint64_t seed) {
  OptimizerSpec spec;
  spec.kind = kind;
  spec.dimension = d;
  spec.seed = seed;
  spec.cmaes_lambda = cfg.cmaes_lambda;
  spec.de_population = cfg.de_population;
  spec.n_init = cfg.n_init;
  spec.n_candidates = cfg.n_candidates;
  return spec;
}

}  // namespace

StrategyMode strategy_from_string(const std::string& name) {
  if (name == "concurrent") return StrategyMode::kConcurrent;
  if (name == "sequential") return StrategyMode::kSequential;
  throw std::invalid_argument("unknown strategy mode: " + name);
}

std::string to_string(StrategyMode mode) {
  return mode == StrategyMode::kConcurrent ? "concurrent" : "sequential";
}

std::pair<int, int> budget_split(int budget, int n1, int n2) {
  if (budget < 2 || n1 < 1 || n2 < 1) {
    throw std::invalid_argument("budget_split: need budget >= 2, n1,n2 >= 1");
  }
  const double exact = static_cast<double>(budget) * n1 / (n1 + n2);
  const double floor = std::floor(exact);
  const double frac = exact - floor;
  int b1;
  if (frac > 0.5) {
    b1 = static_cast<int>(floor) + 1;
  } else if (frac < 0.5) {
    b1 = static_cast<int>(floor);
  } else {  // round half to even
    b1 = static_cast<int>(floor);
    if (b1 % 2 != 0) ++b1;
  }
  b1 = std::max(1, std::min(b1, budget - 1));
  return {b1, budget - b1};
}

PenaltyConfig RunConfig::penalty_config() const {
  PenaltyConfig p;
  p.gamma1 = gamma1;
  p.gamma2 = gamma2;
  p.volume_basis = volume_basis;
  if (v_max > 0.0) {
    p.v_max = v_max;
  } else {
    p.v_max = volume_basis == VolumeBasis::kElementCount
                  ? domain().element_count() / 2.0
                  : 0.5;
  }
  return p;
}

Bounds RunConfig::bounds() const {
  const Bounds def = Bounds::benchmark();
  return Bounds(bounds_lower.value_or(def.lower()),
                bounds_upper.value_or(def.upper()));
}

namespace {

struct BudgetedLoop {
  Evaluator& evaluator;
  const RunOptions& options;
  Trace& trace;
  int budget;
  double best = std::numeric_limits<double>::infinity();

  int remaining() const {
    return budget - static_cast<int>(trace.rows.size());
  }

  // Evaluate one physical design vector and append a row.
  double step(const Eigen::VectorXd& x_physical, int stage, bool lp_only,
              const Eigen::VectorXd& x_lp) {
    const auto t0 = std::chrono::steady_clock::now();
    const EvaluationRecord rec = lp_only
                                     ? evaluator.evaluate_lp_only(x_lp)
                                     : evaluator.evaluate(x_physical);
    TraceRow row;
    row.eval = static_cast<int>(trace.rows.size());
    row.stage = stage;
    row.x = x_physical;
    row.compliance = rec.compliance;
    row.volume_count = rec.volume_count;
    row.psi = rec.connectivity.psi_total;
    row.objective = rec.modified_objective;
    best = std::min(best, rec.modified_objective);
    row.best = best;
    if (options.record_timing) {
      row.seconds = std::chrono::duration<double>(
                        std::chrono::steady_clock::now() - t0)
                        .count();
    }
    trace.rows.push_back(row);
    if (options.on_row) options.on_row(trace.rows.back());
    return rec.modified_objective;
  }
};

}  // namespace

Trace run(const RunConfig& cfg, const RunOptions& options) {
  if (cfg.budget < 1) throw std::invalid_argument("run: budget >= 1");
  const Domain domain = cfg.domain();
  Evaluator evaluator(domain, benchmark_material(), cfg.penalty_config(),
                      cfg.bounds());
  const Bounds& bounds = evaluator.bounds();

  Trace trace;
  trace.algorithm = to_string(cfg.algorithm);
  trace.mode = to_string(cfg.mode);
  trace.seed = cfg.seed;
  BudgetedLoop loop{evaluator, options, trace, cfg.budget};

  if (cfg.mode == StrategyMode::kConcurrent) {
    auto optimizer =
        make_optimizer(make_spec(cfg, cfg.algorithm, kDesignDimension,
                                 cfg.seed));
    while (loop.remaining() > 0) {
      std::vector<Eigen::VectorXd> batch = optimizer->ask();
      if (static_cast<int>(batch.size()) > loop.remaining()) {
        batch.resize(static_cast<std::size_t>(loop.remaining()));
      }
      std::vector<double> values;
      values.reserve(batch.size());
      for (const Eigen::VectorXd& u : batch) {
        values.push_back(loop.step(bounds.denormalize(u), 1, false, {}));
      }
      optimizer->tell(batch, values);
    }
    return trace;
  }

  // Sequential: stage 1 on the 15 topology variables with the lamination
  // block frozen quasi-isotropic.
  const auto [b1, b2] = budget_split(cfg.budget, kMmcVariables, kLpVariables);
  Eigen::VectorXd frozen_lp(kLpVariables);
  frozen_lp << 0.5, 0.0, 0.0;

  const Eigen::VectorXd lo_mmc = bounds.lower().head(kMmcVariables);
  const Eigen::VectorXd hi_mmc = bounds.upper().head(kMmcVariables);
  const Eigen::VectorXd lo_lp = bounds.lower().tail(kLpVariables);
  const Eigen::VectorXd hi_lp = bounds.upper().tail(kLpVariables);

  Eigen::VectorXd stage1_best_x;
  double stage1_best = std::numeric_limits<double>::infinity();
  {
    auto optimizer =
        make_optimizer(make_spec(cfg, cfg.algorithm, kMmcVariables,
                                 cfg.seed));
    int stage1_left = b1;
    while (stage1_left > 0) {
      std::vector<Eigen::VectorXd> batch = optimizer->ask();
      if (static_cast<int>(batch.size()) > stage1_left) {
        batch.resize(static_cast<std::size_t>(stage1_left));
      }
      std::vector<double> values;
      values.reserve(batch.size());
      for (const Eigen::VectorXd& u : batch) {
        Eigen::VectorXd x(kDesignDimension);
        x.head(kMmcVariables) =
            lo_mmc + u.cwiseProduct(hi_mmc - lo_mmc);
        x.tail(kLpVariables) = frozen_lp;
        const double value = loop.step(x, 1, false, {});
        values.push_back(value);
        if (value < stage1_best) {
          stage1_best = value;
          stage1_best_x = x;
        }
      }
      optimizer->tell(batch, values);
      stage1_left -= static_cast<int>(batch.size());
    }
  }

  // Stage 2: fresh optimizer on the 3 lamination variables, frozen topology,
  // seeded with the quasi-isotropic incumbent.
  evaluator.freeze_topology(stage1_best_x);
  OptimizerSpec spec2 =
      make_spec(cfg, cfg.algorithm, kLpVariables, stage2_seed(cfg.seed));
  spec2.incumbent =
      (frozen_lp - lo_lp).cwiseQuotient(hi_lp - lo_lp).eval();
  auto optimizer = make_optimizer(spec2);
  int stage2_left = b2;
  while (stage2_left > 0) {
    std::vector<Eigen::VectorXd> batch = optimizer->ask();
    if (static_cast<int>(batch.size()) > stage2_left) {
      batch.resize(static_cast<std::size_t>(stage2_left));
    }
    std::vector<double> values;
    values.reserve(batch.size());
    for (const Eigen::VectorXd& u : batch) {
      const Eigen::VectorXd x_lp = lo_lp + u.cwiseProduct(hi_lp - lo_lp);
      const Eigen::VectorXd x_full = evaluator.with_frozen_topology(x_lp);
      values.push_back(loop.step(x_full, 2, true, x_lp));
    }
    optimizer->tell(batch, values);
    stage2_left -= static_cast<int>(batch.size());
  }
  return trace;
}

void write_trace_header(std::ostream& out) {
  out << "eval,stage";
  for (int i = 0; i < kDesignDimension; ++i) out << ",x" << i;
  out << ",compliance,volume_count,psi,objective,best,seconds\n";
}

void write_trace_row(const TraceRow& row, std::ostream& out) {
  out << row.eval << ',' << row.stage;
  for (Eigen::Index i = 0; i < row.x.size(); ++i) {
    out << ',' << format_g17(row.x[i]);
  }
  out << ',';
  if (row.compliance.has_value()) out << format_g17(*row.compliance);
  out << ',' << row.volume_count << ',' << format_g17(row.psi) << ','
      << format_g17(row.objective) << ',' << format_g17(row.best) << ','
      << format_g17(row.seconds) << '\n';
}

void write_trace_csv(const Trace& trace, std::ostream& out) {
  write_trace_header(out);
  for (const TraceRow& row : trace.rows) write_trace_row(row, out);
}

Trace read_trace_csv(std::istream& in) {
  Trace trace;
  std::string line;
  if (!std::getline(in, line)) {
    throw std::runtime_error("trace: missing header");
  }
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::string field;
    std::istringstream ls(line);
    while (std::getline(ls, field, ',')) fields.push_back(field);
    // getline drops a trailing empty field; the row always ends in seconds,
    // so fields.size() must be 2 + 18 + 6.
    if (fields.size() != static_cast<std::size_t>(kDesignDimension) + 8) {
      throw std::runtime_error("trace: malformed row: " + line);
    }
    TraceRow row;
    row.eval = std::stoi(fields[0]);
    row.stage = std::stoi(fields[1]);
    row.x.resize(kDesignDimension);
    for (int i = 0; i < kDesignDimension; ++i) {
      row.x[i] = std::stod(fields[static_cast<std::size_t>(2 + i)]);
    }
    const std::size_t base = 2 + kDesignDimension;
    if (!fields[base].empty()) row.compliance = std::stod(fields[base]);
    row.volume_count = std::stoi(fields[base + 1]);
    row.psi = std::stod(fields[base + 2]);
    row.objective = std::stod(fields[base + 3]);
    row.best = std::stod(fields[base + 4]);
    row.seconds = std::stod(fields[base + 5]);
    trace.rows.push_back(std::move(row));
  }
  return trace;
}

std::string trace_file_name(const RunConfig& cfg) {
  std::ostringstream name;
  name << to_string(cfg.algorithm) << '_' << to_string(cfg.mode) << "_seed"
       << cfg.seed << ".csv";
  return name.str();
}

CampaignSummary aggregate(const std::vector<Trace>& traces) {
  std::map<std::pair<std::string, std::string>, std::vector<const Trace*>>
      cells;
  for (const Trace& t : traces) {
    cells[{t.algorithm, t.mode}].push_back(&t);
  }

  CampaignSummary summary;
  for (const auto& [key, cell] : cells) {
    CellSummary cs;
    cs.algorithm = key.first;
    cs.mode = key.second;
    cs.runs = static_cast<int>(cell.size());
    std::vector<double> finals;
    std::size_t max_len = 0;
    for (const Trace* t : cell) {
      if (t->rows.empty()) continue;
      finals.push_back(t->rows.back().best);
      max_len = std::max(max_len, t->rows.size());
    }
    if (finals.empty()) continue;
    cs.final_objective = five_number_summary(finals);
    cs.mean_best_curve.assign(max_len, 0.0);
    for (std::size_t k = 0; k < max_len; ++k) {
      double sum = 0.0;
      int count = 0;
      for (const Trace* t : cell) {
        if (k < t->rows.size()) {
          sum += t->rows[k].best;
          ++count;
        }
      }
      cs.mean_best_curve[k] = sum / count;
    }
    summary.cells.push_back(std::move(cs));
  }

  // Paired concurrent-vs-sequential comparison per algorithm (matched by
  // seed).
  std::map<std::string,
           std::map<std::string, std::map<std::uint64_t, double>>>
      by_algo;
  for (const Trace& t : traces) {
    if (!t.rows.empty()) {
      by_algo[t.algorithm][t.mode][t.seed] = t.rows.back().best;
    }
  }
  for (const auto& [algo, modes] : by_algo) {
    const auto ci = modes.find("concurrent");
    const auto si = modes.find("sequential");
    if (ci == modes.end() || si == modes.end()) continue;
    std::vector<double> conc, seq;
    for (const auto& [seed, value] : ci->second) {
      const auto match = si->second.find(seed);
      if (match != si->second.end()) {
        conc.push_back(value);
        seq.push_back(match->second);
      }
    }
    if (conc.size() < 5) continue;  // too few pairs for the test
    StrategyComparison cmp;
    cmp.algorithm = algo;
    cmp.concurrent_median = median(conc);
    cmp.sequential_median = median(seq);
    try {
      const WilcoxonResult w = wilcoxon_signed_rank(conc, seq);
      cmp.p_value = w.p_value;
      cmp.statistic = w.statistic;
    } catch (const std::invalid_argument&) {
      cmp.p_value = 1.0;  // degenerate: identical samples
      cmp.statistic = 0.0;
    }
    summary.comparisons.push_back(std::move(cmp));
  }
  return summary;
}

CampaignSummary run_campaign(const CampaignConfig& cfg, int workers,
                             const RunOptions& options) {
  if (cfg.algorithms.empty() || cfg.modes.empty() || cfg.seeds.empty()) {
    throw std::invalid_argument("run_campaign: empty cell axis");
  }
  if (workers <= 0) {
    workers = 1;
    if (const char* env = std::getenv("TOPOLAM_WORKERS")) {
      workers = std::max(1, std::atoi(env));
    }
  }

  std::vector<RunConfig> runs;
  for (const OptimizerKind algo : cfg.algorithms) {
    for (const StrategyMode mode : cfg.modes) {
      for (const std::uint64_t seed : cfg.seeds) {
        RunConfig rc = cfg.base;
        rc.algorithm = algo;
        rc.mode = mode;
        rc.seed = seed;
        runs.push_back(std::move(rc));
      }
    }
  }

  const bool to_disk = !cfg.base.output_dir.empty();
  if (to_disk) {
    std::filesystem::create_directories(cfg.base.output_dir);
  }

  std::vector<Trace> traces(runs.size());
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::string failure_message;
  std::mutex failure_mutex;

  auto worker = [&]() {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= runs.size() || failed.load()) break;
      const RunConfig& rc = runs[i];
      try {
        if (to_disk) {
          const std::filesystem::path path =
              std::filesystem::path(rc.output_dir) / trace_file_name(rc);
          std::ofstream out(path);
          if (!out) {
            throw std::runtime_error("cannot open " + path.string());
          }
          write_trace_header(out);
          RunOptions streamed = options;
          streamed.on_row = [&out](const TraceRow& row) {
            write_trace_row(row, out);
            out.flush();  // partial traces survive a fatal solver error
          };
          traces[i] = run(rc, streamed);
        } else {
          traces[i] = run(rc, options);
        }
      } catch (const std::exception& e) {
        const std::lock_guard<std::mutex> lock(failure_mutex);
        failed.store(true);
        failure_message = e.what();
      }
    }
  };

  std::vector<std::thread> pool;
  const int thread_count = std::min<std::size_t>(workers, runs.size());
  pool.reserve(static_cast<std::size_t>(thread_count));
  for (int t = 0; t < thread_count; ++t) pool.emplace_back(worker);
  for (std::thread& t : pool) t.join();
  if (failed.load()) {
    throw std::runtime_error("campaign run failed: " + failure_message);
  }

  const CampaignSummary summary = aggregate(traces);
  if (to_disk) {
    std::ofstream out(std::filesystem::path(cfg.base.output_dir) /
                      "summary.json");
    out << summary_to_json(summary) << '\n';
  }
  return summary;
}

std::string summary_to_json(const CampaignSummary& summary) {
  json j;
  j["cells"] = json::array();
  for (const CellSummary& c : summary.cells) {
    json cell;
    cell["algorithm"] = c.algorithm;
    cell["mode"] = c.mode;
    cell["runs"] = c.runs;
    cell["final"] = {{"min", c.final_objective.min},
                     {"q1", c.final_objective.q1},
                     {"median", c.final_objective.median},
                     {"q3", c.final_objective.q3},
                     {"max", c.final_objective.max}};
    j["cells"].push_back(std::move(cell));
  }
  j["comparisons"] = json::array();
  for (const StrategyComparison& c : summary.comparisons) {
    j["comparisons"].push_back({{"algorithm", c.algorithm},
                                {"concurrent_median", c.concurrent_median},
                                {"sequential_median", c.sequential_median},
                                {"wilcoxon_statistic", c.statistic},
                                {"p_value", c.p_value}});
  }
  return j.dump(2);
}

namespace {

void apply_common_json(const json& j, RunConfig& cfg) {
  if (j.contains("mode")) cfg.mode = strategy_from_string(j.at("mode"));
  if (j.contains("algorithm")) {
    cfg.algorithm = optimizer_kind_from_string(j.at("algorithm"));
  }
  if (j.contains("budget")) cfg.budget = j.at("budget").get<int>();
  if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("mesh")) {
    cfg.nx = j.at("mesh").value("nx", cfg.nx);
    cfg.ny = j.at("mesh").value("ny", cfg.ny);
  }
  if (j.contains("penalties")) {
    const json& p = j.at("penalties");
    cfg.gamma1 = p.value("gamma1", cfg.gamma1);
    cfg.gamma2 = p.value("gamma2", cfg.gamma2);
    cfg.v_max = p.value("v_max", cfg.v_max);
    if (p.contains("volume_basis")) {
      const std::string basis = p.at("volume_basis");
      if (basis == "count") {
        cfg.volume_basis = VolumeBasis::kElementCount;
      } else if (basis == "fraction") {
        cfg.volume_basis = VolumeBasis::kFraction;
      } else {
        throw std::invalid_argument("volume_basis must be count or fraction");
      }
    }
  }
  if (j.contains("bounds")) {
    const json& b = j.at("bounds");
    auto parse_vec = [](const json& arr) {
      Eigen::VectorXd v(static_cast<Eigen::Index>(arr.size()));
      for (std::size_t i = 0; i < arr.size(); ++i) {
        v[static_cast<Eigen::Index>(i)] = arr[i].get<double>();
      }
      return v;
    };
    if (b.contains("lower")) cfg.bounds_lower = parse_vec(b.at("lower"));
    if (b.contains("upper")) cfg.bounds_upper = parse_vec(b.at("upper"));
  }
  if (j.contains("output_dir")) cfg.output_dir = j.at("output_dir");
  if (j.contains("optimizer")) {
    const json& o = j.at("optimizer");
    cfg.cmaes_lambda = o.value("cmaes_lambda", cfg.cmaes_lambda);
    cfg.de_population = o.value("de_population", cfg.de_population);
    cfg.n_init = o.value("n_init", cfg.n_init);
    cfg.n_candidates = o.value("n_candidates", cfg.n_candidates);
  }
}

}  // namespace

RunConfig run_config_from_json(const std::string& text) {
  const json j = json::parse(text);
  RunConfig cfg;
  apply_common_json(j, cfg);
  return cfg;
}

CampaignConfig campaign_config_from_json(const std::string& text) {
  const json j = json::parse(text);
  CampaignConfig cfg;
  apply_common_json(j, cfg.base);
  if (!j.contains("algorithms") || !j.contains("modes") ||
      !j.contains("seeds")) {
    throw std::invalid_argument(
        "campaign config needs algorithms, modes, and seeds arrays");
  }
  for (const auto& a : j.at("algorithms")) {
    cfg.algorithms.push_back(optimizer_kind_from_string(a));
  }
  for (const auto& m : j.at("modes")) {
    cfg.modes.push_back(strategy_from_string(m));
  }
  for (const auto& s : j.at("seeds")) {
    cfg.seeds.push_back(s.get<std::uint64_t>());
  }
  return cfg;
}

}  // namespace topolam
