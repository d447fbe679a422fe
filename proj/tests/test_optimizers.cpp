#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <vector>

#include "topolam/optimizer.hpp"
#include "topolam/optimizers_impl.hpp"

using namespace topolam;

namespace {

double sphere(const Eigen::VectorXd& x, double center = 0.6) {
  return (x.array() - center).matrix().squaredNorm();
}

// Ask/tell loop with harness-side budget truncation.
double minimize_sphere(Optimizer& opt, int budget) {
  long long used = 0;
  while (used < budget) {
    std::vector<Eigen::VectorXd> batch = opt.ask();
    if (static_cast<long long>(batch.size()) > budget - used) {
      batch.resize(static_cast<std::size_t>(budget - used));
    }
    std::vector<double> values;
    values.reserve(batch.size());
    for (const Eigen::VectorXd& x : batch) values.push_back(sphere(x));
    opt.tell(batch, values);
    used += static_cast<long long>(batch.size());
  }
  return opt.best().value;
}

OptimizerSpec spec_of(OptimizerKind kind, int d, std::uint64_t seed) {
  OptimizerSpec s;
  s.kind = kind;
  s.dimension = d;
  s.seed = seed;
  return s;
}

}  // namespace

TEST_CASE("cmaes_config population sizes") {
  CHECK(cmaes_config(18).first == 12);
  CHECK(cmaes_config(18).second == 6);
  CHECK(cmaes_config(15).first == 12);   // 4 + floor(8.124)
  CHECK(cmaes_config(3).first == 7);     // 4 + floor(3.296)
  CHECK(cmaes_config(10).first == 10);
  CHECK_THROWS_AS(cmaes_config(0), std::invalid_argument);
}

TEST_CASE("cmaes solves the 10-d sphere to 1e-6 within 3000 evals") {
  CmaesOptimizer opt(spec_of(OptimizerKind::kCmaes, 10, 1));
  const double best = minimize_sphere(opt, 3000);
  CHECK(best < 1e-6);
}

TEST_CASE("cmaes mean stays in the cube on a constant objective") {
  CmaesOptimizer opt(spec_of(OptimizerKind::kCmaes, 6, 3));
  for (int gen = 0; gen < 40; ++gen) {
    const std::vector<Eigen::VectorXd> batch = opt.ask();
    const std::vector<double> values(batch.size(), 1.0);
    opt.tell(batch, values);
    CHECK(opt.mean().minCoeff() >= 0.0);
    CHECK(opt.mean().maxCoeff() <= 1.0);
  }
}

TEST_CASE("fixed seed gives an identical ask sequence for every kind") {
  for (const OptimizerKind kind :
       {OptimizerKind::kCmaes, OptimizerKind::kDe, OptimizerKind::kTurbo1,
        OptimizerKind::kRandom}) {
    CAPTURE(to_string(kind));
    auto a = make_optimizer(spec_of(kind, 4, 99));
    auto b = make_optimizer(spec_of(kind, 4, 99));
    long long used = 0;
    while (used < 60) {
      const std::vector<Eigen::VectorXd> batch_a = a->ask();
      const std::vector<Eigen::VectorXd> batch_b = b->ask();
      REQUIRE(batch_a.size() == batch_b.size());
      std::vector<double> values;
      for (std::size_t i = 0; i < batch_a.size(); ++i) {
        REQUIRE((batch_a[i] - batch_b[i]).cwiseAbs().maxCoeff() == 0.0);
        values.push_back(sphere(batch_a[i]));
      }
      a->tell(batch_a, values);
      b->tell(batch_b, values);
      used += static_cast<long long>(batch_a.size());
    }
  }
}

TEST_CASE("every kind respects the cube and best-so-far monotonicity") {
  for (const OptimizerKind kind :
       {OptimizerKind::kCmaes, OptimizerKind::kDe, OptimizerKind::kTurbo1,
        OptimizerKind::kVanillaBo, OptimizerKind::kRandom}) {
    CAPTURE(to_string(kind));
    auto opt = make_optimizer(spec_of(kind, 3, 5));
    double prev_best = std::numeric_limits<double>::infinity();
    long long used = 0;
    while (used < 80) {
      const std::vector<Eigen::VectorXd> batch = opt->ask();
      std::vector<double> values;
      for (const Eigen::VectorXd& x : batch) {
        REQUIRE(x.size() == 3);
        REQUIRE(x.minCoeff() >= 0.0);
        REQUIRE(x.maxCoeff() <= 1.0);
        values.push_back(sphere(x));
      }
      opt->tell(batch, values);
      REQUIRE(opt->best().value <= prev_best);
      prev_best = opt->best().value;
      used += static_cast<long long>(batch.size());
    }
  }
}

TEST_CASE("de population default is 10d") {
  DeOptimizer de18(spec_of(OptimizerKind::kDe, 18, 1));
  CHECK(de18.population_size() == 180);
  DeOptimizer de5(spec_of(OptimizerKind::kDe, 5, 1));
  CHECK(de5.population_size() == 50);
}

TEST_CASE("de improves monotonically on the sphere (elitism)") {
  OptimizerSpec spec = spec_of(OptimizerKind::kDe, 5, 7);
  DeOptimizer opt(spec);
  double prev = std::numeric_limits<double>::infinity();
  for (int gen = 0; gen < 30; ++gen) {
    const std::vector<Eigen::VectorXd> batch = opt.ask();
    std::vector<double> values;
    for (const Eigen::VectorXd& x : batch) values.push_back(sphere(x));
    opt.tell(batch, values);
    CHECK(opt.best().value <= prev);
    prev = opt.best().value;
  }
  CHECK(prev < 0.05);  // clearly better than random init
}

TEST_CASE("de with CR = 0 changes exactly one coordinate per trial") {
  OptimizerSpec spec = spec_of(OptimizerKind::kDe, 8, 11);
  spec.de_crossover = 0.0;
  spec.de_population = 12;
  DeOptimizer opt(spec);
  // Initialize.
  std::vector<Eigen::VectorXd> population = opt.ask();
  std::vector<double> values;
  for (const Eigen::VectorXd& x : population) values.push_back(sphere(x));
  opt.tell(population, values);
  // Trials differ from their parents in at most one coordinate (the forced
  // index; fewer when the mutant value clamps back onto the parent's).
  const std::vector<Eigen::VectorXd> trials = opt.ask();
  REQUIRE(trials.size() == population.size());
  for (std::size_t i = 0; i < trials.size(); ++i) {
    int changed = 0;
    for (int j = 0; j < 8; ++j) {
      if (trials[i][j] != population[i][j]) ++changed;
    }
    CHECK(changed <= 1);
  }
}

TEST_CASE("turbo trust region doubles after 3 successes and resets") {
  OptimizerSpec spec = spec_of(OptimizerKind::kTurbo1, 2, 13);
  spec.n_init = 6;
  spec.n_candidates = 50;
  TurboOptimizer opt(spec);
  // Feed the initial design.
  double value = 100.0;
  for (int k = 0; k < 6; ++k) {
    const std::vector<Eigen::VectorXd> batch = opt.ask();
    opt.tell(batch, {value});
    value -= 1.0;  // strictly improving, but init does not move counters
  }
  CHECK(opt.tr_length() == 0.8);
  CHECK(opt.success_count() == 0);

  // Two successes, then a failure: the success counter resets.
  opt.tell(opt.ask(), {50.0});
  opt.tell(opt.ask(), {40.0});
  CHECK(opt.success_count() == 2);
  opt.tell(opt.ask(), {1000.0});
  CHECK(opt.success_count() == 0);
  CHECK(opt.failure_count() == 1);
  CHECK(opt.tr_length() == 0.8);

  // Three consecutive successes double the region: 0.8 -> 1.6.
  opt.tell(opt.ask(), {30.0});
  opt.tell(opt.ask(), {20.0});
  opt.tell(opt.ask(), {10.0});
  CHECK(opt.tr_length() == 1.6);
  CHECK(opt.success_count() == 0);
}

TEST_CASE("turbo halves after max(4, d) failures and restarts at L_min") {
  OptimizerSpec spec = spec_of(OptimizerKind::kTurbo1, 2, 17);
  spec.n_init = 6;
  spec.n_candidates = 50;
  TurboOptimizer opt(spec);
  for (int k = 0; k < 6; ++k) opt.tell(opt.ask(), {1.0});
  // failure_tol = max(4, 2) = 4.
  for (int k = 0; k < 4; ++k) opt.tell(opt.ask(), {2.0});
  CHECK(opt.tr_length() == doctest::Approx(0.4));

  // Keep failing: after enough halvings the optimizer restarts fresh.
  int guard = 0;
  while (opt.restarts() == 0 && guard++ < 600) {
    opt.tell(opt.ask(), {2.0});
  }
  CHECK(opt.restarts() == 1);
  CHECK(opt.tr_length() == 0.8);
}

TEST_CASE("turbo solves the 10-d sphere to 1e-3 within 500 evals") {
  std::vector<double> results;
  for (const std::uint64_t seed : {1ULL, 2ULL, 3ULL, 4ULL, 5ULL}) {
    TurboOptimizer opt(spec_of(OptimizerKind::kTurbo1, 10, seed));
    results.push_back(minimize_sphere(opt, 500));
  }
  std::sort(results.begin(), results.end());
  CHECK(results[2] < 1e-3);  // median of 5 seeds
}

TEST_CASE("random search: coordinate means and bounds") {
  RandomSearchOptimizer opt(spec_of(OptimizerKind::kRandom, 6, 21));
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(6);
  const int draws = 10000;
  for (int k = 0; k < draws; ++k) {
    const std::vector<Eigen::VectorXd> batch = opt.ask();
    REQUIRE(batch.size() == 1);
    REQUIRE(batch[0].minCoeff() >= 0.0);
    REQUIRE(batch[0].maxCoeff() < 1.0);
    sum += batch[0];
    opt.tell(batch, {sphere(batch[0])});
  }
  for (int j = 0; j < 6; ++j) {
    CHECK(sum[j] / draws == doctest::Approx(0.5).epsilon(0.02));
  }
}

TEST_CASE("incumbent seeding") {
  Eigen::VectorXd inc = Eigen::VectorXd::Constant(3, 0.25);

  OptimizerSpec de_spec = spec_of(OptimizerKind::kDe, 3, 2);
  de_spec.de_population = 10;
  de_spec.incumbent = inc;
  DeOptimizer de(de_spec);
  const std::vector<Eigen::VectorXd> pop = de.ask();
  CHECK((pop[0] - inc).cwiseAbs().maxCoeff() == 0.0);

  OptimizerSpec tr_spec = spec_of(OptimizerKind::kTurbo1, 3, 2);
  tr_spec.incumbent = inc;
  TurboOptimizer turbo(tr_spec);
  const std::vector<Eigen::VectorXd> first = turbo.ask();
  CHECK((first[0] - inc).cwiseAbs().maxCoeff() == 0.0);

  OptimizerSpec cma_spec = spec_of(OptimizerKind::kCmaes, 3, 2);
  cma_spec.incumbent = inc;
  CmaesOptimizer cma(cma_spec);
  CHECK((cma.mean() - inc).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("log EI is finite and monotone in the mean") {
  const double best = 0.0;
  double prev = log_expected_improvement(-1.0, 0.01, best);
  for (double mean = -0.5; mean < 3.0; mean += 0.25) {
    const double v = log_expected_improvement(mean, 0.01, best);
    CHECK(std::isfinite(v));
    CHECK(v < prev);  // larger predicted mean, less improvement
    prev = v;
  }
  // Deep tail stays finite and keeps decreasing.
  const double deep1 = log_expected_improvement(10.0, 0.01, best);
  const double deep2 = log_expected_improvement(20.0, 0.01, best);
  CHECK(std::isfinite(deep1));
  CHECK(deep2 < deep1);
}
