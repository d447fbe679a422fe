#pragma once

#include <cstdint>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "topolam/rng.hpp"

namespace topolam {

// Derivative-free optimizers on the unit cube behind a batch ask/tell
// interface. Batch algorithms (CMA-ES, DE) ask a full population per
// generation; the point-based ones ask one point at a time. The harness owns
// the budget: a final batch may be told back truncated, in which case the
// optimizer records the results without a state update.

enum class OptimizerKind { kCmaes, kDe, kTurbo1, kVanillaBo, kRandom };

OptimizerKind optimizer_kind_from_string(const std::string& name);
std::string to_string(OptimizerKind kind);

struct OptimizerSpec {
  OptimizerKind kind = OptimizerKind::kRandom;
  int dimension = 0;
  std::uint64_t seed = 0;

  // CMA-ES: offspring count 4 + floor(3 ln d) unless overridden.
  int cmaes_lambda = 0;
  double cmaes_sigma0 = 0.3;

  // DE (best/1/bin): population 10 d unless overridden.
  int de_population = 0;
  double de_crossover = 0.7;  // CR
  double de_weight = 0.8;     // F

  // GP-based optimizers.
  int n_init = 0;        // 0 -> 3 d
  int n_candidates = 0;  // 0 -> min(40 d, 1000)
  int gp_max_points = 400;

  // TuRBO-1 trust region.
  double tr_length_init = 0.8;
  double tr_length_min = 0.0078125;  // 0.5^7
  double tr_length_max = 1.6;
  int tr_success_tol = 3;
  int tr_failure_tol = 0;  // 0 -> max(4, d)

  // Optional incumbent (unit-cube coordinates) seeded into the initial
  // design (GP kinds), initial population (DE), or initial mean (CMA-ES).
  std::optional<Eigen::VectorXd> incumbent;
};

struct BestSoFar {
  Eigen::VectorXd point;
  double value = std::numeric_limits<double>::infinity();
};

class Optimizer {
 public:
  virtual ~Optimizer() = default;

  // Next batch of points to evaluate, each inside [0,1]^d.
  virtual std::vector<Eigen::VectorXd> ask() = 0;

  // Results for a prefix of the last ask, in ask order.
  virtual void tell(const std::vector<Eigen::VectorXd>& points,
                    const std::vector<double>& values) = 0;

  const BestSoFar& best() const { return best_; }
  long long evaluations() const { return evaluations_; }

 protected:
  void record(const std::vector<Eigen::VectorXd>& points,
              const std::vector<double>& values) {
    for (std::size_t i = 0; i < values.size(); ++i) {
      ++evaluations_;
      if (values[i] < best_.value) {
        best_.value = values[i];
        best_.point = points[i];
      }
    }
  }

  BestSoFar best_;
  long long evaluations_ = 0;
};

// Offspring and parent population sizes, lambda = 4 + floor(3 ln d),
// mu = floor(lambda / 2).
std::pair<int, int> cmaes_config(int dimension);

std::unique_ptr<Optimizer> make_optimizer(const OptimizerSpec& spec);

}  // namespace topolam
