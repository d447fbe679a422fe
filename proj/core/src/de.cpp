#include <stdexcept>

#include "topolam/optimizers_impl.hpp"

namespace topolam {

// Differential evolution, best/1/bin: mutant = best + F (x_r1 - x_r2),
// binomial crossover with one forced coordinate, greedy one-to-one
// selection. The base vector is the population best, so elitism is implicit.

DeOptimizer::DeOptimizer(const OptimizerSpec& spec)
    : d_(spec.dimension),
      np_(spec.de_population > 0 ? spec.de_population : 10 * spec.dimension),
      cr_(spec.de_crossover),
      f_(spec.de_weight),
      rng_(spec.seed) {
  if (np_ < 4) throw std::invalid_argument("de: population must be >= 4");
  if (spec.incumbent.has_value()) {
    population_.push_back(
        spec.incumbent->cwiseMax(0.0).cwiseMin(1.0));
  }
  while (static_cast<int>(population_.size()) < np_) {
    population_.push_back(rng_.uniform_vector(d_));
  }
}

std::vector<Eigen::VectorXd> DeOptimizer::ask() {
  if (!initialized_) {
    pending_ = population_;
    return pending_;
  }
  int best_idx = 0;
  for (int i = 1; i < np_; ++i) {
    if (values_[static_cast<std::size_t>(i)] <
        values_[static_cast<std::size_t>(best_idx)]) {
      best_idx = i;
    }
  }
  pending_.clear();
  pending_.reserve(static_cast<std::size_t>(np_));
  for (int i = 0; i < np_; ++i) {
    int r1 = i, r2 = i;
    while (r1 == i) r1 = static_cast<int>(rng_.uniform_index(np_));
    while (r2 == i || r2 == r1) r2 = static_cast<int>(rng_.uniform_index(np_));
    const Eigen::VectorXd mutant =
        population_[static_cast<std::size_t>(best_idx)] +
        f_ * (population_[static_cast<std::size_t>(r1)] -
              population_[static_cast<std::size_t>(r2)]);
    Eigen::VectorXd trial = population_[static_cast<std::size_t>(i)];
    const int forced = static_cast<int>(rng_.uniform_index(d_));
    for (int j = 0; j < d_; ++j) {
      if (j == forced || rng_.uniform() < cr_) trial[j] = mutant[j];
    }
    trial = trial.cwiseMax(0.0).cwiseMin(1.0);
    pending_.push_back(std::move(trial));
  }
  return pending_;
}

void DeOptimizer::tell(const std::vector<Eigen::VectorXd>& points,
                       const std::vector<double>& values) {
  record(points, values);
  if (!initialized_) {
    if (static_cast<int>(values.size()) < np_) return;  // truncated init
    values_ = values;
    initialized_ = true;
    return;
  }
  // Greedy selection for however many trials were evaluated.
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i] <= values_[i]) {
      population_[i] = points[i];
      values_[i] = values[i];
    }
  }
}

}  // namespace topolam
