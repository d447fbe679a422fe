#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "topolam/optimizers_impl.hpp"

namespace topolam {

// Trust-region Bayesian optimization in the TuRBO-1 style: a GP fit to the
// current restart's data, a hyperrectangle around the incumbent whose side
// lengths follow the ARD lengthscales, candidate points drawn uniformly
// inside it, and one joint Thompson sample picking the next evaluation. The
// region doubles after tr_success_tol consecutive improvements, halves after
// tr_failure_tol consecutive non-improvements, and the optimizer restarts
// from a fresh initial design when the region collapses below tr_length_min.

TurboOptimizer::TurboOptimizer(const OptimizerSpec& spec)
    : spec_(spec),
      d_(spec.dimension),
      n_init_(spec.n_init > 0 ? spec.n_init : 3 * spec.dimension),
      n_candidates_(spec.n_candidates > 0
                        ? spec.n_candidates
                        : std::min(40 * spec.dimension, 1000)),
      failure_tol_(spec.tr_failure_tol > 0 ? spec.tr_failure_tol
                                           : std::max(4, spec.dimension)),
      rng_(spec.seed),
      length_(spec.tr_length_init) {
  start_fresh();
  if (spec_.incumbent.has_value() && !init_queue_.empty()) {
    init_queue_.front() = spec_.incumbent->cwiseMax(0.0).cwiseMin(1.0);
  }
}

void TurboOptimizer::start_fresh() {
  init_queue_.clear();
  for (Eigen::VectorXd& p : latin_hypercube(n_init_, d_, rng_)) {
    init_queue_.push_back(std::move(p));
  }
  data_ = Dataset{};
  restart_best_ = std::numeric_limits<double>::infinity();
  restart_best_point_.resize(0);
  length_ = spec_.tr_length_init;
  successes_ = 0;
  failures_ = 0;
  params_valid_ = false;
  tells_since_fit_ = 0;
}

Dataset TurboOptimizer::modeling_window() const {
  const int cap = spec_.gp_max_points;
  if (data_.size() <= cap) return data_;
  Dataset window;
  const int start = data_.size() - cap;
  for (int i = start; i < data_.size(); ++i) {
    window.add(data_.inputs[static_cast<std::size_t>(i)],
               data_.outputs[static_cast<std::size_t>(i)]);
  }
  return window;
}

void TurboOptimizer::refit_if_due() {
  if (data_.size() < 2) return;
  const int interval = data_.size() <= 50 ? 1 : 5;
  if (params_valid_ && !force_refit_ && tells_since_fit_ < interval) return;
  const Dataset window = modeling_window();
  FitOptions options;
  if (params_valid_) {
    options.warm_start = &params_;
    options.restarts = 1;  // warm refit: previous params + median heuristic
    options.max_iters = 40;
  }
  params_ = fit_mle(window, options);
  params_valid_ = true;
  tells_since_fit_ = 0;
  force_refit_ = false;
}

std::vector<Eigen::VectorXd> TurboOptimizer::ask() {
  if (!init_queue_.empty()) {
    Eigen::VectorXd next = init_queue_.front();
    init_queue_.pop_front();
    return {std::move(next)};
  }
  try {
    refit_if_due();
    const Dataset window = modeling_window();
    const GpModel model(window, params_);

    // Per-dimension sides from the normalized ARD lengthscales.
    Eigen::VectorXd w = params_.lengthscales;
    w /= w.mean();
    const double geo = std::exp(w.array().log().sum() / d_);
    w /= geo;
    const Eigen::VectorXd center = restart_best_point_;
    Eigen::VectorXd lo(d_), hi(d_);
    for (int j = 0; j < d_; ++j) {
      const double half = 0.5 * length_ * w[j];
      lo[j] = std::max(0.0, center[j] - half);
      hi[j] = std::min(1.0, center[j] + half);
    }

    std::vector<Eigen::VectorXd> candidates;
    candidates.reserve(static_cast<std::size_t>(n_candidates_));
    for (int k = 0; k < n_candidates_; ++k) {
      Eigen::VectorXd c(d_);
      for (int j = 0; j < d_; ++j) c[j] = rng_.uniform(lo[j], hi[j]);
      candidates.push_back(std::move(c));
    }
    const int pick = model.thompson_sample(candidates, rng_);
    return {candidates[static_cast<std::size_t>(pick)]};
  } catch (const std::runtime_error&) {
    // Surrogate failure: fall back to one random point and refit next time.
    force_refit_ = true;
    params_valid_ = false;
    return {rng_.uniform_vector(d_)};
  }
}

void TurboOptimizer::tell(const std::vector<Eigen::VectorXd>& points,
                          const std::vector<double>& values) {
  record(points, values);
  for (std::size_t i = 0; i < values.size(); ++i) {
    const bool in_init = data_.size() < n_init_;
    const bool improved =
        values[i] < restart_best_ - 1e-3 * std::abs(restart_best_);
    if (values[i] < restart_best_) {
      restart_best_ = values[i];
      restart_best_point_ = points[i];
    }
    data_.add(points[i], values[i]);
    ++tells_since_fit_;
    if (in_init) continue;  // counters only move once the TR is active

    if (improved) {
      ++successes_;
      failures_ = 0;
    } else {
      ++failures_;
      successes_ = 0;
    }
    if (successes_ >= spec_.tr_success_tol) {
      length_ = std::min(2.0 * length_, spec_.tr_length_max);
      successes_ = 0;
    } else if (failures_ >= failure_tol_) {
      length_ /= 2.0;
      failures_ = 0;
    }
    if (length_ < spec_.tr_length_min) {
      ++restarts_;
      start_fresh();
      break;  // remaining values (if any) belong to the stale region
    }
  }
}

}  // namespace topolam
