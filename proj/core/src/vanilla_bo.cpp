#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "topolam/optimizers_impl.hpp"

namespace topolam {

namespace {

constexpr double kLogSqrt2Pi = 0.91893853320467274178032973640562;

double normal_pdf(double z) {
  return std::exp(-0.5 * z * z - kLogSqrt2Pi);
}

double normal_cdf(double z) {
  return 0.5 * std::erfc(-z / std::sqrt(2.0));
}

}  // namespace

// log EI for minimization. For deeply negative z the direct expression
// cancels catastrophically; the asymptotic expansion
// h(z) ~ phi(z)/z^2 (1 - 3/z^2) takes over.
double log_expected_improvement(double mean, double variance, double best) {
  const double sigma = std::sqrt(std::max(variance, 1e-300));
  const double z = (best - mean) / sigma;
  double log_h;
  if (z > -6.0) {
    const double h = z * normal_cdf(z) + normal_pdf(z);
    log_h = std::log(std::max(h, 1e-300));
  } else {
    log_h = -0.5 * z * z - kLogSqrt2Pi - 2.0 * std::log(-z) +
            std::log1p(-3.0 / (z * z));
  }
  return std::log(sigma) + log_h;
}

// Vanilla BO: GP surrogate plus log-EI acquisition maximized by seeded
// multi-start pattern search over the cube.
VanillaBoOptimizer::VanillaBoOptimizer(const OptimizerSpec& spec)
    : spec_(spec), d_(spec.dimension), rng_(spec.seed) {
  const int n_init = spec.n_init > 0 ? spec.n_init : 3 * spec.dimension;
  for (Eigen::VectorXd& p : latin_hypercube(n_init, d_, rng_)) {
    init_queue_.push_back(std::move(p));
  }
  if (spec_.incumbent.has_value() && !init_queue_.empty()) {
    init_queue_.front() = spec_.incumbent->cwiseMax(0.0).cwiseMin(1.0);
  }
}

std::vector<Eigen::VectorXd> VanillaBoOptimizer::ask() {
  if (!init_queue_.empty()) {
    Eigen::VectorXd next = init_queue_.front();
    init_queue_.pop_front();
    return {std::move(next)};
  }
  try {
    const int interval = data_.size() <= 50 ? 1 : 5;
    if (!params_valid_ || tells_since_fit_ >= interval) {
      FitOptions options;
      if (params_valid_) {
        options.warm_start = &params_;
        options.restarts = 1;
        options.max_iters = 40;
      }
      params_ = fit_mle(data_, options);
      params_valid_ = true;
      tells_since_fit_ = 0;
    }
    const GpModel model(data_, params_);
    const double incumbent = best_.value;

    auto acquisition = [&](const Eigen::VectorXd& x) {
      const GpPrediction p = model.predict({x});
      return log_expected_improvement(p.mean[0], p.variance[0], incumbent);
    };

    // Multi-start pattern search: the incumbent plus seeded random starts.
    std::vector<Eigen::VectorXd> starts;
    starts.push_back(best_.point);
    for (int s = 0; s < 7; ++s) starts.push_back(rng_.uniform_vector(d_));

    Eigen::VectorXd arg_best;
    double val_best = -std::numeric_limits<double>::infinity();
    for (Eigen::VectorXd x : starts) {
      double fx = acquisition(x);
      double step = 0.25;
      int budget = 200 * d_;
      while (step > 1e-3 && budget > 0) {
        bool moved = false;
        for (int j = 0; j < d_; ++j) {
          for (const double dir : {step, -step}) {
            Eigen::VectorXd y = x;
            y[j] = std::clamp(y[j] + dir, 0.0, 1.0);
            const double fy = acquisition(y);
            --budget;
            if (fy > fx) {
              x = y;
              fx = fy;
              moved = true;
            }
          }
        }
        if (!moved) step *= 0.5;
      }
      if (fx > val_best) {
        val_best = fx;
        arg_best = x;
      }
    }
    return {arg_best};
  } catch (const std::runtime_error&) {
    params_valid_ = false;
    return {rng_.uniform_vector(d_)};
  }
}

void VanillaBoOptimizer::tell(const std::vector<Eigen::VectorXd>& points,
                              const std::vector<double>& values) {
  record(points, values);
  for (std::size_t i = 0; i < values.size(); ++i) {
    data_.add(points[i], values[i]);
    ++tells_since_fit_;
  }
}

}  // namespace topolam
