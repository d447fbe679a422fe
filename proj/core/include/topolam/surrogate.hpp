#pragma once

#include <memory>
#include <vector>

#include <Eigen/Core>

#include "topolam/rng.hpp"

namespace topolam {

// Gaussian-process regression on the unit cube with a Matern-5/2 ARD kernel.
// Outputs are standardized to zero mean / unit variance internally; the
// noise term is a conditioning floor, not a noise model (the objective is
// deterministic).

struct Dataset {
  std::vector<Eigen::VectorXd> inputs;
  std::vector<double> outputs;

  int size() const { return static_cast<int>(inputs.size()); }
  int dimension() const {
    return inputs.empty() ? 0 : static_cast<int>(inputs.front().size());
  }
  void add(const Eigen::VectorXd& x, double y) {
    inputs.push_back(x);
    outputs.push_back(y);
  }
};

struct KernelParams {
  Eigen::VectorXd lengthscales;  // ARD, bounded to [1e-3, 1e3]
  double signal_variance = 1.0;
  double noise_variance = 1e-6;  // floored at 1e-8
};

inline constexpr double kNoiseFloor = 1e-8;
inline constexpr double kLengthscaleMin = 1e-3;
inline constexpr double kLengthscaleMax = 1e3;

// k(x,x') = s^2 (1 + sqrt5 r + 5 r^2/3) exp(-sqrt5 r),
// r = sqrt(sum_i ((x_i - x'_i)/l_i)^2).
double matern52(const KernelParams& params, const Eigen::VectorXd& x,
                const Eigen::VectorXd& y);

struct FitOptions {
  int restarts = 4;    // deterministic multi-start
  int max_iters = 80;  // Rprop iterations per start
  const KernelParams* warm_start = nullptr;
};

// Maximum-likelihood hyperparameters on standardized outputs. The returned
// likelihood is at least the likelihood at every start point; if no start
// improves under ascent, the median-distance heuristic start is returned.
KernelParams fit_mle(const Dataset& data, const FitOptions& options = {});

// Lengthscale heuristic: per-dimension median absolute pairwise distance.
KernelParams median_heuristic(const Dataset& data);

// Log marginal likelihood of standardized outputs under params (diagnostic
// and test hook).
double log_marginal_likelihood(const Dataset& data, const KernelParams& p);

struct GpPrediction {
  Eigen::VectorXd mean;
  Eigen::VectorXd variance;  // >= noise floor (in output units^2)
};

// Factorized posterior reused across predictions and Thompson draws.
class GpModel {
 public:
  GpModel(const Dataset& data, KernelParams params);
  ~GpModel();
  GpModel(GpModel&&) noexcept;
  GpModel& operator=(GpModel&&) noexcept;

  GpPrediction predict(const std::vector<Eigen::VectorXd>& queries) const;

  // One joint posterior sample over the candidate set (Cholesky of the
  // posterior covariance, standard normal vector from rng); returns the
  // argmin index. Throws std::runtime_error if the covariance cannot be
  // factorized even after jitter escalation.
  int thompson_sample(const std::vector<Eigen::VectorXd>& candidates,
                      Rng& rng) const;

  const KernelParams& params() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// Spec-level convenience wrappers (build a model per call).
GpPrediction predict(const KernelParams& params, const Dataset& data,
                     const std::vector<Eigen::VectorXd>& queries);
int thompson_sample(const KernelParams& params, const Dataset& data,
                    const std::vector<Eigen::VectorXd>& candidates, Rng& rng);

}  // namespace topolam
