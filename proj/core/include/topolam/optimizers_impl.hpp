#pragma once

#include <deque>
#include <vector>

#include <Eigen/Core>

#include "topolam/optimizer.hpp"
#include "topolam/surrogate.hpp"

namespace topolam {

// Concrete optimizer states. These live in a separate header so the campaign
// harness and tests can reach algorithm internals (trust-region length,
// population) without widening the Optimizer interface.

class RandomSearchOptimizer final : public Optimizer {
 public:
  explicit RandomSearchOptimizer(const OptimizerSpec& spec);
  std::vector<Eigen::VectorXd> ask() override;
  void tell(const std::vector<Eigen::VectorXd>& points,
            const std::vector<double>& values) override;

 private:
  int d_;
  Rng rng_;
};

class CmaesOptimizer final : public Optimizer {
 public:
  explicit CmaesOptimizer(const OptimizerSpec& spec);
  std::vector<Eigen::VectorXd> ask() override;
  void tell(const std::vector<Eigen::VectorXd>& points,
            const std::vector<double>& values) override;

  double sigma() const { return sigma_; }
  const Eigen::VectorXd& mean() const { return mean_; }
  int lambda() const { return lambda_; }

 private:
  void decompose();

  int d_;
  int lambda_;
  int mu_;
  Eigen::VectorXd weights_;  // all lambda weights, negatives included
  double mu_eff_;
  double c_sigma_, d_sigma_, c_c_, c1_, c_mu_;
  double chi_n_;  // E||N(0,I)||

  Rng rng_;
  Eigen::VectorXd mean_;
  double sigma_;
  Eigen::MatrixXd cov_;
  Eigen::VectorXd path_sigma_;
  Eigen::VectorXd path_c_;
  long long generation_ = 0;

  Eigen::MatrixXd eigen_basis_;   // B
  Eigen::VectorXd eigen_scale_;   // diag(D)
  bool decomposition_fresh_ = false;

  std::vector<Eigen::VectorXd> pending_;
};

class DeOptimizer final : public Optimizer {
 public:
  explicit DeOptimizer(const OptimizerSpec& spec);
  std::vector<Eigen::VectorXd> ask() override;
  void tell(const std::vector<Eigen::VectorXd>& points,
            const std::vector<double>& values) override;

  int population_size() const { return np_; }

 private:
  int d_;
  int np_;
  double cr_;
  double f_;
  Rng rng_;
  bool initialized_ = false;
  std::vector<Eigen::VectorXd> population_;
  std::vector<double> values_;
  std::vector<Eigen::VectorXd> pending_;
};

class TurboOptimizer final : public Optimizer {
 public:
  explicit TurboOptimizer(const OptimizerSpec& spec);
  std::vector<Eigen::VectorXd> ask() override;
  void tell(const std::vector<Eigen::VectorXd>& points,
            const std::vector<double>& values) override;

  double tr_length() const { return length_; }
  int restarts() const { return restarts_; }
  int success_count() const { return successes_; }
  int failure_count() const { return failures_; }

 private:
  void start_fresh();
  void refit_if_due();
  Dataset modeling_window() const;

  OptimizerSpec spec_;
  int d_;
  int n_init_;
  int n_candidates_;
  int failure_tol_;
  Rng rng_;

  std::deque<Eigen::VectorXd> init_queue_;
  Dataset data_;  // current restart's observations
  double restart_best_ = std::numeric_limits<double>::infinity();
  Eigen::VectorXd restart_best_point_;

  double length_;
  int successes_ = 0;
  int failures_ = 0;
  int restarts_ = 0;

  KernelParams params_;
  bool params_valid_ = false;
  int tells_since_fit_ = 0;
  bool force_refit_ = false;
};

class VanillaBoOptimizer final : public Optimizer {
 public:
  explicit VanillaBoOptimizer(const OptimizerSpec& spec);
  std::vector<Eigen::VectorXd> ask() override;
  void tell(const std::vector<Eigen::VectorXd>& points,
            const std::vector<double>& values) override;

 private:
  OptimizerSpec spec_;
  int d_;
  Rng rng_;
  std::deque<Eigen::VectorXd> init_queue_;
  Dataset data_;
  KernelParams params_;
  bool params_valid_ = false;
  int tells_since_fit_ = 0;
};

// Numerically stable log EI for minimization: log(sigma * h(z)) with
// h(z) = z Phi(z) + phi(z), z = (best - mean)/sigma.
double log_expected_improvement(double mean, double variance, double best);

}  // namespace topolam
