#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include <Eigen/Eigenvalues>

#include "topolam/optimizers_impl.hpp"

namespace topolam {

// Active CMA-ES: rank-mu and rank-one covariance updates plus negative
// recombination weights for the worst half of the offspring, cumulative
// step-size adaptation, componentwise clamping to the unit cube.

CmaesOptimizer::CmaesOptimizer(const OptimizerSpec& spec)
    : d_(spec.dimension), rng_(spec.seed) {
  const auto [lambda_default, mu_default] = cmaes_config(d_);
  lambda_ = spec.cmaes_lambda > 0 ? spec.cmaes_lambda : lambda_default;
  mu_ = lambda_ / 2;
  (void)mu_default;

  // Preliminary log-rank weights.
  Eigen::VectorXd raw(lambda_);
  for (int i = 0; i < lambda_; ++i) {
    raw[i] = std::log((lambda_ + 1) / 2.0) - std::log(i + 1.0);
  }
  const double sum_pos = raw.head(mu_).sum();
  const double sum_pos_sq = raw.head(mu_).squaredNorm();
  mu_eff_ = sum_pos * sum_pos / sum_pos_sq;
  const double sum_neg = raw.tail(lambda_ - mu_).sum();
  const double sum_neg_sq = raw.tail(lambda_ - mu_).squaredNorm();
  const double mu_eff_neg = sum_neg * sum_neg / sum_neg_sq;

  c_sigma_ = (mu_eff_ + 2.0) / (d_ + mu_eff_ + 5.0);
  d_sigma_ = 1.0 +
             2.0 * std::max(0.0, std::sqrt((mu_eff_ - 1.0) / (d_ + 1.0)) - 1.0) +
             c_sigma_;
  c_c_ = (4.0 + mu_eff_ / d_) / (d_ + 4.0 + 2.0 * mu_eff_ / d_);
  c1_ = 2.0 / ((d_ + 1.3) * (d_ + 1.3) + mu_eff_);
  c_mu_ = std::min(1.0 - c1_, 2.0 * (mu_eff_ - 2.0 + 1.0 / mu_eff_) /
                                  ((d_ + 2.0) * (d_ + 2.0) + mu_eff_));

  const double alpha_mu = 1.0 + c1_ / c_mu_;
  const double alpha_mueff = 1.0 + 2.0 * mu_eff_neg / (mu_eff_ + 2.0);
  const double alpha_posdef = (1.0 - c1_ - c_mu_) / (d_ * c_mu_);
  const double neg_scale =
      std::min({alpha_mu, alpha_mueff, alpha_posdef});

  weights_.resize(lambda_);
  const double sum_neg_abs = std::abs(sum_neg);
  for (int i = 0; i < lambda_; ++i) {
    weights_[i] = i < mu_ ? raw[i] / sum_pos
                          : neg_scale * raw[i] / sum_neg_abs;
  }

  chi_n_ = std::sqrt(static_cast<double>(d_)) *
           (1.0 - 1.0 / (4.0 * d_) + 1.0 / (21.0 * d_ * d_));

  mean_ = spec.incumbent.has_value() ? *spec.incumbent
                                     : Eigen::VectorXd::Constant(d_, 0.5);
  sigma_ = spec.cmaes_sigma0;
  cov_ = Eigen::MatrixXd::Identity(d_, d_);
  path_sigma_ = Eigen::VectorXd::Zero(d_);
  path_c_ = Eigen::VectorXd::Zero(d_);
}

void CmaesOptimizer::decompose() {
  if (decomposition_fresh_) return;
  // Symmetrize and re-decompose; eigenvalue floor repairs numerical
  // degeneration of the covariance.
  cov_ = 0.5 * (cov_ + cov_.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(cov_);
  if (es.info() != Eigen::Success) {
    throw std::runtime_error("cmaes: eigendecomposition failed");
  }
  const double floor = 1e-14 * std::max(cov_.trace(), 1e-300);
  Eigen::VectorXd evals = es.eigenvalues();
  for (int i = 0; i < d_; ++i) evals[i] = std::max(evals[i], floor);
  eigen_basis_ = es.eigenvectors();
  eigen_scale_ = evals.cwiseSqrt();
  decomposition_fresh_ = true;
}

std::vector<Eigen::VectorXd> CmaesOptimizer::ask() {
  decompose();
  pending_.clear();
  pending_.reserve(static_cast<std::size_t>(lambda_));
  for (int i = 0; i < lambda_; ++i) {
    const Eigen::VectorXd z = rng_.normal_vector(d_);
    Eigen::VectorXd x =
        mean_ + sigma_ * (eigen_basis_ * eigen_scale_.cwiseProduct(z));
    x = x.cwiseMax(0.0).cwiseMin(1.0);
    pending_.push_back(std::move(x));
  }
  return pending_;
}

void CmaesOptimizer::tell(const std::vector<Eigen::VectorXd>& points,
                          const std::vector<double>& values) {
  record(points, values);
  if (static_cast<int>(values.size()) < lambda_) {
    return;  // truncated final batch: no state update
  }

  std::vector<int> order(static_cast<std::size_t>(lambda_));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return values[static_cast<std::size_t>(a)] <
           values[static_cast<std::size_t>(b)];
  });

  decompose();
  const Eigen::MatrixXd inv_sqrt =
      eigen_basis_ * eigen_scale_.cwiseInverse().asDiagonal() *
      eigen_basis_.transpose();

  std::vector<Eigen::VectorXd> y(static_cast<std::size_t>(lambda_));
  for (int i = 0; i < lambda_; ++i) {
    y[static_cast<std::size_t>(i)] =
        (points[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])] -
         mean_) /
        sigma_;
  }

  Eigen::VectorXd delta = Eigen::VectorXd::Zero(d_);
  for (int i = 0; i < mu_; ++i) {
    delta += weights_[i] * y[static_cast<std::size_t>(i)];
  }
  const Eigen::VectorXd new_mean = mean_ + sigma_ * delta;

  ++generation_;
  path_sigma_ = (1.0 - c_sigma_) * path_sigma_ +
                std::sqrt(c_sigma_ * (2.0 - c_sigma_) * mu_eff_) *
                    (inv_sqrt * delta);
  const double ps_norm = path_sigma_.norm();
  const double expected_decay =
      std::sqrt(1.0 - std::pow(1.0 - c_sigma_, 2.0 * generation_));
  const bool h_sigma =
      ps_norm / expected_decay < (1.4 + 2.0 / (d_ + 1.0)) * chi_n_;

  path_c_ = (1.0 - c_c_) * path_c_ +
            (h_sigma ? std::sqrt(c_c_ * (2.0 - c_c_) * mu_eff_) : 0.0) * delta;

  const double delta_h = (1.0 - (h_sigma ? 1.0 : 0.0)) * c_c_ * (2.0 - c_c_);
  const double weight_sum = weights_.sum();
  Eigen::MatrixXd rank_mu = Eigen::MatrixXd::Zero(d_, d_);
  for (int i = 0; i < lambda_; ++i) {
    const Eigen::VectorXd& yi = y[static_cast<std::size_t>(i)];
    double w = weights_[i];
    if (w < 0.0) {
      const double norm2 = (inv_sqrt * yi).squaredNorm();
      w *= d_ / std::max(norm2, 1e-300);
    }
    rank_mu.noalias() += w * yi * yi.transpose();
  }
  cov_ = (1.0 + c1_ * delta_h - c1_ - c_mu_ * weight_sum) * cov_ +
         c1_ * path_c_ * path_c_.transpose() + c_mu_ * rank_mu;

  sigma_ *= std::exp(c_sigma_ / d_sigma_ * (ps_norm / chi_n_ - 1.0));
  mean_ = new_mean;
  decomposition_fresh_ = false;
}

}  // namespace topolam
