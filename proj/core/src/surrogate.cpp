#include "topolam/surrogate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <Eigen/Cholesky>
#include <Eigen/Dense>

namespace topolam {

namespace {

constexpr double kSqrt5 = 2.2360679774997896964091736687747;
constexpr double kLog2Pi = 1.8378770664093454835606594728112;

struct Standardization {
  double mean = 0.0;
  double std = 1.0;
};

Standardization standardize(const Dataset& data) {
  Standardization s;
  const int n = data.size();
  if (n == 0) return s;
  double sum = 0.0;
  for (double y : data.outputs) sum += y;
  s.mean = sum / n;
  double var = 0.0;
  for (double y : data.outputs) var += (y - s.mean) * (y - s.mean);
  s.std = n > 1 ? std::sqrt(var / (n - 1)) : 0.0;
  if (s.std <= 0.0) s.std = 1.0;  // constant outputs
  return s;
}

Eigen::MatrixXd input_matrix(const Dataset& data) {
  const int n = data.size();
  const int d = data.dimension();
  Eigen::MatrixXd x(n, d);
  for (int i = 0; i < n; ++i) {
    x.row(i) = data.inputs[static_cast<std::size_t>(i)];
  }
  return x;
}

double kernel_value(double signal, double r) {
  return signal * (1.0 + kSqrt5 * r + 5.0 / 3.0 * r * r) *
         std::exp(-kSqrt5 * r);
}

// Gram matrix of pre-scaled inputs (rows already divided by lengthscales).
Eigen::MatrixXd gram(const Eigen::MatrixXd& xs, double signal, double noise) {
  const int n = static_cast<int>(xs.rows());
  Eigen::MatrixXd k(n, n);
  for (int i = 0; i < n; ++i) {
    k(i, i) = signal + noise;
    for (int j = 0; j < i; ++j) {
      const double r = (xs.row(i) - xs.row(j)).norm();
      const double v = kernel_value(signal, r);
      k(i, j) = v;
      k(j, i) = v;
    }
  }
  return k;
}

// Cholesky with escalating diagonal jitter from 1e-10 to 1e-6.
bool jittered_llt(const Eigen::MatrixXd& k, Eigen::LLT<Eigen::MatrixXd>& llt) {
  llt.compute(k);
  if (llt.info() == Eigen::Success) return true;
  for (double jitter = 1e-10; jitter <= 1.000001e-6; jitter *= 10.0) {
    Eigen::MatrixXd kj = k;
    kj.diagonal().array() += jitter;
    llt.compute(kj);
    if (llt.info() == Eigen::Success) return true;
  }
  return false;
}

struct LogParams {
  Eigen::VectorXd theta;  // [log l_1..d, log signal, log noise]

  static LogParams from(const KernelParams& p) {
    LogParams lp;
    const int d = static_cast<int>(p.lengthscales.size());
    lp.theta.resize(d + 2);
    for (int i = 0; i < d; ++i) lp.theta[i] = std::log(p.lengthscales[i]);
    lp.theta[d] = std::log(p.signal_variance);
    lp.theta[d + 1] = std::log(p.noise_variance);
    return lp;
  }

  KernelParams to(int d) const {
    KernelParams p;
    p.lengthscales.resize(d);
    for (int i = 0; i < d; ++i) {
      p.lengthscales[i] =
          std::clamp(std::exp(theta[i]), kLengthscaleMin, kLengthscaleMax);
    }
    p.signal_variance = std::clamp(std::exp(theta[d]), 1e-6, 1e6);
    p.noise_variance = std::clamp(std::exp(theta[d + 1]), kNoiseFloor, 1.0);
    return p;
  }
};

// Log marginal likelihood of standardized outputs and its gradient w.r.t.
// the log parameters. Returns -inf if the Gram matrix is not SPD.
double lml_and_gradient(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                        const KernelParams& p, Eigen::VectorXd* grad) {
  const int n = static_cast<int>(x.rows());
  const int d = static_cast<int>(x.cols());
  Eigen::MatrixXd xs = x;
  for (int j = 0; j < d; ++j) xs.col(j) /= p.lengthscales[j];

  const Eigen::MatrixXd k = gram(xs, p.signal_variance, p.noise_variance);
  Eigen::LLT<Eigen::MatrixXd> llt;
  if (!jittered_llt(k, llt)) {
    return -std::numeric_limits<double>::infinity();
  }

  const Eigen::VectorXd alpha = llt.solve(y);
  double lml = -0.5 * y.dot(alpha) - 0.5 * n * kLog2Pi;
  for (int i = 0; i < n; ++i) {
    lml -= std::log(llt.matrixL()(i, i));
  }
  if (grad == nullptr) return lml;

  // dL/dtheta = 0.5 tr(W dK/dtheta), W = alpha alpha^T - K^-1.
  Eigen::MatrixXd w = -llt.solve(Eigen::MatrixXd::Identity(n, n));
  w.noalias() += alpha * alpha.transpose();

  grad->setZero(d + 2);
  double g_signal = 0.5 * p.signal_variance * w.trace();  // diagonal terms
  const double g_noise = 0.5 * p.noise_variance * w.trace();
  Eigen::VectorXd g_len = Eigen::VectorXd::Zero(d);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < i; ++j) {
      const Eigen::VectorXd diff = xs.row(i) - xs.row(j);
      const double r = diff.norm();
      const double e = std::exp(-kSqrt5 * r);
      const double kij =
          p.signal_variance * (1.0 + kSqrt5 * r + 5.0 / 3.0 * r * r) * e;
      // Off-diagonal pairs appear twice in the trace; 0.5 * 2 = 1.
      g_signal += w(i, j) * kij;
      // dk/dlog l_m = (5/3) s^2 e (1 + sqrt5 r) diff_m^2
      const double common =
          5.0 / 3.0 * p.signal_variance * e * (1.0 + kSqrt5 * r) * w(i, j);
      for (int m = 0; m < d; ++m) {
        g_len[m] += common * diff[m] * diff[m];
      }
    }
  }
  grad->head(d) = g_len;
  (*grad)[d] = g_signal;
  (*grad)[d + 1] = g_noise;
  return lml;
}

}  // namespace

double matern52(const KernelParams& params, const Eigen::VectorXd& x,
                const Eigen::VectorXd& y) {
  if (x.size() != y.size() || x.size() != params.lengthscales.size()) {
    throw std::invalid_argument("matern52: dimension mismatch");
  }
  double r2 = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double s = (x[i] - y[i]) / params.lengthscales[i];
    r2 += s * s;
  }
  return kernel_value(params.signal_variance, std::sqrt(r2));
}

KernelParams median_heuristic(const Dataset& data) {
  const int n = data.size();
  const int d = data.dimension();
  KernelParams p;
  p.lengthscales = Eigen::VectorXd::Constant(d, 0.5);
  p.signal_variance = 1.0;
  p.noise_variance = 1e-6;
  if (n < 2) return p;
  std::vector<double> dists;
  dists.reserve(static_cast<std::size_t>(n) * (n - 1) / 2);
  for (int dim = 0; dim < d; ++dim) {
    dists.clear();
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < i; ++j) {
        dists.push_back(
            std::abs(data.inputs[static_cast<std::size_t>(i)][dim] -
                     data.inputs[static_cast<std::size_t>(j)][dim]));
      }
    }
    std::nth_element(dists.begin(), dists.begin() + dists.size() / 2,
                     dists.end());
    const double med = dists[dists.size() / 2];
    p.lengthscales[dim] =
        std::clamp(med > 0.0 ? med : 0.5, kLengthscaleMin, kLengthscaleMax);
  }
  return p;
}

double log_marginal_likelihood(const Dataset& data, const KernelParams& p) {
  const Standardization s = standardize(data);
  Eigen::VectorXd y(data.size());
  for (int i = 0; i < data.size(); ++i) {
    y[i] = (data.outputs[static_cast<std::size_t>(i)] - s.mean) / s.std;
  }
  return lml_and_gradient(input_matrix(data), y, p, nullptr);
}

KernelParams fit_mle(const Dataset& data, const FitOptions& options) {
  const int n = data.size();
  const int d = data.dimension();
  if (n < 2) throw std::invalid_argument("fit_mle: need at least 2 points");

  const Standardization s = standardize(data);
  Eigen::VectorXd y(n);
  for (int i = 0; i < n; ++i) {
    y[i] = (data.outputs[static_cast<std::size_t>(i)] - s.mean) / s.std;
  }
  const Eigen::MatrixXd x = input_matrix(data);

  auto make_start = [&](double len, double noise) {
    KernelParams p;
    p.lengthscales = Eigen::VectorXd::Constant(d, len);
    p.signal_variance = 1.0;
    p.noise_variance = noise;
    return p;
  };
  const KernelParams median = median_heuristic(data);

  std::vector<KernelParams> starts;
  if (options.warm_start != nullptr &&
      options.warm_start->lengthscales.size() == d) {
    starts.push_back(*options.warm_start);
  }
  const KernelParams canned[] = {make_start(0.5, 1e-6), median,
                                 make_start(0.15, 1e-4),
                                 make_start(2.0, 1e-6)};
  for (const KernelParams& p : canned) {
    if (static_cast<int>(starts.size()) >=
        options.restarts + (options.warm_start != nullptr ? 1 : 0)) {
      break;
    }
    starts.push_back(p);
  }

  double best_lml = -std::numeric_limits<double>::infinity();
  KernelParams best = median;
  bool improved_any = false;

  for (const KernelParams& start : starts) {
    LogParams lp = LogParams::from(start);
    Eigen::VectorXd step = Eigen::VectorXd::Constant(d + 2, 0.1);
    Eigen::VectorXd prev_grad = Eigen::VectorXd::Zero(d + 2);
    Eigen::VectorXd grad(d + 2);

    double lml = lml_and_gradient(x, y, lp.to(d), &grad);
    const double start_lml = lml;
    if (lml > best_lml) {
      best_lml = lml;
      best = lp.to(d);
    }
    if (!std::isfinite(lml)) continue;

    // iRprop-: sign-based ascent with per-parameter step adaptation.
    for (int iter = 0; iter < options.max_iters; ++iter) {
      for (int k = 0; k < d + 2; ++k) {
        const double prod = grad[k] * prev_grad[k];
        if (prod > 0.0) {
          step[k] = std::min(step[k] * 1.2, 0.5);
        } else if (prod < 0.0) {
          step[k] = std::max(step[k] * 0.5, 1e-6);
          grad[k] = 0.0;  // skip the update right after a sign flip
        }
        if (grad[k] > 0.0) {
          lp.theta[k] += step[k];
        } else if (grad[k] < 0.0) {
          lp.theta[k] -= step[k];
        }
      }
      prev_grad = grad;
      lml = lml_and_gradient(x, y, lp.to(d), &grad);
      if (std::isfinite(lml) && lml > best_lml) {
        best_lml = lml;
        best = lp.to(d);
        if (lml > start_lml) improved_any = true;
      }
      if (!std::isfinite(lml)) break;
    }
  }

  if (!improved_any) return median;
  return best;
}

struct GpModel::Impl {
  Eigen::MatrixXd xs;  // inputs scaled by lengthscales
  Eigen::LLT<Eigen::MatrixXd> llt;
  Eigen::VectorXd alpha;
  KernelParams params;
  Standardization standardization;
  int d = 0;
};

GpModel::GpModel(const Dataset& data, KernelParams params)
    : impl_(std::make_unique<Impl>()) {
  const int n = data.size();
  const int d = data.dimension();
  if (n == 0) throw std::invalid_argument("GpModel: empty dataset");
  if (params.lengthscales.size() != d) {
    throw std::invalid_argument("GpModel: lengthscale dimension mismatch");
  }
  params.noise_variance = std::max(params.noise_variance, kNoiseFloor);
  impl_->params = std::move(params);
  impl_->d = d;
  impl_->standardization = standardize(data);

  impl_->xs = input_matrix(data);
  for (int j = 0; j < d; ++j) {
    impl_->xs.col(j) /= impl_->params.lengthscales[j];
  }
  const Eigen::MatrixXd k = gram(impl_->xs, impl_->params.signal_variance,
                                 impl_->params.noise_variance);
  if (!jittered_llt(k, impl_->llt)) {
    throw std::runtime_error("GpModel: Gram matrix not SPD after jitter");
  }
  Eigen::VectorXd y(n);
  for (int i = 0; i < n; ++i) {
    y[i] = (data.outputs[static_cast<std::size_t>(i)] -
            impl_->standardization.mean) /
           impl_->standardization.std;
  }
  impl_->alpha = impl_->llt.solve(y);
}

GpModel::~GpModel() = default;
GpModel::GpModel(GpModel&&) noexcept = default;
GpModel& GpModel::operator=(GpModel&&) noexcept = default;

const KernelParams& GpModel::params() const { return impl_->params; }

GpPrediction GpModel::predict(
    const std::vector<Eigen::VectorXd>& queries) const {
  const int n = static_cast<int>(impl_->xs.rows());
  const int m = static_cast<int>(queries.size());
  Eigen::MatrixXd kstar(n, m);
  for (int c = 0; c < m; ++c) {
    Eigen::VectorXd q = queries[static_cast<std::size_t>(c)];
    for (int j = 0; j < impl_->d; ++j) q[j] /= impl_->params.lengthscales[j];
    for (int i = 0; i < n; ++i) {
      const double r = (impl_->xs.row(i).transpose() - q).norm();
      kstar(i, c) = kernel_value(impl_->params.signal_variance, r);
    }
  }
  const Eigen::MatrixXd v =
      impl_->llt.matrixL().solve(kstar);  // L^-1 k*

  GpPrediction out;
  out.mean.resize(m);
  out.variance.resize(m);
  const double std_y = impl_->standardization.std;
  for (int c = 0; c < m; ++c) {
    const double mean_s = kstar.col(c).dot(impl_->alpha);
    double var_s = impl_->params.signal_variance - v.col(c).squaredNorm();
    var_s = std::max(var_s, 0.0) + impl_->params.noise_variance;
    out.mean[c] = mean_s * std_y + impl_->standardization.mean;
    out.variance[c] = var_s * std_y * std_y;
  }
  return out;
}

int GpModel::thompson_sample(const std::vector<Eigen::VectorXd>& candidates,
                             Rng& rng) const {
  const int m = static_cast<int>(candidates.size());
  if (m == 0) throw std::invalid_argument("thompson_sample: no candidates");
  const int n = static_cast<int>(impl_->xs.rows());

  Eigen::MatrixXd cs(m, impl_->d);
  for (int c = 0; c < m; ++c) {
    Eigen::VectorXd q = candidates[static_cast<std::size_t>(c)];
    for (int j = 0; j < impl_->d; ++j) q[j] /= impl_->params.lengthscales[j];
    cs.row(c) = q;
  }

  Eigen::MatrixXd kstar(n, m);
  for (int c = 0; c < m; ++c) {
    for (int i = 0; i < n; ++i) {
      const double r = (impl_->xs.row(i) - cs.row(c)).norm();
      kstar(i, c) = kernel_value(impl_->params.signal_variance, r);
    }
  }
  const Eigen::VectorXd mean = kstar.transpose() * impl_->alpha;

  Eigen::MatrixXd cov = gram(cs, impl_->params.signal_variance,
                             impl_->params.noise_variance);
  const Eigen::MatrixXd v = impl_->llt.matrixL().solve(kstar);
  cov.noalias() -= v.transpose() * v;

  Eigen::LLT<Eigen::MatrixXd> llt;
  if (!jittered_llt(cov, llt)) {
    throw std::runtime_error("thompson_sample: covariance not SPD");
  }
  const Eigen::VectorXd z = rng.normal_vector(m);
  const Eigen::VectorXd sample = mean + llt.matrixL() * z;

  int best = 0;
  for (int c = 1; c < m; ++c) {
    if (sample[c] < sample[best]) best = c;
  }
  return best;
}

GpPrediction predict(const KernelParams& params, const Dataset& data,
                     const std::vector<Eigen::VectorXd>& queries) {
  return GpModel(data, params).predict(queries);
}

int thompson_sample(const KernelParams& params, const Dataset& data,
                    const std::vector<Eigen::VectorXd>& candidates, Rng& rng) {
  return GpModel(data, params).thompson_sample(candidates, rng);
}

}  // namespace topolam
