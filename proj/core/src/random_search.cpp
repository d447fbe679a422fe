#include "topolam/optimizers_impl.hpp"

namespace topolam {

RandomSearchOptimizer::RandomSearchOptimizer(const OptimizerSpec& spec)
    : d_(spec.dimension), rng_(spec.seed) {}

std::vector<Eigen::VectorXd> RandomSearchOptimizer::ask() {
  return {rng_.uniform_vector(d_)};
}

void RandomSearchOptimizer::tell(const std::vector<Eigen::VectorXd>& points,
                                 const std::vector<double>& values) {
  record(points, values);
}

}  // namespace topolam
