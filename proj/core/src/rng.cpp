#include "topolam/rng.hpp"

namespace topolam {

std::vector<Eigen::VectorXd> latin_hypercube(int n, int d, Rng& rng) {
  std::vector<Eigen::VectorXd> points(static_cast<std::size_t>(n),
                                      Eigen::VectorXd(d));
  std::vector<int> strata(static_cast<std::size_t>(n));
  for (int j = 0; j < d; ++j) {
    for (int i = 0; i < n; ++i) strata[static_cast<std::size_t>(i)] = i;
    rng.shuffle(strata);
    for (int i = 0; i < n; ++i) {
      points[static_cast<std::size_t>(i)][j] =
          (strata[static_cast<std::size_t>(i)] + rng.uniform()) / n;
    }
  }
  return points;
}

}  // namespace topolam
