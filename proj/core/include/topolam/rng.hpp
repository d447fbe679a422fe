#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Core>

namespace topolam {

// Deterministic random source. The engine is std::mt19937_64 (bit-exact by
// the standard); all variate transforms are implemented here because the
// std::*_distribution adapters are implementation-defined and would break
// byte-identical traces across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform in [0, 1) with 53-bit resolution.
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Integer in [0, n), n >= 1. Rejection-free modulo bias is irrelevant for
  // the n used here (population and index draws), but keep it unbiased anyway.
  std::uint64_t uniform_index(std::uint64_t n) {
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % n;
    std::uint64_t v = engine_();
    while (v >= limit) v = engine_();
    return v % n;
  }

  // Standard normal via Box-Muller. No spare caching: two uniforms are
  // consumed per draw so the stream layout is position-independent.
  double normal() {
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    constexpr double two_pi = 6.283185307179586476925286766559;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(two_pi * u2);
  }

  Eigen::VectorXd normal_vector(int n) {
    Eigen::VectorXd v(n);
    for (int i = 0; i < n; ++i) v[i] = normal();
    return v;
  }

  Eigen::VectorXd uniform_vector(int n) {
    Eigen::VectorXd v(n);
    for (int i = 0; i < n; ++i) v[i] = uniform();
    return v;
  }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::swap(v[i - 1], v[static_cast<std::size_t>(uniform_index(i))]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

// Seeded latin-hypercube design on the unit cube: one stratified sample per
// cell, strata shuffled independently per dimension.
std::vector<Eigen::VectorXd> latin_hypercube(int n, int d, Rng& rng);

}  // namespace topolam
