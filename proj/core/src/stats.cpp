#include "topolam/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace topolam {

namespace {

// Midranks of |d|, scaled by 2 so ties (.5 ranks) stay integral.
std::vector<long long> double_ranks(const std::vector<double>& abs_d) {
  const std::size_t n = abs_d.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return abs_d[a] < abs_d[b]; });
  std::vector<long long> rank2(n, 0);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && abs_d[order[j + 1]] == abs_d[order[i]]) ++j;
    // midrank of positions i..j (1-based): (i+1 + j+1)/2, doubled.
    const long long mid2 = static_cast<long long>(i + j + 2);
    for (std::size_t k = i; k <= j; ++k) rank2[order[k]] = mid2;
    i = j + 1;
  }
  return rank2;
}

double normal_sf(double z) { return 0.5 * std::erfc(z / std::sqrt(2.0)); }

}  // namespace

WilcoxonResult wilcoxon_signed_rank(const std::vector<double>& a,
                                    const std::vector<double>& b) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("wilcoxon: length mismatch");
  }
  std::vector<double> abs_d;
  std::vector<bool> positive;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    if (d == 0.0) continue;  // standard zero-difference drop
    abs_d.push_back(std::abs(d));
    positive.push_back(d > 0.0);
  }
  const int n = static_cast<int>(abs_d.size());
  if (n == 0) {
    throw std::invalid_argument("wilcoxon: all differences are zero");
  }

  const std::vector<long long> rank2 = double_ranks(abs_d);
  long long w2 = 0;  // 2 * W+
  long long total2 = 0;
  for (int i = 0; i < n; ++i) {
    total2 += rank2[static_cast<std::size_t>(i)];
    if (positive[static_cast<std::size_t>(i)]) {
      w2 += rank2[static_cast<std::size_t>(i)];
    }
  }

  WilcoxonResult result;
  result.statistic = w2 / 2.0;
  result.n_used = n;

  if (n <= 25) {
    // Exact null distribution of 2*W+ over all 2^n sign assignments via a
    // dynamic program on achievable rank sums.
    std::vector<double> counts(static_cast<std::size_t>(total2) + 1, 0.0);
    counts[0] = 1.0;
    long long reach = 0;
    for (int i = 0; i < n; ++i) {
      const long long r = rank2[static_cast<std::size_t>(i)];
      reach += r;
      for (long long s = reach; s >= r; --s) {
        counts[static_cast<std::size_t>(s)] +=
            counts[static_cast<std::size_t>(s - r)];
      }
    }
    const double denom = std::ldexp(1.0, n);  // 2^n
    const long long lo = std::min(w2, total2 - w2);
    const long long hi = std::max(w2, total2 - w2);
    double tail = 0.0;
    for (long long s = 0; s <= lo; ++s) {
      tail += counts[static_cast<std::size_t>(s)];
    }
    for (long long s = hi; s <= total2; ++s) {
      tail += counts[static_cast<std::size_t>(s)];
    }
    result.p_value = std::min(1.0, tail / denom);
    result.exact = true;
  } else {
    const double w = result.statistic;
    const double mean = n * (n + 1) / 4.0;
    // Tie correction: subtract sum(t^3 - t)/48 over tie groups.
    double tie_term = 0.0;
    std::vector<long long> sorted = rank2;
    std::sort(sorted.begin(), sorted.end());
    std::size_t i = 0;
    while (i < sorted.size()) {
      std::size_t j = i;
      while (j + 1 < sorted.size() && sorted[j + 1] == sorted[i]) ++j;
      const double t = static_cast<double>(j - i + 1);
      tie_term += (t * t * t - t);
      i = j + 1;
    }
    const double var =
        n * (n + 1) * (2.0 * n + 1.0) / 24.0 - tie_term / 48.0;
    const double correction = w > mean ? -0.5 : (w < mean ? 0.5 : 0.0);
    const double z = (w - mean + correction) / std::sqrt(var);
    result.p_value = std::min(1.0, 2.0 * normal_sf(std::abs(z)));
    result.exact = false;
  }
  return result;
}

double median(std::vector<double> values) {
  if (values.empty()) throw std::invalid_argument("median: empty input");
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  return n % 2 == 1 ? values[n / 2]
                    : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

FiveNumberSummary five_number_summary(std::vector<double> values) {
  if (values.empty()) {
    throw std::invalid_argument("five_number_summary: empty input");
  }
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  FiveNumberSummary s{};
  s.min = values.front();
  s.max = values.back();
  s.median = n % 2 == 1 ? values[n / 2]
                        : 0.5 * (values[n / 2 - 1] + values[n / 2]);
  const std::size_t half = n / 2;
  const std::vector<double> lower(values.begin(),
                                  values.begin() + static_cast<long>(half));
  const std::vector<double> upper(values.end() - static_cast<long>(half),
                                  values.end());
  s.q1 = lower.empty() ? s.median : median(lower);
  s.q3 = upper.empty() ? s.median : median(upper);
  return s;
}

}  // namespace topolam
