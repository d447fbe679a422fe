#pragma once

#include <vector>

namespace topolam {

struct WilcoxonResult {
  double statistic;  // W+ (sum of ranks of positive differences)
  double p_value;    // two-sided
  int n_used;        // pairs remaining after dropping zero differences
  bool exact;        // exact distribution (n <= 25) vs normal approximation
};

// Two-sided Wilcoxon signed-rank test on paired samples. Zero differences
// are dropped; ties get midranks. For n <= 25 the p-value comes from the
// exact sign-flip distribution (dynamic program over all 2^n assignments),
// otherwise from the normal approximation with continuity and tie
// corrections. Throws std::invalid_argument on length mismatch, n < 1 after
// dropping zeros, or all-zero differences.
WilcoxonResult wilcoxon_signed_rank(const std::vector<double>& a,
                                    const std::vector<double>& b);

struct FiveNumberSummary {
  double min, q1, median, q3, max;
};

// Median by averaging the two middle order statistics; quartiles are the
// medians of the lower/upper halves (Tukey hinges, the box-plot convention).
double median(std::vector<double> values);
FiveNumberSummary five_number_summary(std::vector<double> values);

}  // namespace topolam
