#pragma once

#include <span>

namespace reconeval {

struct SignedRankResult {
  double statistic = 0.0;  // W+, sum of ranks of positive differences
  int effective_n = 0;     // pairs with a non-zero difference
  double p_value = 1.0;    // two-sided
  bool exact = true;
};

/// Wilcoxon signed-rank test on paired samples. Zero differences are
/// dropped, ties get mid-ranks. Exact null distribution for up to 25
/// non-zero pairs, normal approximation with tie and continuity correction
/// beyond. All differences zero gives p = 1.
SignedRankResult wilcoxon_signed_rank(std::span<const double> a, std::span<const double> b);

struct TTestResult {
  double statistic = 0.0;
  int degrees_of_freedom = 0;
  double p_value = 1.0;  // two-sided
};

/// Paired Student t-test on a - b.
TTestResult paired_t_test(std::span<const double> a, std::span<const double> b);

enum class PairedTest { SignedRank, TTest };

struct Comparison {
  PairedTest test = PairedTest::SignedRank;
  double statistic = 0.0;
  double p_value = 1.0;
  int n = 0;
};

/// Paired comparison of per-dataset mean errors of two methods. Requires
/// equal-length lists with at least 5 pairs.
Comparison compare_methods(std::span<const double> a, std::span<const double> b,
                           PairedTest test = PairedTest::SignedRank);

}  // namespace reconeval
