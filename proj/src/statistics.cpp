#include "reconeval/statistics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

#include <boost/math/distributions/students_t.hpp>

namespace reconeval {

namespace {

std::vector<double> differences(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw std::invalid_argument("paired test needs equal-length samples");
  std::vector<double> d(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) d[i] = a[i] - b[i];
  return d;
}

}  // namespace

SignedRankResult wilcoxon_signed_rank(std::span<const double> a, std::span<const double> b) {
  const std::vector<double> all = differences(a, b);
  double scale = 0.0;
  for (double d : all) scale = std::max(scale, std::abs(d));
  // Differences equal up to rounding are treated as ties.
  const double tol = 1e-12 * scale;
  std::vector<double> d;
  for (double v : all) {
    if (std::abs(v) > tol) d.push_back(v);
  }
  SignedRankResult out;
  out.effective_n = static_cast<int>(d.size());
  if (d.empty()) return out;

  const std::size_t n = d.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return std::abs(d[i]) < std::abs(d[j]); });

  // Doubled mid-ranks stay integral.
  std::vector<long> rank2(n);
  std::vector<std::size_t> tie_sizes;
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i + 1;
    while (j < n && std::abs(d[order[j]]) - std::abs(d[order[i]]) <= tol) ++j;
    const long r2 = static_cast<long>(i + 1 + j);  // 2 * mean of ranks i+1..j
    for (std::size_t k = i; k < j; ++k) rank2[order[k]] = r2;
    tie_sizes.push_back(j - i);
    i = j;
  }
  long observed2 = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (d[i] > 0) observed2 += rank2[i];
  }
  out.statistic = observed2 / 2.0;

  if (n <= 25) {
    const long total2 = std::accumulate(rank2.begin(), rank2.end(), 0L);
    std::vector<double> ways(static_cast<std::size_t>(total2) + 1, 0.0);
    ways[0] = 1.0;
    long reach = 0;
    for (long r : rank2) {
      for (long s = reach; s >= 0; --s) {
        if (ways[static_cast<std::size_t>(s)] != 0.0) ways[static_cast<std::size_t>(s + r)] += ways[static_cast<std::size_t>(s)];
      }
      reach += r;
    }
    double lower = 0.0, upper = 0.0;
    for (long s = 0; s <= total2; ++s) {
      if (s <= observed2) lower += ways[static_cast<std::size_t>(s)];
      if (s >= observed2) upper += ways[static_cast<std::size_t>(s)];
    }
    const double all_signs = std::ldexp(1.0, static_cast<int>(n));
    out.p_value = std::min(1.0, 2.0 * std::min(lower, upper) / all_signs);
    out.exact = true;
    return out;
  }

  const double nn = static_cast<double>(n);
  double tie_term = 0.0;
  for (std::size_t t : tie_sizes) {
    const double tt = static_cast<double>(t);
    tie_term += tt * tt * tt - tt;
  }
  const double mean = nn * (nn + 1.0) / 4.0;
  const double var = nn * (nn + 1.0) * (2.0 * nn + 1.0) / 24.0 - tie_term / 48.0;
  const double z = std::max(0.0, std::abs(out.statistic - mean) - 0.5) / std::sqrt(var);
  out.p_value = std::min(1.0, std::erfc(z / std::sqrt(2.0)));
  out.exact = false;
  return out;
}

TTestResult paired_t_test(std::span<const double> a, std::span<const double> b) {
  const std::vector<double> d = differences(a, b);
  if (d.size() < 2) throw std::invalid_argument("t-test needs at least 2 pairs");
  TTestResult out;
  const double n = static_cast<double>(d.size());
  const double mean = std::accumulate(d.begin(), d.end(), 0.0) / n;
  double ss = 0.0;
  for (double v : d) ss += (v - mean) * (v - mean);
  const double sd = std::sqrt(ss / (n - 1.0));
  out.degrees_of_freedom = static_cast<int>(d.size()) - 1;
  if (sd == 0.0) {
    out.statistic = mean == 0.0 ? 0.0 : std::copysign(INFINITY, mean);
    out.p_value = mean == 0.0 ? 1.0 : 0.0;
    return out;
  }
  out.statistic = mean / (sd / std::sqrt(n));
  const boost::math::students_t dist(out.degrees_of_freedom);
  out.p_value = std::min(1.0, 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(out.statistic))));
  return out;
}

Comparison compare_methods(std::span<const double> a, std::span<const double> b, PairedTest test) {
  if (a.size() != b.size()) throw std::invalid_argument("compare_methods: lists differ in length");
  if (a.size() < 5) throw std::invalid_argument("compare_methods: need at least 5 paired datasets");
  Comparison out;
  out.test = test;
  out.n = static_cast<int>(a.size());
  if (test == PairedTest::SignedRank) {
    const auto r = wilcoxon_signed_rank(a, b);
    out.statistic = r.statistic;
    out.p_value = r.p_value;
  } else {
    const auto r = paired_t_test(a, b);
    out.statistic = r.statistic;
    out.p_value = r.p_value;
  }
  return out;
}

}  // namespace reconeval
