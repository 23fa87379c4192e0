#pragma once

#include <functional>
#include <span>
#include <vector>

namespace nucleate {

// One-sample Kolmogorov–Smirnov statistic against a reference CDF.
// Samples need not be sorted.
double ks_statistic(std::span<const double> samples, const std::function<double(double)>& cdf);

// Two-sample KS statistic.
double ks_statistic_two_sample(std::span<const double> a, std::span<const double> b);

// Critical value D* at significance level alpha for a two-sample test with
// sizes n and m (asymptotic formula c(alpha) * sqrt((n+m)/(n*m))).
double ks_two_sample_critical(double alpha, std::size_t n, std::size_t m);

struct Summary {
  std::size_t count = 0;
  double mean = 0.0;
  double variance = 0.0;  // unbiased
  double std_error = 0.0;
};

Summary summarize(std::span<const double> samples);

// Binomial proportion with standard error.
struct Proportion {
  std::size_t successes = 0;
  std::size_t trials = 0;
  double estimate = 0.0;
  double std_error = 0.0;
};

Proportion proportion(std::size_t successes, std::size_t trials);

// Equal-width histogram on [lo, hi]; returns densities (mass / bin width).
struct Histogram {
  double lo = 0.0;
  double hi = 1.0;
  std::vector<double> density;
  std::vector<std::size_t> counts;
  std::size_t total = 0;

  double bin_width() const { return (hi - lo) / static_cast<double>(density.size()); }
  double bin_center(std::size_t i) const { return lo + (i + 0.5) * bin_width(); }
};

Histogram make_histogram(std::span<const double> samples, double lo, double hi, std::size_t bins);

// Kahan-compensated sum; order-fixed reductions use this so results do not
// depend on how work was split across threads.
double compensated_sum(std::span<const double> values);

// Least-squares slope/intercept of y against x.
struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
};

LineFit fit_line(std::span<const double> x, std::span<const double> y);

}  // namespace nucleate
