#include "nucleate/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace nucleate {

double ks_statistic(std::span<const double> samples, const std::function<double(double)>& cdf) {
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double f = cdf(sorted[i]);
    d = std::max(d, std::max((i + 1) / n - f, f - i / n));
  }
  return d;
}

double ks_statistic_two_sample(std::span<const double> a, std::span<const double> b) {
  std::vector<double> sa(a.begin(), a.end()), sb(b.begin(), b.end());
  std::sort(sa.begin(), sa.end());
  std::sort(sb.begin(), sb.end());
  const double na = static_cast<double>(sa.size()), nb = static_cast<double>(sb.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < sa.size() && j < sb.size()) {
    const double v = std::min(sa[i], sb[j]);
    while (i < sa.size() && sa[i] <= v) ++i;
    while (j < sb.size() && sb[j] <= v) ++j;
    d = std::max(d, std::abs(i / na - j / nb));
  }
  return d;
}

double ks_two_sample_critical(double alpha, std::size_t n, std::size_t m) {
  const double c = std::sqrt(-0.5 * std::log(alpha / 2.0));
  const double nn = static_cast<double>(n), mm = static_cast<double>(m);
  return c * std::sqrt((nn + mm) / (nn * mm));
}

Summary summarize(std::span<const double> samples) {
  Summary s;
  s.count = samples.size();
  if (s.count == 0) return s;
  s.mean = compensated_sum(samples) / static_cast<double>(s.count);
  if (s.count > 1) {
    double acc = 0.0;
    for (double v : samples) {
      const double d = v - s.mean;
      acc += d * d;
    }
    s.variance = acc / static_cast<double>(s.count - 1);
    s.std_error = std::sqrt(s.variance / static_cast<double>(s.count));
  }
  return s;
}

Proportion proportion(std::size_t successes, std::size_t trials) {
  Proportion p;
  p.successes = successes;
  p.trials = trials;
  if (trials == 0) return p;
  p.estimate = static_cast<double>(successes) / static_cast<double>(trials);
  p.std_error = std::sqrt(p.estimate * (1.0 - p.estimate) / static_cast<double>(trials));
  return p;
}

Histogram make_histogram(std::span<const double> samples, double lo, double hi,
                         std::size_t bins) {
  if (bins == 0 || !(hi > lo)) throw std::invalid_argument("make_histogram: bad bins/range");
  Histogram h;
  h.lo = lo;
  h.hi = hi;
  h.counts.assign(bins, 0);
  h.density.assign(bins, 0.0);
  for (double v : samples) {
    if (v < lo || v >= hi) continue;
    const auto idx =
        std::min(bins - 1, static_cast<std::size_t>((v - lo) / (hi - lo) * bins));
    ++h.counts[idx];
    ++h.total;
  }
  const double w = h.bin_width();
  for (std::size_t i = 0; i < bins; ++i)
    h.density[i] = h.total ? h.counts[i] / (w * static_cast<double>(h.total)) : 0.0;
  return h;
}

double compensated_sum(std::span<const double> values) {
  double sum = 0.0, comp = 0.0;
  for (double v : values) {
    const double y = v - comp;
    const double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }
  return sum;
}

LineFit fit_line(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("fit_line: bad input");
  const double n = static_cast<double>(x.size());
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  LineFit f;
  f.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  f.intercept = (sy - f.slope * sx) / n;
  return f;
}

}  // namespace nucleate
