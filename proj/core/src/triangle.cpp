#include "nucleate/triangle.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "nucleate/parallel.hpp"
#include "nucleate/quadrature.hpp"
#include "nucleate/rng.hpp"
#include "nucleate/series.hpp"

namespace nucleate {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kCornerDelta = 1e-4;

// sinh(n pi a)/sinh(n pi), computed in exponent space so large n never
// overflows: e^{n pi (a-1)} (1 - e^{-2 n pi a}) / (1 - e^{-2 n pi}).
double sinh_ratio(int n, double a) {
  const double npi = n * kPi;
  return std::exp(npi * (a - 1.0)) * (1.0 - std::exp(-2.0 * npi * a)) /
         (1.0 - std::exp(-2.0 * npi));
}

// Four-term antisymmetric combination at index n.
double combination(int n, double x, double y) {
  return sinh_ratio(n, y) * std::sin(n * kPi * x) +
         sinh_ratio(n, 1.0 - y) * std::sin(n * kPi * (1.0 - x)) -
         sinh_ratio(n, x) * std::sin(n * kPi * y) -
         sinh_ratio(n, 1.0 - x) * std::sin(n * kPi * (1.0 - y));
}

double term_envelope(int n, double x, double y) {
  const double npi = n * kPi;
  return std::exp(-npi * (1.0 - y)) + std::exp(-npi * y) + std::exp(-npi * (1.0 - x)) +
         std::exp(-npi * x);
}

void check_series_domain(double x, double y, double tol) {
  if (!(x > 0.0 && x < 1.0 && y > 0.0 && y < 1.0))
    throw std::domain_error("exit series: (x,y) must lie in (0,1)^2");
  // Corner-singular set: both coordinates within delta of a corner.
  if (std::min(x, 1.0 - x) < kCornerDelta && std::min(y, 1.0 - y) < kCornerDelta)
    throw std::runtime_error(
        "exit series: start within 1e-4 of a corner-singular configuration; "
        "convergence too slow");
  // Cost guard for the remaining slow directions (e.g. y -> 0 with x
  // interior, where the term count grows like 1/y).
  const double margin = std::min(std::min(x, 1.0 - x), std::min(y, 1.0 - y));
  const double ratio = std::exp(-kPi * margin);
  const double terms = std::log(8.0 / (tol * (1.0 - ratio))) / (kPi * margin);
  if (terms > 3e6)
    throw std::runtime_error("exit series: configuration needs over 3e6 terms; too slow");
}

}  // namespace

IntervalUnion::IntervalUnion(double lo, double hi) { add(lo, hi); }

void IntervalUnion::add(double lo, double hi) {
  if (!(lo >= 0.0 && hi <= 1.0 && lo < hi))
    throw std::invalid_argument("IntervalUnion: need 0 <= lo < hi <= 1");
  for (const auto& [a, b] : intervals_)
    if (lo < b && a < hi) throw std::invalid_argument("IntervalUnion: intervals must be disjoint");
  intervals_.emplace_back(lo, hi);
  std::sort(intervals_.begin(), intervals_.end());
}

bool IntervalUnion::contains(double x) const {
  for (const auto& [a, b] : intervals_)
    if (x >= a && x <= b) return true;
  return false;
}

double IntervalUnion::total_length() const {
  double len = 0.0;
  for (const auto& [a, b] : intervals_) len += b - a;
  return len;
}

double exit_density(double x, double y, double z, double tol) {
  if (z < 0.0 || z > 1.0) throw std::domain_error("exit_density: z outside [0,1]");
  if (x == y) return 0.0;  // diagonal of the antisymmetry
  check_series_domain(x, y, tol);
  const double margin = std::min(std::min(x, 1.0 - x), std::min(y, 1.0 - y));
  const double ratio = std::exp(-kPi * margin);
  double sum = 0.0;
  for (int n = 1;; ++n) {
    sum += 2.0 * std::sin(n * kPi * (1.0 - z)) * combination(n, x, y);
    // Remaining terms are dominated by a geometric envelope.
    const double tail = 2.0 * term_envelope(n + 1, x, y) / (1.0 - ratio);
    if (tail < tol) break;
  }
  return sum;
}

double exit_measure(const TriangleExitQuery& query) {
  const double u = query.u, v = query.v;
  if (u < 0.0 || u > 1.0 || v < 0.0 || v > 1.0)
    throw std::domain_error("exit_measure: (u,v) outside the unit square");
  if (u == v) return query.target.contains(u) ? 1.0 : 0.0;  // already on the diagonal

  const double hi = std::max(u, v), lo = std::min(u, v);  // H(u,v;B) = H(v,u;B)
  const double x = 0.5 * (hi + lo), y = 0.5 * (hi - lo);
  check_series_domain(x, y, query.tolerance);
  const double margin = std::min(std::min(x, 1.0 - x), std::min(y, 1.0 - y));
  const double ratio = std::exp(-kPi * margin);

  double sum = 0.0;
  for (int n = 1;; ++n) {
    // Termwise integral of sin(n pi (1-w)) over the target.
    double zint = 0.0;
    for (const auto& [a, b] : query.target.intervals())
      zint += (std::cos(n * kPi * (1.0 - b)) - std::cos(n * kPi * (1.0 - a))) / (n * kPi);
    sum += 2.0 * zint * combination(n, x, y);
    const double tail =
        2.0 * (2.0 / ((n + 1.0) * kPi)) * term_envelope(n + 1, x, y) / (1.0 - ratio);
    if (tail < query.tolerance) break;
  }
  return std::clamp(sum, 0.0, 1.0);
}

double smith_watson(SmithWatsonVariant variant) {
  const double pi3 = kPi * kPi * kPi;
  if (variant == SmithWatsonVariant::fast) {
    double sum = 0.0;
    int sign = 1;
    for (int n = 1; n <= 15; n += 2) {
      sum += sign / (std::cosh(n * kPi / 2.0) * static_cast<double>(n) * n * n);
      sign = -sign;
    }
    return 32.0 / pi3 * sum;
  }
  // coth series, 1e4 odd terms; the truncated tail is below 1e-9.
  double sum = 0.0;
  for (int n = 19999; n >= 1; n -= 2) {
    const double nn = n;
    sum += 1.0 / (std::tanh(nn * kPi / 2.0) * nn * nn * nn);
  }
  return 1.0 - 16.0 / pi3 * sum;
}

double smith_watson_quadrature(int n) {
  const GaussRule rule = gauss_legendre(n);
  std::vector<double> rows(n, 0.0);
  parallel_for_indexed(n, [&](std::size_t i) {
    const double s = 0.5 + 0.5 * rule.nodes[i];
    double acc = 0.0;
    for (int j = 0; j < n; ++j) {
      const double t = 0.5 + 0.5 * rule.nodes[j];
      // (u,v) = (s, s t) covers the lower triangle with Jacobian s.
      const double u = s, v = s * t;
      const double x = 0.5 * (u + v), y = 0.5 * (u - v);
      double h_val;
      if (std::min(x, 1.0 - x) < 1.2e-4 && std::min(y, 1.0 - y) < 1.2e-4) {
        // True corner nodes carry O(1e-7) of the integral; drop them.
        continue;
      } else if (y < 3e-5) {
        // Within O(y) of the diagonal the full-target measure is 1; the
        // series would need > 3e6 terms here for no measurable gain.
        h_val = 1.0;
      } else {
        h_val = exit_measure({u, v, IntervalUnion::full(), 1e-11});
      }
      acc += 0.25 * rule.weights[i] * rule.weights[j] * s * h_val;
    }
    rows[i] = acc;
  });
  double sum = 0.0;
  for (double r : rows) sum += r;
  return 2.0 * sum;
}

McEstimate mc_exit_oracle(double u, double v, const IntervalUnion& target, std::uint64_t paths,
                          double eps, std::uint64_t seed) {
  if (!(u > 0.0 && u < 1.0 && v > 0.0 && v < 1.0))
    throw std::domain_error("mc_exit_oracle: start must be interior");
  if (paths < 1 || !(eps > 0.0)) throw std::invalid_argument("mc_exit_oracle: bad paths/eps");

  // Work in the lower triangle (0,0)-(1,0)-(1,1); H is symmetric under swap.
  const double su = std::max(u, v), sv = std::min(u, v);

  constexpr std::uint64_t kBlock = 1u << 16;
  const std::uint64_t blocks = (paths + kBlock - 1) / kBlock;
  std::vector<std::uint64_t> hits(blocks, 0);

  parallel_for_indexed(blocks, [&](std::size_t b) {
    Rng rng(derive_seed(seed, b));
    const std::uint64_t lo = b * kBlock;
    const std::uint64_t n = std::min<std::uint64_t>(kBlock, paths - lo);
    std::uint64_t count = 0;
    for (std::uint64_t p = 0; p < n; ++p) {
      double px = su, py = sv;
      for (;;) {
        const double d_bottom = py;
        const double d_right = 1.0 - px;
        const double d_diag = (px - py) * 0.70710678118654752;
        const double r = std::min(d_bottom, std::min(d_right, d_diag));
        if (r < eps) {
          if (d_diag <= d_bottom && d_diag <= d_right) {
            const double w = std::clamp(0.5 * (px + py), 0.0, 1.0);
            if (target.contains(w)) ++count;
          }
          break;
        }
        const double theta = 2.0 * kPi * rng.uniform();
        px += r * std::cos(theta);
        py += r * std::sin(theta);
      }
    }
    hits[b] = count;
  });

  std::uint64_t total = 0;
  for (std::uint64_t h : hits) total += h;
  McEstimate est;
  est.paths = paths;
  est.estimate = static_cast<double>(total) / static_cast<double>(paths);
  est.std_error =
      std::sqrt(est.estimate * (1.0 - est.estimate) / static_cast<double>(paths));
  return est;
}

Phi1Result phi1(const IntervalUnion& target, Phi1Method method, std::uint64_t samples,
                std::uint64_t seed) {
  Phi1Result result;
  if (method == Phi1Method::via_mu_phi0) {
    double mass = 0.0;
    for (const auto& [a, b] : target.intervals()) mass += phi0_cdf(b) - phi0_cdf(a);
    result.value = mu_value() * mass;
    return result;
  }

  // Monte Carlo of the occupation-weighted integral: the uniform start and
  // the time integral of the killed kernel reduce to the occupation density
  // 6 y (1-y), so draw y ~ Beta(2,2) (median of three uniforms), z uniform,
  // and average H(y,z;B)/6.
  constexpr std::uint64_t kBlock = 1u << 12;
  const std::uint64_t blocks = (samples + kBlock - 1) / kBlock;
  std::vector<double> block_sum(blocks, 0.0), block_sumsq(blocks, 0.0);
  parallel_for_indexed(blocks, [&](std::size_t bidx) {
    Rng rng(derive_seed(seed ^ 0x9e1ULL, bidx));
    const std::uint64_t lo = bidx * kBlock;
    const std::uint64_t n = std::min<std::uint64_t>(kBlock, samples - lo);
    double acc = 0.0, acc2 = 0.0;
    for (std::uint64_t i = 0; i < n; ++i) {
      double a = rng.uniform(), b = rng.uniform(), c = rng.uniform();
      double y = std::max(std::min(a, b), std::min(std::max(a, b), c));
      double z = rng.uniform();
      // Keep samples clear of the corner-singular set; the displaced mass is
      // orders of magnitude below the Monte Carlo error.
      const double mid = 0.5 * (y + z);
      if (mid < 2e-4) {
        y += 4e-4;
        z += 4e-4;
      } else if (mid > 1.0 - 2e-4) {
        y -= 4e-4;
        z -= 4e-4;
      }
      if (std::abs(y - z) < 4e-4) z = (z >= y) ? y + 4e-4 : y - 4e-4;
      z = std::clamp(z, 1e-4, 1.0 - 1e-4);
      const double h = exit_measure({y, z, target, 1e-9});
      acc += h;
      acc2 += h * h;
    }
    block_sum[bidx] = acc;
    block_sumsq[bidx] = acc2;
  });
  double sum = 0.0, sumsq = 0.0;
  for (std::uint64_t b = 0; b < blocks; ++b) {
    sum += block_sum[b];
    sumsq += block_sumsq[b];
  }
  const double n = static_cast<double>(samples);
  const double mean = sum / n;
  const double var = std::max(0.0, sumsq / n - mean * mean);
  result.value = mean / 6.0;
  result.std_error = std::sqrt(var / n) / 6.0;
  return result;
}

}  // namespace nucleate
