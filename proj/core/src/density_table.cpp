#include "nucleate/density_table.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "nucleate/series.hpp"

namespace nucleate {

namespace {

constexpr double kPi = 3.14159265358979323846;

double beta_norm(double p) {
  // 1/B(p,p)
  return std::exp(std::lgamma(2.0 * p) - 2.0 * std::lgamma(p));
}

}  // namespace

SplittingLaw SplittingLaw::uniform_law(double alpha) {
  SplittingLaw law;
  law.alpha = alpha;
  law.kind = Kind::uniform;
  return law;
}

SplittingLaw SplittingLaw::beta_law(double alpha, double p) {
  if (!(p >= 1.0)) throw std::invalid_argument("beta_law: shape must be >= 1");
  SplittingLaw law;
  law.alpha = alpha;
  law.kind = Kind::beta;
  law.beta_param = p;
  return law;
}

SplittingLaw SplittingLaw::phi0_law(double alpha) {
  SplittingLaw law;
  law.alpha = alpha;
  law.kind = Kind::phi0;
  return law;
}

SplittingLaw SplittingLaw::tabulated_law(double alpha, std::vector<double> x,
                                         std::vector<double> f) {
  if (x.size() != f.size() || x.size() < 2)
    throw std::invalid_argument("tabulated_law: need matching x/f with >= 2 nodes");
  SplittingLaw law;
  law.alpha = alpha;
  law.kind = Kind::tabulated;
  law.tab_x = std::move(x);
  law.tab_f = std::move(f);
  return law;
}

double SplittingLaw::density(double x) const {
  if (x < 0.0 || x > 1.0) throw std::domain_error("SplittingLaw::density: x outside [0,1]");
  switch (kind) {
    case Kind::uniform:
      return 1.0;
    case Kind::beta:
      if (x == 0.0 || x == 1.0) return beta_param > 1.0 ? 0.0 : 1.0;
      return beta_norm(beta_param) * std::pow(x * (1.0 - x), beta_param - 1.0);
    case Kind::phi0:
      return phi0(x, SeriesTruncation{15, 9});
    case Kind::tabulated:
      return lerp_table(tab_x, tab_f, x);
  }
  return 0.0;
}

double SplittingLaw::near_zero_exponent() const {
  switch (kind) {
    case Kind::uniform:
      return 0.0;
    case Kind::beta:
      return beta_param - 1.0;
    case Kind::phi0:
      return 2.0;
    case Kind::tabulated:
      break;
  }
  // Fitted from the first tabulated nodes.
  const double x0 = tab_x[1], x1 = tab_x[2];
  if (tab_f[1] <= 0.0 || tab_f[2] <= 0.0) return 0.0;
  return std::log(tab_f[2] / tab_f[1]) / std::log(x1 / x0);
}

double SplittingLaw::near_zero_coefficient() const {
  switch (kind) {
    case Kind::uniform:
      return 1.0;
    case Kind::beta:
      return beta_norm(beta_param);
    case Kind::phi0:
      return 3.0 / mu_value();
    case Kind::tabulated:
      break;
  }
  const double beta = near_zero_exponent();
  return tab_f[1] / std::pow(tab_x[1], beta);
}

double SplittingLaw::limit_at_zero() const {
  return near_zero_exponent() > 0.0 ? 0.0 : near_zero_coefficient();
}

std::string SplittingLaw::name() const {
  switch (kind) {
    case Kind::uniform:
      return "uniform";
    case Kind::beta:
      return "beta:" + std::to_string(beta_param);
    case Kind::phi0:
      return "phi0";
    case Kind::tabulated:
      return "tabulated";
  }
  return "?";
}

DensityTable DensityTable::build(const SplittingLaw& law, int nodes) {
  if (nodes < 256) throw std::invalid_argument("DensityTable: need >= 256 nodes");
  DensityTable table;
  const int n = nodes;
  table.nodes_.resize(n);
  table.density_.resize(n);
  // Cosine spacing, mirrored so x_{n-1-i} = 1 - x_i and f symmetric exactly.
  for (int i = 0; i <= (n - 1) / 2; ++i) {
    const double x = 0.5 * (1.0 - std::cos(kPi * i / (n - 1)));
    table.nodes_[i] = x;
    table.nodes_[n - 1 - i] = 1.0 - x;
    const double f = law.density(x);
    if (!(f >= 0.0) || !std::isfinite(f))
      throw std::invalid_argument("DensityTable: density must be finite and nonnegative");
    table.density_[i] = f;
    table.density_[n - 1 - i] = f;
  }

  // Composite Gauss quadrature of the density per cell, then renormalize.
  std::vector<double> cum(n, 0.0);
  const GaussRule rule = gauss_legendre(8);
  for (int i = 1; i < n; ++i) {
    const double a = table.nodes_[i - 1], b = table.nodes_[i];
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    double s = 0.0;
    for (std::size_t q = 0; q < rule.nodes.size(); ++q)
      s += rule.weights[q] * law.density(mid + half * rule.nodes[q]);
    cum[i] = cum[i - 1] + half * s;
  }
  const double mass = cum.back();
  if (!(mass > 0.0) || !std::isfinite(mass))
    throw std::invalid_argument("DensityTable: density is not normalizable");
  table.cdf_.resize(n);
  for (int i = 0; i < n; ++i) table.cdf_[i] = cum[i] / mass;
  table.cdf_.front() = 0.0;
  table.cdf_.back() = 1.0;

  table.density_interp_ = MonotoneCubic(table.nodes_, table.density_);
  table.cdf_interp_ = MonotoneCubic(table.nodes_, table.cdf_);

  // Quantile: invert (cdf -> x); drop cells whose cdf increment underflows.
  std::vector<double> qx, qy;
  qx.reserve(n);
  qy.reserve(n);
  qx.push_back(table.cdf_[0]);
  qy.push_back(table.nodes_[0]);
  for (int i = 1; i < n; ++i) {
    if (table.cdf_[i] > qx.back()) {
      qx.push_back(table.cdf_[i]);
      qy.push_back(table.nodes_[i]);
    } else if (i == n - 1) {
      qy.back() = table.nodes_[i];
    }
  }
  table.quantile_interp_ = MonotoneCubic(std::move(qx), std::move(qy));
  return table;
}

std::vector<double> DensityTable::sample_many(std::size_t count, std::uint64_t seed) const {
  Rng rng(seed);
  std::vector<double> out(count);
  for (auto& v : out) v = quantile(rng.uniform());
  return out;
}

double DensityTable::moment(int order) const {
  // Per-cell Gauss on the interpolated density; plain trapezoid on the node
  // values is not accurate enough for the 1e-8 moment cross-checks.
  const GaussRule rule = gauss_legendre(8);
  double sum = 0.0;
  for (std::size_t i = 1; i < nodes_.size(); ++i) {
    const double a = nodes_[i - 1], b = nodes_[i];
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    double s = 0.0;
    for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
      const double x = mid + half * rule.nodes[q];
      s += rule.weights[q] * std::pow(x, order) * density_interp_(x);
    }
    sum += half * s;
  }
  return sum;
}

}  // namespace nucleate
