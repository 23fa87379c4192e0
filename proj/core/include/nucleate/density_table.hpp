#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "nucleate/quadrature.hpp"
#include "nucleate/rng.hpp"

namespace nucleate {

// Splitting law: rate exponent alpha plus a symmetric splitting density on
// [0,1], with its near-zero structure density(x) ~ b x^beta exposed for the
// gap-law asymptotics.
struct SplittingLaw {
  enum class Kind { uniform, beta, phi0, tabulated };

  double alpha = 4.0;
  Kind kind = Kind::phi0;
  double beta_param = 0.0;  // Beta(p,p) shape when kind == beta
  std::vector<double> tab_x, tab_f;

  static SplittingLaw uniform_law(double alpha);
  static SplittingLaw beta_law(double alpha, double p);
  static SplittingLaw phi0_law(double alpha = 4.0);
  static SplittingLaw tabulated_law(double alpha, std::vector<double> x, std::vector<double> f);

  double density(double x) const;

  double near_zero_exponent() const;     // beta
  double near_zero_coefficient() const;  // b
  double limit_at_zero() const;          // a = lim_{x->0} density(x)

  std::string name() const;
};

// Tabulated density with cumulative and quantile, the sampling backend for
// split-location draws. Node layout is cosine-spaced and mirror-symmetric, so
// density values at x and 1-x coincide exactly.
class DensityTable {
 public:
  DensityTable() = default;

  static DensityTable build(const SplittingLaw& law, int nodes = 4096);

  double density(double x) const { return density_interp_(x); }
  double cdf(double x) const { return cdf_interp_(x); }
  double quantile(double u) const { return quantile_interp_(u); }

  double sample(Rng& rng) const { return quantile(rng.uniform()); }
  std::vector<double> sample_many(std::size_t count, std::uint64_t seed) const;

  // Quadrature moment of the tabulated density.
  double moment(int order) const;

  const std::vector<double>& nodes() const { return nodes_; }
  const std::vector<double>& density_values() const { return density_; }
  const std::vector<double>& cdf_values() const { return cdf_; }

 private:
  std::vector<double> nodes_, density_, cdf_;
  MonotoneCubic density_interp_, cdf_interp_, quantile_interp_;
};

}  // namespace nucleate
