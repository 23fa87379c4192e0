#pragma once

#include <cstdint>
#include <vector>

namespace nucleate {

// Finite union of disjoint subintervals of [0,1], the exit target on the
// diagonal.
class IntervalUnion {
 public:
  IntervalUnion() = default;
  IntervalUnion(double lo, double hi);
  static IntervalUnion full() { return IntervalUnion(0.0, 1.0); }

  void add(double lo, double hi);  // throws if overlapping or outside [0,1]

  bool contains(double x) const;
  double total_length() const;
  const std::vector<std::pair<double, double>>& intervals() const { return intervals_; }

 private:
  std::vector<std::pair<double, double>> intervals_;
};

struct TriangleExitQuery {
  double u = 0.0;
  double v = 0.0;
  IntervalUnion target = IntervalUnion::full();
  double tolerance = 1e-10;
};

// Density h(x,y,z) of the diagonal-exit position for planar Brownian motion,
// in rotated coordinates x=(u+v)/2, y=(u-v)/2. Antisymmetric in (x,y).
double exit_density(double x, double y, double z, double tol = 1e-10);

// H(u,v;B): probability that Brownian motion from (u,v) in the unit square
// reaches the diagonal before the boundary, with diagonal coordinate in B.
double exit_measure(const TriangleExitQuery& query);

enum class SmithWatsonVariant { slow, fast };

// Square-average of H(.,.;[0,1]): coth series (slow) or alternating sech
// series (fast), both ~= 0.41063.
double smith_watson(SmithWatsonVariant variant);

// The same average by an n x n tensor Gauss rule. The square integral equals
// twice the triangle integral, and H is smooth inside the triangle, so the
// rule is applied there (Duffy map); integrating straight across the square
// would stall at the diagonal kink.
double smith_watson_quadrature(int n = 64);

struct McEstimate {
  double estimate = 0.0;
  double std_error = 0.0;
  std::uint64_t paths = 0;
};

// Walk-on-spheres oracle for the same exit probability; independent of the
// series path. Deterministic given seed; parallel over path blocks with
// order-fixed reduction.
McEstimate mc_exit_oracle(double u, double v, const IntervalUnion& target, std::uint64_t paths,
                          double eps, std::uint64_t seed);

enum class Phi1Method { via_mu_phi0, direct_mc };

struct Phi1Result {
  double value = 0.0;
  double std_error = 0.0;  // zero for the deterministic route
};

// First-cycle nucleation intensity measure. The deterministic route returns
// mu * Phi0(B); the Monte Carlo route integrates the occupation-weighted exit
// measure directly.
Phi1Result phi1(const IntervalUnion& target, Phi1Method method, std::uint64_t samples = 200000,
                std::uint64_t seed = 1);

}  // namespace nucleate
