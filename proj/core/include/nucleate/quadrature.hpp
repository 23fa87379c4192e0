#pragma once

#include <functional>
#include <span>
#include <vector>

namespace nucleate {

// Gauss–Legendre nodes/weights on [-1,1], computed by Newton iteration.
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

GaussRule gauss_legendre(int n);

// Integral of fn over [a,b] with an n-point Gauss rule.
double gauss_integrate(const std::function<double(double)>& fn, double a, double b, int n = 16);

// Composite: m equal panels, n-point rule each.
double gauss_integrate_composite(const std::function<double(double)>& fn, double a, double b,
                                 int panels, int n = 16);

// Adaptive Simpson to absolute tolerance tol.
double adaptive_simpson(const std::function<double(double)>& fn, double a, double b, double tol,
                        int max_depth = 40);

// Cumulative trapezoid of samples y on grid x; out[0] = 0.
std::vector<double> cumulative_trapezoid(std::span<const double> x, std::span<const double> y);

double trapezoid(std::span<const double> x, std::span<const double> y);

// Cumulative integral of x^p * L(x) where L linearly interpolates (x_i, g_i).
// Cells touching x=0 use the exact power-law moment, so integrable
// singularities (p > -1) and p = -1 with g(0)=0 are handled without special
// casing by callers.
std::vector<double> powerlaw_cumulative(std::span<const double> x, std::span<const double> g,
                                        double p);

// Monotone cubic (Fritsch–Carlson) interpolant. Preserves monotonicity of the
// data, which the quantile tables require.
class MonotoneCubic {
 public:
  MonotoneCubic() = default;
  MonotoneCubic(std::vector<double> x, std::vector<double> y);

  double operator()(double xq) const;
  bool empty() const { return x_.empty(); }

 private:
  std::vector<double> x_, y_, slope_;
};

// Piecewise-linear interpolation with flat extrapolation.
double lerp_table(std::span<const double> x, std::span<const double> y, double xq);

}  // namespace nucleate
