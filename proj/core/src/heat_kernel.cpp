#include "nucleate/heat_kernel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "nucleate/quadrature.hpp"

namespace nucleate {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kTailTol = 1e-13;

double heat_kernel_images(double t, double x, double y) {
  const double norm = 1.0 / std::sqrt(2.0 * kPi * t);
  // |k| large enough that exp(-(2k-2)^2/(2t)) < tail tolerance.
  const int K = 1 + static_cast<int>(std::ceil(1.0 + 0.5 * std::sqrt(2.0 * t * 32.0)));
  double sum = 0.0;
  for (int k = -K; k <= K; ++k) {
    const double d1 = y - x + 2.0 * k;
    const double d2 = y + x + 2.0 * k;
    sum += std::exp(-d1 * d1 / (2.0 * t)) - std::exp(-d2 * d2 / (2.0 * t));
  }
  return std::max(0.0, norm * sum);
}

double heat_kernel_spectral(double t, double x, double y) {
  // Modes m with exp(-m^2 pi^2 t / 2) < tail tolerance.
  const int M =
      1 + static_cast<int>(std::ceil(std::sqrt(2.0 * -std::log(kTailTol) / (kPi * kPi * t))));
  double sum = 0.0;
  for (int m = M; m >= 1; --m)
    sum += std::exp(-0.5 * m * m * kPi * kPi * t) * std::sin(m * kPi * x) * std::sin(m * kPi * y);
  return std::max(0.0, 2.0 * sum);
}

}  // namespace

double heat_kernel(const HeatKernelQuery& query) {
  if (!(query.t > 0.0)) throw std::domain_error("heat_kernel: t must be > 0");
  if (query.x < 0.0 || query.x > 1.0 || query.y < 0.0 || query.y > 1.0)
    throw std::domain_error("heat_kernel: x,y outside [0,1]");
  switch (query.method) {
    case HeatKernelMethod::images:
      return heat_kernel_images(query.t, query.x, query.y);
    case HeatKernelMethod::spectral:
      return heat_kernel_spectral(query.t, query.x, query.y);
    case HeatKernelMethod::automatic:
      return query.t < 0.5 ? heat_kernel_images(query.t, query.x, query.y)
                           : heat_kernel_spectral(query.t, query.x, query.y);
  }
  return 0.0;
}

double expected_occupation(double y) {
  if (y < 0.0 || y > 1.0) throw std::domain_error("expected_occupation: y outside [0,1]");
  return y * (1.0 - y);
}

double expected_occupation_quadrature(double y) {
  if (y < 0.0 || y > 1.0) throw std::domain_error("expected_occupation: y outside [0,1]");
  if (y == 0.0 || y == 1.0) return 0.0;
  // Spatial integral of q_t(x,y) over x at fixed t, then time integral over
  // [0,T] by quadrature plus the exact spectral tail over [T,inf). The inner
  // integral is adaptive: at small t the kernel is a width-sqrt(t) spike.
  const double T = 1.0;
  const auto mass_at = [&](double t) {
    // At small t the kernel is a width-sqrt(t) spike at y that a coarse
    // first Simpson pass would miss entirely, so panel around it.
    const double sigma = std::sqrt(t);
    double cuts[4] = {0.0, std::clamp(y - 8.0 * sigma, 0.0, 1.0),
                      std::clamp(y + 8.0 * sigma, 0.0, 1.0), 1.0};
    double total = 0.0;
    for (int i = 0; i + 1 < 4; ++i) {
      if (cuts[i + 1] <= cuts[i]) continue;
      total += adaptive_simpson(
          [&](double x) { return heat_kernel({t, x, y, HeatKernelMethod::automatic}); },
          cuts[i], cuts[i + 1], 3e-11);
    }
    return total;
  };
  // sqrt substitution flattens the t->0 behaviour of the survival mass; the
  // survival scale is y(1-y)-dependent, so seed the outer rule with panels.
  double head = 0.0;
  const double s_max = std::sqrt(T);
  for (int p = 0; p < 16; ++p) {
    const double a = s_max * p / 16.0, b = s_max * (p + 1) / 16.0;
    head += adaptive_simpson(
        [&](double s) { return s > 0.0 ? 2.0 * s * mass_at(s * s) : 0.0; }, a, b, 6e-10);
  }
  double tail = 0.0;
  for (int m = 1; m <= 25; ++m) {
    const double lambda = 0.5 * m * m * kPi * kPi;
    const double xint = (1.0 - std::cos(m * kPi)) / (m * kPi);  // int_0^1 sin(m pi x) dx
    tail += 2.0 * std::exp(-lambda * T) / lambda * xint * std::sin(m * kPi * y);
  }
  return head + tail;
}

}  // namespace nucleate
