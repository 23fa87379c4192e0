#pragma once

namespace nucleate {

enum class HeatKernelMethod { images, spectral, automatic };

struct HeatKernelQuery {
  double t = 0.0;
  double x = 0.0;
  double y = 0.0;
  HeatKernelMethod method = HeatKernelMethod::automatic;
};

// Transition density q_t(x,y) of Brownian motion on (0,1) killed at both
// endpoints (generator f''/2). Images form for small t, eigenfunction form for
// large t; both are summed until the tail bound drops below 1e-12.
double heat_kernel(const HeatKernelQuery& query);

// Q(y) = int_0^1 dx int_0^inf q_t(x,y) dt = y(1-y).
double expected_occupation(double y);

// Same quantity by nested quadrature of heat_kernel; agreement with y(1-y)
// is the verification mode.
double expected_occupation_quadrature(double y);

}  // namespace nucleate
