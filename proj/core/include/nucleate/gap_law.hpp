#pragma once

#include <cstdint>
#include <vector>

#include "nucleate/density_table.hpp"
#include "nucleate/quadrature.hpp"
#include "nucleate/stats.hpp"

namespace nucleate {

struct GapLawConfig {
  double r_max = 12.0;
  int grid_nodes = 2048;
  double tol = 1e-10;
  int max_sweeps = 200;
};

// Precomputed ingredients of the distributional fixed point: the splitting
// density phi on a uniform table, the partial moment D(w) = int_0^w s phi,
// the normalizer c_T, and quantile transforms for sampling X and T.
class GapLawInputs {
 public:
  GapLawInputs(const SplittingLaw& law, const GapLawConfig& config);

  const SplittingLaw& law() const { return law_; }
  const GapLawConfig& config() const { return config_; }
  const std::vector<double>& grid() const { return grid_; }

  double phi(double s) const;   // splitting density on [0,1]
  double f_X(double x) const;   // 2 e^{-2x} phi(e^{-x})
  double f_T(double t) const;   // c_T int_0^{e^{-t}} s phi(s) ds
  double c_T() const { return c_t_; }

  // h(t) = 2 int_0^1 s^{t+1} phi(s) ds, the Laplace transform of f_X.
  double h_transform(double t) const;

  double sample_X(Rng& rng) const;
  double sample_T(Rng& rng) const;

 private:
  SplittingLaw law_;
  GapLawConfig config_;
  std::vector<double> grid_;

  std::vector<double> phi_tab_;          // uniform on [0,1]
  std::vector<double> w_grid_, d_tab_;   // graded grid, D(w)
  double c_t_ = 0.0;
  MonotoneCubic x_quantile_, t_quantile_;
};

GapLawInputs build_inputs(const SplittingLaw& law, const GapLawConfig& config = {});

struct SolveDiagnostics {
  int sweeps = 0;
  double final_change = 0.0;
  double residual = 0.0;  // sup |T f - f| of the returned iterate
  bool converged = false;
  std::vector<double> change_history;
};

// Fixed-point iteration for the density of Z, renormalized to unit mass each
// sweep. Throws on non-convergence unless diag is supplied (then reported).
std::vector<double> solve_fZ(const GapLawInputs& inputs, double tol, int max_sweeps,
                             SolveDiagnostics* diag = nullptr);

struct GapLawSolution {
  GapLawConfig config;
  std::vector<double> grid;
  std::vector<double> f_Z;
  std::vector<double> q;      // density of Q^{1/alpha}
  std::vector<double> q_cum;  // running integral of q (ends near 1)
  std::vector<double> g;      // normalized gap density
  std::vector<double> G;      // CDF of g
  double rho = 0.0;           // E Q^{-1/alpha}
  double c_T = 0.0;
  SolveDiagnostics diagnostics;

  double q_at(double r) const;
  double q_cdf(double r) const;  // q_cum rescaled to end exactly at 1
  double g_at(double x) const;
  double gap_cdf(double x) const;  // G
  double mean_gap() const;         // int x g dx, should be 1
};

GapLawSolution derive_q_rho_g(const std::vector<double>& f_Z, const GapLawInputs& inputs,
                              SolveDiagnostics diagnostics = {});

// Convenience: build inputs, solve, derive.
GapLawSolution solve_gap_law(const SplittingLaw& law, const GapLawConfig& config = {});

// Moment generating function of Z via the product series; |t| < 1.
double mgf_mZ(double t, int max_terms, const GapLawInputs& inputs);
double mean_Z(const GapLawInputs& inputs);  // 1/(1 - h(alpha))

struct ChainOracleResult {
  std::vector<double> records;  // Q^{1/alpha} draws after burn-in
  Histogram histogram;          // normalized
  Summary z_summary;            // Z chain statistics after burn-in
};

// Monte Carlo perpetuity chain Z <- Z e^{-alpha X} + xi, recording
// Q^{1/alpha} = Z^{1/alpha} e^{-T} with fresh T per record.
ChainOracleResult mc_fixed_point_oracle(const GapLawInputs& inputs, std::uint64_t chain_length,
                                        std::uint64_t burn_in, std::uint64_t seed);

struct TailFit {
  double beta_hat = 0.0;
  double theta_hat = 0.0;
  double beta_window_lo = 0.0, beta_window_hi = 0.0;
  double theta_window_lo = 0.0, theta_window_hi = 0.0;
  std::size_t beta_points = 0, theta_points = 0;
  double beta_expected = 0.0;   // law's near-zero exponent
  double theta_expected = 0.0;  // rho^{-alpha}
};

// Near-zero exponent from log g vs log x on [1e-3, 1e-2]; tail decay rate
// from -log(g x^{2-2a}) vs x^alpha on the upper resolvable window.
TailFit tail_fit(const GapLawSolution& solution, const SplittingLaw& law);

}  // namespace nucleate
