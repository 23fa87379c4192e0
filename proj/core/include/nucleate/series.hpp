#pragma once

#include <string>
#include <vector>

namespace nucleate {

// Truncation orders for the fast splitting-density evaluator: k terms of the
// even power series plus sine corrections up to odd index m.
struct SeriesTruncation {
  int k = 9;
  int m = 5;

  void validate() const;  // throws std::invalid_argument unless k >= 0, m odd >= 1
};

// Riemann zeta for real s > 1, direct sum with Euler–Maclaurin tail.
double riemann_zeta(double s);

// |B(2l)| = 2 zeta(2l) (2l)! / (2 pi)^{2l}.
double bernoulli_abs(int ell);

// S_k(x) = sum_{n>=1} sin(n x)/n^k for k in {2,3,4}, 0 <= x <= 2 pi.
// Order 3 is an exact cubic; orders 2 and 4 use power-series expansions after
// folding x -> 2 pi - x into [0, pi].
double clausen_sum(int order, double x);

// Coefficients of the splitting-density sine series.
double a_coeff(int n);  // 4 tanh(n pi/2)/n^4 - pi/n^3
double b_coeff(int n);  // (4 - n pi)/n^4
double d_coeff(int n);  // 1 - tanh(n pi/2), in (0, 2 e^{-n pi})

enum class PsiMode { direct, fast };

// Unnormalized splitting density on [0,1]. Fast mode evaluates the truncated
// expansion at min(x, 1-x), so psi(x) == psi(1-x) bit for bit. Direct mode
// sums a_n sin(n pi x) over odd n <= n_direct and exists for cross-checks.
double psi(double x, SeriesTruncation trunc = {}, PsiMode mode = PsiMode::fast,
           int n_direct = 100000);

struct MuResult {
  double value = 0.0;
  double remainder_bound = 0.0;  // value + bound brackets the true normalizer
};

// Truncated normalizer (48/pi^4) sum_{odd k<=n} sech^2(k pi/2)/k^4 with an
// explicit geometric remainder bound. n_terms must be odd and >= 1.
MuResult mu(int n_terms);

// Saturated normalizer (remainder below double precision).
double mu_value();

// Normalized splitting density and its cumulative.
double phi0(double x, SeriesTruncation trunc = {});
double phi0_cdf(double x);

// Supremum bound on |phi0^{k,m} - phi0| from the truncation estimate.
double phi0_error_bound(SeriesTruncation trunc);

// Closed-form moments m_1..m_4 of phi0.
double phi0_moment(int order);
// Quadrature cross-check of the same moment.
double phi0_moment_quadrature(int order);

struct IdentityReport {
  struct Entry {
    std::string name;
    double residual = 0.0;
    double tol = 0.0;
    bool pass = false;
  };
  std::vector<Entry> entries;
  // Partial sums of sum_odd n a_n at increasing cutoffs; the residual decays
  // only like 1/cutoff, which is why the scored check uses the accelerated
  // form.
  std::vector<std::pair<int, double>> slow_partials;

  bool all_pass() const;
};

// Numerically verifies, each to tol:
//  (i)  4 sum_odd tanh(n pi/2)/n^5 = pi^5/96 + pi sum_odd sech^2(n pi/2)/n^4
//  (ii) sum_odd n a_n = 0
// (iii) sum_odd sin(n pi x)/n^3 = (pi^3/8) x (1-x) on a grid
IdentityReport verify_series_identities(double tol);

}  // namespace nucleate
