#include "nucleate/gap_law.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "nucleate/parallel.hpp"

namespace nucleate {

namespace {

// 0, then log-spaced on [1e-6, 1], then linear on [1, r_max].
std::vector<double> make_grid(double r_max, int nodes) {
  if (nodes < 256 || !(r_max > 2.0)) throw std::invalid_argument("gap law: bad grid spec");
  const int n_log = nodes / 2;
  const int n_lin = nodes - n_log - 1;
  std::vector<double> grid;
  grid.reserve(nodes);
  grid.push_back(0.0);
  const double lo = 1e-6;
  for (int i = 0; i < n_log; ++i)
    grid.push_back(lo * std::pow(1.0 / lo, static_cast<double>(i) / (n_log - 1)));
  for (int i = 1; i <= n_lin; ++i)
    grid.push_back(1.0 + (r_max - 1.0) * static_cast<double>(i) / n_lin);
  return grid;
}

inline double fractional_root(double x, double inv_alpha) {
  if (inv_alpha == 0.25) return std::sqrt(std::sqrt(x));
  if (inv_alpha == 0.5) return std::sqrt(x);
  if (inv_alpha == 1.0) return x;
  return std::pow(x, inv_alpha);
}

}  // namespace

GapLawInputs::GapLawInputs(const SplittingLaw& law, const GapLawConfig& config)
    : law_(law), config_(config), grid_(make_grid(config.r_max, config.grid_nodes)) {
  // Uniform table of phi for O(1) kernel lookups.
  constexpr int kPhiNodes = 4096;
  phi_tab_.resize(kPhiNodes + 1);
  for (int i = 0; i <= kPhiNodes; ++i)
    phi_tab_[i] = law_.density(static_cast<double>(i) / kPhiNodes);

  // Partial moment D(w) = int_0^w s phi(s) ds on a graded grid; the near-zero
  // cells are geometric so the w^{2+beta} vanishing keeps relative accuracy.
  // Gauss panels against the exact density, not the linear table.
  constexpr int kWNodes = 4096;
  w_grid_.clear();
  w_grid_.push_back(0.0);
  for (int i = 0; i < kWNodes; ++i)
    w_grid_.push_back(1e-9 * std::pow(1e9, static_cast<double>(i) / (kWNodes - 1)));
  d_tab_.assign(w_grid_.size(), 0.0);
  const GaussRule rule = gauss_legendre(6);
  for (std::size_t i = 1; i < w_grid_.size(); ++i) {
    const double a = w_grid_[i - 1], b = w_grid_[i];
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    double cell = 0.0;
    for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
      const double s = mid + half * rule.nodes[k];
      cell += rule.weights[k] * s * law_.density(s);
    }
    d_tab_[i] = d_tab_[i - 1] + half * cell;
  }

  // Normalizer: 1/c_T = int_0^inf u e^{-2u} phi(e^{-u}) du, evaluated in the
  // substituted form int_0^1 s (-log s) phi(s) ds. Paneled so the adaptive
  // rule cannot mistake the end-vanishing integrand for zero.
  double inv_ct = 0.0;
  const auto ct_integrand = [&](double s) {
    return s > 0.0 ? -s * std::log(s) * phi(s) : 0.0;
  };
  for (const auto& [a, b] : {std::pair{0.0, 0.25}, {0.25, 0.5}, {0.5, 0.75}, {0.75, 1.0}})
    inv_ct += adaptive_simpson(ct_integrand, a, b, 2.5e-13);
  c_t_ = 1.0 / inv_ct;

  // Quantile of X via C(w) = int_0^w 2 s phi(s) ds = 2 D(w); F_X(x) = 1 - C(e^{-x}).
  {
    std::vector<double> qx, qy;
    qx.reserve(w_grid_.size());
    qy.reserve(w_grid_.size());
    for (std::size_t i = 0; i < w_grid_.size(); ++i) {
      const double c = 2.0 * d_tab_[i];
      if (qx.empty() || c > qx.back()) {
        qx.push_back(c);
        qy.push_back(w_grid_[i]);
      }
    }
    x_quantile_ = MonotoneCubic(std::move(qx), std::move(qy));
  }

  // Quantile of T from the tabulated CDF of f_T.
  {
    constexpr int kTNodes = 4096;
    const double t_max = 46.0;
    std::vector<double> tg(kTNodes + 1), ft(kTNodes + 1);
    for (int i = 0; i <= kTNodes; ++i) {
      tg[i] = t_max * static_cast<double>(i) / kTNodes;
      ft[i] = f_T(tg[i]);
    }
    const std::vector<double> cdf = cumulative_trapezoid(tg, ft);
    std::vector<double> qx, qy;
    for (int i = 0; i <= kTNodes; ++i) {
      const double c = std::min(cdf[i], 1.0);
      if (qx.empty() || c > qx.back()) {
        qx.push_back(c);
        qy.push_back(tg[i]);
      }
    }
    t_quantile_ = MonotoneCubic(std::move(qx), std::move(qy));
  }
}

double GapLawInputs::phi(double s) const {
  if (s <= 0.0 || s >= 1.0) {
    if (s == 0.0 || s == 1.0) return law_.limit_at_zero();
    throw std::domain_error("GapLawInputs::phi: s outside [0,1]");
  }
  const double pos = s * (phi_tab_.size() - 1);
  const auto i = static_cast<std::size_t>(pos);
  const double t = pos - static_cast<double>(i);
  return phi_tab_[i] + t * (phi_tab_[i + 1] - phi_tab_[i]);
}

double GapLawInputs::f_X(double x) const {
  if (x < 0.0) throw std::domain_error("f_X: x >= 0");
  return 2.0 * std::exp(-2.0 * x) * phi(std::exp(-x));
}

double GapLawInputs::f_T(double t) const {
  if (t < 0.0) throw std::domain_error("f_T: t >= 0");
  const double w = std::exp(-t);
  return c_t_ * lerp_table(w_grid_, d_tab_, w);
}

double GapLawInputs::h_transform(double t) const {
  // 2 int_0^1 s^{t+1} phi(s) ds via power-law weighted cells of the table.
  const int n = static_cast<int>(phi_tab_.size());
  std::vector<double> grid(n), vals(phi_tab_.begin(), phi_tab_.end());
  for (int i = 0; i < n; ++i) grid[i] = static_cast<double>(i) / (n - 1);
  return 2.0 * powerlaw_cumulative(grid, vals, t + 1.0).back();
}

double GapLawInputs::sample_X(Rng& rng) const {
  const double w = std::clamp(x_quantile_(rng.uniform()), 1e-300, 1.0);
  return -std::log(w);
}

double GapLawInputs::sample_T(Rng& rng) const { return t_quantile_(rng.uniform()); }

GapLawInputs build_inputs(const SplittingLaw& law, const GapLawConfig& config) {
  return GapLawInputs(law, config);
}

std::vector<double> solve_fZ(const GapLawInputs& inputs, double tol, int max_sweeps,
                             SolveDiagnostics* diag) {
  const auto& r = inputs.grid();
  const std::size_t n = r.size();
  const double alpha = inputs.law().alpha;
  const double inv_alpha = 1.0 / alpha;
  const double beta = inputs.law().near_zero_exponent();

  // Gamma-shaped start matching both known asymptotics.
  std::vector<double> f(n);
  for (std::size_t i = 0; i < n; ++i)
    f[i] = std::pow(r[i], (2.0 + beta) / alpha) * std::exp(-r[i]);
  const double mass0 = powerlaw_cumulative(r, f, 0.0).back();
  for (auto& v : f) v /= mass0;

  SolveDiagnostics local;
  std::vector<double> kernel(n), outer(n), f_next(n);
  const auto apply_operator = [&](const std::vector<double>& fin, std::vector<double>& fout) {
    // K(y_j) = int_{y_j}^{r_max} u^{-2/alpha} phi((y_j/u)^{1/alpha}) f(u) du,
    // per-cell power-law weights; rows are independent.
    parallel_for_indexed(n, [&](std::size_t j) {
      const double y = r[j];
      const double p = -2.0 * inv_alpha;
      // Moment of u^q over a cell. Divergent pieces at a = 0 carry a weight
      // that vanishes there (f_Z(0) = 0), so they are dropped; the true
      // first-cell contribution is O(r_1^{(alpha+beta)/alpha}) and below the
      // quadrature floor.
      const auto pmom = [](double q, double a, double b) {
        if (a <= 0.0) {
          if (q <= -1.0) return 0.0;
          return std::pow(b, q + 1.0) / (q + 1.0);
        }
        if (q == -1.0) return std::log(b / a);
        return (std::pow(b, q + 1.0) - std::pow(a, q + 1.0)) / (q + 1.0);
      };
      double acc = 0.0;
      double g_prev = (j + 1 < n) ? inputs.phi(1.0) * fin[j] : 0.0;
      for (std::size_t i = j + 1; i < n; ++i) {
        const double a = r[i - 1], b = r[i];
        const double g_curr = inputs.phi(fractional_root(y / b, inv_alpha)) * fin[i];
        // int_a^b u^p (c0 + c1 u) du with g linear on the cell
        const double c1 = (g_curr - g_prev) / (b - a);
        const double c0 = g_prev - c1 * a;
        acc += c0 * pmom(p, a, b) + c1 * pmom(p + 1.0, a, b);
        g_prev = g_curr;
      }
      kernel[j] = acc;
    });
    for (std::size_t j = 0; j < n; ++j) outer[j] = std::exp(r[j]) * kernel[j];
    const std::vector<double> cum = powerlaw_cumulative(r, outer, (2.0 - alpha) / alpha);
    for (std::size_t j = 0; j < n; ++j)
      fout[j] = 2.0 / alpha * std::exp(-r[j]) * cum[j];
  };

  for (int sweep = 1; sweep <= max_sweeps; ++sweep) {
    apply_operator(f, f_next);
    const double mass = powerlaw_cumulative(r, f_next, 0.0).back();
    double change = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      f_next[i] /= mass;
      change = std::max(change, std::abs(f_next[i] - f[i]));
    }
    f.swap(f_next);
    local.sweeps = sweep;
    local.final_change = change;
    local.change_history.push_back(change);
    if (change < tol) {
      local.converged = true;
      break;
    }
  }

  // Residual of the returned iterate under one more (renormalized) sweep.
  apply_operator(f, f_next);
  const double mass = powerlaw_cumulative(r, f_next, 0.0).back();
  double residual = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    residual = std::max(residual, std::abs(f_next[i] / mass - f[i]));
  local.residual = residual;

  if (diag) *diag = local;
  if (!local.converged && !diag)
    throw std::runtime_error("solve_fZ: no convergence after max_sweeps");
  return f;
}

GapLawSolution derive_q_rho_g(const std::vector<double>& f_Z, const GapLawInputs& inputs,
                              SolveDiagnostics diagnostics) {
  const auto& r = inputs.grid();
  const std::size_t n = r.size();
  const double alpha = inputs.law().alpha;

  GapLawSolution sol;
  sol.config = inputs.config();
  sol.grid = r;
  sol.f_Z = f_Z;
  sol.c_T = inputs.c_T();
  sol.diagnostics = std::move(diagnostics);
  sol.q.assign(n, 0.0);
  sol.g.assign(n, 0.0);

  // q(r) = (1/r) int_{r^alpha}^{inf} f_T((log s - alpha log r)/alpha) f_Z(s) ds.
  parallel_for_indexed(n - 1, [&](std::size_t idx) {
    const std::size_t i = idx + 1;
    const double ri = r[i];
    const double ra = std::pow(ri, alpha);
    if (ra >= r.back()) return;
    const double log_ra = alpha * std::log(ri);
    const auto it = std::upper_bound(r.begin(), r.end(), ra);
    std::size_t j0 = static_cast<std::size_t>(it - r.begin());
    double acc = 0.0;
    // partial first cell from ra to r[j0]
    double s_prev = ra;
    double f_prev;
    {
      const double t0 = (r[j0] - r[j0 - 1]);
      const double w = (ra - r[j0 - 1]) / t0;
      f_prev = (f_Z[j0 - 1] + w * (f_Z[j0] - f_Z[j0 - 1])) * inputs.f_T(0.0);
    }
    for (std::size_t j = j0; j < n; ++j) {
      const double s = r[j];
      const double t = std::max(0.0, (std::log(s) - log_ra) / alpha);
      const double val = f_Z[j] * inputs.f_T(t);
      acc += 0.5 * (s - s_prev) * (val + f_prev);
      s_prev = s;
      f_prev = val;
    }
    sol.q[i] = acc / ri;
  });

  // rho = E Q^{-1/alpha} = int q(y)/y dy; q vanishes like y^{1+beta} at zero.
  sol.rho = powerlaw_cumulative(r, sol.q, -1.0).back();
  if (!(sol.rho > 0.0) || !std::isfinite(sol.rho))
    throw std::runtime_error("derive_q_rho_g: rho quadrature diverged");

  // g(x) = q(x/rho)/(rho x); limit at zero from the first positive node.
  for (std::size_t i = 1; i < n; ++i) {
    const double x = r[i];
    const double rr = x / sol.rho;
    if (rr > r.back()) break;
    sol.g[i] = lerp_table(r, sol.q, rr) / (sol.rho * x);
  }
  if (inputs.law().near_zero_exponent() == 0.0 && n > 2 && r[1] > 0.0)
    sol.g[0] = sol.q[1] / r[1] / (sol.rho * sol.rho);

  sol.G = powerlaw_cumulative(r, sol.g, 0.0);
  sol.q_cum = powerlaw_cumulative(r, sol.q, 0.0);
  return sol;
}

double GapLawSolution::q_at(double r) const {
  if (r <= 0.0 || r >= grid.back()) return 0.0;
  return lerp_table(grid, q, r);
}

double GapLawSolution::q_cdf(double r) const {
  if (r <= 0.0) return 0.0;
  if (r >= grid.back()) return 1.0;
  return lerp_table(grid, q_cum, r) / q_cum.back();
}

double GapLawSolution::g_at(double x) const {
  if (x < 0.0 || x >= grid.back()) return 0.0;
  return lerp_table(grid, g, x);
}

double GapLawSolution::gap_cdf(double x) const {
  if (x <= 0.0) return 0.0;
  if (x >= grid.back()) return G.back();
  return lerp_table(grid, G, x);
}

double GapLawSolution::mean_gap() const {
  std::vector<double> xg(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) xg[i] = grid[i] * g[i];
  return trapezoid(grid, xg);
}

GapLawSolution solve_gap_law(const SplittingLaw& law, const GapLawConfig& config) {
  const GapLawInputs inputs = build_inputs(law, config);
  SolveDiagnostics diag;
  const std::vector<double> f = solve_fZ(inputs, config.tol, config.max_sweeps, &diag);
  if (!diag.converged) throw std::runtime_error("solve_gap_law: fixed point did not converge");
  return derive_q_rho_g(f, inputs, diag);
}

double mgf_mZ(double t, int max_terms, const GapLawInputs& inputs) {
  if (!(std::abs(t) < 1.0)) throw std::domain_error("mgf_mZ: need |t| < 1");
  const double alpha = inputs.law().alpha;
  double sum = 1.0;  // k = 0 term
  double term = 1.0;
  for (int k = 1; k <= max_terms; ++k) {
    term *= t / (1.0 - inputs.h_transform(k * alpha));
    sum += term;
    if (std::abs(term) < 1e-14 * std::abs(sum)) break;
  }
  return sum;
}

double mean_Z(const GapLawInputs& inputs) {
  return 1.0 / (1.0 - inputs.h_transform(inputs.law().alpha));
}

ChainOracleResult mc_fixed_point_oracle(const GapLawInputs& inputs, std::uint64_t chain_length,
                                        std::uint64_t burn_in, std::uint64_t seed) {
  if (chain_length <= burn_in)
    throw std::invalid_argument("mc_fixed_point_oracle: chain_length must exceed burn_in");
  const double alpha = inputs.law().alpha;
  const double inv_alpha = 1.0 / alpha;

  ChainOracleResult out;
  out.records.reserve(chain_length - burn_in);
  Rng rng(seed);
  double z = 1.0;
  std::vector<double> z_samples;
  z_samples.reserve(chain_length - burn_in);
  for (std::uint64_t i = 0; i < chain_length; ++i) {
    const double x = inputs.sample_X(rng);
    const double xi = rng.exponential(1.0);
    z = z * std::exp(-alpha * x) + xi;
    if (i >= burn_in) {
      const double t = inputs.sample_T(rng);
      out.records.push_back(fractional_root(z, inv_alpha) * std::exp(-t));
      z_samples.push_back(z);
    }
  }
  double hi = 0.0;
  for (double v : out.records) hi = std::max(hi, v);
  out.histogram = make_histogram(out.records, 0.0, hi * 1.0000001, 128);
  out.z_summary = summarize(z_samples);
  return out;
}

TailFit tail_fit(const GapLawSolution& solution, const SplittingLaw& law) {
  TailFit fit;
  fit.beta_expected = law.near_zero_exponent();
  fit.theta_expected = std::pow(solution.rho, -law.alpha);

  // Near-zero window.
  fit.beta_window_lo = 1e-3;
  fit.beta_window_hi = 1e-2;
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < solution.grid.size(); ++i) {
    const double x = solution.grid[i];
    if (x < fit.beta_window_lo || x > fit.beta_window_hi) continue;
    if (solution.g[i] <= 0.0) continue;
    lx.push_back(std::log(x));
    ly.push_back(std::log(solution.g[i]));
  }
  if (lx.size() < 8) throw std::runtime_error("tail_fit: insufficient grid support near zero");
  fit.beta_points = lx.size();
  fit.beta_hat = fit_line(lx, ly).slope;

  // Upper window: the largest x where q(x/rho) is still resolved on the grid.
  const double a = law.limit_at_zero();
  const double x_hi = 0.95 * solution.rho * std::pow(solution.config.r_max, 1.0 / law.alpha);
  const double x_lo = 0.55 * x_hi;
  fit.theta_window_lo = x_lo;
  fit.theta_window_hi = x_hi;
  std::vector<double> tx, ty;
  for (std::size_t i = 0; i < solution.grid.size(); ++i) {
    const double x = solution.grid[i];
    if (x < x_lo || x > x_hi) continue;
    if (solution.g[i] <= 0.0) continue;
    tx.push_back(std::pow(x, law.alpha));
    ty.push_back(-std::log(solution.g[i] * std::pow(x, 2.0 - 2.0 * a)));
  }
  if (tx.size() < 8) throw std::runtime_error("tail_fit: insufficient grid support in the tail");
  fit.theta_points = tx.size();
  fit.theta_hat = fit_line(tx, ty).slope;
  return fit;
}

}  // namespace nucleate
