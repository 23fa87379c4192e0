#include "nucleate/splitting.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "nucleate/stats.hpp"

namespace nucleate {

GapConfiguration::GapConfiguration() : boundaries_{0.0, 1.0} {}

GapConfiguration::GapConfiguration(std::vector<double> boundaries)
    : boundaries_(std::move(boundaries)) {
  if (boundaries_.size() < 2 || boundaries_.front() != 0.0 || boundaries_.back() != 1.0)
    throw std::invalid_argument("GapConfiguration: boundaries must run from 0 to 1");
  for (std::size_t i = 1; i < boundaries_.size(); ++i)
    if (!(boundaries_[i] > boundaries_[i - 1]))
      throw std::invalid_argument("GapConfiguration: boundaries must be strictly increasing");
}

double GapConfiguration::max_gap() const {
  double m = 0.0;
  for (std::size_t j = 0; j + 1 < boundaries_.size(); ++j)
    m = std::max(m, boundaries_[j + 1] - boundaries_[j]);
  return m;
}

std::vector<double> GapConfiguration::gap_lengths() const {
  std::vector<double> lengths(gap_count());
  for (std::size_t j = 0; j < lengths.size(); ++j) lengths[j] = gap_length(j);
  return lengths;
}

void GapConfiguration::split(std::size_t j, double v) {
  if (j < 1 || j > gap_count()) throw std::out_of_range("GapConfiguration::split: gap index");
  if (!(v > 0.0 && v < 1.0)) throw std::invalid_argument("GapConfiguration::split: v in (0,1)");
  const double lo = boundaries_[j - 1];
  const double hi = boundaries_[j];
  boundaries_.insert(boundaries_.begin() + static_cast<std::ptrdiff_t>(j), lo + v * (hi - lo));
}

std::vector<double> selection_probabilities(const GapConfiguration& config,
                                            const SplittingLaw& law) {
  const std::size_t n = config.gap_count();
  std::vector<double> weights(n);
  const double m = config.max_gap();
  double total = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    weights[j] = std::pow(config.gap_length(j) / m, law.alpha);
    total += weights[j];
  }
  for (auto& w : weights) w /= total;
  return weights;
}

SplitStep split_step(GapConfiguration& config, const SplittingLaw& law,
                     const DensityTable& table, Rng& rng) {
  const std::vector<double> probs = selection_probabilities(config, law);
  const double u = rng.uniform();
  double acc = 0.0;
  std::size_t j = probs.size();  // falls through to the last gap on rounding
  for (std::size_t i = 0; i < probs.size(); ++i) {
    acc += probs[i];
    if (u < acc) {
      j = i + 1;
      break;
    }
  }
  double v = table.quantile(rng.uniform());
  v = std::clamp(v, 1e-14, 1.0 - 1e-14);
  config.split(j, v);
  return {j, v};
}

double GapStatistics::ks_against(const std::function<double(double)>& cdf) const {
  return ks_statistic(normalized, cdf);
}

double GapStatistics::counting_sup_deviation() const {
  double worst = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i)
    worst = std::max(worst, std::abs(counting[i] - grid[i]));
  return worst;
}

namespace {

GapStatistics collect_statistics(const GapConfiguration& config, std::uint64_t step, Rng& rng) {
  GapStatistics stats;
  stats.step = step;
  const std::size_t gaps = config.gap_count();
  stats.normalized.resize(gaps);
  for (std::size_t j = 0; j < gaps; ++j)
    stats.normalized[j] = static_cast<double>(gaps) * config.gap_length(j);
  std::sort(stats.normalized.begin(), stats.normalized.end());
  stats.max_gap = config.max_gap();
  stats.random_gap = stats.normalized.empty()
                         ? 0.0
                         : static_cast<double>(gaps) *
                               config.gap_length(rng.uniform_below(gaps));

  // Counting function: interior boundaries at or left of x, over n.
  const auto& z = config.boundaries();
  const double n_interior = static_cast<double>(z.size() - 2);
  stats.grid.resize(101);
  stats.counting.resize(101);
  for (int i = 0; i <= 100; ++i) {
    const double x = i / 100.0;
    stats.grid[i] = x;
    const auto it = std::upper_bound(z.begin() + 1, z.end() - 1, x);
    const auto count = static_cast<double>(it - (z.begin() + 1));
    stats.counting[i] = n_interior > 0.0 ? count / n_interior : 0.0;
  }
  return stats;
}

}  // namespace

std::vector<std::uint64_t> geometric_checkpoints(std::uint64_t steps) {
  std::vector<std::uint64_t> cp;
  for (std::uint64_t c = 16; c < steps; c *= 2) cp.push_back(c);
  cp.push_back(steps);
  return cp;
}

SplittingRun run_splitting(const SplittingLaw& law, std::uint64_t steps,
                           const GapConfiguration& init, std::uint64_t seed,
                           std::vector<std::uint64_t> checkpoints) {
  if (steps < 1) throw std::invalid_argument("run_splitting: steps >= 1");
  if (checkpoints.empty()) checkpoints = geometric_checkpoints(steps);
  std::sort(checkpoints.begin(), checkpoints.end());

  const DensityTable table = DensityTable::build(law);
  Rng rng(seed);
  Rng stats_rng(derive_seed(seed, 0xabcdULL));

  SplittingRun run;
  run.final_config = init;
  std::size_t next_cp = 0;
  for (std::uint64_t s = 1; s <= steps; ++s) {
    split_step(run.final_config, law, table, rng);
    while (next_cp < checkpoints.size() && checkpoints[next_cp] == s) {
      run.checkpoints.push_back(collect_statistics(run.final_config, s, stats_rng));
      ++next_cp;
    }
  }
  if (run.checkpoints.empty() || run.checkpoints.back().step != steps)
    run.checkpoints.push_back(collect_statistics(run.final_config, steps, stats_rng));
  return run;
}

}  // namespace nucleate
