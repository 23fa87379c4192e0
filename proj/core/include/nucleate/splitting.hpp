#pragma once

#include <cstdint>
#include <vector>

#include "nucleate/density_table.hpp"
#include "nucleate/rng.hpp"

namespace nucleate {

// Ordered island boundaries 0 = z_0 < ... < z_{n+1} = 1. Boundaries are the
// stored representation, so total gap length is structurally 1.
class GapConfiguration {
 public:
  GapConfiguration();  // single gap (0, 1)
  explicit GapConfiguration(std::vector<double> boundaries);

  std::size_t gap_count() const { return boundaries_.size() - 1; }
  double gap_length(std::size_t j) const { return boundaries_[j + 1] - boundaries_[j]; }
  double max_gap() const;
  const std::vector<double>& boundaries() const { return boundaries_; }
  std::vector<double> gap_lengths() const;

  // Inserts boundary z_{j-1} + v * L_j (gap index 1-based).
  void split(std::size_t j, double v);

 private:
  std::vector<double> boundaries_;
};

// p_j proportional to L_j^alpha, computed on max-normalized gaps so alpha = 4
// cannot underflow even with 10^4 gaps.
std::vector<double> selection_probabilities(const GapConfiguration& config,
                                            const SplittingLaw& law);

struct SplitStep {
  std::size_t gap_index = 0;  // 1-based
  double fraction = 0.0;
};

// One kernel step: categorical gap choice by cumulative inversion, split
// fraction drawn from the law's quantile table.
SplitStep split_step(GapConfiguration& config, const SplittingLaw& law,
                     const DensityTable& table, Rng& rng);

struct GapStatistics {
  std::uint64_t step = 0;          // n: interior boundary count
  std::vector<double> normalized;  // (n+1) * L_i, sorted
  std::vector<double> grid;        // x grid for the counting function
  std::vector<double> counting;    // C_n(x)/n on the grid
  double max_gap = 0.0;
  double random_gap = 0.0;  // one draw of (n+1) L_U

  double ks_against(const std::function<double(double)>& cdf) const;
  double counting_sup_deviation() const;  // sup |C_n(x)/n - x|
};

struct SplittingRun {
  GapConfiguration final_config;
  std::vector<GapStatistics> checkpoints;
};

// Iterates the splitting kernel for `steps` insertions, emitting statistics
// at the requested checkpoints (plus the final step if absent).
SplittingRun run_splitting(const SplittingLaw& law, std::uint64_t steps,
                           const GapConfiguration& init, std::uint64_t seed,
                           std::vector<std::uint64_t> checkpoints = {});

// Geometric checkpoint ladder 2^k scaled up to `steps`.
std::vector<std::uint64_t> geometric_checkpoints(std::uint64_t steps);

}  // namespace nucleate
