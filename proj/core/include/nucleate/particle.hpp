#pragma once

#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

#include "nucleate/stats.hpp"

namespace nucleate {

// Figure-style lattice dynamics: active particles perform continuous-time
// simple random walk at total rate N^2 (variance 1 per unit time, so the
// scaling limit is standard Brownian motion). The doubled convention exists
// for sensitivity checks.
enum class JumpRateConvention { total_n_squared, total_two_n_squared };

struct LatticeSpec {
  int sites_per_unit = 100;  // N >= 16
  JumpRateConvention convention = JumpRateConvention::total_n_squared;
};

// Gaussian stepper with Brownian-bridge absorption and pairwise meeting
// tests. Approximate (no exact multi-particle meeting sampler exists); the
// lattice mode is the reference dynamics.
struct ContinuumSpec {
  double dt_cap = 1e-4;  // step never exceeds this nor 1e-4 * (min distance)^2
};

struct SimParams {
  double length = 1.0;   // substrate [0, length]
  double lambda = 0.1;   // deposition intensity per unit length
  std::variant<LatticeSpec, ContinuumSpec> mode = LatticeSpec{};
};

// Exactly one of the two stop rules; t_max is mandatory when lambda == 0.
struct StopRule {
  std::optional<std::uint64_t> n_nucleations;
  std::optional<double> t_max;

  static StopRule nucleations(std::uint64_t n) { return {n, std::nullopt}; }
  static StopRule until(double t) { return {std::nullopt, t}; }
};

struct NucleationRecord {
  std::uint64_t index = 0;      // n, 1-based
  double time = 0.0;            // nu_n
  double location_abs = 0.0;    // absolute position in [0, length]
  std::uint32_t gap_index = 0;  // 1-based gap at event time
  double location_rel = 0.0;    // relative position within that gap
  std::uint64_t cycle = 0;      // enclosing cycle k
};

struct CycleRecord {
  std::uint64_t index = 0;  // k
  double start = 0.0;       // sigma_k
  double end = 0.0;         // eta_k
  std::uint64_t depositions = 0;
  std::uint64_t nucleations = 0;
};

struct SimResult {
  // Normalized island boundaries (first 0, last 1) after each nucleation.
  std::vector<std::vector<double>> gap_configs;
  std::vector<NucleationRecord> nucleations;
  std::vector<CycleRecord> cycles;  // completed cycles only
  double clock = 0.0;
  std::uint64_t depositions = 0;
  std::uint64_t absorbed = 0;
  std::uint64_t active_remaining = 0;
};

SimResult simulate_until(const SimParams& params, const StopRule& stop, std::uint64_t seed);

struct FirstCycleResult {
  Proportion nucleation_probability;  // E_1 frequency over replicas
  std::vector<double> locations;      // first-nucleation relative location, given E_1
};

// Runs the process from empty until the end of the first cycle, over
// independent replicas (replica r uses the stream derived from seed and r).
FirstCycleResult first_cycle_nucleation(const SimParams& params, std::uint64_t replicas,
                                        std::uint64_t seed);

struct FirstNucleationResult {
  std::vector<double> locations;  // relative location of the first nucleation
};

// Runs each replica until its first nucleation (however many cycles that
// takes); the location histogram is the finite-lambda analogue of the
// splitting density.
FirstNucleationResult first_nucleation_ensemble(const SimParams& params, std::uint64_t replicas,
                                                std::uint64_t seed);

struct ScalingReport {
  Proportion prob_long;      // substrate [0, ell] at rate lambda
  Proportion prob_unit;      // substrate [0, 1] at rate ell^3 lambda
  double prob_difference = 0.0;
  double pooled_std_error = 0.0;
  double ks_statistic = 0.0;
  double ks_critical_1pct = 0.0;
  std::size_t samples_long = 0;
  std::size_t samples_unit = 0;
};

// First-cycle nucleation statistics on [0, ell] at rate lambda versus the
// rescaled process on [0,1] at rate ell^3 lambda, matched lattice resolution
// per unit length.
ScalingReport scaling_check(double ell, double lambda, int sites_per_unit,
                            std::uint64_t replicas, std::uint64_t seed);

}  // namespace nucleate
