#include "nucleate/particle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "nucleate/parallel.hpp"
#include "nucleate/rng.hpp"

namespace nucleate {

namespace {

// Number of failures before the first success of a Bernoulli(p) sequence.
std::uint64_t geometric(Rng& rng, double p) {
  if (p <= 0.0) return std::numeric_limits<std::uint64_t>::max();
  const double g = std::log(rng.uniform_pos()) / std::log1p(-p);
  if (g >= 9.0e18) return std::numeric_limits<std::uint64_t>::max();
  return static_cast<std::uint64_t>(g);
}

// Unbiased-enough index pick from the top 63 bits (bias ~2^-63).
inline std::uint32_t pick_index(std::uint64_t r, std::uint64_t n) {
  return static_cast<std::uint32_t>(
      (static_cast<unsigned __int128>(r >> 1) * n) >> 63);
}

// Event-driven lattice dynamics on sites {0, 1/N, ..., S/N}. The embedded
// chain is exact: every transition is a particle jump or a deposition, the
// jump count before the next deposition is geometric, and elapsed time over k
// transitions at constant total rate R is Gamma(k)/R, sampled at regime ends.
// Runs with a t_max stop sample per-transition holding times instead so the
// clock never overshoots the horizon.
class LatticeEngine {
 public:
  struct Options {
    std::optional<std::uint64_t> stop_nucleations;
    std::optional<double> stop_tmax;
    bool stop_at_first_cycle_end = false;
    bool collect_configs = true;
    bool track_time = true;
  };

  LatticeEngine(const SimParams& params, const LatticeSpec& spec) {
    if (spec.sites_per_unit < 16)
      throw std::invalid_argument("lattice mode: need at least 16 sites per unit");
    N_ = spec.sites_per_unit;
    const double sites = params.length * N_;
    S_ = static_cast<int>(std::lround(sites));
    if (S_ < 2 || std::abs(sites - S_) > 1e-9 * std::max(1.0, sites))
      throw std::invalid_argument("lattice mode: length must be a positive multiple of 1/N");
    jump_rate_ = (spec.convention == JumpRateConvention::total_n_squared)
                     ? static_cast<double>(N_) * N_
                     : 2.0 * static_cast<double>(N_) * N_;
    dep_rate_ = params.lambda * (S_ - 1) / static_cast<double>(N_);
    occ_.assign(S_ + 1, 0);
    pid_.assign(S_ + 1, 0);
  }

  SimResult run(std::uint64_t seed, const Options& opt) {
    rng_.reseed(seed);
    reset();
    res_ = SimResult{};
    opt_ = &opt;
    const bool per_step_time = opt.stop_tmax.has_value();
    stop_ = false;

    for (;;) {
      if (stop_) break;
      const std::uint64_t A = active_.size();
      if (A == 0) {
        if (dep_rate_ <= 0.0) {
          if (opt.stop_tmax) t_ = *opt.stop_tmax;
          break;
        }
        if (per_step_time) {
          const double dt = rng_.exponential(dep_rate_);
          if (t_ + dt > *opt.stop_tmax) {
            t_ = *opt.stop_tmax;
            break;
          }
          t_ += dt;
        } else {
          steps_ = 1;
          flush_time(dep_rate_);
        }
        deposit();
        continue;
      }

      const double r_total = static_cast<double>(A) * jump_rate_ + dep_rate_;
      const double p_dep = dep_rate_ / r_total;
      const std::uint64_t jumps_before_dep = geometric(rng_, p_dep);
      bool regime_ended = false;
      for (std::uint64_t j = 0; j < jumps_before_dep; ++j) {
        if (per_step_time) {
          const double dt = rng_.exponential(r_total);
          if (t_ + dt > *opt.stop_tmax) {
            t_ = *opt.stop_tmax;
            stop_ = true;
            break;
          }
          t_ += dt;
        } else {
          ++steps_;
        }
        const std::uint64_t r = rng_.next_u64();
        const std::uint32_t idx = (A > 1) ? pick_index(r, A) : 0u;
        const std::int32_t site = active_[idx];
        const std::int32_t dest = site + ((r & 1u) ? 1 : -1);
        const std::uint8_t o = occ_[dest];
        if (o == 0) {
          occ_[site] = 0;
          occ_[dest] = 2;
          pid_[dest] = static_cast<std::int32_t>(idx);
          active_[idx] = dest;
          continue;
        }
        if (!per_step_time) flush_time(r_total);
        if (o == 1) {
          absorb(idx);
        } else {
          occ_[site] = 0;
          nucleate_at(dest, idx, static_cast<std::uint32_t>(pid_[dest]));
        }
        regime_ended = true;
        break;
      }
      if (stop_) break;
      if (!regime_ended) {
        if (per_step_time) {
          const double dt = rng_.exponential(r_total);
          if (t_ + dt > *opt.stop_tmax) {
            t_ = *opt.stop_tmax;
            break;
          }
          t_ += dt;
        } else {
          ++steps_;
          flush_time(r_total);
        }
        deposit();
      }
    }

    res_.clock = t_;
    res_.active_remaining = active_.size();
    return std::move(res_);
  }

 private:
  void reset() {
    std::fill(occ_.begin(), occ_.end(), 0);
    occ_[0] = occ_[S_] = 1;
    active_.clear();
    islands_.assign({0, S_});
    t_ = 0.0;
    steps_ = 0;
    cycle_open_ = false;
    cycle_ = CycleRecord{};
  }

  void flush_time(double total_rate) {
    if (steps_ == 0) return;
    if (opt_->track_time) {
      const double g = (steps_ == 1) ? rng_.exponential(1.0)
                                     : rng_.gamma(static_cast<double>(steps_));
      t_ += g / total_rate;
    }
    steps_ = 0;
  }

  void remove_active(std::uint32_t idx) {
    active_[idx] = active_.back();
    pid_[active_[idx]] = static_cast<std::int32_t>(idx);
    active_.pop_back();
  }

  void absorb(std::uint32_t idx) {
    occ_[active_[idx]] = 0;
    remove_active(idx);
    ++res_.absorbed;
    if (active_.empty()) close_cycle();
  }

  void close_cycle() {
    cycle_.end = t_;
    res_.cycles.push_back(cycle_);
    cycle_open_ = false;
    if (opt_->stop_at_first_cycle_end) stop_ = true;
  }

  void nucleate_at(std::int32_t site, std::uint32_t a, std::uint32_t b) {
    occ_[site] = 1;
    const std::uint32_t hi = std::max(a, b), lo = std::min(a, b);
    remove_active(hi);
    if (hi != lo) remove_active(lo);

    const auto it = std::upper_bound(islands_.begin(), islands_.end(), site);
    const auto gap = static_cast<std::uint32_t>(it - islands_.begin());
    NucleationRecord rec;
    rec.index = res_.nucleations.size() + 1;
    rec.time = t_;
    rec.location_abs = static_cast<double>(site) / N_;
    rec.gap_index = gap;
    rec.location_rel = static_cast<double>(site - *(it - 1)) / static_cast<double>(*it - *(it - 1));
    rec.cycle = cycle_.index;
    res_.nucleations.push_back(rec);
    ++cycle_.nucleations;
    islands_.insert(it, site);

    if (opt_->collect_configs) {
      std::vector<double> config(islands_.size());
      for (std::size_t i = 0; i < islands_.size(); ++i)
        config[i] = static_cast<double>(islands_[i]) / S_;
      res_.gap_configs.push_back(std::move(config));
    }
    if (active_.empty()) close_cycle();
    if (opt_->stop_nucleations && res_.nucleations.size() >= *opt_->stop_nucleations)
      stop_ = true;
  }

  void deposit() {
    ++res_.depositions;
    const std::int32_t site = 1 + static_cast<std::int32_t>(rng_.uniform_below(S_ - 1));
    const bool was_idle = active_.empty();
    const std::uint8_t o = occ_[site];
    if (o == 1) {
      ++res_.absorbed;  // lands on an island, captured immediately
      if (cycle_open_) ++cycle_.depositions;
      return;
    }
    if (was_idle) {
      cycle_ = CycleRecord{};
      cycle_.index = res_.cycles.size() + 1;
      cycle_.start = t_;
      cycle_open_ = true;
    }
    ++cycle_.depositions;
    if (o == 0) {
      occ_[site] = 2;
      pid_[site] = static_cast<std::int32_t>(active_.size());
      active_.push_back(site);
      return;
    }
    // Lands on an active particle: immediate nucleation; the deposited
    // particle is never active.
    nucleate_at(site, static_cast<std::uint32_t>(pid_[site]),
                static_cast<std::uint32_t>(pid_[site]));
  }

  int S_ = 0;
  int N_ = 0;
  double jump_rate_ = 0.0;
  double dep_rate_ = 0.0;

  Rng rng_;
  std::vector<std::uint8_t> occ_;
  std::vector<std::int32_t> pid_;
  std::vector<std::int32_t> active_;
  std::vector<std::int32_t> islands_;
  double t_ = 0.0;
  std::uint64_t steps_ = 0;
  bool cycle_open_ = false;
  bool stop_ = false;
  CycleRecord cycle_;
  SimResult res_;
  const Options* opt_ = nullptr;
};

// Continuum stepper: Gaussian increments, Brownian-bridge absorption tests
// against the bracketing islands, sign/bridge meeting tests for neighbouring
// particles. Approximate, as documented; the lattice engine is the reference.
class ContinuumEngine {
 public:
  ContinuumEngine(const SimParams& params, const ContinuumSpec& spec)
      : length_(params.length), lambda_(params.lambda), dt_cap_(spec.dt_cap) {
    if (!(spec.dt_cap > 0.0)) throw std::invalid_argument("continuum mode: dt must be > 0");
  }

  SimResult run(std::uint64_t seed, const LatticeEngine::Options& opt) {
    Rng rng(seed);
    SimResult res;
    std::vector<double> pos;
    std::vector<double> islands{0.0, length_};
    double t = 0.0;
    bool cycle_open = false;
    CycleRecord cycle;
    const double dep_rate = lambda_ * length_;
    double next_dep = dep_rate > 0.0 ? rng.exponential(dep_rate)
                                     : std::numeric_limits<double>::infinity();
    const double t_max = opt.stop_tmax.value_or(std::numeric_limits<double>::infinity());

    const auto close_cycle = [&] {
      cycle.end = t;
      res.cycles.push_back(cycle);
      cycle_open = false;
    };
    const auto record_nucleation = [&](double z) {
      const auto it = std::upper_bound(islands.begin(), islands.end(), z);
      NucleationRecord rec;
      rec.index = res.nucleations.size() + 1;
      rec.time = t;
      rec.location_abs = z;
      rec.gap_index = static_cast<std::uint32_t>(it - islands.begin());
      rec.location_rel = (z - *(it - 1)) / (*it - *(it - 1));
      rec.cycle = cycle.index;
      res.nucleations.push_back(rec);
      ++cycle.nucleations;
      islands.insert(it, z);
      if (opt.collect_configs) {
        std::vector<double> config(islands.size());
        for (std::size_t i = 0; i < islands.size(); ++i) config[i] = islands[i] / length_;
        res.gap_configs.push_back(std::move(config));
      }
    };

    for (;;) {
      if (opt.stop_nucleations && res.nucleations.size() >= *opt.stop_nucleations) break;
      if (t >= t_max) break;
      if (pos.empty()) {
        if (next_dep > t_max) {
          t = t_max;
          break;
        }
        t = next_dep;
        next_dep = t + rng.exponential(dep_rate);
        ++res.depositions;
        const double x = rng.uniform(0.0, length_);
        cycle = CycleRecord{};
        cycle.index = res.cycles.size() + 1;
        cycle.start = t;
        cycle.depositions = 1;
        cycle_open = true;
        pos.push_back(x);
        continue;
      }

      // Smallest island gap bounds the step, per the stepping rule.
      double min_gap = length_;
      for (std::size_t i = 1; i < islands.size(); ++i)
        min_gap = std::min(min_gap, islands[i] - islands[i - 1]);
      double dt = std::min(dt_cap_, 1e-4 * min_gap * min_gap);
      dt = std::min(dt, std::max(1e-12, t_max - t));
      bool deposit_now = false;
      if (t + dt >= next_dep) {
        dt = next_dep - t;
        deposit_now = true;
      }

      std::vector<double> old_pos = pos;
      const double sd = std::sqrt(dt);
      for (auto& x : pos) x += sd * rng.normal();
      t += dt;

      // Approximate first event inside the step: earliest crossing fraction
      // among absorptions and meetings.
      struct Event {
        double frac;
        int kind;  // 0 absorb, 1 meet
        std::size_t i, j;
        double where;
      };
      std::vector<Event> events;
      for (std::size_t i = 0; i < pos.size(); ++i) {
        const auto it = std::upper_bound(islands.begin(), islands.end(), old_pos[i]);
        const double right = *it, left = *(it - 1);
        for (const double barrier : {left, right}) {
          const double d0 = std::abs(old_pos[i] - barrier);
          const double d1 = std::abs(pos[i] - barrier);
          const bool crossed = (old_pos[i] - barrier) * (pos[i] - barrier) <= 0.0;
          if (crossed) {
            events.push_back({d0 / (d0 + d1 + 1e-300), 0, i, i, barrier});
          } else if (rng.uniform() < std::exp(-2.0 * d0 * d1 / dt)) {
            events.push_back({0.5, 0, i, i, barrier});
          }
        }
      }
      std::vector<std::size_t> order(pos.size());
      for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
      std::sort(order.begin(), order.end(),
                [&](std::size_t a, std::size_t b) { return old_pos[a] < old_pos[b]; });
      for (std::size_t k = 0; k + 1 < order.size(); ++k) {
        const std::size_t i = order[k], j = order[k + 1];
        // Meetings only matter within a common gap.
        const auto gi = std::upper_bound(islands.begin(), islands.end(), old_pos[i]);
        const auto gj = std::upper_bound(islands.begin(), islands.end(), old_pos[j]);
        if (gi != gj) continue;
        const double d0 = old_pos[j] - old_pos[i];
        const double d1 = pos[j] - pos[i];
        if (d1 <= 0.0) {
          events.push_back({d0 / (d0 - d1 + 1e-300), 1, i, j, 0.5 * (pos[i] + pos[j])});
        } else if (rng.uniform() < std::exp(-d0 * d1 / dt)) {
          events.push_back({0.5, 1, i, j, 0.5 * (old_pos[i] + old_pos[j])});
        }
      }
      if (!events.empty()) {
        const auto first = *std::min_element(
            events.begin(), events.end(),
            [](const Event& a, const Event& b) { return a.frac < b.frac; });
        if (first.kind == 0) {
          pos.erase(pos.begin() + static_cast<std::ptrdiff_t>(first.i));
          ++res.absorbed;
        } else {
          const auto gi = std::upper_bound(islands.begin(), islands.end(), old_pos[first.i]);
          const double lo = *(gi - 1), hi = *gi;
          const double z = std::clamp(first.where, std::nextafter(lo, hi),
                                      std::nextafter(hi, lo));
          const std::size_t a = std::max(first.i, first.j), b = std::min(first.i, first.j);
          pos.erase(pos.begin() + static_cast<std::ptrdiff_t>(a));
          pos.erase(pos.begin() + static_cast<std::ptrdiff_t>(b));
          record_nucleation(z);
          if (opt.stop_nucleations && res.nucleations.size() >= *opt.stop_nucleations) {
            res.clock = t;
            res.active_remaining = pos.size();
            return res;
          }
        }
        if (pos.empty()) {
          close_cycle();
          if (opt.stop_at_first_cycle_end) break;
        }
        continue;
      }

      if (deposit_now) {
        next_dep = t + rng.exponential(dep_rate);
        ++res.depositions;
        const double x = rng.uniform(0.0, length_);
        if (!cycle_open) {
          cycle = CycleRecord{};
          cycle.index = res.cycles.size() + 1;
          cycle.start = t;
          cycle_open = true;
        }
        ++cycle.depositions;
        bool on_island = false;
        for (const double z : islands) on_island |= (z == x);
        if (!on_island) pos.push_back(x);
      }
    }
    res.clock = std::min(t, t_max);
    res.active_remaining = pos.size();
    return res;
  }

 private:
  double length_;
  double lambda_;
  double dt_cap_;
};

void validate_params(const SimParams& params, const StopRule& stop) {
  if (!(params.length > 0.0)) throw std::invalid_argument("length must be > 0");
  if (params.lambda < 0.0) throw std::invalid_argument("lambda must be >= 0");
  if (stop.n_nucleations.has_value() == stop.t_max.has_value())
    throw std::invalid_argument("exactly one stop rule required");
  if (params.lambda == 0.0 && !stop.t_max)
    throw std::invalid_argument("t_max required when lambda == 0");
}

SimResult run_once(const SimParams& params, const LatticeEngine::Options& opt,
                   std::uint64_t seed) {
  if (std::holds_alternative<LatticeSpec>(params.mode)) {
    LatticeEngine engine(params, std::get<LatticeSpec>(params.mode));
    return engine.run(seed, opt);
  }
  ContinuumEngine engine(params, std::get<ContinuumSpec>(params.mode));
  return engine.run(seed, opt);
}

}  // namespace

SimResult simulate_until(const SimParams& params, const StopRule& stop, std::uint64_t seed) {
  validate_params(params, stop);
  LatticeEngine::Options opt;
  opt.stop_nucleations = stop.n_nucleations;
  opt.stop_tmax = stop.t_max;
  return run_once(params, opt, seed);
}

FirstCycleResult first_cycle_nucleation(const SimParams& params, std::uint64_t replicas,
                                        std::uint64_t seed) {
  if (replicas < 1) throw std::invalid_argument("first_cycle_nucleation: replicas >= 1");
  validate_params(params, StopRule::nucleations(1));

  constexpr std::uint64_t kBlock = 1024;
  const std::uint64_t blocks = (replicas + kBlock - 1) / kBlock;
  std::vector<double> zeta(replicas, -1.0);  // <0 means no nucleation in cycle 1

  parallel_for_indexed(blocks, [&](std::size_t b) {
    LatticeEngine::Options opt;
    opt.stop_at_first_cycle_end = true;
    opt.collect_configs = false;
    opt.track_time = false;
    const std::uint64_t lo = b * kBlock;
    const std::uint64_t hi = std::min(replicas, lo + kBlock);
    const auto note = [&](std::uint64_t r, const SimResult& res) {
      if (!res.nucleations.empty() && res.nucleations.front().cycle == 1)
        zeta[r] = res.nucleations.front().location_rel;
    };
    if (const auto* spec = std::get_if<LatticeSpec>(&params.mode)) {
      LatticeEngine engine(params, *spec);
      for (std::uint64_t r = lo; r < hi; ++r) note(r, engine.run(derive_seed(seed, r), opt));
    } else {
      ContinuumEngine engine(params, std::get<ContinuumSpec>(params.mode));
      for (std::uint64_t r = lo; r < hi; ++r) note(r, engine.run(derive_seed(seed, r), opt));
    }
  });

  FirstCycleResult out;
  std::size_t hits = 0;
  for (double z : zeta)
    if (z >= 0.0) ++hits;
  out.locations.reserve(hits);
  for (double z : zeta)
    if (z >= 0.0) out.locations.push_back(z);
  out.nucleation_probability = proportion(hits, replicas);
  return out;
}

FirstNucleationResult first_nucleation_ensemble(const SimParams& params, std::uint64_t replicas,
                                                std::uint64_t seed) {
  if (replicas < 1) throw std::invalid_argument("first_nucleation_ensemble: replicas >= 1");
  validate_params(params, StopRule::nucleations(1));
  if (params.lambda <= 0.0)
    throw std::invalid_argument("first_nucleation_ensemble: lambda must be > 0");

  constexpr std::uint64_t kBlock = 64;
  const std::uint64_t blocks = (replicas + kBlock - 1) / kBlock;
  FirstNucleationResult out;
  out.locations.assign(replicas, 0.0);

  parallel_for_indexed(blocks, [&](std::size_t b) {
    LatticeEngine::Options opt;
    opt.stop_nucleations = 1;
    opt.collect_configs = false;
    opt.track_time = false;
    const std::uint64_t lo = b * kBlock;
    const std::uint64_t hi = std::min(replicas, lo + kBlock);
    if (const auto* spec = std::get_if<LatticeSpec>(&params.mode)) {
      LatticeEngine engine(params, *spec);
      for (std::uint64_t r = lo; r < hi; ++r)
        out.locations[r] = engine.run(derive_seed(seed, r), opt).nucleations.front().location_rel;
    } else {
      ContinuumEngine engine(params, std::get<ContinuumSpec>(params.mode));
      for (std::uint64_t r = lo; r < hi; ++r)
        out.locations[r] = engine.run(derive_seed(seed, r), opt).nucleations.front().location_rel;
    }
  });
  return out;
}

ScalingReport scaling_check(double ell, double lambda, int sites_per_unit,
                            std::uint64_t replicas, std::uint64_t seed) {
  if (!(ell > 0.0) || !(lambda > 0.0))
    throw std::invalid_argument("scaling_check: ell and lambda must be > 0");
  SimParams long_params{ell, lambda, LatticeSpec{sites_per_unit}};
  SimParams unit_params{1.0, ell * ell * ell * lambda, LatticeSpec{sites_per_unit}};

  const FirstCycleResult a = first_cycle_nucleation(long_params, replicas, derive_seed(seed, 1));
  const FirstCycleResult b = first_cycle_nucleation(unit_params, replicas, derive_seed(seed, 2));

  ScalingReport report;
  report.prob_long = a.nucleation_probability;
  report.prob_unit = b.nucleation_probability;
  report.prob_difference = a.nucleation_probability.estimate - b.nucleation_probability.estimate;
  const double sea = a.nucleation_probability.std_error;
  const double seb = b.nucleation_probability.std_error;
  report.pooled_std_error = std::sqrt(sea * sea + seb * seb);
  report.samples_long = a.locations.size();
  report.samples_unit = b.locations.size();
  if (!a.locations.empty() && !b.locations.empty()) {
    report.ks_statistic = ks_statistic_two_sample(a.locations, b.locations);
    report.ks_critical_1pct =
        ks_two_sample_critical(0.01, a.locations.size(), b.locations.size());
  }
  return report;
}

}  // namespace nucleate
