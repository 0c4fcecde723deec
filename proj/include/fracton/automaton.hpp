#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fracton/gates.hpp"
#include "fracton/rng.hpp"
#include "fracton/spin_state.hpp"

namespace fracton {

struct EvolutionConfig {
  int gate_width = 3;
  SpinState initial_state;
  long long n_steps = 0;
  long long n_realizations = 1;
  std::vector<long long> record_times;  // sorted, unique, within [0, n_steps]
  std::uint64_t master_seed = 1;

  int length() const { return initial_state.length(); }
};

void validate(const EvolutionConfig& config);

struct EnsembleResult {
  EvolutionConfig config;
  std::string engine = "automaton";
  std::vector<long long> times;
  std::vector<ChargeProfile> profiles;  // parallel to times

  const ChargeProfile& at_time(long long t) const;
};

// One time step: round(L/n) gates at independent uniform placements, applied
// sequentially.
void evolve_one_step(SpinState& state, const GateClassTable& table, Rng& rng);
SpinState evolve_steps(SpinState state, long long steps, const GateClassTable& table, Rng& rng);

// Ensemble mean profiles at the recorded times. Realization j always uses the
// stream derived from (master_seed, j) and per-site sums are integers, so the
// result is identical for any worker count.
EnsembleResult run_ensemble(const EvolutionConfig& config, int workers = 1);

// sqrt(sum_i <S_i>(x_i - origin)^2). Small negative radicands within noise
// are clamped to zero; negative beyond 3*stderr throws NumericError.
double width_r(const ChargeProfile& profile, double origin);

// Coordinate-weighted charge split at the chain center, boundary sites 1 and
// L excluded.
double separation_r_prime(const ChargeProfile& profile);

enum class TauMetric { peak_width, pair_separation };

// First threshold crossing, linearly interpolated between records; upward
// means the series starts below and crosses up. Throws NumericError if the
// threshold is never reached.
double first_crossing(const std::vector<long long>& times, const std::vector<double>& values,
                      double threshold, bool upward);

// Runs the ensemble defined by `config` and returns the first crossing time
// of the chosen metric.
double measure_tau(const EvolutionConfig& config, TauMetric metric, double threshold,
                   int workers = 1);

// Geometric snapshot ladder {0, 1, ...} with ~spacing ratio between records,
// always including n_steps.
std::vector<long long> geometric_record_times(long long n_steps, double spacing = 1.03);

// Directory layout: meta.json, profile_t<step>.csv per snapshot, metrics.csv.
void save_ensemble(const EnsembleResult& result, const std::string& directory);

}  // namespace fracton
