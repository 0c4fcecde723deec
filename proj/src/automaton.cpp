#include "fracton/automaton.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "json.hpp"

#include "fracton/detail/ensemble_runner.hpp"

namespace fracton {

void validate(const EvolutionConfig& config) {
  if (config.gate_width != 3 && config.gate_width != 4) {
    throw ValidationError("gate width must be 3 or 4");
  }
  if (config.length() < config.gate_width) {
    throw ValidationError("chain shorter than the gate window");
  }
  if (config.n_steps < 0) throw ValidationError("negative step count");
  if (config.n_realizations < 1) throw ValidationError("need at least one realization");
  long long prev = -1;
  for (long long t : config.record_times) {
    if (t < 0 || t > config.n_steps) throw ValidationError("record time outside [0, n_steps]");
    if (t <= prev) throw ValidationError("record times must be sorted and unique");
    prev = t;
  }
}

const ChargeProfile& EnsembleResult::at_time(long long t) const {
  const auto it = std::lower_bound(times.begin(), times.end(), t);
  if (it == times.end() || *it != t) throw ValidationError("time was not recorded");
  return profiles[static_cast<std::size_t>(it - times.begin())];
}

void evolve_one_step(SpinState& state, const GateClassTable& table, Rng& rng) {
  const int length = state.length();
  const long long gates = std::llround(static_cast<double>(length) / table.width);
  const std::uint32_t n_slots = static_cast<std::uint32_t>(length - table.width + 1);
  for (long long g = 0; g < gates; ++g) {
    const int start = 1 + static_cast<int>(rng.below(n_slots));
    apply_random_gate_in_place(state, start, table, rng);
  }
}

SpinState evolve_steps(SpinState state, long long steps, const GateClassTable& table, Rng& rng) {
  for (long long t = 0; t < steps; ++t) evolve_one_step(state, table, rng);
  return state;
}

namespace {

struct SpinWalker {
  const SpinState* initial;
  GateClassTable table;
  SpinState state;

  explicit SpinWalker(const EvolutionConfig& config)
      : initial(&config.initial_state), table(build_class_table(config.gate_width)) {}

  void reset(Rng&) { state = *initial; }
  void step(Rng& rng) { evolve_one_step(state, table, rng); }
  int charge(int site) const { return state.charge_at(site); }
};

}  // namespace

EnsembleResult run_ensemble(const EvolutionConfig& config, int workers) {
  EnsembleResult result = detail::run_ensemble_with<SpinWalker>(config, workers);
  result.engine = "automaton";
  return result;
}

double width_r(const ChargeProfile& profile, double origin) {
  double radicand = 0;
  double var_sum = 0;
  for (int i = 0; i < profile.length(); ++i) {
    const double d = (i + 1) - origin;
    radicand += profile.mean_charge[static_cast<std::size_t>(i)] * d * d;
    if (!profile.std_error.empty()) {
      const double e = profile.std_error[static_cast<std::size_t>(i)] * d * d;
      var_sum += e * e;
    }
  }
  if (radicand < 0) {
    const double noise = 3.0 * std::sqrt(var_sum);
    if (-radicand <= noise) return 0.0;
    throw NumericError("peak width radicand negative beyond noise tolerance");
  }
  return std::sqrt(radicand);
}

double separation_r_prime(const ChargeProfile& profile) {
  const int length = profile.length();
  const double half = length / 2.0;
  double right = 0, left = 0;
  for (int i = 2; i < length; ++i) {  // skip sites 1 and L
    const double x = i;
    if (x > half) {
      right += profile.mean_charge[static_cast<std::size_t>(i - 1)] * x;
    } else if (x < half) {
      left += profile.mean_charge[static_cast<std::size_t>(i - 1)] * x;
    }
  }
  return right - left;
}

double first_crossing(const std::vector<long long>& times, const std::vector<double>& values,
                      double threshold, bool upward) {
  if (times.size() != values.size() || times.empty()) {
    throw ValidationError("crossing needs matching, nonempty series");
  }
  auto crossed = [&](double v) { return upward ? v >= threshold : v <= threshold; };
  if (crossed(values.front())) return static_cast<double>(times.front());
  for (std::size_t k = 1; k < values.size(); ++k) {
    if (crossed(values[k])) {
      const double t0 = static_cast<double>(times[k - 1]);
      const double t1 = static_cast<double>(times[k]);
      const double v0 = values[k - 1];
      const double v1 = values[k];
      if (v1 == v0) return t1;
      return t0 + (threshold - v0) * (t1 - t0) / (v1 - v0);
    }
  }
  throw NumericError("metric never crossed the threshold within the step budget");
}

double measure_tau(const EvolutionConfig& config, TauMetric metric, double threshold,
                   int workers) {
  const EnsembleResult result = run_ensemble(config, workers);
  std::vector<double> series(result.times.size());
  if (metric == TauMetric::peak_width) {
    const int q = total_charge(config.initial_state);
    if (q == 0) throw ValidationError("peak width needs a charged initial state");
    const double origin =
        static_cast<double>(dipole_moment(config.initial_state)) / static_cast<double>(q);
    for (std::size_t k = 0; k < series.size(); ++k) {
      series[k] = width_r(result.profiles[k], origin);
    }
    return first_crossing(result.times, series, threshold, /*upward=*/true);
  }
  for (std::size_t k = 0; k < series.size(); ++k) {
    series[k] = separation_r_prime(result.profiles[k]);
  }
  return first_crossing(result.times, series, threshold, /*upward=*/false);
}

std::vector<long long> geometric_record_times(long long n_steps, double spacing) {
  std::vector<long long> times;
  times.push_back(0);
  if (n_steps <= 0) return times;
  double t = 1;
  while (true) {
    const long long tick = static_cast<long long>(std::llround(t));
    if (tick >= n_steps) break;
    if (tick > times.back()) times.push_back(tick);
    t = std::max(t * spacing, t + 1);
  }
  times.push_back(n_steps);
  return times;
}

void save_ensemble(const EnsembleResult& result, const std::string& directory) {
  namespace fs = std::filesystem;
  fs::create_directories(directory);

  nlohmann::json meta;
  meta["engine"] = result.engine;
  meta["gate_width"] = result.config.gate_width;
  meta["length"] = result.config.length();
  meta["initial_state"] = result.config.initial_state.to_string();
  meta["n_steps"] = result.config.n_steps;
  meta["n_realizations"] = result.config.n_realizations;
  meta["master_seed"] = result.config.master_seed;
  meta["record_times"] = result.times;
  std::ofstream(fs::path(directory) / "meta.json") << meta.dump(2) << "\n";

  const int q = total_charge(result.config.initial_state);
  const double origin =
      q != 0 ? static_cast<double>(dipole_moment(result.config.initial_state)) / q : 0.0;

  std::string metrics = "t,r,r_prime\n";
  char line[96];
  for (std::size_t k = 0; k < result.times.size(); ++k) {
    const ChargeProfile& p = result.profiles[k];
    write_profile_csv((fs::path(directory) / ("profile_t" + std::to_string(result.times[k]) + ".csv")).string(), p);
    double r = std::nan("");
    if (q != 0) {
      try {
        r = width_r(p, origin);
      } catch (const NumericError&) {
        r = std::nan("");
      }
    }
    std::snprintf(line, sizeof line, "%lld,%.12g,%.12g\n", result.times[k], r,
                  separation_r_prime(p));
    metrics += line;
  }
  std::ofstream(fs::path(directory) / "metrics.csv") << metrics;
}

}  // namespace fracton
