#pragma once

#include <cmath>
#include <thread>
#include <vector>

#include "fracton/automaton.hpp"
#include "fracton/rng.hpp"

namespace fracton::detail {

// Shared ensemble loop for the spin and block engines. Walker requirements:
//   Walker(const EvolutionConfig&)            per-thread factory state is fine
//   void   reset(Rng&)                        restore the initial condition
//   void   step(Rng&)                         advance one time step
//   int    charge(int site) const             1-based, in {-1,0,+1}
// Per-site accumulators are integers, so the reduction is exact and the
// result does not depend on the worker count.
template <class Walker>
EnsembleResult run_ensemble_with(const EvolutionConfig& config, int workers) {
  validate(config);
  const int length = config.length();
  const std::size_t n_times = config.record_times.size();
  const std::size_t cells = n_times * static_cast<std::size_t>(length);

  std::vector<long long> sum(cells, 0);
  std::vector<long long> sum_sq(cells, 0);

  const long long n_real = config.n_realizations;
  int n_workers = workers < 1 ? 1 : workers;
  if (static_cast<long long>(n_workers) > n_real) n_workers = static_cast<int>(n_real);

  auto run_range = [&](long long first, long long last, std::vector<long long>& s,
                       std::vector<long long>& s2) {
    Walker walker(config);
    for (long long j = first; j < last; ++j) {
      Rng rng = stream_rng(config.master_seed, static_cast<std::uint64_t>(j));
      walker.reset(rng);
      std::size_t next_record = 0;
      for (long long t = 0; t <= config.n_steps; ++t) {
        while (next_record < n_times && config.record_times[next_record] == t) {
          const std::size_t base = next_record * static_cast<std::size_t>(length);
          for (int i = 1; i <= length; ++i) {
            const int c = walker.charge(i);
            s[base + static_cast<std::size_t>(i - 1)] += c;
            s2[base + static_cast<std::size_t>(i - 1)] += c * c;
          }
          ++next_record;
        }
        if (next_record == n_times || t == config.n_steps) break;
        walker.step(rng);
      }
    }
  };

  if (n_workers <= 1) {
    run_range(0, n_real, sum, sum_sq);
  } else {
    std::vector<std::vector<long long>> part_sum(static_cast<std::size_t>(n_workers),
                                                 std::vector<long long>(cells, 0));
    std::vector<std::vector<long long>> part_sq(static_cast<std::size_t>(n_workers),
                                                std::vector<long long>(cells, 0));
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(n_workers));
    for (int w = 0; w < n_workers; ++w) {
      const long long first = n_real * w / n_workers;
      const long long last = n_real * (w + 1) / n_workers;
      pool.emplace_back(run_range, first, last, std::ref(part_sum[static_cast<std::size_t>(w)]),
                        std::ref(part_sq[static_cast<std::size_t>(w)]));
    }
    for (auto& t : pool) t.join();
    for (int w = 0; w < n_workers; ++w) {
      for (std::size_t k = 0; k < cells; ++k) {
        sum[k] += part_sum[static_cast<std::size_t>(w)][k];
        sum_sq[k] += part_sq[static_cast<std::size_t>(w)][k];
      }
    }
  }

  EnsembleResult result;
  result.config = config;
  result.times = config.record_times;
  result.profiles.resize(n_times);
  const double n = static_cast<double>(n_real);
  for (std::size_t k = 0; k < n_times; ++k) {
    ChargeProfile& p = result.profiles[k];
    p.mean_charge.resize(static_cast<std::size_t>(length));
    p.std_error.resize(static_cast<std::size_t>(length));
    p.sample_count = n_real;
    const std::size_t base = k * static_cast<std::size_t>(length);
    for (int i = 0; i < length; ++i) {
      const double mean = static_cast<double>(sum[base + static_cast<std::size_t>(i)]) / n;
      p.mean_charge[static_cast<std::size_t>(i)] = mean;
      if (n_real > 1) {
        const double var =
            (static_cast<double>(sum_sq[base + static_cast<std::size_t>(i)]) - n * mean * mean) /
            (n - 1.0);
        p.std_error[static_cast<std::size_t>(i)] = std::sqrt(std::max(var, 0.0) / n);
      } else {
        p.std_error[static_cast<std::size_t>(i)] = 0.0;
      }
    }
  }
  return result;
}

}  // namespace fracton::detail
