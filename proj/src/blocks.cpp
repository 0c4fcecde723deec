#include "fracton/blocks.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "fracton/detail/ensemble_runner.hpp"
#include "fracton/sector_exact.hpp"

namespace fracton {

BlockState map_single_fracton(int length, int position) {
  if (position < 1 || position > length) throw ValidationError("fracton site out of range");
  BlockState state;
  state.field.heights.resize(static_cast<std::size_t>(length) + 1);
  for (int i = 0; i <= length; ++i) {
    state.field.heights[static_cast<std::size_t>(i)] = i >= position ? 1 : 0;
  }
  return state;
}

BlockState block_state_from(const SpinState& state) {
  return BlockState{to_height_field(state)};
}

SpinState to_spin_state(const BlockState& state) {
  return from_height_field(state.field);
}

namespace {

// legality of moving one block from `column` to `column + direction`:
// interior columns only, and the post-move field keeps unit steps everywhere
inline bool slide_legal(const std::vector<int>& h, int length, int column, int direction) {
  const int target = column + direction;
  if (column < 1 || column > length - 1) return false;
  if (target < 1 || target > length - 1) return false;
  const int hc = h[static_cast<std::size_t>(column)] - 1;
  const int ht = h[static_cast<std::size_t>(target)] + 1;
  int left_col = std::min(column, target);
  int right_col = std::max(column, target);
  const int h_left = left_col == column ? hc : ht;
  const int h_right = right_col == column ? hc : ht;
  if (std::abs(h_left - h[static_cast<std::size_t>(left_col - 1)]) > 1) return false;
  if (std::abs(h_right - h_left) > 1) return false;
  if (std::abs(h[static_cast<std::size_t>(right_col + 1)] - h_right) > 1) return false;
  return true;
}

}  // namespace

bool attempt_slide(BlockState& state, int column, int direction) {
  auto& h = state.field.heights;
  const int length = state.length();
  if (!slide_legal(h, length, column, direction)) return false;
  h[static_cast<std::size_t>(column)] -= 1;
  h[static_cast<std::size_t>(column + direction)] += 1;
  return true;
}

void slide_step(BlockState& state, Rng& rng) {
  const int length = state.length();
  const long long attempts = std::llround(length / 3.0);
  for (long long a = 0; a < attempts; ++a) {
    const int column = 1 + static_cast<int>(rng.below(static_cast<std::uint32_t>(length - 1)));
    const int direction = rng.coin() ? 1 : -1;
    attempt_slide(state, column, direction);
  }
}

bool verify_move_bijection(int length) {
  if (length < 3 || length > 12) throw ValidationError("exhaustive check needs 3 <= L <= 12");
  const GateClassTable table = build_class_table(3);
  std::uint64_t total = 1;
  for (int i = 0; i < length; ++i) total *= 3;

  Rng rng(1);
  for (std::uint64_t code = 0; code < total; ++code) {
    const SpinState spin = unpack_state(code, length);

    std::set<std::uint64_t> via_gates;
    for (int start = 1; start + 2 <= length; ++start) {
      std::uint32_t window = 0, power = 1;
      for (int k = 0; k < 3; ++k) {
        window += static_cast<std::uint32_t>(spin.sites[static_cast<std::size_t>(start - 1 + k)] + 1) * power;
        power *= 3;
      }
      for (std::uint16_t m : table.classes[table.class_of[window]]) {
        if (m == window) continue;
        SpinState moved = spin;
        std::uint32_t pick = m;
        for (int k = 0; k < 3; ++k) {
          moved.sites[static_cast<std::size_t>(start - 1 + k)] = static_cast<std::int8_t>(pick % 3) - 1;
          pick /= 3;
        }
        via_gates.insert(pack_state(moved));
      }
    }

    std::set<std::uint64_t> via_blocks;
    const BlockState base = block_state_from(spin);
    for (int column = 1; column <= length - 1; ++column) {
      for (int direction : {-1, 1}) {
        BlockState moved = base;
        if (attempt_slide(moved, column, direction)) {
          via_blocks.insert(pack_state(to_spin_state(moved)));
        }
      }
    }

    if (via_gates != via_blocks) return false;
  }
  return true;
}

TwoTierState map_two_fracton(int length, int first_site, int second_site) {
  if (first_site < 1 || second_site > length || first_site >= second_site) {
    throw ValidationError("need 1 <= i1 < i2 <= L");
  }
  if (second_site - first_site < 2) {
    throw ValidationError("two-tier mapping needs a gap between the fractons");
  }
  TwoTierState state;
  state.field.heights.resize(static_cast<std::size_t>(length) + 1);
  for (int i = 0; i <= length; ++i) {
    state.field.heights[static_cast<std::size_t>(i)] =
        (i >= first_site ? 1 : 0) + (i >= second_site ? 1 : 0);
  }
  state.piston = (first_site + second_site) / 2;  // any empty column between the gases
  return state;
}

SpinState to_spin_state(const TwoTierState& state) {
  return from_height_field(state.field);
}

std::vector<int> hole_columns(const TwoTierState& state) {
  std::vector<int> columns;
  for (int c = 1; c <= state.length() - 1; ++c) {
    if (state.field.heights[static_cast<std::size_t>(c)] == 0) columns.push_back(c);
  }
  return columns;
}

std::vector<int> particle_columns(const TwoTierState& state) {
  std::vector<int> columns;
  for (int c = 1; c <= state.length() - 1; ++c) {
    if (state.field.heights[static_cast<std::size_t>(c)] == 2) columns.push_back(c);
  }
  return columns;
}

int rightmost_hole(const TwoTierState& state) {
  for (int c = state.length() - 1; c >= 1; --c) {
    if (state.field.heights[static_cast<std::size_t>(c)] == 0) return c;
  }
  return 0;  // the pinned wall h_0 = 0
}

int leftmost_particle(const TwoTierState& state) {
  for (int c = 1; c <= state.length() - 1; ++c) {
    if (state.field.heights[static_cast<std::size_t>(c)] == 2) return c;
  }
  return state.length();  // the pinned wall h_L = 2
}

bool attempt_two_tier(TwoTierState& state, int column, int direction) {
  auto& h = state.field.heights;
  const int length = state.length();
  const int target = column + direction;
  if (column == state.piston) {
    // piston hop: the target column must be interior and free of both species
    if (target < 1 || target > length - 1) return false;
    if (h[static_cast<std::size_t>(target)] != 1) return false;
    state.piston = target;
    return true;
  }
  if (target == state.piston) return false;  // gases may not enter the piston column
  if (!slide_legal(h, length, column, direction)) return false;
  h[static_cast<std::size_t>(column)] -= 1;
  h[static_cast<std::size_t>(target)] += 1;
  return true;
}

void two_tier_step(TwoTierState& state, Rng& rng) {
  const int length = state.length();
  const long long attempts = std::llround(length / 3.0);
  for (long long a = 0; a < attempts; ++a) {
    const int column = 1 + static_cast<int>(rng.below(static_cast<std::uint32_t>(length - 1)));
    const int direction = rng.coin() ? 1 : -1;
    attempt_two_tier(state, column, direction);
  }
}

namespace {

struct BlockWalker {
  const SpinState* initial;
  BlockState state;

  explicit BlockWalker(const EvolutionConfig& config) : initial(&config.initial_state) {
    if (config.gate_width != 3) {
      throw ValidationError("the block engine reproduces three-site dynamics only");
    }
  }
  void reset(Rng&) { state = block_state_from(*initial); }
  void step(Rng& rng) { slide_step(state, rng); }
  int charge(int site) const {
    return state.field.heights[static_cast<std::size_t>(site)] -
           state.field.heights[static_cast<std::size_t>(site) - 1];
  }
};

}  // namespace

EnsembleResult run_block_ensemble(const EvolutionConfig& config, int workers) {
  EnsembleResult result = detail::run_ensemble_with<BlockWalker>(config, workers);
  result.engine = "blocks";
  return result;
}

long long block_steps_for(long long automaton_steps, int length) {
  return std::llround(static_cast<double>(automaton_steps) * (length - 1) / (length - 2));
}

EquivalenceReport equivalence_check(const SpinState& initial,
                                    const std::vector<long long>& automaton_times,
                                    long long n_realizations, std::uint64_t seed, int workers) {
  const int length = initial.length();
  EquivalenceReport report;
  report.length = length;
  report.automaton_times = automaton_times;
  for (long long t : automaton_times) report.block_times.push_back(block_steps_for(t, length));

  EvolutionConfig spin_config;
  spin_config.gate_width = 3;
  spin_config.initial_state = initial;
  spin_config.n_steps = automaton_times.empty() ? 0 : automaton_times.back();
  spin_config.n_realizations = n_realizations;
  spin_config.record_times = automaton_times;
  spin_config.master_seed = seed;

  EvolutionConfig block_config = spin_config;
  block_config.record_times = report.block_times;
  block_config.n_steps = report.block_times.empty() ? 0 : report.block_times.back();
  block_config.master_seed = seed + 0x9E3779B97F4A7C15ull;

  const EnsembleResult spin = run_ensemble(spin_config, workers);
  const EnsembleResult blocks = run_block_ensemble(block_config, workers);

  for (std::size_t k = 0; k < automaton_times.size(); ++k) {
    const ChargeProfile& a = spin.profiles[k];
    const ChargeProfile& b = blocks.profiles[k];
    for (int i = 0; i < length; ++i) {
      const double dev = std::abs(a.mean_charge[static_cast<std::size_t>(i)] -
                                  b.mean_charge[static_cast<std::size_t>(i)]);
      const double err = std::hypot(a.std_error[static_cast<std::size_t>(i)],
                                    b.std_error[static_cast<std::size_t>(i)]);
      report.max_abs_deviation = std::max(report.max_abs_deviation, dev);
      if (dev == 0) continue;
      const double z = err > 0 ? dev / err : std::numeric_limits<double>::infinity();
      report.max_abs_z = std::max(report.max_abs_z, z);
    }
  }
  return report;
}

PistonStats measure_piston_stats(int length, int first_site, int second_site,
                                 long long burn_steps, long long measure_steps,
                                 std::uint64_t seed) {
  TwoTierState state = map_two_fracton(length, first_site, second_site);
  Rng rng(seed);
  const long long attempts_per_step = std::llround(length / 3.0);

  for (long long t = 0; t < burn_steps * attempts_per_step; ++t) {
    const int column = 1 + static_cast<int>(rng.below(static_cast<std::uint32_t>(length - 1)));
    attempt_two_tier(state, column, rng.coin() ? 1 : -1);
  }

  PistonStats stats;
  stats.length = length;
  stats.occupancy.assign(static_cast<std::size_t>(length) + 1, 0);
  stats.up_moves.assign(static_cast<std::size_t>(length) + 1, 0);
  stats.down_moves.assign(static_cast<std::size_t>(length) + 1, 0);
  for (long long t = 0; t < measure_steps * attempts_per_step; ++t) {
    const int before = state.piston;
    const int column = 1 + static_cast<int>(rng.below(static_cast<std::uint32_t>(length - 1)));
    attempt_two_tier(state, column, rng.coin() ? 1 : -1);
    stats.occupancy[static_cast<std::size_t>(before)] += 1;
    if (state.piston == before + 1) stats.up_moves[static_cast<std::size_t>(before)] += 1;
    if (state.piston == before - 1) stats.down_moves[static_cast<std::size_t>(before)] += 1;
  }
  return stats;
}

double piston_balance_ratio_exact(int length, int first_site, int second_site, int column) {
  const double holes = first_site - 1;
  const double particles = length - second_site;
  if (column <= static_cast<int>(holes) || length - 1 - column <= static_cast<int>(particles)) {
    throw ValidationError("column outside the piston's reachable range");
  }
  return (1.0 - holes / column) / (1.0 - particles / (length - 1 - column));
}

}  // namespace fracton
