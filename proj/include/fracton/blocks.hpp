#pragma once

#include <cstdint>
#include <vector>

#include "fracton/automaton.hpp"
#include "fracton/rng.hpp"
#include "fracton/spin_state.hpp"

namespace fracton {

// Height-field view of the chain: stacked unit blocks whose slides are
// exactly the nontrivial three-site gate moves. h_0 and h_L never move.
struct BlockState {
  HeightField field;
  int length() const { return field.length(); }
};

BlockState map_single_fracton(int length, int position);
BlockState block_state_from(const SpinState& state);
SpinState to_spin_state(const BlockState& state);

// One proposed slide of a unit block from `column` to column + direction
// (direction is +-1). Applies the move iff both sliding rules hold; returns
// whether the configuration changed.
bool attempt_slide(BlockState& state, int column, int direction);

// round(L/3) uniform (column, direction) proposals.
void slide_step(BlockState& state, Rng& rng);

// Exhaustive check at small L that the legal block moves out of every
// configuration coincide with the nontrivial three-site gate moves on the
// corresponding spin string.
bool verify_move_bijection(int length);

// Two-fracton view: h' = h - 1 splits into a hole gas (h' = -1), a particle
// gas (h' = +1) and an explicit piston column that carries neither species.
// Gas moves are exactly block slides of the height field; the gases may not
// enter the piston column and the piston hops only onto empty columns, the
// detailed-balance condition of the piston model.
struct TwoTierState {
  HeightField field;
  int piston = 0;  // column index
  int length() const { return field.length(); }
};

TwoTierState map_two_fracton(int length, int first_site, int second_site);
SpinState to_spin_state(const TwoTierState& state);
std::vector<int> hole_columns(const TwoTierState& state);
std::vector<int> particle_columns(const TwoTierState& state);
int rightmost_hole(const TwoTierState& state);
int leftmost_particle(const TwoTierState& state);

// One proposal: a piston hop when `column` is the piston, otherwise a block
// slide rejected if it touches the piston column. Returns whether anything
// moved.
bool attempt_two_tier(TwoTierState& state, int column, int direction);
void two_tier_step(TwoTierState& state, Rng& rng);

// Block-engine ensemble (single-tier slide dynamics); the config's gate
// width must be 3, the dynamics this engine reproduces.
EnsembleResult run_block_ensemble(const EvolutionConfig& config, int workers = 1);

// Attempt-for-attempt the block proposal measure is uniform over 2(L-1)
// (column, direction) pairs while the automaton realizes each hop with
// weight 1/(2(L-2)); matching automaton step t therefore needs
// round(t (L-1)/(L-2)) block steps.
long long block_steps_for(long long automaton_steps, int length);

struct EquivalenceReport {
  int length = 0;
  std::vector<long long> automaton_times;
  std::vector<long long> block_times;
  double max_abs_deviation = 0.0;
  double max_abs_z = 0.0;  // deviation over combined standard error
  bool consistent(double n_sigma) const { return max_abs_z <= n_sigma; }
};

// Runs both engines from the same initial condition and compares ensemble
// profiles at matched (time-rescaled) snapshots.
EquivalenceReport equivalence_check(const SpinState& initial,
                                    const std::vector<long long>& automaton_times,
                                    long long n_realizations, std::uint64_t seed, int workers);

// Stationary piston statistics for the detailed-balance check: per-column
// attempt counts and realized piston transitions.
struct PistonStats {
  int length = 0;
  std::vector<long long> occupancy;   // attempts observed at each column
  std::vector<long long> up_moves;    // piston column -> column + 1
  std::vector<long long> down_moves;  // piston column -> column - 1
};

PistonStats measure_piston_stats(int length, int first_site, int second_site,
                                 long long burn_steps, long long measure_steps,
                                 std::uint64_t seed);

// Exact stationary ratio W(col)/W(col+1) of the discrete piston model with
// integer gas counts: (1 - n_holes/col) / (1 - n_particles/(L-1-col)).
double piston_balance_ratio_exact(int length, int first_site, int second_site, int column);

}  // namespace fracton
