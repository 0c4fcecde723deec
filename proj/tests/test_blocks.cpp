#include "fracton/blocks.hpp"

#include <algorithm>
#include <set>

#include "doctest.h"

#include "fracton/analytic.hpp"

using namespace fracton;

namespace {

int block_count(const BlockState& state) {
  int blocks = 0;
  for (int c = 1; c <= state.length() - 1; ++c) blocks += state.field.heights[static_cast<std::size_t>(c)];
  return blocks;
}

std::vector<std::pair<int, int>> legal_moves(const BlockState& state) {
  std::vector<std::pair<int, int>> moves;
  for (int column = 1; column <= state.length() - 1; ++column) {
    for (int direction : {-1, 1}) {
      BlockState copy = state;
      if (attempt_slide(copy, column, direction)) moves.emplace_back(column, direction);
    }
  }
  return moves;
}

}  // namespace

TEST_CASE("single fracton block mapping") {
  CHECK(block_count(map_single_fracton(51, 26)) == 25);
  CHECK(block_count(map_single_fracton(9, 9)) == 0);
  CHECK(block_count(map_single_fracton(9, 1)) == 8);
  CHECK(to_spin_state(map_single_fracton(7, 4)) == SpinState::with_charges(7, {4}));
}

TEST_CASE("initially only the leftmost block can move, and it moves left") {
  const BlockState initial = map_single_fracton(10, 4);
  const auto moves = legal_moves(initial);
  REQUIRE(moves.size() == 1);
  CHECK(moves[0] == std::pair<int, int>{4, -1});

  // a fracton at the right edge is completely frozen
  CHECK(legal_moves(map_single_fracton(10, 10)).empty());
}

TEST_CASE("an isolated block slides either way; the ends stay pinned") {
  BlockState state = map_single_fracton(9, 9);
  state.field.heights[4] = 1;  // one block in an empty interior
  const auto moves = legal_moves(state);
  CHECK(moves.size() == 2);
  // moving it to a boundary column is fine, past it is not
  BlockState wall = map_single_fracton(9, 9);
  wall.field.heights[1] = 1;
  bool moved = attempt_slide(wall, 1, -1);
  CHECK_FALSE(moved);  // would change the pinned h_0
}

TEST_CASE("slides preserve area and the unit-step rule") {
  Rng rng(123);
  BlockState state = map_single_fracton(17, 9);
  const long long area = height_area(state.field);
  for (int step = 0; step < 2000; ++step) {
    slide_step(state, rng);
    CHECK(height_area(state.field) == area);
    CHECK(state.field.heights.front() == 0);
    CHECK(state.field.heights.back() == 1);
  }
  for (std::size_t i = 1; i < state.field.heights.size(); ++i) {
    CHECK(std::abs(state.field.heights[i] - state.field.heights[i - 1]) <= 1);
  }
  // single-tier confinement: heights stay in {0, 1} forever
  for (int h : state.field.heights) {
    CHECK(h >= 0);
    CHECK(h <= 1);
  }
}

TEST_CASE("block moves are exactly the nontrivial gate moves") {
  for (int length : {3, 4, 5, 6, 7, 8}) {
    CHECK(verify_move_bijection(length));
  }
}

TEST_CASE("two fracton mapping") {
  const TwoTierState state = map_two_fracton(12, 4, 9);
  // plateau structure 0 / 1 / 2 after the cumulative sum
  for (int i = 0; i <= 12; ++i) {
    const int expected = (i >= 4 ? 1 : 0) + (i >= 9 ? 1 : 0);
    CHECK(state.field.heights[static_cast<std::size_t>(i)] == expected);
  }
  CHECK(to_spin_state(state) == SpinState::with_charges(12, {4, 9}));
  CHECK(hole_columns(state) == std::vector<int>{1, 2, 3});
  CHECK(particle_columns(state) == std::vector<int>{9, 10, 11});
  CHECK(rightmost_hole(state) == 3);
  CHECK(leftmost_particle(state) == 9);
  CHECK(state.piston == 6);
  CHECK_THROWS_AS(map_two_fracton(12, 9, 4), ValidationError);
  CHECK_THROWS_AS(map_two_fracton(12, 4, 5), ValidationError);
}

TEST_CASE("piston exclusion rules") {
  TwoTierState state = map_two_fracton(10, 4, 7);
  // piston starts at column 5; park it next to the particle gas
  state.piston = 6;
  SUBCASE("piston cannot hop onto a particle") {
    CHECK_FALSE(attempt_two_tier(state, 6, +1));  // column 7 holds a particle
    CHECK(attempt_two_tier(state, 6, -1));        // column 5 is empty
    CHECK(state.piston == 5);
  }
  SUBCASE("gas blocks cannot enter the piston column") {
    const auto before = state.field.heights;
    // sliding the leftmost particle (column 7) into column 6 is refused
    CHECK_FALSE(attempt_two_tier(state, 7, -1));
    CHECK(state.field.heights == before);
  }
}

TEST_CASE("two-tier driving keeps the gases ordered around the piston") {
  Rng rng(2024);
  TwoTierState state = map_two_fracton(21, 7, 15);
  const long long area = height_area(state.field);
  for (int step = 0; step < 4000; ++step) {
    two_tier_step(state, rng);
    CHECK(height_area(state.field) == area);
  }
  // heights stay two-tier and the species stay separated by the piston
  for (int h : state.field.heights) {
    CHECK(h >= 0);
    CHECK(h <= 2);
  }
  CHECK(rightmost_hole(state) < state.piston);
  CHECK(state.piston < leftmost_particle(state));
  CHECK(state.field.heights[static_cast<std::size_t>(state.piston)] == 1);
  // hard range: six holes left of the piston, six particles right of it
  CHECK(state.piston >= 7);
  CHECK(state.piston <= 14);
}

TEST_CASE("block ensemble matches the spin automaton") {
  const SpinState initial = SpinState::with_charges(15, {8});
  const std::vector<long long> times = {13, 52, 208};
  const EquivalenceReport report = equivalence_check(initial, times, 600, 99, 2);
  CHECK(report.block_times == std::vector<long long>{14, 56, 224});
  CHECK(report.max_abs_z < 4.0);

  const SpinState pair = SpinState::with_charges(15, {4, 12});
  const EquivalenceReport two = equivalence_check(pair, times, 600, 7, 2);
  CHECK(two.max_abs_z < 4.0);
}

TEST_CASE("block engine requires three-site dynamics") {
  EvolutionConfig config;
  config.gate_width = 4;
  config.initial_state = SpinState::with_charges(9, {5});
  config.n_steps = 1;
  config.record_times = {1};
  CHECK_THROWS_AS(run_block_ensemble(config, 1), ValidationError);
}

TEST_CASE("piston statistics satisfy the discrete detailed balance at small L") {
  const int length = 16, first = 4, second = 12;
  const PistonStats stats = measure_piston_stats(length, first, second, 2000, 400000, 4242);
  // compare empirical transition-rate ratios with the exact combinatorial
  // ratio of the piston model
  for (int column = 7; column <= 8; ++column) {
    const double occupancy_a = static_cast<double>(stats.occupancy[static_cast<std::size_t>(column)]);
    const double occupancy_b = static_cast<double>(stats.occupancy[static_cast<std::size_t>(column) + 1]);
    REQUIRE(occupancy_a > 0);
    REQUIRE(occupancy_b > 0);
    const double up = static_cast<double>(stats.up_moves[static_cast<std::size_t>(column)]);
    const double down = static_cast<double>(stats.down_moves[static_cast<std::size_t>(column) + 1]);
    REQUIRE(up > 100);
    const double empirical = (down / occupancy_b) / (up / occupancy_a);
    const double exact = piston_balance_ratio_exact(length, first, second, column);
    const double sigma = empirical * std::sqrt(1.0 / up + 1.0 / down);
    CHECK(std::abs(empirical - exact) < 5.0 * std::max(sigma, 0.02 * exact));
  }
}

TEST_CASE("exact piston ratio formula") {
  // n_holes = 3 in columns 1..xi-1, n_particles = 4 in columns xi+1..L-1
  const double ratio = piston_balance_ratio_exact(16, 4, 12, 8);
  CHECK(ratio == doctest::Approx((1.0 - 3.0 / 8.0) / (1.0 - 4.0 / 7.0)));
  CHECK_THROWS_AS(piston_balance_ratio_exact(16, 4, 12, 3), ValidationError);
  CHECK_THROWS_AS(piston_balance_ratio_exact(16, 4, 12, 12), ValidationError);
}
