#include "fracton/spin_state.hpp"

#include <sstream>

#include "doctest.h"

#include "fracton/rng.hpp"

using namespace fracton;

namespace {

SpinState random_state(int length, Rng& rng) {
  std::vector<std::int8_t> sites(static_cast<std::size_t>(length));
  for (auto& s : sites) s = static_cast<std::int8_t>(rng.below(3)) - 1;
  return SpinState(std::move(sites));
}

}  // namespace

TEST_CASE("total charge") {
  CHECK(total_charge(SpinState::zeros(5)) == 0);
  CHECK(total_charge(SpinState::with_charges(5, {3})) == 1);
  CHECK(total_charge(SpinState::parse("+-+")) == 1);
}

TEST_CASE("dipole moment uses 1-based coordinates") {
  CHECK(dipole_moment(SpinState::zeros(5)) == 0);
  CHECK(dipole_moment(SpinState::with_charges(14, {3, 4})) == 7);
  CHECK(dipole_moment(SpinState::parse("0+-")) == 2 - 3);
}

TEST_CASE("height field is the cumulative charge") {
  CHECK(to_height_field(SpinState::parse("00+0")).heights == std::vector<int>{0, 0, 0, 1, 1});
  // single + at p: h = 0 below p, 1 from p on
  const auto single = to_height_field(SpinState::with_charges(7, {4}));
  for (int i = 0; i <= 7; ++i) CHECK(single.heights[static_cast<std::size_t>(i)] == (i >= 4 ? 1 : 0));
  CHECK(to_height_field(SpinState::parse("+-+")).heights == std::vector<int>{0, 1, 0, 1});
}

TEST_CASE("height field inversion") {
  CHECK(from_height_field(HeightField{{0, 0, 0, 1, 1}}) == SpinState::parse("00+0"));
  CHECK(from_height_field(HeightField{{0, 1, 0, 1}}) == SpinState::parse("+-+"));
  CHECK_THROWS_AS(from_height_field(HeightField{{0, 2, 2}}), ValidationError);
  CHECK_THROWS_AS(from_height_field(HeightField{{1, 1, 1}}), ValidationError);
}

TEST_CASE("height area identity") {
  CHECK(height_area(to_height_field(SpinState::parse("00+0"))) == 4 * 1 - 3);
  CHECK(height_area(to_height_field(SpinState::zeros(9))) == 0);
  const SpinState two = SpinState::with_charges(51, {16, 36});
  CHECK(height_area(to_height_field(two)) == 51 * 2 - 52);
  CHECK(height_area(to_height_field(two)) == 50);
}

TEST_CASE("round trip and area identity on random states") {
  Rng rng(20240809);
  for (int trial = 0; trial < 10000; ++trial) {
    const int length = 1 + static_cast<int>(rng.below(40));
    const SpinState state = random_state(length, rng);
    const HeightField field = to_height_field(state);
    CHECK(field.heights.front() == 0);
    CHECK(field.heights.back() == total_charge(state));
    CHECK(from_height_field(field) == state);
    CHECK(height_area(field) ==
          static_cast<long long>(length) * total_charge(state) - dipole_moment(state));
  }
}

TEST_CASE("dipole range brackets every random state and is tight") {
  Rng rng(77);
  for (int trial = 0; trial < 4000; ++trial) {
    const int length = 1 + static_cast<int>(rng.below(20));
    const SpinState state = random_state(length, rng);
    const DipoleRange range = dipole_range(length, total_charge(state));
    CHECK(dipole_moment(state) >= range.min);
    CHECK(dipole_moment(state) <= range.max);
  }
  // extremes are achieved: -++ realizes the maximum for L=3, q=1
  CHECK(dipole_range(3, 1).max == dipole_moment(SpinState::parse("-++")));
  CHECK(dipole_range(3, 1).min == dipole_moment(SpinState::parse("++-")));
  CHECK(dipole_range(4, 0).max == dipole_moment(SpinState::parse("--++")));
  CHECK(dipole_range(5, 5).min == dipole_range(5, 5).max);
}

TEST_CASE("packing round-trips") {
  Rng rng(5);
  for (int trial = 0; trial < 2000; ++trial) {
    const int length = 1 + static_cast<int>(rng.below(40));
    const SpinState state = random_state(length, rng);
    CHECK(unpack_state(pack_state(state), length) == state);
  }
}

TEST_CASE("state parsing and validation") {
  CHECK(SpinState::parse("+0-").to_string() == "+0-");
  CHECK_THROWS_AS(SpinState::parse("+x-"), ValidationError);
  CHECK_THROWS_AS(SpinState(std::vector<std::int8_t>{}), ValidationError);
  CHECK_THROWS_AS(SpinState::with_charges(4, {5}), ValidationError);
  CHECK_THROWS_AS(SpinState::with_charges(4, {2, 2}), ValidationError);
}

TEST_CASE("profile csv") {
  ChargeProfile profile;
  profile.mean_charge = {0.5, -0.25, 0.75};
  SUBCASE("without errors") {
    const std::string csv = profile_to_csv(profile);
    CHECK(csv == "site,mean_charge\n1,0.5\n2,-0.25\n3,0.75\n");
  }
  SUBCASE("with errors") {
    profile.std_error = {0.1, 0.2, 0.3};
    std::istringstream in(profile_to_csv(profile));
    std::string header;
    std::getline(in, header);
    CHECK(header == "site,mean_charge,stderr");
  }
  CHECK(profile_total_charge(profile) == doctest::Approx(1.0));
  CHECK(profile_dipole(profile) == doctest::Approx(0.5 - 0.5 + 2.25));
}
