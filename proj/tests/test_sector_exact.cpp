#include "fracton/sector_exact.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "doctest.h"
#include "json.hpp"

#include "fracton/analytic.hpp"

using namespace fracton;

namespace {

// oracle: full 3^L scan
std::vector<std::uint64_t> scan_sector(int length, SectorLabel label) {
  std::uint64_t total = 1;
  for (int i = 0; i < length; ++i) total *= 3;
  std::vector<std::uint64_t> out;
  for (std::uint64_t code = 0; code < total; ++code) {
    const SpinState state = unpack_state(code, length);
    if (total_charge(state) == label.charge && dipole_moment(state) == label.dipole) {
      out.push_back(code);
    }
  }
  return out;
}

long long binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  long long r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace

TEST_CASE("enumeration matches the full scan at small L") {
  for (int length = 1; length <= 6; ++length) {
    for (int charge = -length; charge <= length; ++charge) {
      const DipoleRange range = dipole_range(length, charge);
      for (long long dipole = range.min - 1; dipole <= range.max + 1; ++dipole) {
        const SectorLabel label{charge, dipole};
        const SymmetrySector sector = enumerate_sector(length, label);
        CHECK(sector.states == scan_sector(length, label));
      }
    }
  }
}

TEST_CASE("specific sectors") {
  const SymmetrySector l3 = enumerate_sector(3, SectorLabel{0, 0});
  REQUIRE(l3.size() == 1);
  CHECK(unpack_state(l3.states[0], 3) == SpinState::zeros(3));

  const SymmetrySector l2 = enumerate_sector(2, SectorLabel{2, 3});
  REQUIRE(l2.size() == 1);
  CHECK(unpack_state(l2.states[0], 2) == SpinState::parse("++"));

  CHECK(enumerate_sector(3, SectorLabel{0, 17}).size() == 0);

  // regression fixture for the thermalization sector
  const SymmetrySector fig1 = enumerate_sector(14, SectorLabel{2, 7});
  CHECK(fig1.size() == 12973);
  const auto codes = fig1.states;
  CHECK(std::set<std::uint64_t>(codes.begin(), codes.end()).size() == codes.size());
}

TEST_CASE("sector mean profile") {
  SUBCASE("singleton sector reproduces the state") {
    const SymmetrySector sector = enumerate_sector(2, SectorLabel{2, 3});
    const ChargeProfile profile = sector_mean_profile(sector);
    CHECK(profile.mean_charge == std::vector<double>{1.0, 1.0});
  }
  SUBCASE("charge-symmetric sector has an antisymmetric profile") {
    const SymmetrySector sector = enumerate_sector(6, SectorLabel{0, 0});
    const ChargeProfile profile = sector_mean_profile(sector);
    for (int i = 1; i <= 6; ++i) {
      CHECK(profile.mean_charge[static_cast<std::size_t>(i - 1)] ==
            doctest::Approx(-profile.mean_charge[static_cast<std::size_t>(6 - i)]).epsilon(1e-12));
    }
    CHECK(profile_total_charge(profile) == doctest::Approx(0.0).epsilon(1e-12));
  }
  SUBCASE("profile sums reproduce the sector label") {
    const SymmetrySector sector = enumerate_sector(10, SectorLabel{2, 11});
    const ChargeProfile profile = sector_mean_profile(sector);
    CHECK(profile_total_charge(profile) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(profile_dipole(profile) == doctest::Approx(11.0).epsilon(1e-12));
    CHECK(sector.size() == 347);
  }
  SUBCASE("empty sector") {
    CHECK_THROWS_AS(sector_mean_profile(enumerate_sector(3, SectorLabel{0, 17})),
                    ValidationError);
  }
}

TEST_CASE("krylov decomposition partitions the sector and is closed") {
  const GateClassTable table3 = build_class_table(3);
  const GateClassTable table4 = build_class_table(4);
  for (int length : {6, 8, 10}) {
    const SectorLabel label{1, (length + 1) / 2};
    const SymmetrySector sector = enumerate_sector(length, label);
    for (const GateClassTable* table : {&table3, &table4}) {
      if (length < table->width) continue;
      const KrylovDecomposition decomposition = krylov_decompose(sector, *table);

      std::size_t total = 0;
      std::set<std::uint64_t> seen;
      for (const auto& component : decomposition.components) {
        total += component.size();
        for (auto code : component) CHECK(seen.insert(code).second);
      }
      CHECK(total == sector.size());

      // closure: every move from every member stays inside its component
      for (const auto& component : decomposition.components) {
        const std::set<std::uint64_t> inside(component.begin(), component.end());
        for (auto code : component) {
          const SpinState state = unpack_state(code, length);
          for (int start = 1; start + table->width - 1 <= length; ++start) {
            std::uint32_t window = 0, power = 1;
            for (int k = 0; k < table->width; ++k) {
              window += static_cast<std::uint32_t>(
                            state.sites[static_cast<std::size_t>(start - 1 + k)] + 1) *
                        power;
              power *= 3;
            }
            for (auto member : table->classes[table->class_of[window]]) {
              SpinState moved = state;
              std::uint32_t pick = member;
              for (int k = 0; k < table->width; ++k) {
                moved.sites[static_cast<std::size_t>(start - 1 + k)] =
                    static_cast<std::int8_t>(pick % 3) - 1;
                pick /= 3;
              }
              CHECK(inside.contains(pack_state(moved)));
            }
          }
        }
      }
    }
  }
}

TEST_CASE("vacuum is an inert singleton under three-site gates") {
  const GateClassTable table = build_class_table(3);
  const auto component = reachable_set(SpinState::zeros(8), table);
  CHECK(component == std::vector<std::uint64_t>{pack_state(SpinState::zeros(8))});
}

TEST_CASE("single-tier states stay single-tier") {
  const GateClassTable table = build_class_table(3);
  // alternating-charge initial states keep heights in {0, 1}
  for (const char* text : {"00+0000000", "0+0-0+0000", "+0-0+00-0+"}) {
    const SpinState initial = SpinState::parse(text);
    const auto heights0 = to_height_field(initial).heights;
    if (*std::min_element(heights0.begin(), heights0.end()) < 0) continue;
    if (*std::max_element(heights0.begin(), heights0.end()) > 1) continue;
    for (auto code : reachable_set(initial, table)) {
      const auto heights = to_height_field(unpack_state(code, initial.length())).heights;
      CHECK(*std::min_element(heights.begin(), heights.end()) >= 0);
      CHECK(*std::max_element(heights.begin(), heights.end()) <= 1);
    }
  }
}

TEST_CASE("single-fracton component is the block-count simplex") {
  const GateClassTable table = build_class_table(3);
  for (const auto& [length, position] : std::vector<std::pair<int, int>>{{8, 4}, {9, 3}, {10, 6}}) {
    const SpinState initial = SpinState::with_charges(length, {position});
    const auto component = reachable_set(initial, table);
    // single-tier configurations with L - p blocks on L - 1 interior columns
    CHECK(static_cast<long long>(component.size()) == binomial(length - 1, length - position));

    const SymmetrySector sector =
        enumerate_sector(length, SectorLabel{1, position});
    const KrylovDecomposition decomposition = krylov_decompose(sector, table);
    const ChargeProfile mean = component_mean_profile(decomposition, initial);
    const ChargeProfile expected = single_fracton_final(length, position);
    for (int i = 0; i < length; ++i) {
      CHECK(mean.mean_charge[static_cast<std::size_t>(i)] ==
            doctest::Approx(expected.mean_charge[static_cast<std::size_t>(i)]).epsilon(1e-12));
    }
  }
}

TEST_CASE("fragmentation contrast between gate widths") {
  const SectorLabel label{2, 7};
  const SymmetrySector sector = enumerate_sector(10, label);
  const KrylovDecomposition d3 = krylov_decompose(sector, build_class_table(3));
  const KrylovDecomposition d4 = krylov_decompose(sector, build_class_table(4));
  CHECK(sector.size() == 306);
  CHECK(d3.largest_fraction() < 0.5);
  CHECK(d4.largest_fraction() > d3.largest_fraction());
  CHECK(d3.largest_fraction() == doctest::Approx(70.0 / 306.0));
  CHECK(d4.largest_fraction() == doctest::Approx(296.0 / 306.0).epsilon(0.02));
  CHECK(d3.components.size() > d4.components.size());
}

TEST_CASE("two-fracton component keeps a central charge surplus") {
  const GateClassTable table = build_class_table(3);
  const SpinState initial = SpinState::with_charges(10, {3, 8});
  const SymmetrySector sector = enumerate_sector(10, sector_of(initial));
  const KrylovDecomposition decomposition = krylov_decompose(sector, table);
  const ChargeProfile mean = component_mean_profile(decomposition, initial);
  const double center = 0.5 * (mean.mean_charge[4] + mean.mean_charge[5]);
  const double off = 0.5 * (mean.mean_charge[2] + mean.mean_charge[7]);
  CHECK(center > 0.0);
  CHECK(center > off);
}

TEST_CASE("representative must belong to the sector") {
  const SymmetrySector sector = enumerate_sector(6, SectorLabel{1, 3});
  const KrylovDecomposition decomposition = krylov_decompose(sector, build_class_table(3));
  CHECK_THROWS_AS(component_mean_profile(decomposition, SpinState::zeros(6)), ValidationError);
}

TEST_CASE("decomposition summary json") {
  const SymmetrySector sector = enumerate_sector(8, SectorLabel{1, 4});
  const KrylovDecomposition decomposition = krylov_decompose(sector, build_class_table(3));
  const auto j = nlohmann::json::parse(decomposition_summary_json(decomposition));
  CHECK(j["sector_size"] == sector.size());
  CHECK(j["component_count"] == decomposition.components.size());
  std::size_t histogram_total = 0;
  for (const auto& bin : j["size_histogram"]) {
    histogram_total +=
        bin["component_size"].get<std::size_t>() * bin["count"].get<std::size_t>();
  }
  CHECK(histogram_total == sector.size());
}
