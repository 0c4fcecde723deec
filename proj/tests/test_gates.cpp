#include "fracton/gates.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "doctest.h"
#include "json.hpp"

#include "fracton/rng.hpp"

using namespace fracton;

namespace {

// independent grouping of all width-n strings by window-local (q, p),
// written without reusing the table construction
std::map<std::pair<int, int>, std::set<std::string>> brute_groups(int width) {
  std::map<std::pair<int, int>, std::set<std::string>> groups;
  int count = 1;
  for (int k = 0; k < width; ++k) count *= 3;
  for (int code = 0; code < count; ++code) {
    int c = code, q = 0, p = 0;
    std::string text;
    for (int k = 0; k < width; ++k) {
      const int s = c % 3 - 1;
      c /= 3;
      q += s;
      p += (k + 1) * s;
      text.push_back(s > 0 ? '+' : s < 0 ? '-' : '0');
    }
    groups[{q, p}].insert(text);
  }
  return groups;
}

SpinState random_state(int length, Rng& rng) {
  std::vector<std::int8_t> sites(static_cast<std::size_t>(length));
  for (auto& s : sites) s = static_cast<std::int8_t>(rng.below(3)) - 1;
  return SpinState(std::move(sites));
}

}  // namespace

TEST_CASE("three-site classes are the four flip pairs") {
  const GateClassTable table = build_class_table(3);
  CHECK(table.string_count() == 27);
  CHECK(table.classes.size() == 23);

  int pairs = 0, singletons = 0, in_pairs = 0;
  for (const auto& members : table.classes) {
    if (members.size() == 2) {
      ++pairs;
      in_pairs += 2;
    } else {
      CHECK(members.size() == 1);
      ++singletons;
    }
  }
  CHECK(pairs == 4);
  CHECK(singletons == 19);
  CHECK(in_pairs == 8);

  auto same_class = [&](const char* a, const char* b) {
    return table.class_of[pack_window(a)] == table.class_of[pack_window(b)];
  };
  CHECK(same_class("0+0", "+-+"));
  CHECK(same_class("0-0", "-+-"));
  CHECK(same_class("+-0", "0+-"));
  CHECK(same_class("-+0", "0-+"));
  CHECK_FALSE(same_class("0+0", "0-0"));
  CHECK(verify_three_site_table(table));
}

TEST_CASE("four-site class histogram") {
  const GateClassTable table = build_class_table(4);
  CHECK(table.string_count() == 81);
  CHECK(table.classes.size() == 49);
  std::map<std::size_t, int> histogram;
  int nontrivial_strings = 0;
  for (const auto& members : table.classes) {
    ++histogram[members.size()];
    if (members.size() > 1) nontrivial_strings += static_cast<int>(members.size());
  }
  CHECK(histogram == std::map<std::size_t, int>{{1, 26}, {2, 14}, {3, 9}});
  CHECK(nontrivial_strings == 55);
  // the four-site moves include quadrupole creation out of the vacuum
  CHECK(table.class_of[pack_window("0000")] == table.class_of[pack_window("+--+")]);
}

TEST_CASE("classes partition the strings and share (q,p)") {
  for (int width : {3, 4}) {
    const GateClassTable table = build_class_table(width);
    const auto groups = brute_groups(width);
    CHECK(groups.size() == table.classes.size());
    for (std::size_t id = 0; id < table.classes.size(); ++id) {
      std::set<std::string> members;
      for (auto code : table.classes[id]) members.insert(window_to_string(code, width));
      CHECK(groups.at(table.class_charge_dipole[id]) == members);
    }
  }
}

TEST_CASE("verify_three_site_table rejects doctored tables") {
  GateClassTable table = build_class_table(3);

  SUBCASE("splitting a pair breaks the partition") {
    for (auto& members : table.classes) {
      if (members.size() == 2) {
        members.pop_back();
        break;
      }
    }
    CHECK_FALSE(verify_three_site_table(table));
  }
  SUBCASE("merging distinct (q,p) classes is caught") {
    // move 000 into the {0+0, +-+} class
    const auto from = table.class_of[pack_window("000")];
    const auto into = table.class_of[pack_window("0+0")];
    auto& source = table.classes[from];
    source.erase(std::find(source.begin(), source.end(), pack_window("000")));
    table.classes[into].push_back(static_cast<std::uint16_t>(pack_window("000")));
    table.class_of[pack_window("000")] = into;
    CHECK_FALSE(verify_three_site_table(table));
  }
  SUBCASE("wrong width") {
    CHECK_FALSE(verify_three_site_table(build_class_table(4)));
  }
}

TEST_CASE("singleton windows are inert, pair windows flip half the time") {
  const GateClassTable table = build_class_table(3);
  Rng rng(11);

  const SpinState vacuum = SpinState::zeros(5);
  for (int trial = 0; trial < 50; ++trial) {
    CHECK(apply_random_gate(vacuum, GatePlacement{2}, table, rng) == vacuum);
  }

  const SpinState seed = SpinState::parse("00+00");
  int flipped = 0;
  const int draws = 20000;
  for (int trial = 0; trial < draws; ++trial) {
    const SpinState out = apply_random_gate(seed, GatePlacement{2}, table, rng);
    if (out == SpinState::parse("0+-+0")) {
      ++flipped;
    } else {
      CHECK(out == seed);
    }
  }
  CHECK(flipped > draws * 0.45);
  CHECK(flipped < draws * 0.55);
}

TEST_CASE("gate application conserves charge and dipole exactly") {
  Rng rng(99);
  for (int width : {3, 4}) {
    const GateClassTable table = build_class_table(width);
    for (int trial = 0; trial < 50000; ++trial) {
      const int length = width + static_cast<int>(rng.below(12));
      SpinState state = random_state(length, rng);
      const int q = total_charge(state);
      const long long p = dipole_moment(state);
      const int start = 1 + static_cast<int>(rng.below(static_cast<std::uint32_t>(length - width + 1)));
      apply_random_gate_in_place(state, start, table, rng);
      CHECK(total_charge(state) == q);
      CHECK(dipole_moment(state) == p);
    }
  }
}

TEST_CASE("placement validation") {
  const GateClassTable table = build_class_table(3);
  Rng rng(1);
  const SpinState state = SpinState::zeros(4);
  CHECK_THROWS_AS(apply_random_gate(state, GatePlacement{0}, table, rng), ValidationError);
  CHECK_THROWS_AS(apply_random_gate(state, GatePlacement{3}, table, rng), ValidationError);
  CHECK_THROWS_AS(build_class_table(5), ValidationError);
}

TEST_CASE("class draw is uniform over the class") {
  const GateClassTable table = build_class_table(4);
  // pick a size-3 class and count landing frequencies
  std::uint32_t window = 0;
  for (std::uint32_t code = 0; code < table.string_count(); ++code) {
    if (table.classes[table.class_of[code]].size() == 3) {
      window = code;
      break;
    }
  }
  const auto& members = table.classes[table.class_of[window]];
  SpinState state = unpack_state(window, 4);
  Rng rng(31415);
  std::map<std::uint64_t, int> counts;
  const int draws = 30000;
  for (int trial = 0; trial < draws; ++trial) {
    const SpinState out = apply_random_gate(state, GatePlacement{1}, table, rng);
    ++counts[pack_state(out)];
  }
  CHECK(counts.size() == members.size());
  for (const auto& [code, count] : counts) {
    CHECK(count > draws / 3 * 0.9);
    CHECK(count < draws / 3 * 1.1);
  }
}

TEST_CASE("class table json dump") {
  const auto j = nlohmann::json::parse(class_table_json(build_class_table(3)));
  CHECK(j["width"] == 3);
  CHECK(j["classes"].size() == 23);
  CHECK(j["lookup"].size() == 27);
  // lookup maps a member string to the id of its class
  const int id = j["lookup"]["0+0"];
  bool found = false;
  for (const auto& c : j["classes"]) {
    if (c["id"] == id) {
      std::set<std::string> members(c["members"].begin(), c["members"].end());
      CHECK(members == std::set<std::string>{"0+0", "+-+"});
      found = true;
    }
  }
  CHECK(found);
}
