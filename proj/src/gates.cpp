#include "fracton/gates.hpp"

#include <algorithm>
#include <array>
#include <map>

#include "json.hpp"

namespace fracton {

GateClassTable build_class_table(int window_width) {
  if (window_width != 3 && window_width != 4) {
    throw ValidationError("gate window width must be 3 or 4");
  }
  std::uint32_t count = 1;
  for (int k = 0; k < window_width; ++k) count *= 3;

  // group codes by window-local (q, p), coordinates 1..n
  std::map<std::pair<int, int>, std::vector<std::uint16_t>> groups;
  for (std::uint32_t code = 0; code < count; ++code) {
    int q = 0, p = 0;
    std::uint32_t c = code;
    for (int k = 0; k < window_width; ++k) {
      const int s = static_cast<int>(c % 3) - 1;
      c /= 3;
      q += s;
      p += (k + 1) * s;
    }
    groups[{q, p}].push_back(static_cast<std::uint16_t>(code));
  }

  GateClassTable table;
  table.width = window_width;
  table.class_of.assign(count, 0);
  table.classes.reserve(groups.size());
  table.class_charge_dipole.reserve(groups.size());
  for (auto& [qp, members] : groups) {
    const auto id = static_cast<std::uint16_t>(table.classes.size());
    for (auto m : members) table.class_of[m] = id;
    table.classes.push_back(std::move(members));
    table.class_charge_dipole.push_back(qp);
  }
  return table;
}

SpinState apply_random_gate(const SpinState& state, GatePlacement placement,
                            const GateClassTable& table, Rng& rng) {
  if (placement.start < 1 || placement.start + table.width - 1 > state.length()) {
    throw ValidationError("gate window does not fit inside the chain");
  }
  SpinState result = state;
  apply_random_gate_in_place(result, placement.start, table, rng);
  return result;
}

std::uint32_t pack_window(const std::string& text) {
  std::uint32_t code = 0, power = 1;
  for (char c : text) {
    const int s = c == '+' ? 1 : c == '-' ? -1 : 0;
    code += static_cast<std::uint32_t>(s + 1) * power;
    power *= 3;
  }
  return code;
}

std::string window_to_string(std::uint32_t code, int width) {
  std::string out;
  for (int k = 0; k < width; ++k) {
    const int s = static_cast<int>(code % 3) - 1;
    code /= 3;
    out.push_back(s > 0 ? '+' : s < 0 ? '-' : '0');
  }
  return out;
}

bool verify_three_site_table(const GateClassTable& table) {
  if (table.width != 3) return false;
  if (table.string_count() != 27) return false;

  // every code must be covered by exactly one class
  std::vector<int> seen(27, 0);
  for (const auto& members : table.classes) {
    for (auto m : members) {
      if (m >= 27) return false;
      ++seen[m];
    }
  }
  for (int c : seen) {
    if (c != 1) return false;
  }

  const std::array<std::pair<const char*, const char*>, 4> expected = {{
      {"0+0", "+-+"},
      {"0-0", "-+-"},
      {"+-0", "0+-"},
      {"-+0", "0-+"},
  }};

  std::vector<std::vector<std::uint16_t>> nontrivial;
  for (const auto& members : table.classes) {
    if (members.size() > 1) {
      auto sorted = members;
      std::sort(sorted.begin(), sorted.end());
      nontrivial.push_back(std::move(sorted));
    }
  }
  if (nontrivial.size() != expected.size()) return false;

  for (const auto& [a, b] : expected) {
    std::vector<std::uint16_t> pair = {static_cast<std::uint16_t>(pack_window(a)),
                                       static_cast<std::uint16_t>(pack_window(b))};
    std::sort(pair.begin(), pair.end());
    if (std::find(nontrivial.begin(), nontrivial.end(), pair) == nontrivial.end()) {
      return false;
    }
  }

  // conservation within every class
  for (std::size_t id = 0; id < table.classes.size(); ++id) {
    for (auto m : table.classes[id]) {
      int q = 0, p = 0;
      std::uint32_t c = m;
      for (int k = 0; k < 3; ++k) {
        const int s = static_cast<int>(c % 3) - 1;
        c /= 3;
        q += s;
        p += (k + 1) * s;
      }
      if (std::pair<int, int>{q, p} != table.class_charge_dipole[id]) return false;
    }
  }
  return true;
}

std::string class_table_json(const GateClassTable& table) {
  nlohmann::json j;
  j["width"] = table.width;
  auto classes = nlohmann::json::array();
  for (std::size_t id = 0; id < table.classes.size(); ++id) {
    nlohmann::json c;
    c["id"] = id;
    c["charge"] = table.class_charge_dipole[id].first;
    c["dipole"] = table.class_charge_dipole[id].second;
    auto members = nlohmann::json::array();
    for (auto m : table.classes[id]) members.push_back(window_to_string(m, table.width));
    c["members"] = members;
    classes.push_back(std::move(c));
  }
  j["classes"] = classes;
  auto lookup = nlohmann::json::object();
  for (std::uint32_t code = 0; code < table.string_count(); ++code) {
    lookup[window_to_string(code, table.width)] = table.class_of[code];
  }
  j["lookup"] = lookup;
  return j.dump(2);
}

}  // namespace fracton
