#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "fracton/rng.hpp"
#include "fracton/spin_state.hpp"

namespace fracton {

// Partition of all 3^n width-n local strings into classes sharing the
// window-local (charge, dipole) pair. Conserving both locally conserves the
// global Q_tot and P_tot for any placement, so the classes are exactly the
// move set of the random circuit.
struct GateClassTable {
  int width = 0;
  std::vector<std::vector<std::uint16_t>> classes;      // member codes per class
  std::vector<std::uint16_t> class_of;                  // local code -> class id
  std::vector<std::pair<int, int>> class_charge_dipole; // window-local (q, p)

  std::size_t string_count() const { return class_of.size(); }
};

// n must be 3 or 4.
GateClassTable build_class_table(int window_width);

// Leftmost site of the gate window, 1-based; the window must lie inside the
// chain (open boundaries, no wrapping).
struct GatePlacement {
  int start = 1;
};

// Replaces the window substring by a uniformly random member of its class
// (identity included). Total charge and dipole moment are unchanged.
SpinState apply_random_gate(const SpinState& state, GatePlacement placement,
                            const GateClassTable& table, Rng& rng);

// Hot-path variant; start is assumed validated by the caller.
inline void apply_random_gate_in_place(SpinState& state, int start,
                                       const GateClassTable& table, Rng& rng) {
  std::uint32_t code = 0;
  std::uint32_t power = 1;
  const std::size_t base = static_cast<std::size_t>(start) - 1;
  for (int k = 0; k < table.width; ++k) {
    code += static_cast<std::uint32_t>(state.sites[base + static_cast<std::size_t>(k)] + 1) * power;
    power *= 3;
  }
  const auto& members = table.classes[table.class_of[code]];
  if (members.size() == 1) return;
  std::uint32_t pick = members[rng.below(static_cast<std::uint32_t>(members.size()))];
  if (pick == code) return;
  for (int k = 0; k < table.width; ++k) {
    state.sites[base + static_cast<std::size_t>(k)] = static_cast<std::int8_t>(pick % 3) - 1;
    pick /= 3;
  }
}

// True iff the nontrivial classes are exactly the four flip pairs
// {0+0,+-+}, {0-0,-+-}, {+-0,0+-}, {-+0,0-+}.
bool verify_three_site_table(const GateClassTable& table);

// Debug dump: {"width": n, "classes": [{id, charge, dipole, members}...]}
std::string class_table_json(const GateClassTable& table);

std::uint32_t pack_window(const std::string& text);
std::string window_to_string(std::uint32_t code, int width);

}  // namespace fracton
