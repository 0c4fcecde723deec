#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fracton/gates.hpp"
#include "fracton/spin_state.hpp"

namespace fracton {

// All basis strings of a given length sharing (Q_tot, P_tot), packed base-3.
struct SymmetrySector {
  int length = 0;
  SectorLabel label;
  std::vector<std::uint64_t> states;  // sorted ascending

  std::size_t size() const { return states.size(); }
};

// Depth-first generation with exact (remaining charge, remaining dipole)
// feasibility pruning; empty sectors are allowed.
SymmetrySector enumerate_sector(int length, SectorLabel label);

// Equal-weight average of the site charges over every state in the sector.
ChargeProfile sector_mean_profile(const SymmetrySector& sector);

// Reachability components of the sector under a gate table.
struct KrylovDecomposition {
  int length = 0;
  SectorLabel label;
  std::size_t sector_size = 0;
  std::vector<std::vector<std::uint64_t>> components;  // sorted by size, descending

  std::vector<std::size_t> sizes() const;
  double largest_fraction() const;
};

KrylovDecomposition krylov_decompose(const SymmetrySector& sector, const GateClassTable& table);

// States reachable from one string; the Krylov component of `from`.
std::vector<std::uint64_t> reachable_set(const SpinState& from, const GateClassTable& table);

// Flat average over a list of packed states.
ChargeProfile states_mean_profile(int length, const std::vector<std::uint64_t>& states);

// Flat average over the component containing `representative`; throws
// ValidationError if the representative is not in the decomposition.
ChargeProfile component_mean_profile(const KrylovDecomposition& decomposition,
                                     const SpinState& representative);

std::string decomposition_summary_json(const KrylovDecomposition& decomposition);

}  // namespace fracton
