#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "fracton/errors.hpp"

namespace fracton {

// Basis string of a spin-1 chain: site charges in {-1, 0, +1}. Sites are
// 1-based (x_i = i) in every public interface of this project.
struct SpinState {
  std::vector<std::int8_t> sites;

  SpinState() = default;
  explicit SpinState(std::vector<std::int8_t> s);

  static SpinState zeros(int length);
  // Charges at the given 1-based positions on an otherwise empty chain.
  static SpinState with_charges(int length, const std::vector<int>& plus_sites);
  // Text form, e.g. "0+-0"; '0', '+', '-' only.
  static SpinState parse(const std::string& text);

  int length() const { return static_cast<int>(sites.size()); }
  int charge_at(int site) const { return sites[static_cast<std::size_t>(site) - 1]; }
  void set_charge(int site, int value);
  std::string to_string() const;

  bool operator==(const SpinState&) const = default;
};

// (Q_tot, P_tot): the conserved pair labelling a symmetry sector.
struct SectorLabel {
  int charge = 0;
  long long dipole = 0;
  bool operator==(const SectorLabel&) const = default;
};

// Cumulative charge h_0..h_L with h_0 = 0 and unit-bounded increments.
struct HeightField {
  std::vector<int> heights;
  int length() const { return static_cast<int>(heights.size()) - 1; }
  bool operator==(const HeightField&) const = default;
};

// Mean site charges; std_error empty for exact (non-sampled) averages.
struct ChargeProfile {
  std::vector<double> mean_charge;
  std::vector<double> std_error;
  long long sample_count = 0;

  int length() const { return static_cast<int>(mean_charge.size()); }
};

int total_charge(const SpinState& state);
long long dipole_moment(const SpinState& state);
SectorLabel sector_of(const SpinState& state);

HeightField to_height_field(const SpinState& state);
// Discrete derivative of the heights; rejects steps larger than one unit.
SpinState from_height_field(const HeightField& field);
// Sum of interior heights h_1..h_{L-1}; equals L*Q_tot - P_tot.
long long height_area(const HeightField& field);

// Realizable dipole range over all length-L states with total charge q.
struct DipoleRange {
  long long min = 0;
  long long max = 0;
};
DipoleRange dipole_range(int length, int charge);

// base-3 packing with site 1 as the least significant digit; length <= 40
std::uint64_t pack_state(std::span<const std::int8_t> sites);
std::uint64_t pack_state(const SpinState& state);
SpinState unpack_state(std::uint64_t code, int length);

double profile_total_charge(const ChargeProfile& profile);
double profile_dipole(const ChargeProfile& profile);

// CSV with header site,mean_charge[,stderr]
std::string profile_to_csv(const ChargeProfile& profile);
void write_profile_csv(const std::string& path, const ChargeProfile& profile);

}  // namespace fracton
