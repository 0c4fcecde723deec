#include "fracton/spin_state.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

namespace fracton {

namespace {

void check_charge_value(int v) {
  if (v < -1 || v > 1) {
    throw ValidationError("site charge must be in {-1, 0, +1}");
  }
}

}  // namespace

SpinState::SpinState(std::vector<std::int8_t> s) : sites(std::move(s)) {
  if (sites.empty()) throw ValidationError("spin state must have at least one site");
  for (auto v : sites) check_charge_value(v);
}

SpinState SpinState::zeros(int length) {
  if (length < 1) throw ValidationError("chain length must be positive");
  SpinState s;
  s.sites.assign(static_cast<std::size_t>(length), 0);
  return s;
}

SpinState SpinState::with_charges(int length, const std::vector<int>& plus_sites) {
  SpinState s = zeros(length);
  for (int p : plus_sites) {
    if (p < 1 || p > length) throw ValidationError("charge site out of range");
    if (s.sites[static_cast<std::size_t>(p) - 1] != 0) {
      throw ValidationError("duplicate charge site");
    }
    s.sites[static_cast<std::size_t>(p) - 1] = 1;
  }
  return s;
}

SpinState SpinState::parse(const std::string& text) {
  std::vector<std::int8_t> sites;
  sites.reserve(text.size());
  for (char c : text) {
    switch (c) {
      case '+': sites.push_back(1); break;
      case '-': sites.push_back(-1); break;
      case '0': sites.push_back(0); break;
      default:
        throw ValidationError(std::string("bad state character '") + c + "'");
    }
  }
  return SpinState(std::move(sites));
}

void SpinState::set_charge(int site, int value) {
  if (site < 1 || site > length()) throw ValidationError("site index out of range");
  check_charge_value(value);
  sites[static_cast<std::size_t>(site) - 1] = static_cast<std::int8_t>(value);
}

std::string SpinState::to_string() const {
  std::string out;
  out.reserve(sites.size());
  for (auto v : sites) out.push_back(v > 0 ? '+' : v < 0 ? '-' : '0');
  return out;
}

int total_charge(const SpinState& state) {
  int q = 0;
  for (auto v : state.sites) q += v;
  return q;
}

long long dipole_moment(const SpinState& state) {
  long long p = 0;
  for (int i = 0; i < state.length(); ++i) {
    p += static_cast<long long>(i + 1) * state.sites[static_cast<std::size_t>(i)];
  }
  return p;
}

SectorLabel sector_of(const SpinState& state) {
  return SectorLabel{total_charge(state), dipole_moment(state)};
}

HeightField to_height_field(const SpinState& state) {
  HeightField f;
  f.heights.resize(state.sites.size() + 1);
  f.heights[0] = 0;
  for (std::size_t i = 0; i < state.sites.size(); ++i) {
    f.heights[i + 1] = f.heights[i] + state.sites[i];
  }
  return f;
}

SpinState from_height_field(const HeightField& field) {
  if (field.heights.size() < 2) throw ValidationError("height field too short");
  if (field.heights.front() != 0) throw ValidationError("height field must start at zero");
  std::vector<std::int8_t> sites(field.heights.size() - 1);
  for (std::size_t i = 1; i < field.heights.size(); ++i) {
    const int step = field.heights[i] - field.heights[i - 1];
    if (step < -1 || step > 1) {
      throw ValidationError("height step larger than one unit is not a charge");
    }
    sites[i - 1] = static_cast<std::int8_t>(step);
  }
  return SpinState(std::move(sites));
}

long long height_area(const HeightField& field) {
  long long area = 0;
  for (std::size_t i = 1; i + 1 < field.heights.size(); ++i) area += field.heights[i];
  return area;
}

DipoleRange dipole_range(int length, int charge) {
  if (length < 1) throw ValidationError("chain length must be positive");
  if (charge > length || charge < -length) {
    throw ValidationError("total charge exceeds chain length");
  }
  // Greedy maximum for q >= 0: q charges at the top coordinates plus as many
  // (+ high, - low) pairs as fit. q < 0 follows by charge conjugation.
  auto max_for = [length](int q) {
    long long m = 0;
    int hi = length, lo = 1;
    for (int k = 0; k < q; ++k) m += hi--;
    const int pairs = (length - q) / 2;
    for (int k = 0; k < pairs; ++k) m += hi-- - lo++;
    return m;
  };
  long long max;
  if (charge >= 0) {
    max = max_for(charge);
  } else {
    // flip all signs: states with charge q <-> -q, dipole p <-> -p
    const long long min_neg = static_cast<long long>(length + 1) * (-charge) - max_for(-charge);
    max = -min_neg;
  }
  // site reflection i <-> L+1-i maps dipole p to (L+1)q - p
  const long long min = static_cast<long long>(length + 1) * charge - max;
  return DipoleRange{min, max};
}

std::uint64_t pack_state(std::span<const std::int8_t> sites) {
  std::uint64_t code = 0;
  std::uint64_t power = 1;
  for (auto v : sites) {
    code += static_cast<std::uint64_t>(v + 1) * power;
    power *= 3;
  }
  return code;
}

std::uint64_t pack_state(const SpinState& state) {
  return pack_state(std::span<const std::int8_t>(state.sites));
}

SpinState unpack_state(std::uint64_t code, int length) {
  std::vector<std::int8_t> sites(static_cast<std::size_t>(length));
  for (int i = 0; i < length; ++i) {
    sites[static_cast<std::size_t>(i)] = static_cast<std::int8_t>(code % 3) - 1;
    code /= 3;
  }
  return SpinState(std::move(sites));
}

double profile_total_charge(const ChargeProfile& profile) {
  double q = 0;
  for (double v : profile.mean_charge) q += v;
  return q;
}

double profile_dipole(const ChargeProfile& profile) {
  double p = 0;
  for (int i = 0; i < profile.length(); ++i) p += (i + 1) * profile.mean_charge[static_cast<std::size_t>(i)];
  return p;
}

std::string profile_to_csv(const ChargeProfile& profile) {
  const bool with_err = !profile.std_error.empty();
  std::string out = with_err ? "site,mean_charge,stderr\n" : "site,mean_charge\n";
  char line[96];
  for (int i = 0; i < profile.length(); ++i) {
    if (with_err) {
      std::snprintf(line, sizeof line, "%d,%.12g,%.12g\n", i + 1,
                    profile.mean_charge[static_cast<std::size_t>(i)],
                    profile.std_error[static_cast<std::size_t>(i)]);
    } else {
      std::snprintf(line, sizeof line, "%d,%.12g\n", i + 1,
                    profile.mean_charge[static_cast<std::size_t>(i)]);
    }
    out += line;
  }
  return out;
}

void write_profile_csv(const std::string& path, const ChargeProfile& profile) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot open " + path + " for writing");
  out << profile_to_csv(profile);
}

}  // namespace fracton
