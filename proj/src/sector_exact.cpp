#include "fracton/sector_exact.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <unordered_set>

#include "json.hpp"

namespace fracton {

namespace {

// bounds[i][q + L] = min/max dipole achievable on sites i..L with charge q
struct SuffixDipoleBounds {
  int length;
  std::vector<long long> lo, hi;
  static constexpr long long kNone = std::numeric_limits<long long>::min();

  explicit SuffixDipoleBounds(int L) : length(L) {
    const std::size_t cells = static_cast<std::size_t>(L + 2) * (2 * L + 1);
    lo.assign(cells, kNone);
    hi.assign(cells, kNone);
    at_lo(L + 1, 0) = 0;
    at_hi(L + 1, 0) = 0;
    for (int i = L; i >= 1; --i) {
      const int remaining = L - i;  // sites after i
      for (int q = -(remaining + 1); q <= remaining + 1; ++q) {
        long long best_lo = kNone, best_hi = kNone;
        for (int s = -1; s <= 1; ++s) {
          const int qq = q - s;
          if (qq < -remaining || qq > remaining) continue;
          const long long l = at_lo(i + 1, qq);
          if (l == kNone) continue;
          const long long contribution = static_cast<long long>(i) * s;
          const long long h = at_hi(i + 1, qq);
          if (best_lo == kNone || l + contribution < best_lo) best_lo = l + contribution;
          if (best_hi == kNone || h + contribution > best_hi) best_hi = h + contribution;
        }
        at_lo(i, q) = best_lo;
        at_hi(i, q) = best_hi;
      }
    }
  }

  long long& at_lo(int i, int q) {
    return lo[static_cast<std::size_t>(i) * (2 * length + 1) + static_cast<std::size_t>(q + length)];
  }
  long long& at_hi(int i, int q) {
    return hi[static_cast<std::size_t>(i) * (2 * length + 1) + static_cast<std::size_t>(q + length)];
  }
  bool feasible(int i, int q, long long p) {
    if (q < -length || q > length) return false;
    const long long l = at_lo(i, q);
    return l != kNone && l <= p && p <= at_hi(i, q);
  }
};

}  // namespace

SymmetrySector enumerate_sector(int length, SectorLabel label) {
  if (length < 1 || length > 40) throw ValidationError("enumerable lengths are 1..40");
  SymmetrySector sector;
  sector.length = length;
  sector.label = label;

  SuffixDipoleBounds bounds(length);
  if (!bounds.feasible(1, label.charge, label.dipole)) return sector;

  // iterative DFS over sites 1..L
  std::vector<int> choice(static_cast<std::size_t>(length) + 1, -2);  // next s to try - 1
  std::vector<int> q_left(static_cast<std::size_t>(length) + 2, 0);
  std::vector<long long> p_left(static_cast<std::size_t>(length) + 2, 0);
  std::vector<std::uint64_t> partial(static_cast<std::size_t>(length) + 2, 0);
  std::vector<std::uint64_t> power(static_cast<std::size_t>(length) + 1, 1);
  for (int i = 1; i <= length; ++i) power[static_cast<std::size_t>(i)] = power[static_cast<std::size_t>(i - 1)] * 3;

  q_left[1] = label.charge;
  p_left[1] = label.dipole;
  int i = 1;
  choice[1] = -2;
  while (i >= 1) {
    if (i == length + 1) {
      sector.states.push_back(partial[static_cast<std::size_t>(i)]);
      --i;
      continue;
    }
    bool descended = false;
    for (int s = choice[static_cast<std::size_t>(i)] + 1; s <= 1; ++s) {
      const int qq = q_left[static_cast<std::size_t>(i)] - s;
      const long long pp = p_left[static_cast<std::size_t>(i)] - static_cast<long long>(i) * s;
      const bool ok = (i == length) ? (qq == 0 && pp == 0) : bounds.feasible(i + 1, qq, pp);
      if (!ok) continue;
      choice[static_cast<std::size_t>(i)] = s;
      q_left[static_cast<std::size_t>(i) + 1] = qq;
      p_left[static_cast<std::size_t>(i) + 1] = pp;
      partial[static_cast<std::size_t>(i) + 1] =
          partial[static_cast<std::size_t>(i)] +
          static_cast<std::uint64_t>(s + 1) * power[static_cast<std::size_t>(i - 1)];
      ++i;
      choice[static_cast<std::size_t>(i)] = -2;
      descended = true;
      break;
    }
    if (!descended) --i;
  }
  std::sort(sector.states.begin(), sector.states.end());
  return sector;
}

ChargeProfile states_mean_profile(int length, const std::vector<std::uint64_t>& states) {
  if (states.empty()) throw ValidationError("cannot average an empty state set");
  std::vector<long long> sums(static_cast<std::size_t>(length), 0);
  for (std::uint64_t code : states) {
    for (int i = 0; i < length; ++i) {
      sums[static_cast<std::size_t>(i)] += static_cast<long long>(code % 3) - 1;
      code /= 3;
    }
  }
  ChargeProfile profile;
  profile.mean_charge.resize(static_cast<std::size_t>(length));
  profile.sample_count = static_cast<long long>(states.size());
  for (int i = 0; i < length; ++i) {
    profile.mean_charge[static_cast<std::size_t>(i)] =
        static_cast<double>(sums[static_cast<std::size_t>(i)]) / static_cast<double>(states.size());
  }
  return profile;
}

ChargeProfile sector_mean_profile(const SymmetrySector& sector) {
  if (sector.states.empty()) throw ValidationError("sector is empty");
  return states_mean_profile(sector.length, sector.states);
}

namespace {

// breadth-first closure from `seed`; neighbors swap one window for another
// class member, applied directly on packed codes
std::vector<std::uint64_t> bfs_component(std::uint64_t seed, int length,
                                         const GateClassTable& table,
                                         std::unordered_set<std::uint64_t>& visited) {
  std::vector<std::uint64_t> window_power(static_cast<std::size_t>(length) + 1, 1);
  for (int i = 1; i <= length; ++i) {
    window_power[static_cast<std::size_t>(i)] = window_power[static_cast<std::size_t>(i - 1)] * 3;
  }
  std::uint32_t window_size = 1;
  for (int k = 0; k < table.width; ++k) window_size *= 3;

  std::vector<std::uint64_t> component;
  std::vector<std::uint64_t> queue;
  visited.insert(seed);
  queue.push_back(seed);
  component.push_back(seed);
  while (!queue.empty()) {
    const std::uint64_t code = queue.back();
    queue.pop_back();
    for (int start = 1; start + table.width - 1 <= length; ++start) {
      const std::uint64_t shift = window_power[static_cast<std::size_t>(start - 1)];
      const std::uint32_t window =
          static_cast<std::uint32_t>(code / shift % window_size);
      const auto& members = table.classes[table.class_of[window]];
      if (members.size() == 1) continue;
      for (std::uint16_t m : members) {
        if (m == window) continue;
        const std::uint64_t neighbor =
            code + (static_cast<std::uint64_t>(m) - window) * shift;
        if (visited.insert(neighbor).second) {
          queue.push_back(neighbor);
          component.push_back(neighbor);
        }
      }
    }
  }
  std::sort(component.begin(), component.end());
  return component;
}

}  // namespace

KrylovDecomposition krylov_decompose(const SymmetrySector& sector, const GateClassTable& table) {
  KrylovDecomposition decomposition;
  decomposition.length = sector.length;
  decomposition.label = sector.label;
  decomposition.sector_size = sector.size();

  std::unordered_set<std::uint64_t> visited;
  visited.reserve(sector.size() * 2);
  for (std::uint64_t code : sector.states) {
    if (visited.contains(code)) continue;
    decomposition.components.push_back(bfs_component(code, sector.length, table, visited));
  }
  std::stable_sort(decomposition.components.begin(), decomposition.components.end(),
                   [](const auto& a, const auto& b) { return a.size() > b.size(); });
  return decomposition;
}

std::vector<std::uint64_t> reachable_set(const SpinState& from, const GateClassTable& table) {
  if (from.length() < table.width) throw ValidationError("chain shorter than the gate window");
  if (from.length() > 40) throw ValidationError("reachability needs length <= 40");
  std::unordered_set<std::uint64_t> visited;
  return bfs_component(pack_state(from), from.length(), table, visited);
}

std::vector<std::size_t> KrylovDecomposition::sizes() const {
  std::vector<std::size_t> out;
  out.reserve(components.size());
  for (const auto& c : components) out.push_back(c.size());
  return out;
}

double KrylovDecomposition::largest_fraction() const {
  if (components.empty() || sector_size == 0) return 0.0;
  return static_cast<double>(components.front().size()) / static_cast<double>(sector_size);
}

ChargeProfile component_mean_profile(const KrylovDecomposition& decomposition,
                                     const SpinState& representative) {
  const std::uint64_t code = pack_state(representative);
  for (const auto& component : decomposition.components) {
    if (std::binary_search(component.begin(), component.end(), code)) {
      return states_mean_profile(decomposition.length, component);
    }
  }
  throw ValidationError("representative is not in the decomposed sector");
}

std::string decomposition_summary_json(const KrylovDecomposition& decomposition) {
  nlohmann::json j;
  j["length"] = decomposition.length;
  j["charge"] = decomposition.label.charge;
  j["dipole"] = decomposition.label.dipole;
  j["sector_size"] = decomposition.sector_size;
  j["component_count"] = decomposition.components.size();
  j["largest_fraction"] = decomposition.largest_fraction();
  std::map<std::size_t, std::size_t> histogram;
  for (const auto& c : decomposition.components) ++histogram[c.size()];
  auto h = nlohmann::json::array();
  for (const auto& [size, count] : histogram) {
    h.push_back({{"component_size", size}, {"count", count}});
  }
  j["size_histogram"] = h;
  return j.dump(2);
}

}  // namespace fracton
