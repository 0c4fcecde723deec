#pragma once

#include <array>
#include <utility>
#include <vector>

#include "fracton/spin_state.hpp"

namespace fracton {

// Independent-site distribution p_i(s), s in {-1, 0, +1} -> index s + 1.
struct SiteDistribution {
  std::vector<std::array<double, 3>> probs;
  int length() const { return static_cast<int>(probs.size()); }
};

struct LagrangeMultipliers {
  double lambda_charge = 0.0;  // conjugate to Q_tot
  double lambda_dipole = 0.0;  // conjugate to P_tot
};

// p_i(s) = exp(s(l_Q + x_i l_P)) / (1 + 2 cosh(l_Q + x_i l_P))
SiteDistribution distribution_from_multipliers(int length, LagrangeMultipliers m);

// <S_i> = p_i(+) - p_i(-)
ChargeProfile profile_from_distribution(const SiteDistribution& distribution);

struct Rational {
  long long num = 0;
  long long den = 1;  // reduced, den > 0
  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  bool operator==(const Rational&) const = default;
};

// Small-(Q, P) closed forms:
//   l_Q = (6LQ + 3Q - 9P) / (L(L-1)),  l_P = -9(LQ + Q - 2P) / (L(L^2-1))
std::pair<Rational, Rational> linearized_multipliers_rational(int length, SectorLabel label);
LagrangeMultipliers linearized_multipliers(int length, SectorLabel label);

// Strict interior of the realizable (Q, P) region.
bool sector_feasible(int length, SectorLabel label);

struct MultiplierSolution {
  LagrangeMultipliers multipliers;
  double residual_charge = 0.0;
  double residual_dipole = 0.0;
  int iterations = 0;
};

// Damped Newton on the two constraint sums, seeded by the linearized
// multipliers; residuals below 1e-10 or NumericError. Infeasible labels
// raise ValidationError.
MultiplierSolution solve_multipliers(int length, SectorLabel label);

// <S_i> ~ (2/3)(l_Q + x_i l_P), the small-multiplier profile.
ChargeProfile linear_profile(int length, LagrangeMultipliers m);

}  // namespace fracton
