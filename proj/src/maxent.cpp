#include "fracton/maxent.hpp"

#include <cmath>
#include <numeric>

namespace fracton {

SiteDistribution distribution_from_multipliers(int length, LagrangeMultipliers m) {
  if (length < 1) throw ValidationError("chain length must be positive");
  if (!std::isfinite(m.lambda_charge) || !std::isfinite(m.lambda_dipole)) {
    throw ValidationError("multipliers must be finite");
  }
  SiteDistribution d;
  d.probs.resize(static_cast<std::size_t>(length));
  for (int i = 1; i <= length; ++i) {
    const double u = m.lambda_charge + i * m.lambda_dipole;
    // guard large |u|: divide through by e^{|u|}
    const double a = std::exp(-std::abs(u));
    const double plus = u >= 0 ? 1.0 : a * a;
    const double minus = u >= 0 ? a * a : 1.0;
    const double zero = a;
    const double z = plus + minus + zero;
    d.probs[static_cast<std::size_t>(i - 1)] = {minus / z, zero / z, plus / z};
  }
  return d;
}

ChargeProfile profile_from_distribution(const SiteDistribution& distribution) {
  ChargeProfile profile;
  profile.mean_charge.reserve(distribution.probs.size());
  for (const auto& p : distribution.probs) profile.mean_charge.push_back(p[2] - p[0]);
  return profile;
}

std::pair<Rational, Rational> linearized_multipliers_rational(int length, SectorLabel label) {
  if (length < 2) throw ValidationError("linearization needs length >= 2");
  const long long L = length;
  const long long Q = label.charge;
  const long long P = label.dipole;
  auto reduce = [](long long num, long long den) {
    if (den < 0) {
      num = -num;
      den = -den;
    }
    const long long g = std::gcd(num < 0 ? -num : num, den);
    return g ? Rational{num / g, den / g} : Rational{0, 1};
  };
  const Rational lq = reduce(6 * L * Q + 3 * Q - 9 * P, L * (L - 1));
  const Rational lp = reduce(-9 * (L * Q + Q - 2 * P), L * (L * L - 1));
  return {lq, lp};
}

LagrangeMultipliers linearized_multipliers(int length, SectorLabel label) {
  const auto [lq, lp] = linearized_multipliers_rational(length, label);
  return LagrangeMultipliers{lq.value(), lp.value()};
}

bool sector_feasible(int length, SectorLabel label) {
  if (label.charge <= -length || label.charge >= length) return false;
  const DipoleRange range = dipole_range(length, label.charge);
  return range.min < label.dipole && label.dipole < range.max;
}

namespace {

struct Residuals {
  double charge, dipole;
  double norm() const { return std::max(std::abs(charge), std::abs(dipole)); }
};

Residuals residuals_at(int length, SectorLabel label, LagrangeMultipliers m) {
  double q = 0, p = 0;
  for (int i = 1; i <= length; ++i) {
    const double u = m.lambda_charge + i * m.lambda_dipole;
    const double mean = 2.0 * std::sinh(u) / (1.0 + 2.0 * std::cosh(u));
    q += mean;
    p += i * mean;
  }
  return {q - label.charge, p - static_cast<double>(label.dipole)};
}

}  // namespace

MultiplierSolution solve_multipliers(int length, SectorLabel label) {
  if (!sector_feasible(length, label)) {
    throw ValidationError("(charge, dipole) is not strictly inside the realizable region");
  }
  LagrangeMultipliers m = linearized_multipliers(length, label);
  Residuals r = residuals_at(length, label, m);

  constexpr int kMaxIterations = 100;
  constexpr double kTolerance = 1e-12;
  int iter = 0;
  for (; iter < kMaxIterations && r.norm() > kTolerance; ++iter) {
    // analytic Jacobian: d<S>/du = (2 cosh u + 4) / (1 + 2 cosh u)^2
    double j_qq = 0, j_qp = 0, j_pp = 0;
    for (int i = 1; i <= length; ++i) {
      const double u = m.lambda_charge + i * m.lambda_dipole;
      const double denom = 1.0 + 2.0 * std::cosh(u);
      const double g = (2.0 * std::cosh(u) + 4.0) / (denom * denom);
      j_qq += g;
      j_qp += i * g;
      j_pp += static_cast<double>(i) * i * g;
    }
    const double det = j_qq * j_pp - j_qp * j_qp;
    if (det == 0 || !std::isfinite(det)) throw NumericError("singular Jacobian");
    const double step_q = (j_pp * r.charge - j_qp * r.dipole) / det;
    const double step_p = (-j_qp * r.charge + j_qq * r.dipole) / det;

    // halve the step while the residual grows
    double scale = 1.0;
    for (int halvings = 0; halvings < 40; ++halvings) {
      const LagrangeMultipliers trial{m.lambda_charge - scale * step_q,
                                      m.lambda_dipole - scale * step_p};
      const Residuals rt = residuals_at(length, label, trial);
      if (rt.norm() < r.norm() || !std::isfinite(r.norm())) {
        m = trial;
        r = rt;
        break;
      }
      scale *= 0.5;
      if (halvings == 39) throw NumericError("no convergence: damping stalled");
    }
  }
  if (r.norm() > 1e-10) {
    throw NumericError("no convergence after maximum Newton iterations");
  }
  return MultiplierSolution{m, r.charge, r.dipole, iter};
}

ChargeProfile linear_profile(int length, LagrangeMultipliers m) {
  ChargeProfile profile;
  profile.mean_charge.resize(static_cast<std::size_t>(length));
  for (int i = 1; i <= length; ++i) {
    profile.mean_charge[static_cast<std::size_t>(i - 1)] =
        (2.0 / 3.0) * (m.lambda_charge + i * m.lambda_dipole);
  }
  return profile;
}

}  // namespace fracton
