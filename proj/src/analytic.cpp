#include "fracton/analytic.hpp"

#include <cmath>

#include "fracton/errors.hpp"

namespace fracton {

ChargeProfile single_fracton_final(int length, int position) {
  if (length < 2) throw ValidationError("need at least two sites");
  if (position < 1 || position > length) throw ValidationError("fracton site out of range");
  ChargeProfile profile;
  profile.mean_charge.assign(static_cast<std::size_t>(length), 0.0);
  profile.mean_charge.front() = static_cast<double>(length - position) / (length - 1);
  profile.mean_charge.back() = static_cast<double>(position - 1) / (length - 1);
  return profile;
}

void validate(const TwoFractonGeometry& g) {
  if (!(g.length > 0) || !(g.separation > 0) || !(g.separation < g.length)) {
    throw ValidationError("two-fracton geometry needs 0 < separation < length");
  }
}

double hole_gas_density(const TwoFractonGeometry& g, double piston, double x) {
  validate(g);
  if (!(piston > -g.separation / 2 && piston < g.separation / 2)) {
    throw ValidationError("piston outside (-Delta/2, Delta/2)");
  }
  if (x > piston) return 0.0;
  return (g.length / 2 - g.separation / 2) / (g.length / 2 + piston);
}

double particle_gas_density(const TwoFractonGeometry& g, double piston, double x) {
  validate(g);
  if (!(piston > -g.separation / 2 && piston < g.separation / 2)) {
    throw ValidationError("piston outside (-Delta/2, Delta/2)");
  }
  if (x < piston) return 0.0;
  return (g.length / 2 - g.separation / 2) / (g.length / 2 - piston);
}

double piston_weight(const TwoFractonGeometry& g, double xi) {
  validate(g);
  const double l = g.length, d = g.separation;
  return std::sqrt(2.0 * (l - d) / (d * l * M_PI)) * std::exp(-2.0 * xi * xi * (l - d) / (l * d));
}

double piston_weight_width(const TwoFractonGeometry& g) {
  validate(g);
  return 0.5 * std::sqrt(g.length * g.separation / (g.length - g.separation));
}

double interior_charge_density(const TwoFractonGeometry& g, double x) {
  validate(g);
  if (std::abs(x) >= g.separation / 2) return 0.0;
  const double half_gas = g.length / 2 - g.separation / 2;
  return piston_weight(g, x) * half_gas * g.length / (g.length * g.length / 4 - x * x);
}

namespace {

double simpson(const std::function<double(double)>& f, double a, double fa, double m, double fm,
               double b, double fb) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adaptive_step(const std::function<double(double)>& f, double a, double fa, double b,
                     double fb, double m, double fm, double whole, double tol, int depth) {
  const double lm = (a + m) / 2, rm = (m + b) / 2;
  const double flm = f(lm), frm = f(rm);
  const double left = simpson(f, a, fa, lm, flm, m, fm);
  const double right = simpson(f, m, fm, rm, frm, b, fb);
  const double delta = left + right - whole;
  if (depth <= 0) throw NumericError("quadrature did not converge");
  if (std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  return adaptive_step(f, a, fa, m, fm, lm, flm, left, tol / 2, depth - 1) +
         adaptive_step(f, m, fm, b, fb, rm, frm, right, tol / 2, depth - 1);
}

}  // namespace

double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double abs_tol) {
  if (!(b > a)) throw ValidationError("quadrature needs a < b");
  const double m = (a + b) / 2;
  const double fa = f(a), fb = f(b), fm = f(m);
  const double whole = simpson(f, a, fa, m, fm, b, fb);
  return adaptive_step(f, a, fa, b, fb, m, fm, whole, abs_tol, 48);
}

double boundary_charge(const TwoFractonGeometry& g) {
  validate(g);
  const double half_gas = g.length / 2 - g.separation / 2;
  const double absorbed = adaptive_simpson(
      [&](double xi) { return piston_weight(g, xi) * half_gas / (g.length / 2 + xi); },
      -g.separation / 2, g.separation / 2, 1e-8);
  return 1.0 - absorbed;
}

double detailed_balance_ratio(const TwoFractonGeometry& g, double xi) {
  validate(g);
  const double d2 = g.separation / 2, l2 = g.length / 2;
  if (!(xi > -d2 && xi + 1 < d2)) throw ValidationError("xi and xi+1 must lie in (-Delta/2, Delta/2)");
  // W(xi)/W(xi+1) = [1 - rho_hole(xi; xi+1)] / [1 - rho_particle(xi+1; xi)]
  return ((d2 + xi + 1) * (l2 - xi)) / ((l2 + xi + 1) * (d2 - xi));
}

ChargeProfile two_fracton_final_profile(int length, int first_site, int second_site) {
  if (first_site < 1 || second_site > length || first_site >= second_site) {
    throw ValidationError("need 1 <= i1 < i2 <= L");
  }
  TwoFractonGeometry g{static_cast<double>(length),
                       static_cast<double>(second_site - first_site)};
  validate(g);
  const double center = (first_site + second_site) / 2.0;
  ChargeProfile profile;
  profile.mean_charge.assign(static_cast<std::size_t>(length), 0.0);
  for (int i = 2; i < length; ++i) {
    profile.mean_charge[static_cast<std::size_t>(i - 1)] = interior_charge_density(g, i - center);
  }
  const double ends = boundary_charge(g);
  profile.mean_charge.front() = ends;
  profile.mean_charge.back() = ends;
  return profile;
}

}  // namespace fracton
