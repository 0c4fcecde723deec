#pragma once

#include <functional>

#include "fracton/spin_state.hpp"

namespace fracton {

// Infinite-time profile for one fracton at site p: the whole charge sits in
// two boundary peaks weighted so that Q = 1 and P = p are kept.
ChargeProfile single_fracton_final(int length, int position);

// Continuum geometry of the symmetric two-fracton problem: walls at +-L/2,
// fractons initially at +-Delta/2, coordinates centered on the midpoint.
struct TwoFractonGeometry {
  double length = 0;      // L
  double separation = 0;  // Delta
};

void validate(const TwoFractonGeometry& geometry);

// Stationary gas densities for a piston frozen at xi: the hole gas fills
// (-L/2, xi) and the particle gas (xi, L/2), each at uniform density.
double hole_gas_density(const TwoFractonGeometry& g, double piston, double x);
double particle_gas_density(const TwoFractonGeometry& g, double piston, double x);

// Gaussian stationary weight of the piston position, normalized over the
// real line; width (1/2) sqrt(L Delta / (L - Delta)).
double piston_weight(const TwoFractonGeometry& g, double xi);
double piston_weight_width(const TwoFractonGeometry& g);

// Interior charge density of the final state: W(x) (L/2 - Delta/2) L /
// (L^2/4 - x^2) for |x| < Delta/2, zero elsewhere in the open interior.
double interior_charge_density(const TwoFractonGeometry& g, double x);

// Charge of each boundary delta peak, 1 - integral of the hole-gas weight;
// adaptive quadrature to 1e-8.
double boundary_charge(const TwoFractonGeometry& g);

// Exact stationary ratio W(xi)/W(xi+1) = P(xi+1 -> xi)/P(xi -> xi+1) of the
// piston model; > 1 for xi >= 0 (the restoring bias toward the center).
double detailed_balance_ratio(const TwoFractonGeometry& g, double xi);

// Final profile sampled on the lattice: interior sites take the continuum
// density at x_i = i - (i1+i2)/2, sites 1 and L take the boundary charge.
ChargeProfile two_fracton_final_profile(int length, int first_site, int second_site);

// Adaptive Simpson quadrature with an absolute tolerance.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double abs_tol);

}  // namespace fracton
