#pragma once

#include <complex>

#include "nilcmc/numerics.hpp"

namespace nilcmc {

// The one-parameter family S_H of constant mean curvature spheres of
// revolution in Nil, 0 < H < infinity, in closed form.

enum class EvalMode { closed_form, quadrature };

// Third normal component on the conformal chart, n3 = (r^2-1)/(r^2+1).
double n3_of_r(double r);

// Analytic d n3 / dz at z (with r = |z|): 2 conj(z) / (1+r^2)^2.
std::complex<double> dn3_dz(std::complex<double> z);

// Conformal factor e^{2 alpha} of the induced metric on S_H.
double conformal_factor(double H, double r);

// Generating curve of S_H in cylindrical coordinates, parametrized by the
// conformal radius r. arctan arguments are monotone in r and stay on the
// principal branch.
struct SphereProfilePoint {
    double r = 0.0;
    double rho = 0.0;
    double psi = 0.0;
    double h = 0.0;
};
SphereProfilePoint profile(double H, double r);

// Derivatives of the generating curve (used by the chart construction).
double profile_rho_prime(double H, double r);
double profile_psi_prime(double H, double r);
double profile_h_prime(double H, double r);

QuadratureResult area(double H, EvalMode mode);
QuadratureResult volume(double H, EvalMode mode);

// V - 4 pi / H + (4H^2-3)/(8H) * A from quadrature. Note: this is the relation
// as printed; the numerically exact identity replaces 4 pi / H by 2 pi / H,
// see isoperimetric_residual_corrected.
double isoperimetric_residual(double H);
double isoperimetric_residual_corrected(double H);

// Spinor energy E(S_H) = (pi/2) int (H^2 - n3^2/4) e^{2 alpha} r dr; equals pi
// for every H.
QuadratureResult spinor_energy(double H);

// Complex spinor energy int U V dx dy computed with an n-panel composite rule
// (uniform in the compactifying variable t = r/(1+r)); the imaginary part
// vanishes under refinement for the closed sphere.
std::complex<double> spinor_energy_complex(double H, int panels);

// Willmore functional W(S_H) = int (H^2 + 1/4 - n3^2) d mu. The closed form
// reads the displayed denominator as 2 H^3.
QuadratureResult willmore(double H, EvalMode mode);

// int K_hat d mu over S_H by quadrature.
QuadratureResult khat_integral(double H);

}  // namespace nilcmc
