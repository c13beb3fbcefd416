#pragma once

#include <array>
#include <cmath>

namespace nilcmc {

// Point of the Heisenberg group in the matrix coordinates (x, y, z); the
// ambient metric is ds^2 = dx^2 + dy^2 + (dz - x dy)^2.
struct NilPoint {
    double x = 0.0, y = 0.0, z = 0.0;
};

// Cylindrical coordinates (rho, phi, h); phi is kept unnormalized so curves
// with winding stay representable.
struct CylPoint {
    double rho = 0.0, phi = 0.0, h = 0.0;
};

// Tangent vector in the left-invariant orthonormal frame e1, e2, e3.
struct FrameVector {
    double a1 = 0.0, a2 = 0.0, a3 = 0.0;

    double dot(const FrameVector& o) const { return a1 * o.a1 + a2 * o.a2 + a3 * o.a3; }
    double norm() const { return std::sqrt(dot(*this)); }
};

NilPoint cyl_to_cart(const CylPoint& p);

// Bilinear form of the metric in cylindrical coordinates, slots (d rho, d phi, d h):
// ds^2 = drho^2 - rho^2 dh dphi + (1/4) rho^2 (4 + rho^2) dphi^2 + dh^2.
double metric_cyl(const CylPoint& p, const std::array<double, 3>& a,
                  const std::array<double, 3>& b);

// Bilinear form of the Cartesian metric dx^2 + dy^2 + (dz - x dy)^2, slots (dx, dy, dz).
double metric_cart(const NilPoint& p, const std::array<double, 3>& a,
                   const std::array<double, 3>& b);

// Levi-Civita connection on the left-invariant frame: nabla_{e_i} e_j as a
// constant frame vector, i, j in {1, 2, 3}.
FrameVector levi_civita(int i, int j);

// Sectional curvature of Nil along a tangent plane whose unit normal has
// third frame component n3: K_hat = 1/4 - n3^2.
double tangent_sectional_curvature(double n3);

// Riemannian volume density in (rho, phi, h): d nu = rho drho dphi dh.
double volume_density_cyl(double rho);

}  // namespace nilcmc
