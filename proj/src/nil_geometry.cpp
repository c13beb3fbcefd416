#include "nilcmc/nil_geometry.hpp"

#include <stdexcept>

namespace nilcmc {

NilPoint cyl_to_cart(const CylPoint& p) {
    NilPoint q;
    q.x = p.rho * std::cos(p.phi);
    q.y = p.rho * std::sin(p.phi);
    q.z = 0.5 * p.rho * p.rho * std::cos(p.phi) * std::sin(p.phi) + p.h;
    return q;
}

double metric_cyl(const CylPoint& p, const std::array<double, 3>& a,
                  const std::array<double, 3>& b) {
    if (p.rho < 0.0) throw std::invalid_argument("metric_cyl: rho < 0");
    const double r2 = p.rho * p.rho;
    const double g_pp = 0.25 * r2 * (4.0 + r2);
    const double g_ph = -0.5 * r2;  // polarization of -rho^2 dh dphi
    return a[0] * b[0] + g_pp * a[1] * b[1] + a[2] * b[2] +
           g_ph * (a[1] * b[2] + a[2] * b[1]);
}

double metric_cart(const NilPoint& p, const std::array<double, 3>& a,
                   const std::array<double, 3>& b) {
    const double wa = a[2] - p.x * a[1];
    const double wb = b[2] - p.x * b[1];
    return a[0] * b[0] + a[1] * b[1] + wa * wb;
}

FrameVector levi_civita(int i, int j) {
    if (i < 1 || i > 3 || j < 1 || j > 3)
        throw std::out_of_range("levi_civita: frame index out of range");
    if (i == j) return {};
    // nabla_{e1}e2 = e3/2, nabla_{e2}e1 = -e3/2,
    // nabla_{e1}e3 = nabla_{e3}e1 = -e2/2, nabla_{e2}e3 = nabla_{e3}e2 = e1/2.
    if (i == 1 && j == 2) return {0.0, 0.0, 0.5};
    if (i == 2 && j == 1) return {0.0, 0.0, -0.5};
    if ((i == 1 && j == 3) || (i == 3 && j == 1)) return {0.0, -0.5, 0.0};
    return {0.5, 0.0, 0.0};  // (2,3) and (3,2)
}

double tangent_sectional_curvature(double n3) {
    if (std::abs(n3) > 1.0 + 1e-15)
        throw std::domain_error("tangent_sectional_curvature: |n3| > 1");
    return 0.25 - n3 * n3;
}

double volume_density_cyl(double rho) {
    if (rho < 0.0) throw std::invalid_argument("volume_density_cyl: rho < 0");
    return rho;
}

}  // namespace nilcmc
