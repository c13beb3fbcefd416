#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "nilcmc/nil_geometry.hpp"

namespace nilcmc {

using Complex = std::complex<double>;

// Discrete conformal chart carrying the spinor representation data of an
// immersion into Nil. Complex derivative convention: d = (dx - i dy)/2,
// dbar = (dx + i dy)/2.
struct SpinorGrid {
    int nx = 0, ny = 0;
    double x0 = 0.0, y0 = 0.0;
    double step_x = 0.0, step_y = 0.0;
    int fd_order = 4;  // stencil order for on-grid derivatives (2 or 4)

    // per-node fields, row-major (j * nx + i)
    std::vector<Complex> Z1, Z2, Z3;
    std::vector<Complex> psi1, psi2;
    std::vector<double> alpha;  // metric e^{2 alpha} dz dzbar
    std::vector<double> H;
    std::vector<Complex> U;        // potential, U = V
    std::vector<FrameVector> normal;
    std::vector<Complex> A;        // Hopf differential coefficient
    std::vector<Complex> Atilde;   // A + Z3^2/(2H+i)
    std::vector<std::uint8_t> mask;  // 1 = node carries valid data

    int idx(int i, int j) const { return j * nx + i; }
    double x(int i) const { return x0 + i * step_x; }
    double y(int j) const { return y0 + j * step_y; }
    Complex z(int i, int j) const { return {x(i), y(j)}; }
    int size() const { return nx * ny; }
    // true when the full derivative stencil around (i,j) lies in the mask
    bool stencil_ok(int i, int j) const;
    double n3(int node) const {
        return std::exp(-alpha[node]) *
               (std::norm(psi2[node]) - std::norm(psi1[node]));
    }
};

// Immersion into Nil given as z -> f(z); derivatives taken by finite
// differences of the grid's order.
using Immersion = std::function<NilPoint(Complex)>;

// Frame components of f^{-1} f_z in the left-invariant coframe
// (dx, dy, dz - x dy): Z = (x_z, y_z, z_z - x y_z).
struct FrameComponents {
    Complex Z1, Z2, Z3;
};

// Chart of the cmc sphere S_H over the box [x0,x1]x[y0,y1]; all base fields
// (Z, alpha, psi, H) filled from the closed forms, a disk of radius
// 3*step around the polar singularity z=0 is masked out.
SpinorGrid make_cmc_sphere_grid(double H, double x0, double x1, double y0,
                                double y1, int nx, int ny, int order = 4);

// Chart of a general immersion; Z and alpha from finite differences of f,
// spinor recovered from Z. Boundary nodes without stencil support are masked.
SpinorGrid make_grid_from_immersion(const Immersion& f, double x0, double x1,
                                    double y0, double y1, int nx, int ny,
                                    int order = 4);

// Analytic frame components of the S_H chart at z (z != 0).
FrameComponents cmc_sphere_frame_components(double H, Complex z);

// Spinor from an isotropic triple: psi1^2 = -(Z2 + i Z1), conj(psi2)^2 =
// Z2 - i Z1, relative sign fixed by Z3 = psi1 conj(psi2). Returns one of the
// two consistent choices (+-).
std::pair<Complex, Complex> spinor_from_Z(const FrameComponents& Z);

// Recovers psi over the whole grid with sign continuation along a spanning
// tree from the grid center; nodes unreachable without crossing
// |psi_i| < 1e-6 e^{alpha/2} are masked.
void recover_spinors(SpinorGrid& grid);

// Fills U, normal, A, Atilde from psi/alpha/H. A needs on-grid derivatives of
// psi; nodes without stencil support keep A = NaN.
void dress(SpinorGrid& grid);

struct IdentityResiduals {
    double dirac = 0.0;       // max of |d psi2 + U psi1|, |dbar psi1 - V psi2|
    double deriv_psi1 = 0.0;  // d psi1 = alpha_z psi1 + A e^-alpha psi2 - (i/2) psi1^2 conj(psi2)
    double deriv_psi2 = 0.0;  // dbar psi2 = -conj(A) e^-alpha psi1 + alpha_zbar psi2 - (i/2) conj(psi1) psi2^2
    double eq6 = 0.0;         // d n3 identity
    double eq8 = 0.0;         // e^{2 alpha} = 4 |Z3|^2 / (1 - n3^2)
    double eq9 = 0.0;         // d conj(Z3) identity
    double atilde = 0.0;      // sup |Atilde|
};

// Sup-norms over all nodes with full stencil support.
IdentityResiduals identity_residuals(const SpinorGrid& grid);

// Residual of Delta n3 + 2 n3 (n3_x^2 + n3_y^2) / (1 - n3^2) by grid finite
// differences; nodes with |n3| >= 1 or missing stencil return NaN.
std::vector<double> main_equation_residual(const std::vector<double>& n3_field,
                                           int nx, int ny, double step_x,
                                           double step_y, int order = 4);

// Same residual with caller-supplied analytic derivatives.
double main_equation_residual_analytic(double n3, double n3x, double n3y,
                                       double laplacian_n3);

// Conformal factor reconstruction e^{2 alpha} = 4/(1-n3^2) *
// (16 H^2 + 4)/(4 H^2 + n3^2)^2 * |d n3/dz|^2.
double metric_from_n3_value(double n3, Complex dn3dz, double H);
std::vector<double> metric_from_n3(const std::vector<double>& n3_field, int nx,
                                   int ny, double step_x, double step_y,
                                   double H, int order = 4);

// CSV dump: one row per unmasked node.
void write_grid_csv(std::ostream& os, const SpinorGrid& grid);
void write_grid_csv(const std::string& path, const SpinorGrid& grid);

}  // namespace nilcmc
