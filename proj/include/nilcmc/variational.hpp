#pragma once

#include <complex>
#include <iosfwd>
#include <string>
#include <vector>

#include "nilcmc/revolution.hpp"
#include "nilcmc/weierstrass.hpp"

namespace nilcmc {

// Pointwise Euler-Lagrange density of the spinor energy,
// Delta H + 2H(H^2 - K) + 2 e^{-4 alpha} (A conj(Z3)^2 + conj(A) Z3^2),
// with Delta = 4 e^{-2 alpha} d dbar and K the product of principal
// curvatures, i.e. the intrinsic curvature -4 e^{-2 alpha} d dbar alpha minus
// the ambient sectional term 1/4 - n3^2 (Gauss equation).
struct ElResidualField {
    std::vector<double> value;  // NaN on masked / stencil-less nodes
    std::vector<double> K;
    double sup = 0.0;  // over valid nodes
};

ElResidualField el_residual(const SpinorGrid& grid);

// Residuals of the algebraic identities behind the criticality of cmc spheres
// (A = -Z3^2/(2H+i), K from the Gauss relation H^2 - K = 4 e^{-4 alpha}|A|^2).
struct Theorem3Residuals {
    double gauss_term = 0.0;   // 2H(H^2-K) vs 8 e^{-4a} H |Z3|^4/(4H^2+1)
    double hopf_term = 0.0;    // 2 e^{-4a}(A cZ3^2 + cA Z3^2) vs its closed form
    double el_sum = 0.0;       // the two terms cancel (Delta H = 0)
};
Theorem3Residuals theorem3_identities(double H, std::complex<double> Z3,
                                      double alpha);

// Adds amplitude*sin(mode*pi*s/L) to sigma (mode >= 1), or a seeded random
// combination of the first six modes (mode == 0), re-integrates u, v from the
// kinematic relations and restores u(L)=0 by a sin(pi s/L)-shaped correction.
ProfileCurve perturb(const ProfileCurve& curve, double amplitude, int mode,
                     unsigned seed = 0);

struct DescentOptions {
    int max_iters = 500;
    double tol_E = 1e-12;        // stop when the accepted decrease drops below
    double tol_constraint = 1e-9;
    double penalty = 1e6;        // quadratic penalty weight on u(L)
    double fd_step = 1e-6;       // gradient finite-difference step
    int lbfgs_memory = 8;
};

struct DescentTraceRow {
    int iter = 0;
    double E = 0.0;          // accepted objective value
    double violation = 0.0;  // |u(L)|
    double step = 0.0;       // accepted line-search step
};

struct DescentTrace {
    std::vector<DescentTraceRow> rows;
    bool converged = false;
    std::string message;
};

// Descends the reduced spinor energy over the sigma-discretization of a
// sphere-topology curve (endpoint angles fixed, closure by penalty, final
// feasibility restored by projection). Accepted objective values are monotone
// non-increasing.
std::pair<ProfileCurve, DescentTrace> minimize_energy(
    const ProfileCurve& initial, const DescentOptions& options = {});

void write_trace_csv(std::ostream& os, const DescentTrace& trace);
void write_trace_csv(const std::string& path, const DescentTrace& trace);

}  // namespace nilcmc
