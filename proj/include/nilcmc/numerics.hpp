#pragma once

#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace nilcmc {

struct QuadratureResult {
    double value = 0.0;
    double err_estimate = 0.0;
    long evaluations = 0;
};

// Thrown when the subdivision budget is exhausted before the requested
// tolerance is met. Carries the partial estimate.
class QuadratureError : public std::runtime_error {
public:
    QuadratureError(const std::string& msg, QuadratureResult partial)
        : std::runtime_error(msg), partial_(partial) {}
    const QuadratureResult& partial() const { return partial_; }

private:
    QuadratureResult partial_;
};

// Adaptive Gauss-Kronrod 7/15 on [a,b]. Panels are bisected worst-first until
// the summed error estimate drops below max(abs_tol, rel_tol*|value|).
QuadratureResult integrate_interval(const std::function<double(double)>& f,
                                    double a, double b, double abs_tol,
                                    double rel_tol = 0.0,
                                    int max_subdivisions = 20000);

// Integral over [0, inf) via the substitution r = t/(1-t). Requires the
// integrand to decay at least like r^-3 so the transformed integrand stays
// bounded at t=1.
QuadratureResult integrate_semi_infinite(const std::function<double(double)>& f,
                                         double abs_tol, double rel_tol = 0.0,
                                         int max_subdivisions = 20000);

struct OdeState {
    double s = 0.0;
    std::vector<double> y;
};

// One accepted integrator step together with the derivative at both ends,
// enough for cubic Hermite dense output on the step.
struct OdeStep {
    double s0, s1;
    std::vector<double> y0, y1, f0, f1;
};

class OdeTrajectory {
public:
    std::vector<OdeStep> steps;

    double s_begin() const { return steps.front().s0; }
    double s_end() const { return steps.back().s1; }
    // Dense evaluation by cubic Hermite interpolation on the containing step.
    std::vector<double> at(double s) const;

private:
    mutable std::size_t hint_ = 0;
};

using OdeRhs =
    std::function<void(double s, const std::vector<double>& y, std::vector<double>& dy)>;
// Optional stop condition: integration halts at the root of g(s, y) crossing
// zero in the +direction.
using OdeEvent = std::function<double(double s, const std::vector<double>& y)>;

// Adaptive Dormand-Prince 5(4). Deterministic step control: accepted when the
// embedded error estimate is below tol per step (mixed abs/rel with the same
// tol). Throws on step underflow or step budget exhaustion.
OdeTrajectory ode_solve(const OdeRhs& rhs, const OdeState& y0, double s_end,
                        double tol, const OdeEvent& stop_event = nullptr,
                        double max_step = 0.0, long max_steps = 2000000);

// Central finite-difference first derivative of a scalar function.
double fd_derivative(const std::function<double(double)>& f, double x, int order,
                     double step);

// Jacobian of f: R^n -> R^m by per-coordinate central stencils of the given
// order (2 or 4); returned row-major, m rows of n entries.
std::vector<std::vector<double>> finite_difference(
    const std::function<std::vector<double>(const std::vector<double>&)>& f,
    const std::vector<double>& x, int order, double step);

// Stencil coefficients on a uniform grid (offsets -order/2..order/2), for the
// first and second derivative; divide by h resp. h^2.
const std::vector<double>& stencil_d1(int order);
const std::vector<double>& stencil_d2(int order);

// Composite Simpson on uniformly sampled data (n odd preferred; a trapezoid
// patch covers the last panel when n is even).
double simpson(const std::vector<double>& f, double h);

// Derivative of uniformly sampled data, 4th order interior stencils with
// one-sided 4th order stencils at the boundary.
std::vector<double> sampled_derivative(const std::vector<double>& f, double h);

}  // namespace nilcmc
