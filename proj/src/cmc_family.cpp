#include "nilcmc/cmc_family.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace nilcmc {

namespace {

constexpr double kPi = std::numbers::pi;

void require_positive_H(double H) {
    if (!(H > 0.0)) throw std::invalid_argument("cmc_family: H must be > 0");
}

// Denominator D = (r^2-1)^2 + 4 H^2 (r^2+1)^2 shared by all closed forms.
double denom(double H, double r) {
    const double r2 = r * r;
    const double a = r2 - 1.0, b = r2 + 1.0;
    return a * a + 4.0 * H * H * b * b;
}

double arctan_term(double H) {
    return 0.5 * kPi - std::atan((4.0 * H * H - 1.0) / (4.0 * H));
}

// Default tolerances: tight relative target so that large-value integrals
// (H small) still come out to ~1e-12 relative.
constexpr double kAbsTol = 1e-13;
constexpr double kRelTol = 1e-13;

}  // namespace

double n3_of_r(double r) {
    const double r2 = r * r;
    return (r2 - 1.0) / (r2 + 1.0);
}

std::complex<double> dn3_dz(std::complex<double> z) {
    const double r2 = std::norm(z);
    const double d = (1.0 + r2) * (1.0 + r2);
    return 2.0 * std::conj(z) / d;
}

double conformal_factor(double H, double r) {
    require_positive_H(H);
    const double b = r * r + 1.0;
    const double D = denom(H, r);
    return 16.0 * (1.0 + 4.0 * H * H) * b * b / (D * D);
}

SphereProfilePoint profile(double H, double r) {
    require_positive_H(H);
    const double r2 = r * r;
    const double H2 = H * H;
    SphereProfilePoint p;
    p.r = r;
    p.rho = 4.0 * r / std::sqrt(denom(H, r));
    const double hden = (r2 - 1.0) * (r2 - 1.0) + 16.0 * H2 * H2 * (1.0 + r2) * (1.0 + r2) +
                        8.0 * H2 * (1.0 + r2 * r2);
    p.h = (1.0 + 4.0 * H2) / (4.0 * H2) *
          (-4.0 * H * (1.0 - r2 + 4.0 * H2 * (1.0 + r2)) / hden +
           std::atan((r2 - 1.0 + 4.0 * H2 * (r2 + 1.0)) / (4.0 * H)));
    p.psi = std::atan((4.0 * H2 - 1.0 + (1.0 + 4.0 * H2) * r2) / (4.0 * H));
    return p;
}

double profile_rho_prime(double H, double r) {
    require_positive_H(H);
    const double r2 = r * r;
    const double D = denom(H, r);
    const double Dp = 4.0 * r * ((r2 - 1.0) + 4.0 * H * H * (r2 + 1.0));
    return (4.0 * D - 2.0 * r * Dp) / std::pow(D, 1.5);
}

double profile_psi_prime(double H, double r) {
    require_positive_H(H);
    return 8.0 * H * r / denom(H, r);
}

double profile_h_prime(double H, double r) {
    require_positive_H(H);
    const double b = 1.0 + r * r;
    const double D = denom(H, r);
    return 16.0 * H * (1.0 + 4.0 * H * H) * r * b * b / (D * D);
}

QuadratureResult area(double H, EvalMode mode) {
    require_positive_H(H);
    if (mode == EvalMode::closed_form) {
        const double v = 2.0 * kPi *
                         (1.0 / (H * H) +
                          (1.0 + 4.0 * H * H) / (4.0 * H * H * H) * arctan_term(H));
        return {v, 0.0, 1};
    }
    auto f = [H](double r) { return r * conformal_factor(H, r); };
    QuadratureResult q = integrate_semi_infinite(f, kAbsTol, kRelTol);
    q.value *= 2.0 * kPi;
    q.err_estimate *= 2.0 * kPi;
    return q;
}

QuadratureResult volume(double H, EvalMode mode) {
    require_positive_H(H);
    const double H2 = H * H;
    if (mode == EvalMode::closed_form) {
        const double v =
            kPi / (16.0 * H2 * H2) *
            (4.0 * H * (4.0 * H2 + 3.0) -
             (4.0 * H2 + 1.0) * (4.0 * H2 - 3.0) * arctan_term(H));
        return {v, 0.0, 1};
    }
    auto f = [H, H2](double r) {
        const double b = 1.0 + r * r;
        const double D = denom(H, r);
        return 256.0 * H * (1.0 + 4.0 * H2) * r * r * r * b * b / (D * D * D);
    };
    QuadratureResult q = integrate_semi_infinite(f, kAbsTol, kRelTol);
    q.value *= kPi;
    q.err_estimate *= kPi;
    return q;
}

double isoperimetric_residual(double H) {
    require_positive_H(H);
    const double A = area(H, EvalMode::quadrature).value;
    const double V = volume(H, EvalMode::quadrature).value;
    return V - 4.0 * kPi / H + (4.0 * H * H - 3.0) / (8.0 * H) * A;
}

double isoperimetric_residual_corrected(double H) {
    require_positive_H(H);
    const double A = area(H, EvalMode::quadrature).value;
    const double V = volume(H, EvalMode::quadrature).value;
    return V - 2.0 * kPi / H + (4.0 * H * H - 3.0) / (8.0 * H) * A;
}

QuadratureResult spinor_energy(double H) {
    require_positive_H(H);
    auto f = [H](double r) {
        const double n3 = n3_of_r(r);
        return (H * H - 0.25 * n3 * n3) * conformal_factor(H, r) * r;
    };
    QuadratureResult q = integrate_semi_infinite(f, kAbsTol, kRelTol);
    q.value *= 0.5 * kPi;
    q.err_estimate *= 0.5 * kPi;
    return q;
}

std::complex<double> spinor_energy_complex(double H, int panels) {
    require_positive_H(H);
    if (panels < 2) throw std::invalid_argument("spinor_energy_complex: panels < 2");
    // int U^2 dx dy = 2 pi int U(r)^2 r dr with
    // U = (H/2) e^{alpha} - (i/4) e^{alpha} n3 (pure geometry of S_H).
    // Composite Simpson in t = r/(1+r); the t=1 endpoint integrand is 0.
    const int n = panels | 1;
    const double ht = 1.0 / (n - 1);
    std::vector<double> re(n, 0.0), im(n, 0.0);
    for (int i = 0; i + 1 < n; ++i) {
        const double t = i * ht;
        const double r = t / (1.0 - t);
        const double jac = 1.0 / ((1.0 - t) * (1.0 - t));
        const double e2a = conformal_factor(H, r);
        const double n3 = n3_of_r(r);
        const std::complex<double> U(0.5 * H * std::sqrt(e2a), -0.25 * std::sqrt(e2a) * n3);
        const std::complex<double> v = U * U * r * jac;
        re[i] = v.real();
        im[i] = v.imag();
    }
    const double two_pi = 2.0 * kPi;
    return {two_pi * simpson(re, ht), two_pi * simpson(im, ht)};
}

QuadratureResult willmore(double H, EvalMode mode) {
    require_positive_H(H);
    const double H2 = H * H;
    if (mode == EvalMode::closed_form) {
        const double v = 10.0 * kPi + kPi / (2.0 * H2) -
                         kPi * (1.0 + 4.0 * H2) * (3.0 * H2 - 0.25) / (2.0 * H2 * H) *
                             arctan_term(H);
        return {v, 0.0, 1};
    }
    auto f = [H, H2](double r) {
        const double n3 = n3_of_r(r);
        return (H2 + 0.25 - n3 * n3) * conformal_factor(H, r) * r;
    };
    QuadratureResult q = integrate_semi_infinite(f, kAbsTol, kRelTol);
    q.value *= 2.0 * kPi;
    q.err_estimate *= 2.0 * kPi;
    return q;
}

QuadratureResult khat_integral(double H) {
    require_positive_H(H);
    auto f = [H](double r) {
        const double n3 = n3_of_r(r);
        return (0.25 - n3 * n3) * conformal_factor(H, r) * r;
    };
    QuadratureResult q = integrate_semi_infinite(f, kAbsTol, kRelTol);
    q.value *= 2.0 * kPi;
    q.err_estimate *= 2.0 * kPi;
    return q;
}

}  // namespace nilcmc
