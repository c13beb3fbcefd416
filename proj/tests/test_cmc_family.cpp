#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <complex>
#include <numbers>

#include "nilcmc/cmc_family.hpp"
#include "nilcmc/weierstrass.hpp"

using namespace nilcmc;
namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("n3 of the conformal radius") {
    CHECK(n3_of_r(0.0) == doctest::Approx(-1.0));
    CHECK(n3_of_r(1.0) == doctest::Approx(0.0));
    CHECK(std::abs(n3_of_r(1e6) - 1.0) < 1e-11);
}

TEST_CASE("conformal factor") {
    CHECK(conformal_factor(0.5, 0.0) == doctest::Approx(8.0).epsilon(1e-14));
    // direct formula at r=1 for a few H
    for (double H : {0.3, 0.5, 1.0, 2.0}) {
        const double direct = 16.0 * (1.0 + 4.0 * H * H) * 4.0 /
                              std::pow(4.0 * H * H * 4.0, 2);
        CHECK(conformal_factor(H, 1.0) == doctest::Approx(direct).epsilon(1e-14));
    }
    CHECK_THROWS(conformal_factor(0.0, 1.0));
}

TEST_CASE("conformal factor is consistent with the n3 reconstruction") {
    for (double H : {0.25, 1.0, 3.0})
        for (double x : {0.3, 0.9, 1.4})
            for (double y : {0.1, 0.8}) {
                const std::complex<double> z(x, y);
                const double r = std::abs(z);
                const double rebuilt =
                    metric_from_n3_value(n3_of_r(r), dn3_dz(z), H);
                CHECK(std::abs(rebuilt - conformal_factor(H, r)) <
                      1e-12 * conformal_factor(H, r));
            }
}

TEST_CASE("generating curve at the equator, H = 1/2") {
    const auto p = profile(0.5, 1.0);
    CHECK(p.rho == doctest::Approx(2.0).epsilon(1e-14));  // rho(1) = 1/H
    CHECK(p.psi == doctest::Approx(kPi / 4.0).epsilon(1e-14));
    CHECK(p.h == doctest::Approx(kPi / 2.0 - 1.0).epsilon(1e-13));
}

TEST_CASE("generating curve monotonicity and equatorial radius") {
    for (double H : {0.2, 1.0, 5.0}) {
        CHECK(profile(H, 1.0).rho == doctest::Approx(1.0 / H).epsilon(1e-14));
        double prev_psi = -1e300, prev_h = -1e300;
        for (double r = 0.05; r < 20.0; r *= 1.3) {
            const auto p = profile(H, r);
            CHECK(p.psi > prev_psi);
            CHECK(p.h > prev_h);
            prev_psi = p.psi;
            prev_h = p.h;
        }
    }
}

TEST_CASE("area closed form vs quadrature, spot value at H = 1/2") {
    CHECK(area(0.5, EvalMode::closed_form).value ==
          doctest::Approx(8.0 * kPi + 4.0 * kPi * kPi).epsilon(1e-12));
    for (double H : {0.05, 0.3, 1.0, 4.0, 20.0}) {
        const double c = area(H, EvalMode::closed_form).value;
        const double q = area(H, EvalMode::quadrature).value;
        CHECK(std::abs(c - q) < 1e-8 * c);
    }
    const double H = 100.0;
    CHECK(std::abs(H * H * area(H, EvalMode::closed_form).value / (4.0 * kPi) - 1.0) <
          0.01);
}

TEST_CASE("volume closed form vs quadrature") {
    // at 4H^2 = 3 the area term of the isoperimetric relation drops out and
    // V = 2 pi / H exactly
    const double H0 = std::sqrt(3.0) / 2.0;
    CHECK(volume(H0, EvalMode::closed_form).value ==
          doctest::Approx(2.0 * kPi / H0).epsilon(1e-12));
    CHECK(volume(0.5, EvalMode::closed_form).value ==
          doctest::Approx(8.0 * kPi + 2.0 * kPi * kPi).epsilon(1e-12));
    for (double H : {0.05, 0.3, 1.0, 4.0, 20.0}) {
        const double c = volume(H, EvalMode::closed_form).value;
        const double q = volume(H, EvalMode::quadrature).value;
        CHECK(std::abs(c - q) < 1e-8 * c);
    }
    const double H = 100.0;
    CHECK(std::abs(H * H * H * volume(H, EvalMode::closed_form).value /
                       (4.0 * kPi / 3.0) - 1.0) < 0.02);
}

TEST_CASE("isoperimetric relation") {
    // the printed constant 4 pi / H leaves an exact -2 pi / H residual; the
    // 2 pi / H form closes to quadrature accuracy
    for (double H : {0.1, 1.0, 10.0}) {
        CHECK(std::abs(isoperimetric_residual(H) + 2.0 * kPi / H) < 1e-8);
        CHECK(std::abs(isoperimetric_residual_corrected(H)) < 1e-8);
    }
}

TEST_CASE("spinor energy is pi for every H") {
    for (double H : {0.05, 0.1, 1.0, 10.0, 50.0})
        CHECK(spinor_energy(H).value == doctest::Approx(kPi).epsilon(1e-9));
}

TEST_CASE("willmore functional") {
    for (double H : {0.5, 1.0, 2.0}) {
        const double q = willmore(H, EvalMode::quadrature).value;
        const double c = willmore(H, EvalMode::closed_form).value;
        CHECK(std::abs(q - c) < 1e-8);
        // ambient curvature integral relation
        const double khat = khat_integral(H).value;
        const double rel = 16.0 * kPi - (4.0 * H * H - 0.25) * area(H, EvalMode::quadrature).value;
        CHECK(std::abs(khat - rel) < 1e-8 * std::max(1.0, std::abs(rel)));
    }
    CHECK(std::abs(willmore(0.5, EvalMode::quadrature).value -
                   willmore(2.0, EvalMode::quadrature).value) > 0.1);
}

TEST_CASE("complex spinor energy is real in the limit") {
    const auto coarse = spinor_energy_complex(1.0, 64);
    const auto fine = spinor_energy_complex(1.0, 256);
    CHECK(std::abs(fine.imag()) <= std::abs(coarse.imag()));
    CHECK(std::abs(fine.imag()) < 1e-6);
    CHECK(fine.real() == doctest::Approx(kPi).epsilon(1e-6));
}
