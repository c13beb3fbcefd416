#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include "nilcmc/cmc_family.hpp"
#include "nilcmc/weierstrass.hpp"

using namespace nilcmc;
namespace {
constexpr double kPi = std::numbers::pi;

SpinorGrid chart(double H, int n, int order = 4) {
    return make_cmc_sphere_grid(H, -1.6, 1.6, -1.6, 1.6, n, n, order);
}
}  // namespace

TEST_CASE("frame components are isotropic and satisfy the metric identity") {
    const auto g = chart(1.0, 81);
    double worst_iso = 0.0, worst_metric = 0.0;
    for (int k = 0; k < g.size(); ++k) {
        if (!g.mask[k]) continue;
        const Complex iso = g.Z1[k] * g.Z1[k] + g.Z2[k] * g.Z2[k] + g.Z3[k] * g.Z3[k];
        worst_iso = std::max(worst_iso, std::abs(iso));
        const double n3 = g.n3(k);
        const double lhs = 4.0 * std::norm(g.Z3[k]);
        const double rhs = std::exp(2.0 * g.alpha[k]) * (1.0 - n3 * n3);
        worst_metric = std::max(worst_metric, std::abs(lhs - rhs));
    }
    CHECK(worst_iso < 1e-12);
    CHECK(worst_metric < 1e-9);
}

TEST_CASE("spinor round-trip on random isotropic triples") {
    std::mt19937 rng(42);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int k = 0; k < 200; ++k) {
        // isotropic triple from a random spinor
        const Complex p1(u(rng), u(rng)), p2(u(rng), u(rng));
        FrameComponents Z;
        Z.Z1 = 0.5 * Complex(0, 1) * (std::conj(p2) * std::conj(p2) + p1 * p1);
        Z.Z2 = 0.5 * (std::conj(p2) * std::conj(p2) - p1 * p1);
        Z.Z3 = p1 * std::conj(p2);
        // returns (psi1, conj(psi2)); the common sign ambiguity drops out in
        // the squares and the product
        const auto [q1, q2bar] = spinor_from_Z(Z);
        CHECK(std::abs(q1 * q2bar - Z.Z3) < 1e-12);
        CHECK(std::abs(q1 * q1 - p1 * p1) < 1e-12);
        CHECK(std::abs(q2bar * q2bar - std::conj(p2) * std::conj(p2)) < 1e-12);
    }
}

TEST_CASE("spinor magnitudes at equator and pole of the sphere chart") {
    const auto g = chart(0.5, 81);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            const int k = g.idx(i, j);
            if (!g.mask[k]) continue;
            const double r = std::abs(g.z(i, j));
            if (std::abs(r - 1.0) < 1e-3)
                CHECK(std::abs(std::abs(g.psi1[k]) - std::abs(g.psi2[k])) < 1e-2);
        }
    // e^alpha = |psi1|^2 + |psi2|^2 everywhere
    double worst = 0.0;
    for (int k = 0; k < g.size(); ++k)
        if (g.mask[k])
            worst = std::max(worst, std::abs(std::exp(g.alpha[k]) -
                                             std::norm(g.psi1[k]) - std::norm(g.psi2[k])));
    CHECK(worst < 1e-9);
}

TEST_CASE("dressing: unit normal and vanishing Atilde on cmc data") {
    auto sup_atilde = [](const SpinorGrid& g, double& worst_n) {
        double worst_at = 0.0;
        for (int j = 0; j < g.ny; ++j)
            for (int i = 0; i < g.nx; ++i) {
                const int k = g.idx(i, j);
                if (!g.mask[k]) continue;
                worst_n = std::max(worst_n, std::abs(g.normal[k].norm() - 1.0));
                if (g.stencil_ok(i, j) && std::isfinite(std::abs(g.Atilde[k])))
                    worst_at = std::max(worst_at, std::abs(g.Atilde[k]));
            }
        return worst_at;
    };
    double worst_n = 0.0;
    const double coarse = sup_atilde(chart(1.0, 61), worst_n);
    const double fine = sup_atilde(chart(1.0, 121), worst_n);
    CHECK(worst_n < 1e-9);
    // A comes from 4th-order finite differences of psi, so Atilde vanishes at
    // stencil order rather than to round-off
    CHECK(fine < 1e-5);
    CHECK(std::log2(coarse / fine) > 3.5);
}

TEST_CASE("identity residuals converge at stencil order") {
    for (int order : {2, 4}) {
        const auto rc = identity_residuals(chart(1.0, 61, order));
        const auto rf = identity_residuals(chart(1.0, 121, order));
        auto check_order = [&](double c, double f) {
            const double p = std::log2(c / f);
            CHECK(std::abs(p - order) < 0.5);
        };
        check_order(rc.dirac, rf.dirac);
        check_order(rc.deriv_psi1, rf.deriv_psi1);
        check_order(rc.deriv_psi2, rf.deriv_psi2);
        check_order(rc.eq6, rf.eq6);
        check_order(rc.eq9, rf.eq9);
        CHECK(rc.eq8 < 1e-12);
        CHECK(rf.eq8 < 1e-12);
    }
}

TEST_CASE("node perturbation localizes in the Dirac residual") {
    auto g = chart(1.0, 61);
    const auto clean = identity_residuals(g);
    const int k = g.idx(g.nx / 4, g.ny / 4);
    REQUIRE(g.mask[k]);
    g.psi1[k] += 1e-4;
    const auto bumped = identity_residuals(g);
    CHECK(bumped.dirac > 10.0 * clean.dirac);
}

TEST_CASE("main equation residual") {
    // constant field: exactly zero
    const int n = 41;
    std::vector<double> field(static_cast<std::size_t>(n) * n, 0.3);
    for (double v : main_equation_residual(field, n, n, 0.01, 0.01))
        if (std::isfinite(v)) CHECK(std::abs(v) < 1e-11);  // stencil round-off / h^2

    // n3 = x patch: residual 2x/(1-x^2)
    const double x0 = 0.1, h = 0.005;
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i)
            field[static_cast<std::size_t>(j) * n + i] = x0 + i * h;
    const auto res = main_equation_residual(field, n, n, h, h);
    const int mid = (n / 2) * n + n / 2;
    const double x = x0 + (n / 2) * h;
    CHECK(res[mid] == doctest::Approx(2.0 * x / (1.0 - x * x)).epsilon(1e-6));

    // the sphere normal solves the equation with analytic derivatives
    for (double xx : {0.3, 0.8, 1.5})
        for (double yy : {0.2, 1.1}) {
            const std::complex<double> z(xx, yy);
            const double r2 = std::norm(z);
            const auto dz = dn3_dz(z);
            const double lap = -8.0 * (r2 - 1.0) / std::pow(1.0 + r2, 3);
            CHECK(std::abs(main_equation_residual_analytic(
                      (r2 - 1.0) / (r2 + 1.0), 2.0 * dz.real(), -2.0 * dz.imag(),
                      lap)) < 1e-8);
        }
}

TEST_CASE("metric reconstruction from n3") {
    // analytic-derivative reconstruction hits Eq. values
    for (double H : {0.5, 2.0})
        for (double x : {0.4, 1.0, 1.7}) {
            const std::complex<double> z(x, 0.3);
            const double r = std::abs(z);
            CHECK(std::abs(metric_from_n3_value(n3_of_r(r), dn3_dz(z), H) -
                           conformal_factor(H, r)) < 1e-10);
        }

    // finite-difference version converges to the analytic one
    const double H = 1.0;
    auto sup_err = [&](int n) {
        const double a = 0.4, b = 1.6, h = (b - a) / (n - 1);
        std::vector<double> field(static_cast<std::size_t>(n) * n);
        for (int j = 0; j < n; ++j)
            for (int i = 0; i < n; ++i)
                field[static_cast<std::size_t>(j) * n + i] =
                    n3_of_r(std::hypot(a + i * h, a + j * h));
        const auto rec = metric_from_n3(field, n, n, h, h, H);
        double worst = 0.0;
        for (int j = 2; j + 2 < n; ++j)
            for (int i = 2; i + 2 < n; ++i) {
                const double r = std::hypot(a + i * h, a + j * h);
                worst = std::max(worst,
                                 std::abs(rec[static_cast<std::size_t>(j) * n + i] -
                                          conformal_factor(H, r)));
            }
        return worst;
    };
    const double p = std::log2(sup_err(41) / sup_err(81));
    CHECK(std::abs(p - 4.0) < 0.6);
}

TEST_CASE("immersion-built grid matches the closed-form chart") {
    const double H = 1.0;
    Immersion f = [H](Complex z) {
        const double r = std::abs(z);
        const auto p = profile(H, std::max(r, 1e-12));
        const double phi = std::arg(z) + p.psi;
        return cyl_to_cart({p.rho, phi, p.h});
    };
    const auto g = make_grid_from_immersion(f, 0.55, 1.45, 0.15, 0.95, 61, 61);
    const auto ref = make_cmc_sphere_grid(H, 0.55, 1.45, 0.15, 0.95, 61, 61);
    double worst_alpha = 0.0, worst_H = 0.0;
    for (int j = 4; j + 4 < g.ny; ++j)
        for (int i = 4; i + 4 < g.nx; ++i) {
            const int k = g.idx(i, j);
            if (!g.mask[k] || !ref.mask[k]) continue;
            worst_alpha = std::max(worst_alpha, std::abs(g.alpha[k] - ref.alpha[k]));
            if (std::isfinite(g.H[k]))
                worst_H = std::max(worst_H, std::abs(g.H[k] - H));
        }
    CHECK(worst_alpha < 1e-6);
    CHECK(worst_H < 1e-4);
}
