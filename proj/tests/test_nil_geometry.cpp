#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <array>
#include <cmath>
#include <numbers>
#include <random>

#include "nilcmc/nil_geometry.hpp"
#include "nilcmc/numerics.hpp"

using namespace nilcmc;
namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("cylindrical to Cartesian coordinates") {
    const NilPoint a = cyl_to_cart({0.0, 1.3, 5.0});
    CHECK(a.x == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(a.y == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(a.z == doctest::Approx(5.0).epsilon(1e-15));

    const NilPoint b = cyl_to_cart({1.0, 0.0, 0.0});
    CHECK(b.x == doctest::Approx(1.0));
    CHECK(b.y == doctest::Approx(0.0));
    CHECK(b.z == doctest::Approx(0.0));

    const NilPoint c = cyl_to_cart({1.0, kPi / 4.0, 0.0});
    CHECK(c.x == doctest::Approx(std::sqrt(2.0) / 2.0).epsilon(1e-14));
    CHECK(c.y == doctest::Approx(std::sqrt(2.0) / 2.0).epsilon(1e-14));
    CHECK(c.z == doctest::Approx(0.25).epsilon(1e-14));

    // phi = 0 slice is the identity (rho, 0, h) -> (rho, 0, h)
    const NilPoint d = cyl_to_cart({2.7, 0.0, -1.2});
    CHECK(d.x == doctest::Approx(2.7));
    CHECK(d.y == doctest::Approx(0.0));
    CHECK(d.z == doctest::Approx(-1.2));
}

TEST_CASE("cylindrical metric coefficients") {
    const CylPoint p{2.0, 0.7, 1.0};
    const std::array<double, 3> drho{1, 0, 0}, dphi{0, 1, 0}, dh{0, 0, 1};
    CHECK(metric_cyl(p, drho, drho) == doctest::Approx(1.0));
    CHECK(metric_cyl(p, dphi, dphi) == doctest::Approx(8.0));  // (1/4) rho^2 (4+rho^2)
    CHECK(metric_cyl(p, dphi, dh) == doctest::Approx(-2.0));   // -(rho^2/2) per slot
    CHECK(metric_cyl(p, dh, dh) == doctest::Approx(1.0));
}

TEST_CASE("cylindrical metric is the pullback of the Cartesian metric") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> u(0.2, 2.5);
    for (int k = 0; k < 50; ++k) {
        const CylPoint p{u(rng), u(rng), u(rng) - 1.0};
        auto chart = [&](const std::vector<double>& q) {
            const NilPoint n = cyl_to_cart({q[0], q[1], q[2]});
            return std::vector<double>{n.x, n.y, n.z};
        };
        const auto J = finite_difference(chart, {p.rho, p.phi, p.h}, 4, 1e-4);
        std::uniform_real_distribution<double> c(-1.0, 1.0);
        const std::array<double, 3> a{c(rng), c(rng), c(rng)}, b{c(rng), c(rng), c(rng)};
        std::array<double, 3> Ja{}, Jb{};
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                Ja[i] += J[i][j] * a[j];
                Jb[i] += J[i][j] * b[j];
            }
        const double direct = metric_cyl(p, a, b);
        const double pulled = metric_cart(cyl_to_cart(p), Ja, Jb);
        CHECK(std::abs(direct - pulled) < 1e-10);
    }
}

TEST_CASE("Levi-Civita connection table") {
    auto fv = [](double a1, double a2, double a3) { return FrameVector{a1, a2, a3}; };
    auto close = [](const FrameVector& a, const FrameVector& b) {
        return std::abs(a.a1 - b.a1) + std::abs(a.a2 - b.a2) + std::abs(a.a3 - b.a3) <
               1e-15;
    };
    CHECK(close(levi_civita(1, 2), fv(0, 0, 0.5)));
    CHECK(close(levi_civita(2, 1), fv(0, 0, -0.5)));
    CHECK(close(levi_civita(1, 3), fv(0, -0.5, 0)));
    CHECK(close(levi_civita(3, 1), fv(0, -0.5, 0)));
    CHECK(close(levi_civita(2, 3), fv(0.5, 0, 0)));
    CHECK(close(levi_civita(3, 2), fv(0.5, 0, 0)));
    for (int i = 1; i <= 3; ++i) CHECK(close(levi_civita(i, i), fv(0, 0, 0)));
    CHECK_THROWS(levi_civita(0, 1));
    CHECK_THROWS(levi_civita(1, 4));
}

TEST_CASE("connection is metric-compatible and torsion-free") {
    auto basis = [](int k) {
        FrameVector e{};
        (k == 1 ? e.a1 : k == 2 ? e.a2 : e.a3) = 1.0;
        return e;
    };
    for (int i = 1; i <= 3; ++i)
        for (int j = 1; j <= 3; ++j)
            for (int k = 1; k <= 3; ++k) {
                const double c = levi_civita(i, j).dot(basis(k)) +
                                 basis(j).dot(levi_civita(i, k));
                CHECK(std::abs(c) < 1e-15);
            }
    // torsion: nabla_i e_j - nabla_j e_i = [e_i, e_j], only [e1,e2] = e3 nonzero
    for (int i = 1; i <= 3; ++i)
        for (int j = 1; j <= 3; ++j) {
            const FrameVector a = levi_civita(i, j), b = levi_civita(j, i);
            FrameVector lie{};
            if (i == 1 && j == 2) lie.a3 = 1.0;
            if (i == 2 && j == 1) lie.a3 = -1.0;
            CHECK(std::abs(a.a1 - b.a1 - lie.a1) < 1e-15);
            CHECK(std::abs(a.a2 - b.a2 - lie.a2) < 1e-15);
            CHECK(std::abs(a.a3 - b.a3 - lie.a3) < 1e-15);
        }
}

TEST_CASE("tangent sectional curvature") {
    CHECK(tangent_sectional_curvature(0.0) == doctest::Approx(0.25));
    CHECK(tangent_sectional_curvature(1.0) == doctest::Approx(-0.75));
    CHECK(tangent_sectional_curvature(-1.0) == doctest::Approx(-0.75));
    CHECK(tangent_sectional_curvature(0.5) == doctest::Approx(0.0));
    CHECK_THROWS(tangent_sectional_curvature(1.5));
}

TEST_CASE("volume density") {
    CHECK(volume_density_cyl(0.0) == doctest::Approx(0.0));
    CHECK(volume_density_cyl(2.0) == doctest::Approx(2.0));
    CHECK_THROWS(volume_density_cyl(-1.0));
}
