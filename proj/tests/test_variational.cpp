#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <sstream>

#include "nilcmc/revolution.hpp"
#include "nilcmc/variational.hpp"
#include "nilcmc/weierstrass.hpp"

using namespace nilcmc;
namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("criticality identities on random data") {
    std::mt19937 rng(99);
    std::uniform_real_distribution<double> uH(0.1, 5.0), uz(-1.0, 1.0), ua(-0.25, 0.25);
    double worst = 0.0;
    for (int k = 0; k < 10000; ++k) {
        const auto r = theorem3_identities(uH(rng), {uz(rng), uz(rng)}, ua(rng));
        worst = std::max({worst, std::abs(r.gauss_term), std::abs(r.hopf_term),
                          std::abs(r.el_sum)});
    }
    CHECK(worst <= 1e-13);

    const auto z = theorem3_identities(1.0, {0.0, 0.0}, 0.5);
    CHECK(z.gauss_term == 0.0);
    CHECK(z.hopf_term == 0.0);
    CHECK(z.el_sum == 0.0);
}

TEST_CASE("el residual vanishes at stencil order on cmc charts") {
    auto sup = [](int n) {
        const auto g = make_cmc_sphere_grid(1.0, -1.6, 1.6, -1.6, 1.6, n, n, 4);
        return el_residual(g).sup;
    };
    const double coarse = sup(61), fine = sup(121);
    CHECK(std::log2(coarse / fine) > 3.5);
}

TEST_CASE("el residual reacts at first order to a metric perturbation") {
    auto g = make_cmc_sphere_grid(1.0, -1.6, 1.6, -1.6, 1.6, 121, 121, 4);
    const double clean = el_residual(g).sup;
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            const int k = g.idx(i, j);
            if (!g.mask[k]) continue;
            const double x = g.x(i), y = g.y(j);
            g.alpha[k] += 0.01 * std::exp(-4.0 * ((x - 0.8) * (x - 0.8) + y * y));
        }
    const double bumped = el_residual(g).sup;
    CHECK(bumped > 100.0 * clean);
    CHECK(bumped < 1.0);  // O(amplitude), not a blow-up
}

TEST_CASE("perturb: identity at zero amplitude, quadratic energy growth") {
    const auto base = generate_cmc_profile(1.0, 1e-10, 2001);
    const auto same = perturb(base, 0.0, 2);
    for (std::size_t i = 0; i < base.samples.size(); i += 100)
        CHECK(std::abs(same.samples[i].u - base.samples[i].u) < 1e-12);

    const double E0 = energy_reduced(base);
    CHECK(std::abs(E0 - kPi) < 1e-7);
    double excess[3];
    const double amps[3] = {0.01, 0.02, 0.04};
    for (int k = 0; k < 3; ++k) {
        const auto curve = perturb(base, amps[k], 2);
        const auto d = closure_and_topology(curve);
        CHECK(d.closed);
        excess[k] = energy_reduced(curve) - kPi;
        CHECK(excess[k] > 0.0);
    }
    CHECK(excess[1] / excess[0] == doctest::Approx(4.0).epsilon(0.1));
    CHECK(excess[2] / excess[1] == doctest::Approx(4.0).epsilon(0.1));
}

TEST_CASE("randomized perturbations stay closed and above pi") {
    const auto base = generate_cmc_profile(1.0, 1e-10, 1001);
    for (unsigned seed : {1u, 2u, 3u, 4u, 5u}) {
        const auto curve = perturb(base, 0.03, 0, seed);
        CHECK(closure_and_topology(curve).closed);
        CHECK(energy_reduced(curve) >= kPi - 1e-9);
    }
}

TEST_CASE("minimizer: cmc input terminates at pi immediately") {
    const auto base = generate_cmc_profile(1.0, 1e-10, 801);
    DescentOptions opts;
    opts.max_iters = 50;
    const auto [curve, trace] = minimize_energy(base, opts);
    CHECK(std::abs(energy_reduced(curve) - kPi) < 1e-6);
    CHECK(trace.rows.size() <= 3);
}

TEST_CASE("minimizer recovers the sphere from a mode-3 perturbation") {
    const auto base = generate_cmc_profile(0.5, 1e-10, 801);
    const auto bumped = perturb(base, 0.1, 3);
    DescentOptions opts;
    opts.max_iters = 500;
    const auto [curve, trace] = minimize_energy(bumped, opts);
    CHECK(energy_reduced(curve) < kPi + 1e-4);
    CHECK(closure_and_topology(curve).closed);
    CHECK(closure_and_topology(curve).topology == Topology::sphere);
    bool monotone = true;
    for (std::size_t i = 1; i < trace.rows.size(); ++i)
        monotone = monotone && trace.rows[i].E <= trace.rows[i - 1].E;
    CHECK(monotone);
}

TEST_CASE("descent trace CSV format") {
    DescentTrace t;
    t.rows = {{0, 3.5, 1e-3, 0.0}, {1, 3.25, 1e-5, 0.5}};
    std::ostringstream os;
    write_trace_csv(os, t);
    std::istringstream is(os.str());
    std::string line;
    std::getline(is, line);
    CHECK(line == "iter,E,violation,step");
    std::getline(is, line);
    CHECK(line.substr(0, 6) == "0,3.5,");
}
