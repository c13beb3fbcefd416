import math

import pytest

import nilcmc


PI = math.pi


def test_spinor_energy_is_pi():
    for H in (0.1, 0.5, 1.0, 2.0, 10.0):
        assert nilcmc.spinor_energy(H).value == pytest.approx(PI, abs=1e-8)


def test_area_volume_closed_vs_quadrature():
    for H in (0.5, 2.0):
        a_c = nilcmc.area(H, nilcmc.EvalMode.closed_form).value
        a_q = nilcmc.area(H, nilcmc.EvalMode.quadrature).value
        assert a_q == pytest.approx(a_c, rel=1e-8)
        v_c = nilcmc.volume(H, nilcmc.EvalMode.closed_form).value
        v_q = nilcmc.volume(H, nilcmc.EvalMode.quadrature).value
        assert v_q == pytest.approx(v_c, rel=1e-8)


def test_spot_values_at_half():
    assert nilcmc.area(0.5, nilcmc.EvalMode.closed_form).value == pytest.approx(
        8 * PI + 4 * PI**2, abs=1e-10
    )
    assert nilcmc.volume(0.5, nilcmc.EvalMode.closed_form).value == pytest.approx(
        8 * PI + 2 * PI**2, abs=1e-10
    )


def test_profile_ode_matches_closed_form():
    curve = nilcmc.generate_cmc_profile(1.0)
    assert nilcmc.profile_closed_form_distance(curve, 1.0) < 1e-6
    r = nilcmc.revolution_report(curve)
    assert r.chi == 2
    assert r.E_direct == pytest.approx(PI, abs=1e-7)
    assert r.E_direct == pytest.approx(r.E_reduced, abs=1e-6)


def test_perturbed_energy_above_pi_and_descent():
    curve = nilcmc.generate_cmc_profile(1.0, 1e-10, 801)
    bumped = nilcmc.perturb(curve, 0.05, 2)
    e0 = nilcmc.energy_reduced(bumped)
    assert e0 > PI
    opts = nilcmc.DescentOptions()
    opts.max_iters = 200
    final, trace = nilcmc.minimize_energy(bumped, opts)
    assert nilcmc.energy_reduced(final) < PI + 1e-4
    es = [row.E for row in trace.rows]
    assert all(b <= a for a, b in zip(es, es[1:]))


def test_s2xr_willmore_type():
    for h in (0.5, 1.0, 4.0):
        assert nilcmc.s2xr.willmore_type_value(h) == pytest.approx(
            16 * PI, abs=1e-10
        )


def test_el_residual_converges():
    coarse = nilcmc.el_residual_sup(1.0, 81)
    fine = nilcmc.el_residual_sup(1.0, 161)
    assert fine < coarse / 8
