import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from spinwire import (
    BudgetUnattainableError,
    DispersionRelation,
    NoPropagationError,
    SiteWindow,
    SpinwireError,
    WavepacketSpec,
    broadening_second_order,
    broadening_third_order,
    capture_probability,
    cube_root_packet,
    design_packet,
    dispersion_derivative,
    dispersion_from_spec,
    evolve,
    gaussian_packet,
    heisenberg,
    occupation_graph,
    packet_in_sites,
    site_basis,
    width,
)
from spinwire.encoding import design_width, is_zero_dispersion, travel_time
from spinwire.state import centre_of_mass


def test_flat_gaussian_limit():
    n = 50
    spec = WavepacketSpec(0.0, 0.0, 10.0, SiteWindow(n, 1, n))
    g = occupation_graph(gaussian_packet(spec, n))
    assert np.max(np.abs(g.values - 1 / n)) <= 1e-3


def test_single_site_window():
    spec = packet_in_sites(40, 7, 10.0, 3.0, 1)
    s = gaussian_packet(spec, 40)
    assert np.allclose(np.abs(s.site_amps), site_basis(40, 7).site_amps.real)


@given(st.integers(3, 200), st.data())
def test_packet_normalised_and_supported(n, data):
    center = data.draw(st.integers(1, n))
    lam = data.draw(st.integers(1, n))
    k0 = data.draw(st.floats(0, n))
    delta = data.draw(st.floats(0.3, n / 2))
    spec = packet_in_sites(n, center, k0, delta, lam)
    s = gaussian_packet(spec, n)
    assert s.particle_weight == pytest.approx(1.0, abs=1e-12)
    assert np.all(s.site_amps[~spec.window.mask()] == 0)
    assert s.vacuum_amp == 0


def test_packet_amplitudes():
    n = 30
    spec = packet_in_sites(n, 29, 4.0, 2.0, 7)
    s = gaussian_packet(spec, n)
    # sites 26..30, 1, 2 with cyclic displacement -3..3 sites from site 29
    disp = np.arange(-3, 4) / n
    ref = np.exp(-disp**2 / (2 * (2.0 / n) ** 2) + 2j * np.pi * 4.0 * disp)
    ref /= np.linalg.norm(ref)
    assert np.allclose(s.site_amps[spec.window.indices()], ref)


def test_underflow_rejected():
    spec = WavepacketSpec(0.0, 0.0, 1e-5, SiteWindow(100, 51, 1))
    with pytest.raises(SpinwireError):
        gaussian_packet(spec, 100)


def test_spec_validation_and_record():
    with pytest.raises(SpinwireError):
        WavepacketSpec(0.0, 1.0, 0.0, SiteWindow(10, 1, 3))
    spec = packet_in_sites(64, 5, 16.0, 2.5, 9)
    assert WavepacketSpec.from_record(spec.to_record(), 64) == spec
    assert spec.width_l == pytest.approx(4 * 2.5 / 64)


def test_cube_root_packet():
    spec = cube_root_packet(1000)
    assert spec.wavenumber_k0 == 250
    assert spec.variance_delta * 1000 == pytest.approx(10.0)
    assert spec.window.width_sites == 41


def test_fig2_packet_travels_to_antipode():
    n = 100
    d = dispersion_from_spec(heisenberg(0.25, n))
    s = evolve(gaussian_packet(packet_in_sites(n, 1, 25, 2.5, 10), n), d, 100.0)
    g = occupation_graph(s)
    assert centre_of_mass(g) == pytest.approx(0.5, abs=0.03)
    assert width(g) <= 20


def test_broadening_examples():
    assert broadening_second_order(0.1, 0.0, 50.0) == 1.0
    assert broadening_second_order(0.1, 0.01, 1.0) == pytest.approx(math.sqrt(2))
    assert broadening_third_order(0.1, 0.0, 9.0) == 1.0
    # omega3 t / (sqrt 2 L0^3) = sqrt 2
    assert broadening_third_order(0.1, 2e-3, 1.0) == pytest.approx(math.sqrt(2))
    with pytest.raises(SpinwireError):
        broadening_second_order(0.0, 1.0, 1.0)
    with pytest.raises(SpinwireError):
        broadening_third_order(-1.0, 1.0, 1.0)


@given(st.floats(1e-3, 1.0), st.floats(-10, 10), st.floats(0, 1e3))
def test_broadening_properties(L0, w, t):
    for f in (broadening_second_order, broadening_third_order):
        assert f(L0, w, t) >= 1.0
        assert f(L0, w, 0.0) == 1.0
        assert f(L0, w, t) == f(L0, -w, t)
    if w != 0:
        ts = np.linspace(0, 100, 50)
        assert np.all(np.diff(broadening_second_order(L0, w, ts)) >= 0)


def test_third_order_ratio_bounded_with_two_thirds_scaling():
    ratios = []
    for n in (100, 1000, 10_000, 100_000):
        d = dispersion_from_spec(heisenberg(0.25, n))
        w3 = dispersion_derivative(d, n / 4, 3)
        ratios.append(float(broadening_third_order(n ** (-2 / 3), w3, n)))
    assert np.ptp(ratios) < 1e-9


def test_zero_dispersion_detection():
    d = dispersion_from_spec(heisenberg(0.25, 100))
    assert is_zero_dispersion(d, 25)
    assert not is_zero_dispersion(d, 12.5)


def test_design_inverts_broadening():
    d = dispersion_from_spec(heisenberg(0.25, 500))
    kappa = 1.7
    for k0 in (125.0, 60.0):
        t = travel_time(d, k0, 0.5)
        L0 = design_width(d, k0, kappa, t)
        if is_zero_dispersion(d, k0):
            ratio = broadening_third_order(L0, dispersion_derivative(d, k0, 3), t)
        else:
            ratio = broadening_second_order(L0, dispersion_derivative(d, k0, 2), t)
        assert ratio == pytest.approx(kappa, rel=1e-12)
        # a tighter budget needs a wider packet
        assert design_width(d, k0, kappa * 0.95, t) > L0


def test_design_packet_heisenberg():
    d = dispersion_from_spec(heisenberg(0.25, 1000))
    spec = design_packet(d)
    assert spec.wavenumber_k0 == pytest.approx(250)
    assert spec.center_x == 0.0
    assert spec.variance_delta == pytest.approx(spec.window.width_sites / 1000 / 4, rel=0.05)


def test_design_packet_errors():
    with pytest.raises(NoPropagationError):
        design_packet(DispersionRelation(100, 1.0, 0.0, 0.0))
    with pytest.raises(SpinwireError):
        design_packet(dispersion_from_spec(heisenberg(0.25, 100)), spread_budget_kappa=1.0)
    with pytest.raises(BudgetUnattainableError):
        design_packet(dispersion_from_spec(heisenberg(0.25, 100)), spread_budget_kappa=1.0001, travel_distance=40.0, wavenumber=10)


def test_design_packet_minimum_window():
    spec = design_packet(dispersion_from_spec(heisenberg(0.25, 32)), travel_distance=0.001)
    assert spec.window.width_sites == 3
    with pytest.raises(BudgetUnattainableError):
        design_packet(dispersion_from_spec(heisenberg(0.25, 8)))


@pytest.mark.parametrize("n", [200, 1000, 5000])
@pytest.mark.parametrize("k_frac", [None, 0.125])
def test_designed_packet_keeps_its_budget(n, k_frac):
    d = dispersion_from_spec(heisenberg(0.25, n))
    kappa = math.sqrt(2)
    spec = design_packet(d, 1, kappa, 0.5, wavenumber=None if k_frac is None else k_frac * n)
    s = gaussian_packet(spec, n)
    final = evolve(s, d, travel_time(d, spec.wavenumber_k0, 0.5))
    assert width(occupation_graph(final)) <= kappa * width(occupation_graph(s)) * 1.25
    assert capture_probability(final, SiteWindow(n, 1 + n // 2, spec.window.width_sites)) > 0.95


def _second_order_case():
    n, k0, l_sites = 400, 50.0, 20
    d = dispersion_from_spec(heisenberg(0.25, n))
    t = travel_time(d, k0, 0.5)
    s = gaussian_packet(packet_in_sites(n, 1, k0, l_sites / 4, n), n)
    measured = width(occupation_graph(evolve(s, d, t))) / width(occupation_graph(s))
    return measured, l_sites / n, float(dispersion_derivative(d, k0, 2)), t


@pytest.mark.xfail(strict=True, reason="literal second-order law has k measured in index units; see ledger")
def test_second_order_broadening_literal():
    measured, L0, w2, t = _second_order_case()
    assert measured == pytest.approx(float(broadening_second_order(L0, w2, t)), rel=0.2)


def test_second_order_broadening_with_wavenumber_units():
    # d^2 omega / dp^2 with p = 2 pi k, and sigma_x = L / 4, gives a factor 16 / (4 pi^2)
    measured, L0, w2, t = _second_order_case()
    assert measured == pytest.approx(float(broadening_second_order(L0, 4 / math.pi**2 * w2, t)), rel=0.2)
