import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from spinwire import (
    DegenerateStateError,
    OccupationGraph,
    OneParticleState,
    SiteWindow,
    SizeMismatchError,
    SpinwireError,
    capture_probability,
    centre_of_mass,
    from_momentum,
    occupation_graph,
    schmidt_decompose,
    site_basis,
    to_momentum,
    twisted_w,
    width,
)
from spinwire.state import bob_center, bob_window, narrowest_window, random_state, vacuum


def rand(n, seed=0, with_vacuum=False):
    return random_state(n, np.random.default_rng(seed), with_vacuum)


def test_normalisation_enforced():
    with pytest.raises(SpinwireError):
        OneParticleState(3, 0.0, np.array([1.0, 1.0, 0.0]))
    with pytest.raises(SizeMismatchError):
        OneParticleState(3, 0.0, np.array([1.0, 0.0]))
    with pytest.raises(DegenerateStateError):
        OneParticleState.from_amplitudes(np.zeros(4))
    s = OneParticleState.from_amplitudes([3.0, 4.0])
    assert np.allclose(s.site_amps, [0.6, 0.8])


def test_state_is_immutable():
    s = site_basis(4, 2)
    with pytest.raises(ValueError):
        s.site_amps[0] = 1.0


def test_qubit_split():
    s = OneParticleState.from_amplitudes([0.0, 2.0, 0.0], vacuum_amp=2.0)
    alpha, beta, c = s.qubit_split()
    assert alpha == pytest.approx(1 / math.sqrt(2))
    assert beta == pytest.approx(1 / math.sqrt(2))
    assert np.allclose(c, [0, 1, 0])
    assert vacuum(5).qubit_split()[1] == 0.0


def test_twisted_w_examples():
    assert np.allclose(twisted_w(4, 0).site_amps, 0.5)
    assert np.allclose(twisted_w(4, 1).site_amps, np.array([1, 1j, -1, -1j]) / 2)
    with pytest.raises(SpinwireError):
        twisted_w(4, 4)
    with pytest.raises(SpinwireError):
        twisted_w(4, -1)


@pytest.mark.parametrize("n", [2, 5, 16, 64])
def test_twisted_w_orthonormal(n):
    gram = np.array([[np.vdot(twisted_w(n, a).site_amps, twisted_w(n, b).site_amps) for b in range(n)] for a in range(n)])
    assert np.allclose(gram, np.eye(n), atol=1e-12)


def test_momentum_of_w_state_is_indicator():
    n, k0 = 12, 5
    ct = to_momentum(twisted_w(n, k0))
    expected = np.zeros(n)
    expected[k0] = 1.0
    assert np.allclose(ct, expected, atol=1e-12)


def test_site_one_is_flat_in_momentum():
    ct = to_momentum(site_basis(9, 1))
    assert np.allclose(ct, 1 / 3, atol=1e-12)


@given(st.integers(1, 80), st.integers(0, 10_000))
def test_transform_round_trip_and_isometry(n, seed):
    s = rand(n, seed, with_vacuum=True)
    ct = to_momentum(s)
    assert np.sum(np.abs(ct) ** 2) == pytest.approx(s.particle_weight, abs=1e-12)
    back = from_momentum(ct, s.vacuum_amp)
    assert back.distance(s) < 1e-12
    assert np.allclose(ct, to_momentum(s, method="direct"), atol=1e-12)
    assert from_momentum(ct, s.vacuum_amp, method="direct").distance(s) < 1e-12


def test_fft_matches_direct_sum_definition():
    s = rand(7, 3)
    j = np.arange(7)
    direct = np.array([np.sum(np.exp(-2j * np.pi * j * k / 7) * s.site_amps) for k in range(7)]) / np.sqrt(7)
    assert np.allclose(to_momentum(s), direct, atol=1e-13)
    with pytest.raises(SpinwireError):
        to_momentum(s, method="bogus")


def test_window_membership():
    w = SiteWindow(10, 1, 5)
    assert list(w.sites()) == [9, 10, 1, 2, 3]
    # even width: the extra site goes on the lower side
    assert list(SiteWindow(10, 5, 4).sites()) == [3, 4, 5, 6]
    assert list(SiteWindow(4, 2, 4).sites()) == [4, 1, 2, 3]
    with pytest.raises(SpinwireError):
        SiteWindow(10, 1, 11)
    with pytest.raises(SpinwireError):
        SiteWindow(10, 0, 3)


@given(st.integers(2, 60), st.data())
def test_complement_partitions_ring(n, data):
    c = data.draw(st.integers(1, n))
    lam = data.draw(st.integers(1, n - 1))
    w = SiteWindow(n, c, lam)
    rest = w.complement()
    assert rest.width_sites == n - lam
    assert not np.any(w.mask() & rest.mask())
    assert np.all(w.mask() | rest.mask())
    s = rand(n, c * 131 + lam)
    assert capture_probability(s, w) + capture_probability(s, rest) == pytest.approx(1.0, abs=1e-12)


def test_bob_defaults():
    assert bob_center(100) == 51
    assert bob_center(7) == 4
    assert bob_window(100, 10).center == 51


def test_capture_examples():
    n = 20
    assert capture_probability(rand(n), SiteWindow(n, 3, n)) == pytest.approx(1.0)
    assert capture_probability(twisted_w(n, 3), SiteWindow(n, 10, 7)) == pytest.approx(7 / n)
    with pytest.raises(DegenerateStateError):
        capture_probability(vacuum(n), SiteWindow(n, 1, 3))


def test_capture_ignores_vacuum_component():
    amps = np.zeros(6, dtype=complex)
    amps[0] = 1.0
    s = OneParticleState.from_amplitudes(amps, vacuum_amp=1.0)
    assert capture_probability(s, SiteWindow(6, 1, 1)) == pytest.approx(1.0)


def test_schmidt_examples():
    s = OneParticleState.from_amplitudes([1.0, 1.0, 0.0, 0.0])
    form = schmidt_decompose(s, SiteWindow(4, 1, 3))
    assert form.capture == pytest.approx(1.0)
    assert form.outside is None
    form = schmidt_decompose(twisted_w(4, 0), SiteWindow(4, 2, 2))
    assert form.capture == pytest.approx(0.5)
    assert np.allclose(np.abs(form.inside.site_amps[:2]), 1 / math.sqrt(2))
    assert np.allclose(np.abs(form.outside.site_amps[2:]), 1 / math.sqrt(2))
    with pytest.raises(SpinwireError):
        schmidt_decompose(rand(4, with_vacuum=True), SiteWindow(4, 1, 2))


def test_schmidt_reconstruction():
    rng = np.random.default_rng(7)
    for _ in range(100):
        n = int(rng.integers(2, 40))
        w = SiteWindow(n, int(rng.integers(1, n + 1)), int(rng.integers(1, n + 1)))
        s = random_state(n, rng)
        form = schmidt_decompose(s, w)
        assert np.linalg.norm(form.reconstruct() - s.site_amps) <= 1e-12


def test_occupation_graph_examples():
    g = occupation_graph(site_basis(8, 3))
    assert np.array_equal(g.values, np.eye(8)[2])
    assert np.allclose(occupation_graph(twisted_w(8, 5)).values, 1 / 8)
    s = rand(8, 2)
    phases = np.exp(1j * np.random.default_rng(9).uniform(0, 2 * np.pi, 8))
    t = OneParticleState(8, 0.0, s.site_amps * phases)
    assert np.allclose(occupation_graph(t).values, occupation_graph(s).values)
    g = occupation_graph(rand(30, 4, with_vacuum=True))
    assert g.normalisation == pytest.approx(1.0, abs=1e-10)
    assert np.all(g.values >= 0)


def test_width_examples():
    assert width(occupation_graph(site_basis(50, 17))) == 1
    for n in (20, 37, 100):
        assert width(OccupationGraph(np.full(n, 1 / n))) == math.ceil(0.95 * n)


def test_width_of_gaussian_against_erf():
    n, sigma = 2000, 40.0
    x = np.arange(n) - n / 2
    g = OccupationGraph(np.exp(-(x**2) / (2 * sigma**2)) / np.sum(np.exp(-(x**2) / (2 * sigma**2))))
    mass = math.erf(2 / math.sqrt(2))
    assert abs(width(g, mass) - 4 * sigma) <= 1


def _width_brute(nu, mass):
    n = len(nu)
    total = nu.sum()
    for length in range(1, n + 1):
        for start in range(n):
            if np.sum(np.take(nu, range(start, start + length), mode="wrap")) >= mass * total - 1e-12:
                return start, length
    return 0, n


@given(st.integers(1, 25), st.integers(0, 10_000), st.floats(0.05, 0.99))
@settings(max_examples=150)
def test_narrowest_window_matches_brute_force(n, seed, mass):
    nu = np.random.default_rng(seed).exponential(size=n) ** 3
    nu = nu / nu.sum()
    assert narrowest_window(OccupationGraph(nu), mass) == _width_brute(nu, mass)


@given(st.integers(2, 60), st.integers(0, 10_000))
def test_width_monotone_in_mass(n, seed):
    g = occupation_graph(rand(n, seed))
    masses = np.linspace(0.01, 0.99, 25)
    ws = [width(g, m) for m in masses]
    assert all(a <= b for a, b in zip(ws, ws[1:]))


def test_width_rejects_bad_mass():
    with pytest.raises(SpinwireError):
        width(occupation_graph(site_basis(5, 1)), 1.0)


def test_centre_of_mass():
    assert centre_of_mass(occupation_graph(site_basis(100, 51))) == pytest.approx(0.5)
    assert centre_of_mass(occupation_graph(site_basis(100, 1))) == pytest.approx(0.0)
    # straddling the seam: sites 100 and 2 average to site 1
    s = OneParticleState.from_amplitudes(np.eye(100)[99] + np.eye(100)[1])
    assert min(centre_of_mass(occupation_graph(s)), 1 - centre_of_mass(occupation_graph(s))) < 1e-12
