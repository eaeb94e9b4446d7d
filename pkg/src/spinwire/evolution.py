"""Exact dynamics in the zero/one-particle sector.

The one-particle block of every ring Hamiltonian is circulant, so evolution is
diagonal in the momentum basis:

    c(t) = IDFT( exp(-i omega(k) t) * DFT(c(0)) )

at O(N log N) cost per time. The vacuum only picks up the phase of its own
energy, which the dispersion convention fixes at zero.
"""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import SizeMismatchError, SpinwireError
from .ring_model import DispersionRelation
from .state import (
    OccupationGraph,
    OneParticleState,
    SiteWindow,
    capture_probability,
    centre_of_mass,
    from_momentum,
    occupation_graph,
    site_basis,
    to_momentum,
    width,
)


def evolve(s: OneParticleState, d: DispersionRelation, t: float) -> OneParticleState:
    if s.n_sites != d.n_sites:
        raise SizeMismatchError(f"state has {s.n_sites} sites, dispersion has {d.n_sites}")
    phases = np.exp(-1j * d.energies() * t)
    vac = s.vacuum_amp * np.exp(-1j * d.vacuum_energy * t)
    return from_momentum(phases * to_momentum(s), vac)


def evolve_many(s: OneParticleState, d: DispersionRelation, times) -> np.ndarray:
    """Site amplitudes at every time in ``times`` as a (len(times), N) array.

    One forward transform and one batched inverse; meant for dense time scans
    on small rings, since the result holds len(times) * N numbers.
    """
    if s.n_sites != d.n_sites:
        raise SizeMismatchError(f"state has {s.n_sites} sites, dispersion has {d.n_sites}")
    times = np.asarray(times, dtype=float).reshape(-1)
    phases = np.exp(-1j * np.outer(times, d.energies()))
    return np.fft.ifft(phases * to_momentum(s)[None, :], axis=1, norm="ortho")


def propagator_column(d: DispersionRelation, t: float) -> np.ndarray:
    """Amplitudes at time t of the excitation started on site 1."""
    return evolve(site_basis(d.n_sites, 1), d, t).site_amps


def propagator_submatrix(d: DispersionRelation, t: float, source: SiteWindow, target: SiteWindow) -> np.ndarray:
    """Block U[target, source] of the one-particle propagator.

    U is circulant, U[j, l] = u[(j - l) mod N] with u the evolved site-1
    column, so a single transform yields every entry. Rows follow
    ``target.indices()`` and columns follow ``source.indices()``.
    """
    for w in (source, target):
        if w.n_sites != d.n_sites:
            raise SizeMismatchError(f"window on {w.n_sites} sites, dispersion has {d.n_sites}")
    u = propagator_column(d, t)
    lag = (target.indices()[:, None] - source.indices()[None, :]) % d.n_sites
    return u[lag]


def translate(s: OneParticleState, steps: int = 1) -> OneParticleState:
    """Apply T^steps, where T|a_1, ..., a_N> = |a_2, ..., a_N, a_1>.

    An excitation on site j moves to site j - 1; the vacuum is fixed.
    """
    return OneParticleState(s.n_sites, s.vacuum_amp, np.roll(s.site_amps, -int(steps)))


@dataclass(frozen=True, eq=False)
class PropagationTrace:
    times: np.ndarray
    graphs: tuple[OccupationGraph, ...]
    captures: np.ndarray
    widths: np.ndarray
    centres: np.ndarray

    def __len__(self):
        return len(self.times)

    def occupations(self) -> np.ndarray:
        """Occupation values stacked as a (times, sites) array."""
        return np.stack([g.values for g in self.graphs])

    def long_rows(self):
        for t, g in zip(self.times, self.graphs):
            for j, nu in enumerate(g.values, start=1):
                yield {"t": float(t), "site": j, "nu": float(nu)}

    def summary_rows(self):
        for t, c, w, x in zip(self.times, self.captures, self.widths, self.centres):
            yield {"t": float(t), "capture": float(c), "width": int(w), "centre_of_mass": float(x)}


def _sample(s, d, t, bob, mass):
    evolved = evolve(s, d, t)
    g = occupation_graph(evolved)
    return g, capture_probability(evolved, bob), width(g, mass), centre_of_mass(g)


def run_trace(
    s: OneParticleState,
    d: DispersionRelation,
    times,
    bob: SiteWindow,
    mass: float = 0.95,
    workers: int = 1,
) -> PropagationTrace:
    """Evolve ``s`` to each time directly from t = 0 and record the observables."""
    times = np.asarray(times, dtype=float)
    if times.ndim != 1 or times.size == 0:
        raise SpinwireError("times must be a nonempty 1-d sequence")
    if np.any(np.diff(times) <= 0):
        raise SpinwireError("times must be strictly ascending")
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            samples = list(pool.map(lambda t: _sample(s, d, t, bob, mass), times))
    else:
        samples = [_sample(s, d, t, bob, mass) for t in times]
    graphs, captures, widths, centres = zip(*samples)
    return PropagationTrace(
        times=times,
        graphs=tuple(graphs),
        captures=np.array(captures),
        widths=np.array(widths, dtype=int),
        centres=np.array(centres),
    )
