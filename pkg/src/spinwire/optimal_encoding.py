"""Capture-optimal one-particle encodings.

For an encoding c supported on Alice's window A, the amplitude on Bob's window
B at time t is U[B, A] c, so the capture probability is the quadratic form
||U[B, A] c||^2 on the unit sphere. Its maximum is the largest squared
singular value of the block and the maximiser is the matching right-singular
vector. No encoding in the one-particle sector can do better.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import SpinwireError
from .evolution import propagator_submatrix
from .ring_model import DispersionRelation
from .state import OneParticleState, SiteWindow

_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True, eq=False)
class OptimalEncoding:
    amplitudes: np.ndarray
    capture: float
    arrival_time: float
    window_pair: tuple[SiteWindow, SiteWindow]

    @property
    def alice(self) -> SiteWindow:
        return self.window_pair[0]

    @property
    def bob(self) -> SiteWindow:
        return self.window_pair[1]

    def state(self) -> OneParticleState:
        """The encoding embedded in the full ring."""
        amps = np.zeros(self.alice.n_sites, dtype=complex)
        amps[self.alice.indices()] = self.amplitudes
        return OneParticleState(self.alice.n_sites, 0.0, amps)

    def amplitude_rows(self):
        for site, a in zip(self.alice.sites(), self.amplitudes):
            yield {"site": int(site), "re": float(a.real), "im": float(a.imag)}


def _fix_phase(v: np.ndarray) -> np.ndarray:
    # first component that is not negligible becomes real positive
    scale = np.max(np.abs(v))
    i = np.flatnonzero(np.abs(v) > 1e-12 * scale)[0]
    out = v * (abs(v[i]) / v[i])
    out[i] = abs(v[i])
    return out


def optimal_amplitudes(d: DispersionRelation, t: float, alice: SiteWindow, bob: SiteWindow) -> OptimalEncoding:
    block = propagator_submatrix(d, t, alice, bob)
    _, sigma, vh = np.linalg.svd(block)
    amps = _fix_phase(vh[0].conj())
    amps = amps / np.linalg.norm(amps)
    return OptimalEncoding(amps, float(min(sigma[0] ** 2, 1.0)), float(t), (alice, bob))


def _golden_max(f, lo: float, hi: float, tol: float):
    """Golden-section search for a maximum of a unimodal f on [lo, hi]."""
    a, b = lo, hi
    x1 = b - _INV_PHI * (b - a)
    x2 = a + _INV_PHI * (b - a)
    f1, f2 = f(x1), f(x2)
    while b - a > tol:
        if f1 >= f2:
            b, x2, f2 = x2, x1, f1
            x1 = b - _INV_PHI * (b - a)
            f1 = f(x1)
        else:
            a, x1, f1 = x1, x2, f2
            x2 = a + _INV_PHI * (b - a)
            f2 = f(x2)
    return (x1, f1) if f1 >= f2 else (x2, f2)


def optimize_arrival(
    d: DispersionRelation,
    alice: SiteWindow,
    bob: SiteWindow,
    t_range: tuple[float, float],
    samples: int = 41,
    tol: float = 1e-4,
) -> OptimalEncoding:
    """Best optimal encoding over decode times in ``t_range``.

    A uniform grid is scanned first (ties go to the earliest time), then a
    golden-section search refines the bracket around the best grid point.
    """
    t_lo, t_hi = map(float, t_range)
    if not t_lo <= t_hi:
        raise SpinwireError(f"empty time range [{t_lo}, {t_hi}]")
    if samples < 2:
        raise SpinwireError(f"need at least 2 samples, got {samples}")
    if t_lo == t_hi:
        return optimal_amplitudes(d, t_lo, alice, bob)

    grid = np.linspace(t_lo, t_hi, samples)
    encodings = [optimal_amplitudes(d, t, alice, bob) for t in grid]
    captures = np.array([e.capture for e in encodings])
    i = int(np.argmax(captures))
    best = encodings[i]

    lo, hi = grid[max(i - 1, 0)], grid[min(i + 1, samples - 1)]
    t_ref, _ = _golden_max(lambda t: optimal_amplitudes(d, t, alice, bob).capture, lo, hi, tol)
    refined = optimal_amplitudes(d, t_ref, alice, bob)
    return refined if refined.capture > best.capture else best
