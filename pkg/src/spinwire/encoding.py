"""Truncated Gaussian-modulated twisted-W wavepackets and their broadening.

Lengths are in ring lengths unless a name says ``_sites``. A packet of
amplitude width parameter ``delta`` is assigned the width L = 4 * delta, and
the broadening laws below are applied to L.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import BudgetUnattainableError, DegenerateStateError, NoPropagationError, SpinwireError
from .ring_model import DispersionRelation, dispersion_derivative, group_velocity, max_group_velocity
from .state import OneParticleState, SiteWindow

WIDTH_PER_DELTA = 4.0
MIN_WINDOW_SITES = 3
# relative threshold on |omega''| below which the third-order law applies
ZERO_DISPERSION_TOL = 1e-9


@dataclass(frozen=True)
class WavepacketSpec:
    center_x: float
    wavenumber_k0: float
    variance_delta: float
    window: SiteWindow

    def __post_init__(self):
        if not self.variance_delta > 0:
            raise SpinwireError(f"variance_delta must be positive, got {self.variance_delta!r}")
        if not 0.0 <= self.center_x < 1.0:
            raise SpinwireError(f"center_x must lie in [0, 1), got {self.center_x!r}")

    @property
    def width_l(self) -> float:
        return WIDTH_PER_DELTA * self.variance_delta

    def to_record(self) -> dict:
        return {
            "center_x": self.center_x,
            "k0": self.wavenumber_k0,
            "delta": self.variance_delta,
            "window_center": self.window.center,
            "window_width": self.window.width_sites,
        }

    @classmethod
    def from_record(cls, record: dict, n_sites: int) -> WavepacketSpec:
        return cls(
            center_x=float(record["center_x"]),
            wavenumber_k0=float(record["k0"]),
            variance_delta=float(record["delta"]),
            window=SiteWindow(n_sites, int(record["window_center"]), int(record["window_width"])),
        )


def packet_in_sites(n_sites: int, center_site: int, k0: float, delta_sites: float, window_sites: int) -> WavepacketSpec:
    """Packet centred on a site, with its width and truncation given in sites."""
    return WavepacketSpec(
        center_x=(center_site - 1) / n_sites,
        wavenumber_k0=k0,
        variance_delta=delta_sites / n_sites,
        window=SiteWindow(n_sites, center_site, window_sites),
    )


def cube_root_packet(
    n_sites: int,
    center_site: int = 1,
    k0: Optional[float] = None,
    delta_coeff: float = 1.0,
    cut_coeff: float = 2.0,
) -> WavepacketSpec:
    """Packet with delta = delta_coeff * N^(1/3) sites, cut cut_coeff * N^(1/3) sites either side.

    The default k0 is N/4, the zero-second-order-dispersion point of the
    Heisenberg ring.
    """
    root = n_sites ** (1.0 / 3.0)
    half = int(round(cut_coeff * root))
    window_sites = min(2 * half + 1, n_sites)
    return packet_in_sites(
        n_sites, center_site, n_sites / 4.0 if k0 is None else k0, delta_coeff * root, window_sites
    )


def gaussian_packet(spec: WavepacketSpec, n_sites: int) -> OneParticleState:
    """exp(-(x_j - x_c)^2 / 2 delta^2 + 2 pi i k0 (x_j - x_c)) on the window, renormalised.

    x_j - x_c is the shortest signed displacement around the ring; measuring
    the carrier phase from the packet centre only changes a global phase.
    """
    if spec.window.n_sites != n_sites:
        raise SpinwireError(f"packet window is on {spec.window.n_sites} sites, ring has {n_sites}")
    x = np.arange(n_sites) / n_sites
    disp = (x - spec.center_x + 0.5) % 1.0 - 0.5
    amps = np.zeros(n_sites, dtype=complex)
    idx = spec.window.indices()
    amps[idx] = np.exp(
        -disp[idx] ** 2 / (2.0 * spec.variance_delta**2) + 2j * np.pi * spec.wavenumber_k0 * disp[idx]
    )
    if not np.any(np.abs(amps) > 0.0):
        raise DegenerateStateError("every retained packet amplitude underflows to zero")
    return OneParticleState.from_amplitudes(amps)


def broadening_second_order(L0: float, omega2: float, t):
    """L(t)/L(0) = [1 + (omega'' t / L0^2)^2]^(1/2)."""
    if not L0 > 0:
        raise SpinwireError(f"L0 must be positive, got {L0!r}")
    return np.sqrt(1.0 + (omega2 * np.asarray(t, dtype=float) / L0**2) ** 2)


def broadening_third_order(L0: float, omega3: float, t):
    """L(t)/L(0) = [1 + 1/2 (omega''' t / (sqrt(2) L0^3))^2]^(1/2)."""
    if not L0 > 0:
        raise SpinwireError(f"L0 must be positive, got {L0!r}")
    arg = omega3 * np.asarray(t, dtype=float) / (math.sqrt(2.0) * L0**3)
    return np.sqrt(1.0 + 0.5 * arg**2)


def travel_time(d: DispersionRelation, k0: float, distance: float) -> float:
    v = abs(float(group_velocity(d, k0)))
    if v == 0.0:
        raise NoPropagationError(f"group velocity vanishes at k0 = {k0}")
    return distance / v


def is_zero_dispersion(d: DispersionRelation, k0: float) -> bool:
    w2 = abs(float(dispersion_derivative(d, k0, 2)))
    w3 = abs(float(dispersion_derivative(d, k0, 3)))
    return w2 < ZERO_DISPERSION_TOL * w3 * d.n_sites


def design_width(d: DispersionRelation, k0: float, kappa: float, t: float) -> float:
    """Smallest initial width L0 whose predicted spread after time t is at most kappa."""
    if not kappa > 1.0:
        raise SpinwireError(f"spread budget must exceed 1, got {kappa!r}")
    excess = math.sqrt(kappa**2 - 1.0)
    if is_zero_dispersion(d, k0):
        w3 = abs(float(dispersion_derivative(d, k0, 3)))
        return (w3 * t / (2.0 * excess)) ** (1.0 / 3.0)
    w2 = abs(float(dispersion_derivative(d, k0, 2)))
    return math.sqrt(w2 * t / excess)


def design_packet(
    d: DispersionRelation,
    alice_center: int = 1,
    spread_budget_kappa: float = math.sqrt(2.0),
    travel_distance: float = 0.5,
    wavenumber: Optional[float] = None,
) -> WavepacketSpec:
    """Gaussian packet that spreads by at most ``kappa`` while covering ``travel_distance``.

    The carrier defaults to the fastest wavenumber. Passing ``wavenumber``
    designs around another carrier, which is how packets with nonzero
    second-order dispersion are obtained from a sinusoidal band.
    """
    if not travel_distance > 0:
        raise SpinwireError(f"travel_distance must be positive, got {travel_distance!r}")
    if wavenumber is None:
        k0, _ = max_group_velocity(d)
    else:
        k0 = float(wavenumber)
    t = travel_time(d, k0, travel_distance)
    L0 = design_width(d, k0, spread_budget_kappa, t)
    if L0 > 0.5:
        raise BudgetUnattainableError(
            f"budget {spread_budget_kappa} needs initial width {L0:.4g} ring lengths (> 1/2)"
        )
    n = d.n_sites
    window_sites = min(n, max(MIN_WINDOW_SITES, int(round(n * L0))))
    return WavepacketSpec(
        center_x=(alice_center - 1) / n,
        wavenumber_k0=k0,
        variance_delta=L0 / WIDTH_PER_DELTA,
        window=SiteWindow(n, alice_center, window_sites),
    )
