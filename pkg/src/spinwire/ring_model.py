"""Rotationally invariant nearest-neighbour ring Hamiltonians and their dispersion.

Every Hamiltonian in the family

    H = c0 I + sum_j [ c1 s+_j s-_j + c2 s-_j s+_j
                       + d1 (s+_j s-_{j+1} + s-_j s+_{j+1})
                       + d2 (s+_j s-_{j+1} + s-_j s+_{j+1})^2
                       + e1 i (s+_j s-_{j+1} - s-_j s+_{j+1})
                       + f1 i (s+_j s-_{j+1} - s-_j s+_{j+1})(s+_j s-_{j+1} + s-_j s+_{j+1}) ]

is diagonalised on the one-particle sector by the twisted W-states, with energies

    omega(k) = A + B cos(2 pi k / N) + B' sin(2 pi k / N)

where A = c0 + c1 (N - 1) + c2 + 2 d2, B = 2 d1, B' = -2 e1. The f1 term
annihilates the whole sector and does not enter the dispersion.

Wavenumbers are indexed 0..N-1; any real k is accepted and omega has period N.
Velocities are in ring lengths per unit time, v(k) = (1/2pi) d omega / dk.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass, fields

import numpy as np

from .errors import NoPropagationError, SpinwireError

COEFFICIENTS = ("c0", "c1", "c2", "d1", "d2", "e1", "f1")


@dataclass(frozen=True)
class HamiltonianSpec:
    """Coefficients of the general ring Hamiltonian on ``n_sites`` spins."""

    n_sites: int
    c0: float = 0.0
    c1: float = 0.0
    c2: float = 0.0
    d1: float = 0.0
    d2: float = 0.0
    e1: float = 0.0
    f1: float = 0.0

    def __post_init__(self):
        if int(self.n_sites) != self.n_sites or self.n_sites < 2:
            raise SpinwireError(f"n_sites must be an integer >= 2, got {self.n_sites!r}")
        object.__setattr__(self, "n_sites", int(self.n_sites))
        for name in COEFFICIENTS:
            value = float(getattr(self, name))
            if not math.isfinite(value):
                raise SpinwireError(f"coefficient {name} is not finite: {value!r}")
            object.__setattr__(self, name, value)

    @property
    def vacuum_energy(self) -> float:
        """Eigenvalue of |00...0> before any rescaling of the energy zero."""
        return self.c0 + self.n_sites * self.c1

    def vacuum_normalised(self) -> HamiltonianSpec:
        """Same dynamics with c0 shifted so that |00...0> has energy exactly 0."""
        return self.with_changes(c0=-self.n_sites * self.c1)

    def with_changes(self, **changes) -> HamiltonianSpec:
        record = self.to_record()
        record.update(changes)
        return HamiltonianSpec.from_record(record)

    def to_record(self) -> dict:
        return asdict(self)

    @classmethod
    def from_record(cls, record: dict) -> HamiltonianSpec:
        known = {f.name for f in fields(cls)}
        unknown = set(record) - known
        if unknown:
            raise SpinwireError(f"unknown Hamiltonian keys: {sorted(unknown)}")
        if "n_sites" not in record:
            raise SpinwireError("Hamiltonian record is missing n_sites")
        return cls(**record)


@dataclass(frozen=True)
class DispersionRelation:
    """omega(k) = a_const + b_cos cos(2 pi k/N) + b_sin sin(2 pi k/N); the vacuum sits at 0."""

    n_sites: int
    a_const: float
    b_cos: float
    b_sin: float
    vacuum_energy: float = 0.0

    @property
    def is_flat(self) -> bool:
        return self.b_cos == 0.0 and self.b_sin == 0.0

    def energies(self) -> np.ndarray:
        """omega(k) on the integer wavenumbers 0..N-1, in DFT order."""
        return omega(self, np.arange(self.n_sites))


def heisenberg(chi: float, n_sites: int) -> HamiltonianSpec:
    """H = chi N/2 I - chi/2 sum_j sigma_j . sigma_{j+1}, with omega(k) = 2 chi (1 - cos(2 pi k/N)).

    In the hopping language sigma.sigma = 2 (hop) + 1 - 2 (hop)^2 per bond, so
    the model is d1 = -chi, d2 = chi with every other coefficient zero.
    """
    return HamiltonianSpec(n_sites=n_sites, d1=-chi, d2=chi)


def dispersion_from_spec(spec: HamiltonianSpec) -> DispersionRelation:
    n = spec.n_sites
    return DispersionRelation(
        n_sites=n,
        a_const=spec.c0 + spec.c1 * (n - 1) + spec.c2 + 2.0 * spec.d2,
        b_cos=2.0 * spec.d1,
        b_sin=-2.0 * spec.e1,
    )


def _phase(d: DispersionRelation, k):
    return 2.0 * np.pi * np.asarray(k, dtype=float) / d.n_sites


def omega(d: DispersionRelation, k):
    theta = _phase(d, k)
    return d.a_const + d.b_cos * np.cos(theta) + d.b_sin * np.sin(theta)


def dispersion_derivative(d: DispersionRelation, k, order: int):
    """Analytic d^n omega / dk^n for n in {1, 2, 3}."""
    if order not in (1, 2, 3):
        raise SpinwireError(f"derivative order must be 1, 2 or 3, got {order!r}")
    theta = _phase(d, k)
    scale = (2.0 * np.pi / d.n_sites) ** order
    s, c = np.sin(theta), np.cos(theta)
    if order == 1:
        return scale * (-d.b_cos * s + d.b_sin * c)
    if order == 2:
        return scale * (-d.b_cos * c - d.b_sin * s)
    return scale * (d.b_cos * s - d.b_sin * c)


def group_velocity(d: DispersionRelation, k):
    return dispersion_derivative(d, k, 1) / (2.0 * np.pi)


def max_group_velocity(d: DispersionRelation) -> tuple[float, float]:
    """Return (k_star, v_star) with v_star = max_k |v(k)| > 0 and v(k_star) = +v_star.

    v(k) = (1/N) (-B sin + B' cos) = (R/N) cos(theta - psi) with R = hypot(B, B')
    and psi = atan2(-B, B'), so the maximiser is theta = psi.
    """
    if d.is_flat:
        raise NoPropagationError("flat band: the group velocity vanishes everywhere")
    psi = math.atan2(-d.b_cos, d.b_sin)
    k_star = (d.n_sites * psi / (2.0 * math.pi)) % d.n_sites
    v_star = math.hypot(d.b_cos, d.b_sin) / d.n_sites
    return k_star, v_star


def arrival_time(d: DispersionRelation, distance: float) -> float:
    """Time for a packet at the fastest wavenumber to cover ``distance`` ring lengths."""
    _, v_star = max_group_velocity(d)
    return distance / v_star
