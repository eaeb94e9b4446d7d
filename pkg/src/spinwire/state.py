"""States of the zero/one-particle sector of an N-site ring.

Sites carry the labels 1..N (site j sits at position x_j = (j-1)/N); amplitude
arrays are indexed 0..N-1. The vacuum amplitude is kept separately and the
qubit amplitude beta is absorbed into the site amplitudes, so a state is
normalised when |alpha|^2 + sum_j |c_j|^2 = 1.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import DegenerateStateError, SizeMismatchError, SpinwireError

NORM_TOL = 1e-10
# slack on the cumulative mass when searching for the narrowest window
MASS_TOL = 1e-12


def _frozen(array, dtype) -> np.ndarray:
    out = np.array(array, dtype=dtype, copy=True)
    out.setflags(write=False)
    return out


@dataclass(frozen=True, eq=False)
class OneParticleState:
    n_sites: int
    vacuum_amp: complex
    site_amps: np.ndarray

    def __post_init__(self):
        amps = _frozen(self.site_amps, complex)
        if amps.shape != (self.n_sites,):
            raise SizeMismatchError(
                f"expected {self.n_sites} site amplitudes, got shape {amps.shape}"
            )
        object.__setattr__(self, "site_amps", amps)
        object.__setattr__(self, "vacuum_amp", complex(self.vacuum_amp))
        norm2 = abs(self.vacuum_amp) ** 2 + self.particle_weight
        if abs(norm2 - 1.0) > NORM_TOL:
            raise SpinwireError(f"state is not normalised: squared norm {norm2!r}")

    @classmethod
    def from_amplitudes(cls, site_amps, vacuum_amp: complex = 0.0) -> OneParticleState:
        """Build a state from unnormalised amplitudes, rescaling to unit norm."""
        amps = np.asarray(site_amps, dtype=complex)
        norm = np.sqrt(abs(vacuum_amp) ** 2 + np.vdot(amps, amps).real)
        if norm == 0.0 or not np.isfinite(norm):
            raise DegenerateStateError("cannot normalise a zero or non-finite amplitude vector")
        return cls(amps.size, vacuum_amp / norm, amps / norm)

    @property
    def particle_weight(self) -> float:
        """|beta|^2, the total probability of the one-particle component."""
        return float(np.vdot(self.site_amps, self.site_amps).real)

    def qubit_split(self) -> tuple[complex, float, np.ndarray]:
        """Return (alpha, beta, c) with beta >= 0 real and c normalised."""
        beta = np.sqrt(self.particle_weight)
        if beta == 0.0:
            return self.vacuum_amp, 0.0, np.zeros(self.n_sites, dtype=complex)
        return self.vacuum_amp, float(beta), self.site_amps / beta

    def distance(self, other: OneParticleState) -> float:
        """2-norm of the difference, vacuum amplitude included."""
        _check_same_ring(self.n_sites, other.n_sites)
        diff = np.append(self.site_amps - other.site_amps, self.vacuum_amp - other.vacuum_amp)
        return float(np.linalg.norm(diff))


def _check_same_ring(n_a: int, n_b: int) -> None:
    if n_a != n_b:
        raise SizeMismatchError(f"ring sizes differ: {n_a} != {n_b}")


def site_basis(n_sites: int, site: int) -> OneParticleState:
    """The state |site> with a single excitation on ``site`` (1-based)."""
    if not 1 <= site <= n_sites:
        raise SpinwireError(f"site {site} outside 1..{n_sites}")
    amps = np.zeros(n_sites, dtype=complex)
    amps[site - 1] = 1.0
    return OneParticleState(n_sites, 0.0, amps)


def vacuum(n_sites: int) -> OneParticleState:
    return OneParticleState(n_sites, 1.0, np.zeros(n_sites, dtype=complex))


def twisted_w(n_sites: int, k: int) -> OneParticleState:
    """|W(k)> = N^{-1/2} sum_j mu^{(j-1)k} |j>, mu = exp(2 pi i / N)."""
    if int(k) != k or not 0 <= k < n_sites:
        raise SpinwireError(f"wavenumber {k} outside 0..{n_sites - 1}")
    j = np.arange(n_sites)
    amps = np.exp(2j * np.pi * j * int(k) / n_sites) / np.sqrt(n_sites)
    return OneParticleState(n_sites, 0.0, amps)


def random_state(n_sites: int, rng: np.random.Generator, with_vacuum: bool = False) -> OneParticleState:
    amps = rng.normal(size=n_sites) + 1j * rng.normal(size=n_sites)
    vac = complex(rng.normal(), rng.normal()) if with_vacuum else 0.0
    return OneParticleState.from_amplitudes(amps, vac)


# -- momentum representation -------------------------------------------------

def _direct_dft(c: np.ndarray, sign: int) -> np.ndarray:
    n = c.size
    j = np.arange(n)
    kernel = np.exp(sign * 2j * np.pi * np.outer(j, j) / n) / np.sqrt(n)
    return kernel @ c


def to_momentum(s: OneParticleState, method: str = "fft") -> np.ndarray:
    """c~_k = N^{-1/2} sum_j mu^{-(j-1)k} c_j for k = 0..N-1.

    ``method="direct"`` uses the O(N^2) sum and exists as an independent check
    on the fast transform.
    """
    if method == "fft":
        return np.fft.fft(s.site_amps, norm="ortho")
    if method == "direct":
        return _direct_dft(s.site_amps, -1)
    raise SpinwireError(f"unknown transform method {method!r}")


def from_momentum(c_tilde, vacuum_amp: complex = 0.0, method: str = "fft") -> OneParticleState:
    c_tilde = np.asarray(c_tilde, dtype=complex)
    if method == "fft":
        amps = np.fft.ifft(c_tilde, norm="ortho")
    elif method == "direct":
        amps = _direct_dft(c_tilde, +1)
    else:
        raise SpinwireError(f"unknown transform method {method!r}")
    return OneParticleState(c_tilde.size, vacuum_amp, amps)


# -- windows -----------------------------------------------------------------

@dataclass(frozen=True)
class SiteWindow:
    """The ``width_sites`` sites nearest ``center`` (1-based) on a ring of ``n_sites``.

    Odd widths are symmetric about the centre; even widths take the extra
    site on the lower-index side.
    """

    n_sites: int
    center: int
    width_sites: int

    def __post_init__(self):
        if not 1 <= self.width_sites <= self.n_sites:
            raise SpinwireError(f"window width {self.width_sites} outside 1..{self.n_sites}")
        if not 1 <= self.center <= self.n_sites:
            raise SpinwireError(f"window centre {self.center} outside 1..{self.n_sites}")

    @property
    def offsets(self) -> np.ndarray:
        lo = -(self.width_sites // 2)
        return np.arange(lo, lo + self.width_sites)

    def indices(self) -> np.ndarray:
        """0-based array indices, ordered from the lower edge to the upper edge."""
        return (self.center - 1 + self.offsets) % self.n_sites

    def sites(self) -> np.ndarray:
        return self.indices() + 1

    def mask(self) -> np.ndarray:
        m = np.zeros(self.n_sites, dtype=bool)
        m[self.indices()] = True
        return m

    def shifted(self, steps: int) -> SiteWindow:
        return SiteWindow(self.n_sites, (self.center - 1 + steps) % self.n_sites + 1, self.width_sites)

    def complement(self) -> SiteWindow:
        rest = self.n_sites - self.width_sites
        if rest == 0:
            raise SpinwireError("the full ring has an empty complement")
        upper = self.offsets[-1]
        center = (self.center - 1 + upper + 1 + rest // 2) % self.n_sites + 1
        return SiteWindow(self.n_sites, center, rest)

    def to_record(self, prefix: str = "window") -> dict:
        return {f"{prefix}_center": self.center, f"{prefix}_width": self.width_sites}


def bob_center(n_sites: int) -> int:
    """Site diametrically opposite site 1: 1 + floor(N/2)."""
    return 1 + n_sites // 2


def alice_window(n_sites: int, width_sites: int) -> SiteWindow:
    return SiteWindow(n_sites, 1, width_sites)


def bob_window(n_sites: int, width_sites: int) -> SiteWindow:
    return SiteWindow(n_sites, bob_center(n_sites), width_sites)


# -- observables ---------------------------------------------------------------

def _require_particle(s: OneParticleState) -> float:
    weight = s.particle_weight
    if weight == 0.0:
        raise DegenerateStateError("the one-particle component is zero")
    return weight


def capture_probability(s: OneParticleState, w: SiteWindow) -> float:
    """Fraction of the one-particle probability lying inside ``w``."""
    _check_same_ring(s.n_sites, w.n_sites)
    weight = _require_particle(s)
    inside = s.site_amps[w.indices()]
    return float(np.vdot(inside, inside).real / weight)


@dataclass(frozen=True, eq=False)
class SchmidtForm:
    """|s> = sqrt(C) |inside>|0> + sqrt(1 - C) |0>|outside>, C = ``capture``.

    A side carrying no amplitude is reported as ``None``.
    """

    capture: float
    inside: Optional[OneParticleState]
    outside: Optional[OneParticleState]

    def reconstruct(self) -> np.ndarray:
        parts = []
        if self.inside is not None:
            parts.append(np.sqrt(self.capture) * self.inside.site_amps)
        if self.outside is not None:
            parts.append(np.sqrt(1.0 - self.capture) * self.outside.site_amps)
        return np.sum(parts, axis=0)


def schmidt_decompose(s: OneParticleState, w: SiteWindow) -> SchmidtForm:
    if s.vacuum_amp != 0:
        raise SpinwireError("Schmidt form requires a state with zero vacuum amplitude")
    _check_same_ring(s.n_sites, w.n_sites)
    mask = w.mask()
    inside = np.where(mask, s.site_amps, 0.0)
    outside = np.where(mask, 0.0, s.site_amps)
    c_in = float(np.vdot(inside, inside).real)
    c_out = float(np.vdot(outside, outside).real)
    capture = c_in / (c_in + c_out)

    def part(amps, weight):
        return None if weight == 0.0 else OneParticleState(s.n_sites, 0.0, amps / np.sqrt(weight))

    return SchmidtForm(capture, part(inside, c_in), part(outside, c_out))


@dataclass(frozen=True, eq=False)
class OccupationGraph:
    """nu_j = |c_j|^2 / sum |c|^2, plotted against x_j = (j-1)/N."""

    values: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "values", _frozen(self.values, float))

    @property
    def n_sites(self) -> int:
        return self.values.size

    @property
    def positions(self) -> np.ndarray:
        return np.arange(self.n_sites) / self.n_sites

    @property
    def normalisation(self) -> float:
        return float(self.values.sum())


def occupation_graph(s: OneParticleState) -> OccupationGraph:
    weight = _require_particle(s)
    return OccupationGraph(np.abs(s.site_amps) ** 2 / weight)


def narrowest_window(g: OccupationGraph, mass: float = 0.95) -> tuple[int, int]:
    """(start index, length) of the shortest cyclic run of sites holding ``mass``.

    Ties go to the shortest length, then the smallest 0-based start index.
    """
    if not 0.0 < mass < 1.0:
        raise SpinwireError(f"mass must lie in (0, 1), got {mass!r}")
    nu = g.values
    n = nu.size
    prefix = np.concatenate(([0.0], np.cumsum(np.concatenate((nu, nu)))))
    # window [i, e) holds prefix[e] - prefix[i]; e(i) is nondecreasing in i
    target = prefix[:n] + mass * g.normalisation - MASS_TOL
    ends = np.searchsorted(prefix, target, side="left")
    lengths = np.minimum(ends - np.arange(n), n)
    start = int(np.argmin(lengths))
    return start, int(lengths[start])


def width(g: OccupationGraph, mass: float = 0.95) -> int:
    return narrowest_window(g, mass)[1]


def centre_of_mass(g: OccupationGraph) -> float:
    """Circular mean position in ring lengths, in [0, 1)."""
    z = np.sum(g.values * np.exp(2j * np.pi * g.positions))
    return float(np.angle(z) / (2.0 * np.pi)) % 1.0
