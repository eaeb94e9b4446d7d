"""Dense 2^N simulator for small rings, used to check the one-particle reduction.

Basis ordering: site j (1-based) is bit j-1 of the basis index, and a set bit
means site j carries an excitation. |00...0> is index 0 and the one-particle
state |j> is index 2^(j-1).

Operator convention: s+ creates an excitation and s- removes one. Under this
convention the hopping terms reproduce B = 2 d1 and B' = -2 e1, and a bare
s-_j s-_{j+1} term annihilates the whole zero/one-particle sector. The two
on-site projectors are taken so that c1 weights unexcited sites and c2 the
excited site, which is what gives A = c0 + c1 (N-1) + c2 + 2 d2.
"""
from __future__ import annotations

import functools
from dataclasses import dataclass

import numpy as np

from .errors import SpinwireError
from .ring_model import HamiltonianSpec, dispersion_from_spec, omega
from .state import OneParticleState, twisted_w

MAX_BUILD_SITES = 12
MAX_EVOLVE_SITES = 10

_PAULI = {
    "x": np.array([[0, 1], [1, 0]], dtype=complex),
    "y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "z": np.array([[1, 0], [0, -1]], dtype=complex),
}


def _check_size(n_sites: int, limit: int) -> None:
    if n_sites > limit:
        raise SpinwireError(f"oracle is capped at N = {limit}, got N = {n_sites}")


@dataclass(frozen=True, eq=False)
class FullStateVector:
    n_sites: int
    amplitudes: np.ndarray

    def __post_init__(self):
        _check_size(self.n_sites, MAX_BUILD_SITES)
        amps = np.array(self.amplitudes, dtype=complex)
        if amps.shape != (2**self.n_sites,):
            raise SpinwireError(f"expected {2**self.n_sites} amplitudes, got shape {amps.shape}")
        norm = np.linalg.norm(amps)
        if abs(norm - 1.0) > 1e-10:
            raise SpinwireError(f"full state is not normalised: norm {norm!r}")
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)


def one_particle_indices(n_sites: int) -> np.ndarray:
    return 1 << np.arange(n_sites)


def embed(s: OneParticleState) -> FullStateVector:
    _check_size(s.n_sites, MAX_BUILD_SITES)
    amps = np.zeros(2**s.n_sites, dtype=complex)
    amps[0] = s.vacuum_amp
    amps[one_particle_indices(s.n_sites)] = s.site_amps
    return FullStateVector(s.n_sites, amps)


def sector_leakage(v: FullStateVector) -> float:
    """Norm of the part of ``v`` outside the zero/one-particle sector."""
    rest = v.amplitudes.copy()
    rest[0] = 0.0
    rest[one_particle_indices(v.n_sites)] = 0.0
    return float(np.linalg.norm(rest))


def restrict(v: FullStateVector) -> OneParticleState:
    """Project onto the zero/one-particle sector (no renormalisation)."""
    return OneParticleState(v.n_sites, v.amplitudes[0], v.amplitudes[one_particle_indices(v.n_sites)])


# -- operators -----------------------------------------------------------------

def _bits(n_sites: int) -> np.ndarray:
    """(2^N, N) array of occupation numbers."""
    idx = np.arange(2**n_sites)
    return (idx[:, None] >> np.arange(n_sites)[None, :]) & 1


def build_full_hamiltonian(spec: HamiltonianSpec, pair_lowering: float = 0.0) -> np.ndarray:
    """Dense matrix of the ring Hamiltonian on all 2^N basis states.

    ``pair_lowering`` adds g * sum_j s-_j s-_{j+1}. That term is not Hermitian
    and exists only to confirm that it annihilates the one-particle sector.
    """
    n = spec.n_sites
    _check_size(n, MAX_BUILD_SITES)
    dim = 2**n
    idx = np.arange(dim)
    occ = _bits(n)
    h = np.zeros((dim, dim), dtype=complex)

    diag = np.full(dim, spec.c0, dtype=complex)
    diag += spec.c1 * (n - occ.sum(axis=1)) + spec.c2 * occ.sum(axis=1)

    for j in range(n):
        p, q = j, (j + 1) % n
        n_p, n_q = occ[:, p], occ[:, q]
        flipped = idx ^ (1 << p) ^ (1 << q)
        wall = n_p != n_q
        # (hop)^2 is the projector onto a domain wall across the bond
        diag += spec.d2 * wall
        # f1 i (X - X^dag)(X + X^dag) = i f1 (X X^dag - X^dag X) since X^2 = 0
        diag += 1j * spec.f1 * ((n_p == 1) & (n_q == 0)).astype(float)
        diag -= 1j * spec.f1 * ((n_p == 0) & (n_q == 1)).astype(float)
        # hop: move the excitation across the bond in either direction
        np.add.at(h, (flipped[wall], idx[wall]), spec.d1)
        # X = s+_p s-_q moves q -> p with weight +i e1; X^dag moves p -> q with -i e1
        forward = (n_q == 1) & (n_p == 0)
        backward = (n_p == 1) & (n_q == 0)
        np.add.at(h, (flipped[forward], idx[forward]), 1j * spec.e1)
        np.add.at(h, (flipped[backward], idx[backward]), -1j * spec.e1)
        if pair_lowering:
            both = (n_p == 1) & (n_q == 1)
            np.add.at(h, (flipped[both], idx[both]), pair_lowering)

    h[idx, idx] += diag
    return h


def site_operator(op: np.ndarray, site: int, n_sites: int) -> np.ndarray:
    """Embed a single-site 2x2 operator acting on ``site`` (1-based)."""
    out = np.eye(1, dtype=complex)
    for j in range(n_sites, 0, -1):
        out = np.kron(out, op if j == site else np.eye(2))
    return out


def heisenberg_matrix(chi: float, n_sites: int) -> np.ndarray:
    """chi N/2 I - chi/2 sum_j sigma_j . sigma_{j+1}, built from Pauli matrices."""
    _check_size(n_sites, MAX_BUILD_SITES)
    dim = 2**n_sites
    h = chi * n_sites / 2.0 * np.eye(dim, dtype=complex)
    for j in range(1, n_sites + 1):
        k = j % n_sites + 1
        for axis in "xyz":
            h -= chi / 2.0 * site_operator(_PAULI[axis], j, n_sites) @ site_operator(_PAULI[axis], k, n_sites)
    return h


def z_field(site: int, n_sites: int) -> np.ndarray:
    return site_operator(_PAULI["z"], site, n_sites)


def total_sz(n_sites: int) -> np.ndarray:
    return np.diag((n_sites - 2 * _bits(n_sites).sum(axis=1)).astype(complex))


def translation_matrix(n_sites: int) -> np.ndarray:
    """Permutation matrix of T|a_1, ..., a_N> = |a_2, ..., a_N, a_1>."""
    idx = np.arange(2**n_sites)
    # new a_i = old a_{i+1}: rotate the bit string one place toward site 1
    image = (idx >> 1) | ((idx & 1) << (n_sites - 1))
    t = np.zeros((2**n_sites, 2**n_sites))
    t[image, idx] = 1.0
    return t


def one_particle_block(h: np.ndarray, n_sites: int) -> np.ndarray:
    sel = one_particle_indices(n_sites)
    return h[np.ix_(sel, sel)]


# -- checks --------------------------------------------------------------------

def verify_w_eigenstates(spec: HamiltonianSpec, pair_lowering: float = 0.0) -> float:
    """max_k || H |W(k)> - omega(k) |W(k)> || over the full Hilbert space."""
    h = build_full_hamiltonian(spec, pair_lowering)
    d = dispersion_from_spec(spec)
    worst = 0.0
    for k in range(spec.n_sites):
        w = embed(twisted_w(spec.n_sites, k)).amplitudes
        worst = max(worst, float(np.linalg.norm(h @ w - omega(d, k) * w)))
    return worst


def verify_translation_commutes(spec: HamiltonianSpec, field_perturbation: float = 0.0) -> float:
    """max |[H, T]| entry; ``field_perturbation`` adds a field on site 1 as a negative control."""
    _check_size(spec.n_sites, MAX_EVOLVE_SITES)
    h = build_full_hamiltonian(spec)
    if field_perturbation:
        h = h + field_perturbation * z_field(1, spec.n_sites)
    t = translation_matrix(spec.n_sites)
    return float(np.max(np.abs(h @ t - t @ h)))


def sector_eigenvalues(spec: HamiltonianSpec) -> np.ndarray:
    """Sorted eigenvalues of the full Hamiltonian restricted to one-particle states."""
    block = one_particle_block(build_full_hamiltonian(spec), spec.n_sites)
    return np.sort(np.linalg.eigvalsh(block))


@functools.lru_cache(maxsize=8)
def _eigensystem(spec: HamiltonianSpec):
    vals, vecs = np.linalg.eigh(build_full_hamiltonian(spec))
    vals.setflags(write=False)
    vecs.setflags(write=False)
    return vals, vecs


def full_evolve(v: FullStateVector, spec: HamiltonianSpec, t: float) -> FullStateVector:
    """e^{-iHt} v by dense eigendecomposition."""
    if v.n_sites != spec.n_sites:
        raise SpinwireError(f"state has {v.n_sites} sites, Hamiltonian has {spec.n_sites}")
    _check_size(spec.n_sites, MAX_EVOLVE_SITES)
    vals, vecs = _eigensystem(spec)
    coeffs = vecs.conj().T @ v.amplitudes
    return FullStateVector(v.n_sites, vecs @ (np.exp(-1j * vals * t) * coeffs))


def energy(v: FullStateVector, spec: HamiltonianSpec) -> float:
    h = build_full_hamiltonian(spec)
    return float(np.vdot(v.amplitudes, h @ v.amplitudes).real)
