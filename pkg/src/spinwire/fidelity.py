"""From capture probability to the decoded qubit channel and its fidelity.

After Bob refocuses his window onto one qubit, the transmitted qubit has gone
through an amplitude damping channel whose only parameter is the capture
probability C of his window.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from .errors import SpinwireError

DEFAULT_TAU = 0.95
_NORM_TOL = 1e-10


def _check_capture(capture: float) -> float:
    capture = float(capture)
    if not 0.0 <= capture <= 1.0:
        raise SpinwireError(f"capture probability must lie in [0, 1], got {capture!r}")
    return capture


def _check_qubit(alpha: complex, beta: complex) -> None:
    norm2 = abs(alpha) ** 2 + abs(beta) ** 2
    if abs(norm2 - 1.0) > _NORM_TOL:
        raise SpinwireError(f"|alpha|^2 + |beta|^2 = {norm2!r}, expected 1")


def decoded_density_matrix(alpha: complex, beta: complex, capture: float) -> np.ndarray:
    _check_qubit(alpha, beta)
    c = _check_capture(capture)
    a2, b2 = abs(alpha) ** 2, abs(beta) ** 2
    coherence = math.sqrt(c) * alpha * np.conj(beta)
    return np.array(
        [[a2 + b2 * (1.0 - c), coherence], [np.conj(coherence), b2 * c]],
        dtype=complex,
    )


def kraus_pair(capture: float) -> tuple[np.ndarray, np.ndarray]:
    """Amplitude damping Kraus operators M0 = diag(1, sqrt C), M1 = sqrt(1-C) |0><1|."""
    c = _check_capture(capture)
    m0 = np.array([[1.0, 0.0], [0.0, math.sqrt(c)]], dtype=complex)
    m1 = np.array([[0.0, math.sqrt(1.0 - c)], [0.0, 0.0]], dtype=complex)
    return m0, m1


def apply_channel(rho: np.ndarray, capture: float) -> np.ndarray:
    m0, m1 = kraus_pair(capture)
    return m0 @ rho @ m0.conj().T + m1 @ rho @ m1.conj().T


def fidelity(alpha: complex, beta: complex, capture: float) -> float:
    _check_qubit(alpha, beta)
    c = _check_capture(capture)
    a2, b2 = abs(alpha) ** 2, abs(beta) ** 2
    return a2**2 + (1.0 + 2.0 * math.sqrt(c) - c) * a2 * b2 + c * b2**2


def average_fidelity(capture: float) -> float:
    """Bloch-sphere average of ``fidelity``: 1/2 + sqrt(C)/3 + C/6."""
    s = math.sqrt(_check_capture(capture))
    # (3 + 2s + s^2) / 6 keeps both endpoints exact in floating point
    return (3.0 + 2.0 * s + s * s) / 6.0


def min_capture_for(tau: float) -> float:
    """Inverse of ``average_fidelity``.

    With s = sqrt(C) the condition is s^2 + 2 s + 3 - 6 tau = 0, whose
    nonnegative root is s = sqrt(6 tau - 2) - 1.
    """
    tau = float(tau)
    if not 0.5 <= tau <= 1.0:
        raise SpinwireError(f"threshold must lie in [1/2, 1], got {tau!r}")
    s = math.sqrt(6.0 * tau - 2.0) - 1.0
    return min(1.0, max(0.0, s * s))


def qubit_rate_lower_bound(n_sites: int, tau: float, achieved_avg_fidelity: float, transit_time: float) -> float:
    """Single-shot bound on the qubit rate: one qubit per transit if the threshold is met.

    This is only a lower bound; pipelining several packets is not considered.
    """
    if not transit_time > 0:
        raise SpinwireError(f"transit time must be positive, got {transit_time!r}")
    return 1.0 / transit_time if achieved_avg_fidelity >= tau else 0.0


@dataclass(frozen=True)
class ChannelReport:
    capture: float
    avg_fidelity: float
    threshold_tau: float
    success: bool
    transit_time: float
    qubit_rate_lower_bound: float

    def to_record(self) -> dict:
        return asdict(self)


def channel_report(capture: float, transit_time: float, n_sites: int, tau: float = DEFAULT_TAU) -> ChannelReport:
    capture = float(capture)
    # rounding can push a computed capture a hair outside [0, 1]
    if -1e-12 < capture < 0.0 or 1.0 < capture < 1.0 + 1e-12:
        capture = min(max(capture, 0.0), 1.0)
    f = average_fidelity(capture)
    return ChannelReport(
        capture=capture,
        avg_fidelity=f,
        threshold_tau=tau,
        success=f >= tau,
        transit_time=transit_time,
        qubit_rate_lower_bound=qubit_rate_lower_bound(n_sites, tau, f, transit_time),
    )
