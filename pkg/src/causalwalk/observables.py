"""Spread, trace distance, BLP non-Markovianity and coin-position entanglement."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import NormalizationError
from .walker import WalkerState, check_density_matrix, partial_trace_position

__all__ = [
    "BLPResult",
    "spread",
    "state_spread",
    "trace_distance",
    "coin_trajectory",
    "trace_distance_series",
    "blp_measure",
    "entanglement_entropy",
    "concurrence",
]


@dataclass(frozen=True)
class BLPResult:
    value: float
    revival_intervals: tuple[tuple[int, int], ...]


def spread(dist: Sequence[tuple[int, float]]) -> float:
    """Standard deviation of a position distribution given as ``(x, p)`` pairs."""
    x = np.array([d[0] for d in dist], dtype=float)
    p = np.array([d[1] for d in dist], dtype=float)
    total = p.sum()
    if abs(total - 1.0) > 1e-10:
        raise NormalizationError(f"distribution sums to {total!r}, expected 1")
    mean = np.dot(p, x)
    var = np.dot(p, (x - mean) ** 2)
    return float(np.sqrt(max(var, 0.0)))


def state_spread(state: WalkerState) -> float:
    p = np.sum(np.abs(state.amplitudes) ** 2, axis=0)
    p = p / p.sum()
    x = state.positions.astype(float)
    mean = np.dot(p, x)
    return float(np.sqrt(max(np.dot(p, (x - mean) ** 2), 0.0)))


def trace_distance(rho1, rho2) -> float:
    rho1, rho2 = check_density_matrix(rho1), check_density_matrix(rho2)
    diff = rho1 - rho2
    eig = np.linalg.eigvalsh(0.5 * (diff + diff.conj().T))
    return float(0.5 * np.sum(np.abs(eig)))


def coin_trajectory(traj) -> list[np.ndarray]:
    return [partial_trace_position(s) for s in traj.states]


def trace_distance_series(traj_plus, traj_minus) -> list[float]:
    """``D(t)`` between the reduced coin states of two trajectories on the same time grid."""
    if tuple(traj_plus.times) != tuple(traj_minus.times):
        raise ValueError("trajectories are sampled at different times")
    return [
        trace_distance(a, b)
        for a, b in zip(coin_trajectory(traj_plus), coin_trajectory(traj_minus))
    ]


def blp_measure(series: Sequence[float]) -> BLPResult:
    """Sum of the positive step-to-step increments of ``D``.

    Consecutive increasing steps merge into one revival interval ``(start, end)``
    given in series indices.
    """
    d = np.asarray(series, dtype=float)
    if d.size < 2:
        raise ValueError("BLP measure needs at least two points")
    inc = np.diff(d)
    value = float(np.sum(inc[inc > 0]))
    intervals = []
    start = None
    for i, delta in enumerate(inc):
        if delta > 0 and start is None:
            start = i
        elif delta <= 0 and start is not None:
            intervals.append((start, i))
            start = None
    if start is not None:
        intervals.append((start, len(inc)))
    return BLPResult(value, tuple(intervals))


def entanglement_entropy(rho) -> float:
    """Von Neumann entropy in bits, ``0 log 0 = 0``."""
    lam = np.linalg.eigvalsh(check_density_matrix(rho))
    lam = lam[lam > 1e-15]
    return float(np.clip(-np.sum(lam * np.log2(lam)), 0.0, np.log2(len(rho))))


def concurrence(rho) -> float:
    """``sqrt(2 (1 - Tr rho^2))`` for the reduced coin state of a pure coin-position state."""
    rho = check_density_matrix(rho)
    purity = float(np.real(np.trace(rho @ rho)))
    return float(np.sqrt(min(max(2.0 * (1.0 - purity), 0.0), 1.0)))
