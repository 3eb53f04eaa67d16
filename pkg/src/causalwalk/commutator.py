"""Commutator of two walk steps against its closed block form.

With ``S = diag(T-, T+)`` (coin 0 hops left) and a coin
``[[a, b], [c, d]]``, every block of ``[SC1, SC2]`` is a combination of the
identity and ``T-^2`` or ``T+^2``. The diagonal blocks only see the ``zeta``
phases, so for the single-parameter coin they vanish and the off-diagonal
blocks reduce to ``-i sin(theta2 - theta1) (1 - T-^2)`` and
``-i sin(theta2 - theta1) (1 - T+^2)``. Both steps commute iff
``theta2 - theta1`` is a multiple of pi.
"""

from __future__ import annotations

import numpy as np

from .engine import step_operator
from .errors import LatticeBoundsError
from .walker import CoinSpec


def propagators(L: int) -> tuple[np.ndarray, np.ndarray]:
    """``(T-, T+)`` with ``T- |x> = |x-1>`` on the cyclic lattice."""
    t_minus = np.roll(np.eye(L, dtype=np.complex128), -1, axis=0)
    return t_minus, t_minus.T.copy()


def _blocks(b00, b01, b10, b11):
    return np.block([[b00, b01], [b10, b11]])


def computed_commutator(spec1: CoinSpec, spec2: CoinSpec, L: int) -> np.ndarray:
    s1, s2 = step_operator(spec1, L), step_operator(spec2, L)
    return s1 @ s2 - s2 @ s1


def commutator_single_param(theta1: float, theta2: float, L: int):
    if L < 5:
        raise LatticeBoundsError(f"commutator check needs L >= 5, got {L}")
    computed = computed_commutator(CoinSpec(theta1), CoinSpec(theta2), L)
    tm, tp = propagators(L)
    eye, zero = np.eye(L), np.zeros((L, L))
    amp = -1j * np.sin(theta2 - theta1)
    predicted = _blocks(zero, amp * (eye - tm @ tm), amp * (eye - tp @ tp), zero)
    return computed, predicted


def commutator_general(spec1: CoinSpec, spec2: CoinSpec, L: int):
    if L < 5:
        raise LatticeBoundsError(f"commutator check needs L >= 5, got {L}")
    computed = computed_commutator(spec1, spec2, L)
    t1, x1, z1 = spec1.theta, spec1.xi, spec1.zeta
    t2, x2, z2 = spec2.theta, spec2.xi, spec2.zeta
    c1, s1, c2, s2 = np.cos(t1), np.sin(t1), np.cos(t2), np.sin(t2)
    e = lambda phase: np.exp(1j * phase)  # noqa: E731

    diag = -2j * np.sin(z1 - z2) * s1 * s2
    upper_t = e(x1 + z2) * c1 * s2 - e(x2 + z1) * s1 * c2
    upper_i = e(z1 - x2) * s1 * c2 - e(z2 - x1) * c1 * s2
    lower_i = e(x1 - z2) * c1 * s2 - e(x2 - z1) * s1 * c2
    lower_t = e(-(x2 + z1)) * s1 * c2 - e(-(x1 + z2)) * c1 * s2

    tm, tp = propagators(L)
    eye = np.eye(L)
    predicted = _blocks(
        diag * eye,
        upper_t * (tm @ tm) + upper_i * eye,
        lower_i * eye + lower_t * (tp @ tp),
        -diag * eye,
    )
    return computed, predicted


def lemma_grid(L: int = 11, divisions: int = 12, periods: int = 2, theta1: float = 0.3):
    """Rows ``(dtheta, max|[SC1, SC2]|, max|computed - predicted|)`` for ``dtheta = m*pi/divisions``."""
    rows = []
    for m in range(divisions * periods + 1):
        dtheta = m * np.pi / divisions
        computed, predicted = commutator_single_param(theta1, theta1 + dtheta, L)
        rows.append((dtheta, float(np.max(np.abs(computed))), float(np.max(np.abs(computed - predicted)))))
    return rows
