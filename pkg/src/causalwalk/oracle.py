"""Brute-force reference implementations.

Nothing here calls the array evolution in :mod:`causalwalk.walker`. The
shift is written down entry by entry from its action on basis kets, the coin
enters through an explicit Kronecker product, and step sequences are
multiplied out as dense ``2L x 2L`` matrices. Tests compare the engine
against these.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .errors import BudgetError, DimensionMismatchError
from .walker import CoinSpec

MAX_DIM = 1024
MAX_SWITCHED_STEPS = 12


@dataclass(frozen=True)
class SequenceTerm:
    """One summand of the switched-step expansion.

    ``steps`` is in application order (first applied first). ``subset``
    lists the block slots where the swapped pair ``SC2 SC1`` was used.
    """

    weight: complex
    steps: tuple[CoinSpec, ...]
    subset: tuple[int, ...] = ()


@dataclass(frozen=True)
class IdentityReport:
    max_abs_diff: float
    passed: bool
    tol: float


def shift_matrix(L: int) -> np.ndarray:
    S = np.zeros((2 * L, 2 * L), dtype=np.complex128)
    for c in (0, 1):
        move = -1 if c == 0 else 1
        for i in range(L):
            S[c * L + (i + move) % L, c * L + i] = 1.0
    return S


def explicit_coin(spec: CoinSpec) -> np.ndarray:
    # written out independently of walker.coin_matrix
    t, xi, ze = spec.theta, spec.xi, spec.zeta
    a = complex(np.cos(xi), np.sin(xi)) * np.cos(t)
    b = complex(np.cos(ze), np.sin(ze)) * np.sin(t)
    c = -complex(np.cos(ze), -np.sin(ze)) * np.sin(t)
    d = complex(np.cos(xi), -np.sin(xi)) * np.cos(t)
    return np.array([[a, b], [c, d]], dtype=np.complex128)


def step_matrix(spec: CoinSpec, L: int) -> np.ndarray:
    return shift_matrix(L) @ np.kron(explicit_coin(spec), np.eye(L))


def brute_force_operator(steps, L: int) -> np.ndarray:
    """Dense product of walk steps, the first step as the rightmost factor."""
    if 2 * L > MAX_DIM:
        raise BudgetError(f"dimension {2 * L} exceeds the oracle budget of {MAX_DIM}")
    U = np.eye(2 * L, dtype=np.complex128)
    for spec in steps:
        U = step_matrix(spec, L) @ U
    return U


def enumerate_step_sequences(theta1: float, theta2: float, theta_s: float, N: int):
    """All ``2**(N/2)`` terms of the switched-step operator, one per slot subset.

    Slot ``m`` carries ``SC1 SC2`` (application order ``[theta2, theta1]``)
    unless ``m`` is in the subset, where it carries ``SC2 SC1``.
    """
    if N % 2:
        raise ValueError(f"N must be even, got {N}")
    if N > MAX_SWITCHED_STEPS:
        raise BudgetError(f"N={N} exceeds the enumeration budget of {MAX_SWITCHED_STEPS}")
    half = N // 2
    c, s = np.cos(theta_s), np.sin(theta_s)
    first, second = CoinSpec(theta1), CoinSpec(theta2)
    terms = []
    for j in range(half + 1):
        for subset in itertools.combinations(range(half), j):
            steps = []
            for m in range(half):
                steps += [first, second] if m in subset else [second, first]
            terms.append(SequenceTerm(c ** (half - j) * s**j, tuple(steps), subset))
    return terms


def sum_terms(terms, L: int) -> np.ndarray:
    total = np.zeros((2 * L, 2 * L), dtype=np.complex128)
    for term in terms:
        total += term.weight * brute_force_operator(term.steps, L)
    return total


def verify_identity(opA, opB, tol: float) -> IdentityReport:
    A, B = np.asarray(opA), np.asarray(opB)
    if A.shape != B.shape:
        raise DimensionMismatchError(f"shapes differ: {A.shape} vs {B.shape}")
    diff = float(np.max(np.abs(A - B))) if A.size else 0.0
    return IdentityReport(diff, diff < tol, tol)


def dense_partial_trace(vec, L: int) -> np.ndarray:
    """Coin reduced state via the full ``2L x 2L`` density matrix."""
    vec = np.asarray(vec, dtype=np.complex128)
    rho = np.outer(vec, vec.conj())
    rho = rho / np.trace(rho)
    out = np.zeros((2, 2), dtype=np.complex128)
    for c in (0, 1):
        for cp in (0, 1):
            out[c, cp] = sum(rho[c * L + x, cp * L + x] for x in range(L))
    return out
