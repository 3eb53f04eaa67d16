"""Walker states on a cyclic lattice and the elementary step operations.

A state is stored as a dense ``(2, L)`` complex array: row ``c`` is the coin
component, column ``i`` is the site at position ``x = i - (L - 1) // 2``.
Flattening in C order gives the coin-major vector used for dense operators,
so an operator on the full space has the ``[[.., ..], [.., ..]]`` block
layout with one ``L x L`` block per pair of coin indices.

All functions are pure; returned arrays are fresh and read-only.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray

from .errors import (
    DegenerateStateError,
    DensityMatrixError,
    LatticeBoundsError,
    NormalizationError,
)

__all__ = [
    "CoinSpec",
    "WalkerState",
    "make_localized_state",
    "coin_matrix",
    "apply_coin",
    "apply_shift",
    "walk_step",
    "probability_distribution",
    "partial_trace_position",
    "check_density_matrix",
]

NORM_TOL = 1e-12


@dataclass(frozen=True)
class CoinSpec:
    """Parameters of the SU(2) coin.

    The defaults ``xi = 0`` and ``zeta = pi/2`` give the single-parameter
    coin ``[[cos t, i sin t], [i sin t, cos t]]``.
    """

    theta: float
    xi: float = 0.0
    zeta: float = np.pi / 2


@dataclass(frozen=True, eq=False)
class WalkerState:
    amplitudes: NDArray[np.complex128]

    def __post_init__(self):
        amps = np.array(self.amplitudes, dtype=np.complex128)
        if amps.ndim != 2 or amps.shape[0] != 2 or amps.shape[1] < 1:
            raise ValueError(f"amplitudes must have shape (2, L), got {amps.shape}")
        if not np.all(np.isfinite(amps)):
            raise NormalizationError("non-finite amplitude in walker state")
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    @property
    def lattice_size(self) -> int:
        return self.amplitudes.shape[1]

    @property
    def positions(self) -> NDArray[np.int64]:
        L = self.lattice_size
        return np.arange(L) - (L - 1) // 2

    @property
    def norm(self) -> float:
        return float(np.sqrt(np.sum(np.abs(self.amplitudes) ** 2)))

    def amplitude(self, coin: int, x: int) -> complex:
        return complex(self.amplitudes[coin, site_index(x, self.lattice_size)])

    def to_vector(self) -> NDArray[np.complex128]:
        return self.amplitudes.reshape(-1).copy()

    @classmethod
    def from_vector(cls, vec, L: int) -> "WalkerState":
        return cls(np.asarray(vec, dtype=np.complex128).reshape(2, L))

    def normalized(self) -> "WalkerState":
        n = self.norm
        if n == 0.0:
            raise DegenerateStateError("cannot normalize a zero state")
        return WalkerState(self.amplitudes / n)


def site_index(x: int, L: int) -> int:
    half = (L - 1) // 2
    if not -half <= x <= L - 1 - half:
        raise LatticeBoundsError(f"site {x} outside lattice of size {L}")
    return x + half


def make_localized_state(alpha: complex, beta: complex, x0: int, L: int) -> WalkerState:
    """Coin state ``alpha|0> + beta|1>`` at the single site ``x0``."""
    if L < 1:
        raise LatticeBoundsError(f"lattice size must be positive, got {L}")
    norm2 = abs(alpha) ** 2 + abs(beta) ** 2
    if abs(norm2 - 1.0) > NORM_TOL:
        raise NormalizationError(f"|alpha|^2 + |beta|^2 = {norm2!r}, expected 1")
    i = site_index(x0, L)
    amps = np.zeros((2, L), dtype=np.complex128)
    amps[0, i] = alpha
    amps[1, i] = beta
    return WalkerState(amps)


def coin_matrix(spec: CoinSpec) -> NDArray[np.complex128]:
    c, s = np.cos(spec.theta), np.sin(spec.theta)
    return np.array(
        [
            [np.exp(1j * spec.xi) * c, np.exp(1j * spec.zeta) * s],
            [-np.exp(-1j * spec.zeta) * s, np.exp(-1j * spec.xi) * c],
        ],
        dtype=np.complex128,
    )


# The array helpers accept trailing batch axes: shape (2, L, ...).
def _coin_array(amps, coin):
    return np.tensordot(coin, amps, axes=(1, 0))


def _shift_array(amps):
    out = np.empty_like(amps)
    out[0] = np.roll(amps[0], -1, axis=0)
    out[1] = np.roll(amps[1], 1, axis=0)
    return out


def _step_array(amps, coin):
    return _shift_array(_coin_array(amps, coin))


def apply_coin(state: WalkerState, spec: CoinSpec) -> WalkerState:
    return WalkerState(_coin_array(state.amplitudes, coin_matrix(spec)))


def apply_shift(state: WalkerState) -> WalkerState:
    """Coin 0 moves one site left, coin 1 one site right, cyclically."""
    return WalkerState(_shift_array(state.amplitudes))


def walk_step(state: WalkerState, spec: CoinSpec) -> WalkerState:
    return WalkerState(_step_array(state.amplitudes, coin_matrix(spec)))


def probability_distribution(state: WalkerState) -> list[tuple[int, float]]:
    p = np.sum(np.abs(state.amplitudes) ** 2, axis=0)
    return [(int(x), float(v)) for x, v in zip(state.positions, p)]


def partial_trace_position(state: WalkerState) -> NDArray[np.complex128]:
    """Reduced coin density matrix, renormalized by the state's norm."""
    a = state.amplitudes
    rho = a @ a.conj().T
    tr = float(np.real(np.trace(rho)))
    if tr <= 0.0:
        raise DegenerateStateError("zero-norm state has no reduced density matrix")
    rho = rho / tr
    # exact Hermitian symmetrization; the product above is Hermitian up to rounding
    return 0.5 * (rho + rho.conj().T)


def check_density_matrix(rho, tol: float = 1e-10) -> NDArray[np.complex128]:
    rho = np.asarray(rho, dtype=np.complex128)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise DensityMatrixError(f"density matrix must be square, got {rho.shape}")
    if np.max(np.abs(rho - rho.conj().T)) > tol:
        raise DensityMatrixError("density matrix is not Hermitian")
    if abs(np.trace(rho) - 1.0) > tol:
        raise DensityMatrixError(f"density matrix has trace {np.trace(rho)!r}")
    if np.min(np.linalg.eigvalsh(rho)) < -tol:
        raise DensityMatrixError("density matrix has a negative eigenvalue")
    return rho
