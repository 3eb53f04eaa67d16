"""Periodic walks in definite, reversed and switch-controlled causal order.

Sequences are always handled in application order, first-applied first. An
operator product such as ``SC1 . SC2`` therefore shows up as the sequence
``[theta2, theta1]``.

Conventions for the forward order of a ``k``-period walk:

* ``k = 2``: ``[theta2, theta1, theta2, ...]``, i.e. ``(SC1 SC2)^(N/2)`` with
  a trailing ``SC2`` for odd ``N``; reverse exchanges the two coins.
* ``k >= 3``: the ascending block ``[theta1, ..., thetak]`` repeated, the
  tail continuing the block; reverse uses the descending block.
* ``"mirror"`` is the exact time reversal of the forward sequence, and an
  explicit 1-based permutation fixes the block directly.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Sequence, Union

import numpy as np

from .errors import (
    BudgetError,
    DegeneratePostselectionError,
    DestructiveInterferenceError,
    LightConeError,
    NormalizationError,
    SpecError,
    WrongRegimeError,
)
from .walker import CoinSpec, WalkerState, _step_array, coin_matrix

Order = Union[str, tuple[int, ...]]

DESTRUCTIVE_TOL = 1e-14
COMMUTING_TOL = 1e-12
MAX_FULL_PERIOD = 5
MAX_EXPANSION_STEPS = 12
MAX_EXPANSION_L = 31

PLUS = (1 / np.sqrt(2), 1 / np.sqrt(2))
MINUS = (1 / np.sqrt(2), -1 / np.sqrt(2))


@dataclass(frozen=True)
class PeriodicWalkSpec:
    thetas: tuple[float, ...]
    steps: int
    order: Order = "forward"

    def __post_init__(self):
        thetas = tuple(float(t) for t in self.thetas)
        object.__setattr__(self, "thetas", thetas)
        if not thetas:
            raise SpecError("a periodic walk needs at least one coin parameter")
        if self.steps < 0:
            raise SpecError(f"step count must be nonnegative, got {self.steps}")
        order = self.order
        if isinstance(order, str):
            if order not in ("forward", "reverse", "mirror"):
                raise SpecError(f"unknown order {order!r}")
        else:
            order = tuple(int(i) for i in order)
            if sorted(order) != list(range(1, len(thetas) + 1)):
                raise SpecError(f"order {order} is not a permutation of 1..{len(thetas)}")
            object.__setattr__(self, "order", order)

    @property
    def period(self) -> int:
        return len(self.thetas)

    def reversed(self) -> "PeriodicWalkSpec":
        flip = {"forward": "reverse", "reverse": "forward"}
        if isinstance(self.order, tuple):
            return PeriodicWalkSpec(self.thetas, self.steps, tuple(reversed(self.order)))
        if self.order == "mirror":
            return PeriodicWalkSpec(self.thetas, self.steps, "forward")
        return PeriodicWalkSpec(self.thetas, self.steps, flip[self.order])


@dataclass(frozen=True)
class SwitchSpec:
    """Switch prepared as ``cos(theta_s)|0> + sin(theta_s)|1>``."""

    theta_s: float = np.pi / 4
    postselect: tuple[complex, complex] = PLUS

    def __post_init__(self):
        v = np.asarray(self.postselect, dtype=np.complex128)
        if v.shape != (2,) or abs(np.vdot(v, v).real - 1.0) > 1e-12:
            raise SpecError(f"post-selection vector {self.postselect} is not a unit 2-vector")


@dataclass(frozen=True, eq=False)
class SwitchedState:
    """Amplitudes indexed ``[switch, coin, site]``."""

    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.array(self.amplitudes, dtype=np.complex128)
        if amps.ndim != 3 or amps.shape[:2] != (2, 2):
            raise ValueError(f"amplitudes must have shape (2, 2, L), got {amps.shape}")
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    @property
    def lattice_size(self) -> int:
        return self.amplitudes.shape[2]

    @property
    def norm(self) -> float:
        return float(np.sqrt(np.sum(np.abs(self.amplitudes) ** 2)))

    def branch(self, s: int) -> WalkerState:
        return WalkerState(self.amplitudes[s])


@dataclass(frozen=True)
class Trajectory:
    """Normalized snapshots with the norms they had before normalization.

    ``times[i]`` is the number of walk steps behind ``states[i]``.
    """

    states: tuple[WalkerState, ...]
    norms: tuple[float, ...]
    times: tuple[int, ...] = field(default=())

    def __post_init__(self):
        if not self.times:
            object.__setattr__(self, "times", tuple(range(len(self.states))))
        if not len(self.states) == len(self.norms) == len(self.times):
            raise ValueError("states, norms and times must have equal length")

    def __len__(self):
        return len(self.states)

    @property
    def final(self) -> WalkerState:
        return self.states[-1]


def periodic_sequence(spec: PeriodicWalkSpec) -> list[CoinSpec]:
    k, thetas = spec.period, spec.thetas
    if spec.order == "mirror":
        forward = PeriodicWalkSpec(thetas, spec.steps, "forward")
        return periodic_sequence(forward)[::-1]
    if isinstance(spec.order, tuple):
        block = [thetas[i - 1] for i in spec.order]
    elif k == 2:
        block = [thetas[1], thetas[0]]
    else:
        block = list(thetas)
    if spec.order == "reverse":
        block = block[::-1]
    return [CoinSpec(block[i % k]) for i in range(spec.steps)]


def check_light_cone(L: int, N: int, allow_wrap: bool = False) -> None:
    if not allow_wrap and L < 2 * N + 3:
        raise LightConeError(f"lattice size {L} < 2N+3 = {2 * N + 3}; the wavefront would wrap")


def _raw_path(amps: np.ndarray, seq: Sequence[CoinSpec]) -> list[np.ndarray]:
    out = [amps]
    for spec in seq:
        amps = _step_array(amps, coin_matrix(spec))
        out.append(amps)
    return out


def _evolve_raw(amps: np.ndarray, seq: Sequence[CoinSpec]) -> np.ndarray:
    for spec in seq:
        amps = _step_array(amps, coin_matrix(spec))
    return amps


def _trajectory(raw: Sequence[np.ndarray], times=None) -> Trajectory:
    states, norms = [], []
    for amps in raw:
        n = float(np.sqrt(np.sum(np.abs(amps) ** 2)))
        if n < DESTRUCTIVE_TOL:
            raise DestructiveInterferenceError(f"state norm {n:.3e} vanished")
        # leave already-normalized states bit-exact
        states.append(WalkerState(amps if abs(n - 1.0) <= 4e-16 else amps / n))
        norms.append(n)
    return Trajectory(tuple(states), tuple(norms), tuple(times or range(len(raw))))


def evolve_sequence(initial: WalkerState, seq: Sequence[CoinSpec], allow_wrap: bool = False) -> Trajectory:
    check_light_cone(initial.lattice_size, len(seq), allow_wrap)
    return _trajectory(_raw_path(initial.amplitudes, seq))


def evolve_definite(initial: WalkerState, spec: PeriodicWalkSpec, allow_wrap: bool = False) -> Trajectory:
    return evolve_sequence(initial, periodic_sequence(spec), allow_wrap)


def _check_pair(specA: PeriodicWalkSpec, specB: PeriodicWalkSpec) -> None:
    if specA.steps != specB.steps:
        raise SpecError(f"branch step counts differ: {specA.steps} vs {specB.steps}")


def switch_extended_evolve(
    initial: WalkerState,
    specA: PeriodicWalkSpec,
    specB: PeriodicWalkSpec,
    sw: SwitchSpec,
    allow_wrap: bool = False,
) -> SwitchedState:
    """Apply ``|0><0| (x) U1 + |1><1| (x) U2`` to the switch-extended state."""
    _check_pair(specA, specB)
    check_light_cone(initial.lattice_size, specA.steps, allow_wrap)
    a = _evolve_raw(initial.amplitudes, periodic_sequence(specA))
    b = _evolve_raw(initial.amplitudes, periodic_sequence(specB))
    return SwitchedState(np.stack([np.cos(sw.theta_s) * a, np.sin(sw.theta_s) * b]))


def project_switch(sw_state: SwitchedState, outcome) -> tuple[WalkerState, float]:
    """Keep the branch ``<outcome|`` of the switch; return it renormalized with its probability."""
    v = np.asarray(outcome, dtype=np.complex128)
    if v.shape != (2,) or abs(np.vdot(v, v).real - 1.0) > 1e-12:
        raise NormalizationError(f"outcome {outcome} is not a unit 2-vector")
    amps = np.tensordot(v.conj(), sw_state.amplitudes, axes=(0, 0))
    prob = float(np.sum(np.abs(amps) ** 2))
    if prob < DESTRUCTIVE_TOL**2:
        raise DegeneratePostselectionError(f"outcome {outcome} has probability {prob:.3e}")
    return WalkerState(amps / np.sqrt(prob)), prob


def effective_activation_apply(
    initial: WalkerState,
    specA: PeriodicWalkSpec,
    specB: PeriodicWalkSpec,
    theta_s: float,
    allow_wrap: bool = False,
) -> tuple[WalkerState, float]:
    """``(cos(theta_s) U1 + sin(theta_s) U2)|psi0>``, unnormalized, and its norm."""
    _check_pair(specA, specB)
    check_light_cone(initial.lattice_size, specA.steps, allow_wrap)
    a = _evolve_raw(initial.amplitudes, periodic_sequence(specA))
    b = _evolve_raw(initial.amplitudes, periodic_sequence(specB))
    amps = np.cos(theta_s) * a + np.sin(theta_s) * b
    n = float(np.sqrt(np.sum(np.abs(amps) ** 2)))
    if n < DESTRUCTIVE_TOL:
        raise DestructiveInterferenceError(f"activated state norm {n:.3e} vanished")
    return WalkerState(amps), n


def activation_trajectory(
    initial: WalkerState,
    specA: PeriodicWalkSpec,
    specB: PeriodicWalkSpec,
    sw: SwitchSpec = SwitchSpec(),
    allow_wrap: bool = False,
) -> Trajectory:
    """Post-selected switch-extended walk at every step count ``0..N``.

    Each snapshot is the full ``t``-step switch evolution projected on
    ``sw.postselect``; ``norms`` holds the square root of the outcome
    probability.
    """
    _check_pair(specA, specB)
    check_light_cone(initial.lattice_size, specA.steps, allow_wrap)
    pa = _raw_path(initial.amplitudes, periodic_sequence(specA))
    pb = _raw_path(initial.amplitudes, periodic_sequence(specB))
    w0, w1 = np.conj(np.asarray(sw.postselect, dtype=np.complex128))
    c, s = np.cos(sw.theta_s), np.sin(sw.theta_s)
    return _trajectory([w0 * c * a + w1 * s * b for a, b in zip(pa, pb)])


def switched_step_evolve(
    initial: WalkerState,
    theta1: float,
    theta2: float,
    theta_s: float,
    N: int,
    allow_wrap: bool = False,
) -> Trajectory:
    """Apply ``cos(ts) SC1 SC2 + sin(ts) SC2 SC1`` a total of ``N/2`` times.

    No normalization happens inside the product; the trajectory stores the
    renormalized snapshot and raw norm after every block, at ``t = 0, 2, ..., N``.
    """
    if N % 2:
        raise SpecError(f"switched-step walk needs an even step count, got {N}")
    check_light_cone(initial.lattice_size, N, allow_wrap)
    c1, c2 = coin_matrix(CoinSpec(theta1)), coin_matrix(CoinSpec(theta2))
    c, s = np.cos(theta_s), np.sin(theta_s)
    amps = initial.amplitudes
    raw = [amps]
    for _ in range(N // 2):
        fwd = _step_array(_step_array(amps, c2), c1)
        rev = _step_array(_step_array(amps, c1), c2)
        amps = c * fwd + s * rev
        raw.append(amps)
    return _trajectory(raw, times=range(0, N + 1, 2))


def full_activation_paths(initial: WalkerState, thetas: Sequence[float], N: int) -> list[np.ndarray]:
    """``(1/sqrt(k!)) sum over block orderings`` of each ordering's ``t``-step prefix, t = 0..N."""
    k = len(thetas)
    if k < 1:
        raise SpecError("full activation needs at least one coin parameter")
    if k > MAX_FULL_PERIOD:
        raise BudgetError(f"period {k} exceeds the k! budget (k <= {MAX_FULL_PERIOD})")
    total = None
    for perm in itertools.permutations(range(k)):
        seq = [CoinSpec(thetas[perm[i % k]]) for i in range(N)]
        path = _raw_path(initial.amplitudes, seq)
        total = path if total is None else [a + b for a, b in zip(total, path)]
    scale = 1.0 / math.sqrt(math.factorial(k))
    return [scale * a for a in total]


def full_activation_apply(
    initial: WalkerState, thetas: Sequence[float], N: int, allow_wrap: bool = False
) -> tuple[WalkerState, float]:
    k = len(thetas)
    if k and N % k:
        raise SpecError(f"step count {N} is not a multiple of the period {k}")
    check_light_cone(initial.lattice_size, N, allow_wrap)
    amps = full_activation_paths(initial, thetas, N)[-1]
    n = float(np.sqrt(np.sum(np.abs(amps) ** 2)))
    if n < DESTRUCTIVE_TOL:
        raise DestructiveInterferenceError(f"fully activated state norm {n:.3e} vanished")
    return WalkerState(amps), n


def full_activation_trajectory(
    initial: WalkerState, thetas: Sequence[float], N: int, allow_wrap: bool = False
) -> Trajectory:
    k = len(thetas)
    if k and N % k:
        raise SpecError(f"step count {N} is not a multiple of the period {k}")
    check_light_cone(initial.lattice_size, N, allow_wrap)
    return _trajectory(full_activation_paths(initial, thetas, N))


# -- dense operators -------------------------------------------------------


def sequence_operator(seq: Sequence[CoinSpec], L: int) -> np.ndarray:
    """Matrix of a step sequence, obtained by evolving all basis vectors at once."""
    basis = np.eye(2 * L, dtype=np.complex128).reshape(2, L, 2 * L)
    return _evolve_raw(basis, seq).reshape(2 * L, 2 * L)


def step_operator(spec: CoinSpec, L: int) -> np.ndarray:
    return sequence_operator([spec], L)


def block_operators(theta1: float, theta2: float, L: int) -> tuple[np.ndarray, np.ndarray]:
    """``(SC1 SC2, SC2 SC1)``."""
    s1, s2 = step_operator(CoinSpec(theta1), L), step_operator(CoinSpec(theta2), L)
    return s1 @ s2, s2 @ s1


def switched_step_operator(theta1: float, theta2: float, theta_s: float, N: int, L: int) -> np.ndarray:
    """Direct product form of the switched-step operator.

    For odd ``N`` the leading single-step factor
    ``cos(ts) SC2 + sin(ts) SC1`` is included.
    """
    c, s = np.cos(theta_s), np.sin(theta_s)
    u1, u2 = block_operators(theta1, theta2, L)
    A = c * u1 + s * u2
    op = np.linalg.matrix_power(A, N // 2)
    if N % 2:
        single = c * step_operator(CoinSpec(theta2), L) + s * step_operator(CoinSpec(theta1), L)
        op = single @ op
    return op


def _check_expansion_size(N: int, L: int) -> None:
    if N % 2:
        raise SpecError(f"expansion needs an even step count, got {N}")
    if N > MAX_EXPANSION_STEPS or L > MAX_EXPANSION_L:
        raise BudgetError(
            f"expansion limited to N <= {MAX_EXPANSION_STEPS}, L <= {MAX_EXPANSION_L}; got N={N}, L={L}"
        )


def switched_step_subsets(N: int) -> dict[int, list[tuple[int, ...]]]:
    """Slot subsets of size ``j`` where ``SC2 SC1`` replaces ``SC1 SC2``."""
    half = N // 2
    return {j: list(itertools.combinations(range(half), j)) for j in range(half + 1)}


def expand_switched_step(theta1: float, theta2: float, theta_s: float, N: int, L: int) -> np.ndarray:
    """Sum over slot subsets of the mixed ``N/2``-block walks, weighted by ``cos^(N/2-j) sin^j``."""
    if abs(np.sin(theta2 - theta1)) < COMMUTING_TOL:
        raise WrongRegimeError(
            "steps commute (theta2 - theta1 is a multiple of pi); use binomial_commuting_expand"
        )
    _check_expansion_size(N, L)
    half = N // 2
    c, s = np.cos(theta_s), np.sin(theta_s)
    u1, u2 = block_operators(theta1, theta2, L)
    total = np.zeros((2 * L, 2 * L), dtype=np.complex128)
    for j, subsets in switched_step_subsets(N).items():
        weight = c ** (half - j) * s**j
        for subset in subsets:
            term = np.eye(2 * L, dtype=np.complex128)
            for m in range(half):
                term = (u2 if m in subset else u1) @ term
            total += weight * term
    return total


def binomial_commuting_expand(theta1: float, theta_s: float, n: int, N: int, L: int) -> np.ndarray:
    """Binomial form of the switched-step operator when ``theta2 = theta1 + n*pi``."""
    _check_expansion_size(N, L)
    half = N // 2
    c, s = np.cos(theta_s), np.sin(theta_s)
    u1, u2 = block_operators(theta1, theta1 + n * np.pi, L)
    total = np.zeros((2 * L, 2 * L), dtype=np.complex128)
    for j in range(half + 1):
        term = np.linalg.matrix_power(u1, half - j) @ np.linalg.matrix_power(u2, j)
        total += math.comb(half, j) * c ** (half - j) * s**j * term
    return total
