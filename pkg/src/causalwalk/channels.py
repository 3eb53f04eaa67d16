"""Quantum switch acting on two Kraus channels.

Joint states are ordered system (x) switch. With branch channels
``Phi1 = {K1_j}`` and ``Phi2 = {K2_i}``, the switch uses

    W_ij = K2_i K1_j (x) |0><0| + K1_j K2_i (x) |1><1|

so a switch in ``|0>`` yields ``Phi2[Phi1[rho]]`` and ``|1>`` the other order.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ChannelError, DimensionMismatchError
from .walker import check_density_matrix

COMPLETENESS_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class KrausChannel:
    kraus: tuple[np.ndarray, ...]

    def __post_init__(self):
        ops = tuple(np.asarray(k, dtype=np.complex128) for k in self.kraus)
        if not ops:
            raise ChannelError("a channel needs at least one Kraus operator")
        dim = ops[0].shape[0]
        if any(k.shape != (dim, dim) for k in ops):
            raise ChannelError("Kraus operators must be square and of equal size")
        completeness = sum(k.conj().T @ k for k in ops)
        if np.max(np.abs(completeness - np.eye(dim))) > COMPLETENESS_TOL:
            raise ChannelError("Kraus operators violate sum K^dag K = I")
        object.__setattr__(self, "kraus", ops)

    @property
    def dim(self) -> int:
        return self.kraus[0].shape[0]

    def apply(self, rho) -> np.ndarray:
        return sum(k @ rho @ k.conj().T for k in self.kraus)

    @classmethod
    def identity(cls, dim: int) -> "KrausChannel":
        return cls((np.eye(dim),))

    @classmethod
    def unitary(cls, U) -> "KrausChannel":
        return cls((np.asarray(U),))


def switch_kraus(phi1: KrausChannel, phi2: KrausChannel) -> list[np.ndarray]:
    if phi1.dim != phi2.dim:
        raise DimensionMismatchError(f"channel dimensions differ: {phi1.dim} vs {phi2.dim}")
    p0 = np.diag([1.0, 0.0]).astype(np.complex128)
    p1 = np.diag([0.0, 1.0]).astype(np.complex128)
    return [
        np.kron(k2 @ k1, p0) + np.kron(k1 @ k2, p1)
        for k2 in phi2.kraus
        for k1 in phi1.kraus
    ]


def switch_channel_apply(phi1: KrausChannel, phi2: KrausChannel, rho_sys, rho_switch) -> np.ndarray:
    rho_sys = check_density_matrix(rho_sys)
    rho_switch = check_density_matrix(rho_switch)
    if rho_sys.shape[0] != phi1.dim:
        raise DimensionMismatchError(f"state dimension {rho_sys.shape[0]} != channel dimension {phi1.dim}")
    joint = np.kron(rho_sys, rho_switch)
    out = sum(w @ joint @ w.conj().T for w in switch_kraus(phi1, phi2))
    return check_density_matrix(out)


def reduce_switch(joint, dim: int) -> np.ndarray:
    """Trace out the switch from a system (x) switch density matrix."""
    return np.einsum("iaja->ij", np.asarray(joint).reshape(dim, 2, dim, 2))
