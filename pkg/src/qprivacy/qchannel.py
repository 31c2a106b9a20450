"""Quantum channels in Kraus form."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import (
    BadParam,
    DimMismatch,
    EmptyKraus,
    NotTracePreserving,
    NotUnitary,
    ShapeMismatch,
)
from .qstate import DensityOperator, validate_density

COMPLETENESS_ATOL = 1e-8
UNITARY_ATOL = 1e-10


@dataclass(frozen=True, eq=False)
class KrausChannel:
    """A CPTP map rho -> sum_k A_k rho A_k^dagger.

    ``kraus`` is a read-only array of shape ``(K, dim_out, dim_in)``.
    """

    kraus: np.ndarray

    @property
    def dim_in(self) -> int:
        return self.kraus.shape[2]

    @property
    def dim_out(self) -> int:
        return self.kraus.shape[1]

    @property
    def n_kraus(self) -> int:
        return self.kraus.shape[0]

    def __len__(self) -> int:
        return self.n_kraus

    def __repr__(self) -> str:
        return f"KrausChannel(dim_in={self.dim_in}, dim_out={self.dim_out}, K={self.n_kraus})"


@dataclass(frozen=True, eq=False)
class Isometry:
    """Stinespring isometry V with rows indexed by (output, environment)."""

    matrix: np.ndarray
    dim_out: int
    env_dim: int


def completeness_defect(kraus: np.ndarray) -> float:
    """Spectral norm of sum_k A_k^dagger A_k - I."""
    s = np.einsum("kji,kjl->il", kraus.conj(), kraus)
    return float(np.linalg.norm(s - np.eye(kraus.shape[2]), 2))


def validate_channel(kraus: Sequence) -> KrausChannel:
    if len(kraus) == 0:
        raise EmptyKraus("a channel needs at least one Kraus operator")
    mats = [np.asarray(a, dtype=complex) for a in kraus]
    shape = mats[0].shape
    if len(shape) != 2 or any(a.shape != shape for a in mats):
        raise ShapeMismatch(f"Kraus operators must share one 2-d shape, got {[a.shape for a in mats]}")
    arr = np.stack(mats)
    defect = completeness_defect(arr)
    if defect > COMPLETENESS_ATOL:
        raise NotTracePreserving(f"completeness defect {defect:.3g}", defect)
    arr.setflags(write=False)
    return KrausChannel(arr)


def _check_input(channel: KrausChannel, rho: DensityOperator) -> None:
    if rho.dim != channel.dim_in:
        raise DimMismatch(f"state has dim {rho.dim}, channel expects {channel.dim_in}")


def apply(channel: KrausChannel, rho: DensityOperator) -> DensityOperator:
    _check_input(channel, rho)
    a = channel.kraus
    out = np.einsum("kij,jl,kml->im", a, rho.matrix, a.conj(), optimize=True)
    dims = rho.dims if channel.dim_out == channel.dim_in else None
    return validate_density(out, dims)


def environment_state(channel: KrausChannel, rho: DensityOperator) -> DensityOperator:
    """Eve's state W with W_ij = tr(A_i rho A_j^dagger), a K x K matrix."""
    _check_input(channel, rho)
    a = channel.kraus
    w = np.einsum("iab,bc,jac->ij", a, rho.matrix, a.conj(), optimize=True)
    return validate_density(w)


def stinespring_isometry(channel: KrausChannel) -> Isometry:
    # V[(a, k), b] = A_k[a, b]
    v = np.transpose(channel.kraus, (1, 0, 2)).reshape(channel.dim_out * channel.n_kraus, channel.dim_in)
    v = np.array(v)
    v.setflags(write=False)
    return Isometry(v, channel.dim_out, channel.n_kraus)


def dilate(channel: KrausChannel, rho: DensityOperator) -> DensityOperator:
    """Joint output-environment state V rho V^dagger with dims (dim_out, K)."""
    _check_input(channel, rho)
    iso = stinespring_isometry(channel)
    v = iso.matrix
    return validate_density(v @ rho.matrix @ v.conj().T, (iso.dim_out, iso.env_dim))


def tensor_channels(a: KrausChannel, b: KrausChannel) -> KrausChannel:
    ka = a.kraus
    kb = b.kraus
    prod = np.einsum("iab,jcd->ijacbd", ka, kb).reshape(
        ka.shape[0] * kb.shape[0], a.dim_out * b.dim_out, a.dim_in * b.dim_in
    )
    prod.setflags(write=False)
    return KrausChannel(prod)


def tensor_all_channels(channels: Sequence[KrausChannel]) -> KrausChannel:
    out = channels[0]
    for c in channels[1:]:
        out = tensor_channels(out, c)
    return out


_PAULI = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}


def _weyl_operators(d: int) -> list[np.ndarray]:
    """X^a Z^b for (a, b) != (0, 0); Paulis X, Y, Z when d = 2."""
    if d == 2:
        return [_PAULI["X"], _PAULI["Y"], _PAULI["Z"]]
    omega = np.exp(2j * np.pi / d)
    shift = np.roll(np.eye(d), 1, axis=0)
    clock = np.diag(omega ** np.arange(d))
    ops = []
    for a in range(d):
        for b in range(d):
            if a or b:
                ops.append(np.linalg.matrix_power(shift, a) @ np.linalg.matrix_power(clock, b))
    return ops


def _prob(params, name: str) -> float:
    try:
        p = float(np.asarray(params, dtype=float).reshape(-1)[0])
    except (TypeError, ValueError, IndexError):
        raise BadParam(f"{name} needs one real parameter") from None
    if not 0.0 <= p <= 1.0:
        raise BadParam(f"{name} parameter must lie in [0, 1], got {p}", p)
    return p


def make_channel(kind: str, dim: int = 2, params=None) -> KrausChannel:
    """Build a standard channel.

    kinds:
      identity           {I}
      depolarizing(p)    rho -> (1 - p) rho + p I/d; for qubits the Kraus set is
                         {sqrt(1-3p/4) I, sqrt(p/4) X, sqrt(p/4) Y, sqrt(p/4) Z}
      dephasing(p)       {sqrt(1-p) I, sqrt(p) |j><j|}, kills off-diagonals at p = 1
      amplitude_damping  qubit only, decay probability gamma
      unitary            params is the unitary matrix
    """
    if dim < 1:
        raise BadParam(f"dim must be positive, got {dim}")
    eye = np.eye(dim, dtype=complex)
    if kind == "identity":
        return validate_channel([eye])
    if kind == "depolarizing":
        p = _prob(params, kind)
        d2 = dim * dim
        kraus = [np.sqrt(1 - p * (d2 - 1) / d2) * eye]
        kraus += [np.sqrt(p / d2) * w for w in _weyl_operators(dim)]
        return validate_channel(kraus)
    if kind == "dephasing":
        p = _prob(params, kind)
        kraus = [np.sqrt(1 - p) * eye]
        for j in range(dim):
            proj = np.zeros((dim, dim), dtype=complex)
            proj[j, j] = np.sqrt(p)
            kraus.append(proj)
        return validate_channel(kraus)
    if kind == "amplitude_damping":
        if dim != 2:
            raise BadParam("amplitude_damping is defined for qubits only")
        g = _prob(params, kind)
        a0 = np.array([[1, 0], [0, np.sqrt(1 - g)]], dtype=complex)
        a1 = np.array([[0, np.sqrt(g)], [0, 0]], dtype=complex)
        return validate_channel([a0, a1])
    if kind == "unitary":
        if params is None:
            raise BadParam("unitary channel needs a matrix")
        u = np.asarray(params, dtype=complex)
        if u.shape != (dim, dim):
            raise BadParam(f"unitary must be {dim}x{dim}, got {u.shape}")
        _require_unitary(u)
        return validate_channel([u])
    raise BadParam(f"unknown channel kind {kind!r}")


def _require_unitary(u: np.ndarray) -> None:
    if u.ndim != 2 or u.shape[0] != u.shape[1]:
        raise NotUnitary(f"expected a square matrix, got shape {u.shape}")
    defect = float(np.max(np.abs(u.conj().T @ u - np.eye(u.shape[0]))))
    if defect > UNITARY_ATOL:
        raise NotUnitary(f"max |u^dagger u - I| = {defect:.3g}", defect)


def random_isometry(rows: int, cols: int, rng: np.random.Generator) -> np.ndarray:
    """Haar isometry: QR of a complex Ginibre matrix with the R-diagonal phases removed."""
    g = rng.standard_normal((rows, cols)) + 1j * rng.standard_normal((rows, cols))
    q, r = np.linalg.qr(g)
    phases = np.diag(r) / np.abs(np.diag(r))
    return q * phases[None, :]


def random_unitary(dim: int, seed: int) -> np.ndarray:
    return random_isometry(dim, dim, np.random.default_rng(seed))


def random_channel(dim: int, env_dim: int, seed: int) -> KrausChannel:
    if env_dim < 1 or dim < 1:
        raise BadParam(f"dim and env_dim must be positive, got {dim}, {env_dim}")
    v = random_isometry(dim * env_dim, dim, np.random.default_rng(seed))
    return validate_channel(list(v.reshape(env_dim, dim, dim)))


def remix_kraus(channel: KrausChannel, u) -> KrausChannel:
    """A'_j = sum_k u_jk A_k: same map, different Kraus representation."""
    u = np.asarray(u, dtype=complex)
    _require_unitary(u)
    if u.shape[0] != channel.n_kraus:
        raise NotUnitary(f"remix matrix must be {channel.n_kraus}x{channel.n_kraus}, got {u.shape}")
    return validate_channel(list(np.einsum("jk,kab->jab", u, channel.kraus)))
