"""Finite-dimensional quantum states.

States are dense complex numpy arrays wrapped in small frozen dataclasses.
The wrapped arrays are marked read-only, so a validated state can be shared
freely. All randomness goes through ``numpy.random.default_rng(seed)``
(the PCG64 bit generator), never through global state.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    BadEnsemble,
    BadIndex,
    BadRank,
    DimMismatch,
    NegativeEigenvalue,
    NotHermitian,
    NotNormalized,
    NotSquare,
    TraceNotOne,
)

HERMITIAN_ATOL = 1e-8
TRACE_ATOL = 1e-8
EIGEN_FLOOR = -1e-8
NORM_ATOL = 1e-10
PROB_ATOL = 1e-10


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=complex)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class DensityOperator:
    """Hermitian, positive semidefinite, unit-trace matrix.

    ``dims`` is the tensor factorization of the underlying space; a single
    system has ``dims == (d,)``. Construct through :func:`validate_density`
    rather than directly.
    """

    matrix: np.ndarray
    dims: tuple[int, ...]

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def n_factors(self) -> int:
        return len(self.dims)

    def eigenvalues(self) -> np.ndarray:
        """Eigenvalues in ascending order, with round-off negatives clamped to 0."""
        w = np.linalg.eigvalsh(self.matrix)
        return np.where(w < 0, 0.0, w)

    def with_dims(self, dims: Sequence[int]) -> DensityOperator:
        dims = tuple(int(x) for x in dims)
        if int(np.prod(dims)) != self.dim:
            raise DimMismatch(f"dims {dims} do not multiply to {self.dim}")
        return DensityOperator(self.matrix, dims)

    def __repr__(self) -> str:
        return f"DensityOperator(dims={self.dims})"


# Multipartite states are density operators with more than one declared factor.
MultipartiteState = DensityOperator


@dataclass(frozen=True, eq=False)
class PureState:
    amplitudes: np.ndarray
    dims: tuple[int, ...]

    @property
    def dim(self) -> int:
        return self.amplitudes.shape[0]

    def density(self) -> DensityOperator:
        psi = self.amplitudes
        return validate_density(np.outer(psi, psi.conj()), self.dims)

    def __repr__(self) -> str:
        return f"PureState(dims={self.dims})"


def pure_state(amplitudes, dims: Sequence[int] | None = None) -> PureState:
    psi = np.asarray(amplitudes, dtype=complex).reshape(-1)
    norm2 = float(np.vdot(psi, psi).real)
    if abs(norm2 - 1.0) > NORM_ATOL:
        raise NotNormalized(f"squared norm {norm2!r} differs from 1", abs(norm2 - 1.0))
    dims = (psi.shape[0],) if dims is None else tuple(int(x) for x in dims)
    if int(np.prod(dims)) != psi.shape[0]:
        raise DimMismatch(f"dims {dims} do not multiply to {psi.shape[0]}")
    return PureState(_frozen(psi), dims)


@dataclass(frozen=True, eq=False)
class Ensemble:
    probs: np.ndarray
    states: tuple[DensityOperator, ...]

    def average(self) -> DensityOperator:
        m = sum(p * s.matrix for p, s in zip(self.probs, self.states))
        return validate_density(m, self.states[0].dims)


def make_ensemble(probs: Sequence[float], states: Sequence[DensityOperator]) -> Ensemble:
    p = np.asarray(probs, dtype=float)
    if len(p) != len(states) or len(p) == 0:
        raise BadEnsemble("probs and states must be nonempty and of equal length")
    if np.any(p < 0):
        raise BadEnsemble("negative probability", float(p.min()))
    if abs(p.sum() - 1.0) > PROB_ATOL:
        raise BadEnsemble(f"probabilities sum to {p.sum()!r}", abs(p.sum() - 1.0))
    d = states[0].dim
    if any(s.dim != d for s in states):
        raise DimMismatch("ensemble states must share one dimension")
    p.setflags(write=False)
    return Ensemble(p, tuple(states))


def validate_density(m, dims: Sequence[int] | None = None) -> DensityOperator:
    """Check the density-operator invariants and wrap ``m``.

    Checks run in order: square shape, Hermiticity (max entrywise
    asymmetry <= 1e-8), smallest eigenvalue >= -1e-8, trace within 1e-8
    of 1. The first failure raises with its measured magnitude. The stored
    matrix is the Hermitian part of ``m``.
    """
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] == 0:
        raise NotSquare(f"expected a nonempty square matrix, got shape {m.shape}")
    d = m.shape[0]
    dims = (d,) if dims is None else tuple(int(x) for x in dims)
    if any(x < 1 for x in dims) or int(np.prod(dims)) != d:
        raise DimMismatch(f"dims {dims} do not multiply to {d}")

    asym = float(np.max(np.abs(m - m.conj().T)))
    if asym > HERMITIAN_ATOL:
        raise NotHermitian(f"max |m - m^dagger| = {asym:.3g}", asym)
    h = 0.5 * (m + m.conj().T)
    lam_min = float(np.linalg.eigvalsh(h)[0])
    if lam_min < EIGEN_FLOOR:
        raise NegativeEigenvalue(f"smallest eigenvalue {lam_min:.3g}", lam_min)
    tr = float(np.trace(h).real)
    if abs(tr - 1.0) > TRACE_ATOL:
        raise TraceNotOne(f"trace {tr!r} differs from 1 by {abs(tr - 1.0):.3g}", abs(tr - 1.0))
    return DensityOperator(_frozen(h), dims)


def maximally_mixed(d: int) -> DensityOperator:
    return validate_density(np.eye(d) / d)


def basis_state(d: int, index: int = 0) -> PureState:
    psi = np.zeros(d, dtype=complex)
    psi[index] = 1.0
    return pure_state(psi)


def tensor(a: DensityOperator, b: DensityOperator) -> MultipartiteState:
    """Kronecker product; the factor lists of ``a`` and ``b`` are concatenated."""
    return DensityOperator(_frozen(np.kron(a.matrix, b.matrix)), a.dims + b.dims)


def tensor_all(states: Iterable[DensityOperator]) -> MultipartiteState:
    states = list(states)
    if not states:
        raise DimMismatch("need at least one state")
    out = states[0]
    for s in states[1:]:
        out = tensor(out, s)
    return out


def partial_trace(s: MultipartiteState, keep: Iterable[int]) -> MultipartiteState:
    """Reduce ``s`` to the factors listed in ``keep`` (original order kept)."""
    keep = sorted(set(int(k) for k in keep))
    n = s.n_factors
    if not keep:
        raise BadIndex("keep must name at least one factor")
    if keep[0] < 0 or keep[-1] >= n:
        raise BadIndex(f"factor indices {keep} out of range for {n} factors")
    if len(keep) == n:
        return s
    t = s.matrix.reshape(s.dims + s.dims)
    row = list(range(n))
    col = [i if i not in keep else n + i for i in range(n)]
    out = [i for i in keep] + [n + i for i in keep]
    reduced = np.einsum(t, row + col, out)
    kept_dims = tuple(s.dims[i] for i in keep)
    d = int(np.prod(kept_dims))
    return DensityOperator(_frozen(reduced.reshape(d, d)), kept_dims)


def trace_distance(a: DensityOperator, b: DensityOperator) -> float:
    """tr|a - b|, the sum of singular values of the difference (no factor 1/2)."""
    if a.dim != b.dim:
        raise DimMismatch(f"dimensions differ: {a.dim} vs {b.dim}")
    return float(np.sum(np.linalg.svd(a.matrix - b.matrix, compute_uv=False)))


def purify(rho: DensityOperator) -> PureState:
    """Purification on ``d x d``: sum_i sqrt(lam_i) |e_i> (x) |i>.

    Eigenvalues are taken in descending order, so a pure input ``|psi><psi|``
    maps to ``|psi> (x) |0>`` up to a global phase.
    """
    w, v = np.linalg.eigh(rho.matrix)
    order = np.argsort(w)[::-1]
    w = np.clip(w[order], 0.0, None)
    v = v[:, order]
    d = rho.dim
    # psi[(a, i)] = sqrt(w_i) v[a, i]
    psi = (v * np.sqrt(w)[None, :]).reshape(d * d)
    psi = psi / np.linalg.norm(psi)
    return pure_state(psi, (d, d))


def random_density(dim: int, rank: int, seed: int) -> DensityOperator:
    """Ginibre state G G^dagger / tr(G G^dagger) with G of shape ``dim x rank``."""
    if not 1 <= rank <= dim:
        raise BadRank(f"rank must lie in [1, {dim}], got {rank}")
    rng = np.random.default_rng(seed)
    g = rng.standard_normal((dim, rank)) + 1j * rng.standard_normal((dim, rank))
    m = g @ g.conj().T
    return validate_density(m / np.trace(m).real)


def random_pure(dim: int, seed: int) -> PureState:
    if dim < 1:
        raise DimMismatch(f"dim must be positive, got {dim}")
    rng = np.random.default_rng(seed)
    psi = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return pure_state(psi / np.linalg.norm(psi))
