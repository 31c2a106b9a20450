"""Entropic and fidelity quantities. All logarithms are base 2 (bits)."""

from __future__ import annotations

import numpy as np

from .errors import DimMismatch, OutOfRange, ValidationError
from .qchannel import KrausChannel, apply, environment_state
from .qstate import DensityOperator, Ensemble

ZERO_EIGENVALUE = 1e-12
NEGATIVE_ENTROPY_TOL = 1e-9


def entropy_of_spectrum(eigs) -> np.ndarray | float:
    """-sum lam log2 lam along the last axis; eigenvalues below 1e-12 count as 0."""
    lam = np.asarray(eigs, dtype=float)
    safe = np.where(lam > ZERO_EIGENVALUE, lam, 1.0)
    h = -np.sum(np.where(lam > ZERO_EIGENVALUE, lam * np.log2(safe), 0.0), axis=-1)
    if np.any(h < -NEGATIVE_ENTROPY_TOL):
        raise ValidationError(f"negative entropy {np.min(h):.3g}: invalid state leaked past validation")
    h = np.where(h < 0, 0.0, h)
    return float(h) if h.ndim == 0 else h


def von_neumann_entropy(rho: DensityOperator | np.ndarray) -> float:
    m = rho.matrix if isinstance(rho, DensityOperator) else np.asarray(rho)
    return entropy_of_spectrum(np.linalg.eigvalsh(m))


def entropies(stack: np.ndarray) -> np.ndarray:
    """Entropy of each matrix in a ``(n, d, d)`` stack of density matrices."""
    return entropy_of_spectrum(np.linalg.eigvalsh(stack))


def binary_entropy(x) -> float | np.ndarray:
    x = np.asarray(x, dtype=float)
    if np.any((x < 0) | (x > 1)) or np.any(np.isnan(x)):
        raise OutOfRange("binary entropy needs x in [0, 1]")
    return -_xlog2x(x) - _xlog2x(1 - x)


def _xlog2x(x: np.ndarray) -> np.ndarray | float:
    safe = np.where(x > 0, x, 1.0)
    out = np.where(x > 0, x * np.log2(safe), 0.0)
    return float(out) if out.ndim == 0 else out


def _require_square(channel: KrausChannel) -> None:
    if channel.dim_out != channel.dim_in:
        raise DimMismatch(f"channel must map d -> d, got {channel.dim_in} -> {channel.dim_out}")


def entropy_exchange(rho: DensityOperator, channel: KrausChannel) -> float:
    return von_neumann_entropy(environment_state(channel, rho))


def coherent_information(rho: DensityOperator, channel: KrausChannel) -> float:
    _require_square(channel)
    return von_neumann_entropy(apply(channel, rho)) - entropy_exchange(rho, channel)


def entanglement_fidelity(rho: DensityOperator, channel: KrausChannel) -> float:
    """F = sum_k |tr(rho A_k)|^2."""
    _require_square(channel)
    if rho.dim != channel.dim_in:
        raise DimMismatch(f"state has dim {rho.dim}, channel expects {channel.dim_in}")
    traces = np.einsum("ab,kba->k", rho.matrix, channel.kraus)
    return float(np.sum(np.abs(traces) ** 2))


def holevo_chi(ensemble: Ensemble) -> float:
    avg = von_neumann_entropy(ensemble.average())
    return avg - float(sum(p * von_neumann_entropy(s) for p, s in zip(ensemble.probs, ensemble.states)))
