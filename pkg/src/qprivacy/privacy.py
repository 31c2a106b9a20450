"""Lower bounds on guaranteed privacy.

Three families are computed here:

* the coherent-information bound ``S(rho_B) - S(rho_E)``;
* the fidelity (Fano) bound ``p(F) = S_B + H(F) - (1 - F) log2(d^2 - 1)``,
  obtained by replacing ``S(rho_E)`` with its quantum-Fano upper bound,
  together with its closed-form maximum;
* the multipartite bound built from reduced states, and a per-instance
  verifier of the Araki-Lieb/subadditivity chain behind it.

None of these compute the privacy itself, which is a supremum over all
strategies; they are lower bounds only.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, field
from typing import Sequence

import numpy as np

from .entropy import (
    binary_entropy,
    coherent_information,
    entanglement_fidelity,
    entropy_exchange,
    von_neumann_entropy,
)
from .errors import BadDim, BadF, DimMismatch, FactorMismatch, LengthMismatch, OutOfRange
from .qchannel import KrausChannel, apply, tensor_all_channels
from .qstate import DensityOperator, MultipartiteState, partial_trace, tensor_all

CHAIN_ATOL = 1e-9


@dataclass(frozen=True)
class PrivacyBoundReport:
    d: int
    S_B: float
    S_E: float
    F: float
    coherent_bound: float
    fano_bound: float
    fano_inequality_slack: float

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class MultipartiteBoundReport:
    N: int
    lhs: float
    rhs: float
    per_factor: list[dict] = field(default_factory=list)

    @property
    def slack(self) -> float:
        return self.lhs - self.rhs

    @property
    def holds(self) -> bool:
        return self.slack >= -CHAIN_ATOL

    def to_dict(self) -> dict:
        return asdict(self)


def coherent_privacy_bound(rho: DensityOperator, channel: KrausChannel) -> float:
    return coherent_information(rho, channel)


def _check_dim(d: int) -> None:
    if int(d) != d or d < 2:
        raise BadDim(f"d must be an integer >= 2, got {d}")


def fano_privacy_bound(s_b, f, d: int):
    """Fidelity lower bound on privacy, vectorized over ``f``.

    p = S_B - F log2 F - (1 - F) log2(1 - F) + (F - 1) log2(d^2 - 1),
    with 0 log 0 = 0 at the endpoints F = 0 and F = 1.
    """
    _check_dim(d)
    f_arr = np.asarray(f, dtype=float)
    if np.any(np.isnan(f_arr)) or np.any((f_arr < 0) | (f_arr > 1)):
        raise BadF("F must lie in [0, 1]")
    if np.any(np.asarray(s_b) < 0):
        raise OutOfRange("S_B must be nonnegative")
    p = s_b + binary_entropy(f_arr) + (f_arr - 1) * np.log2(d * d - 1)
    return float(p) if np.ndim(p) == 0 else p


def fano_max_location(d: int) -> float:
    _check_dim(d)
    return (d * d - 1) / (d * d)


def fano_max_value(s_b: float, d: int) -> float:
    _check_dim(d)
    return s_b + np.log2(d * d / (d * d - 1))


def fano_bound_from_channel(rho: DensityOperator, channel: KrausChannel) -> PrivacyBoundReport:
    if channel.dim_out != channel.dim_in:
        raise DimMismatch(f"channel must map d -> d, got {channel.dim_in} -> {channel.dim_out}")
    d = channel.dim_in
    _check_dim(d)
    s_b = von_neumann_entropy(apply(channel, rho))
    s_e = entropy_exchange(rho, channel)
    f = min(max(entanglement_fidelity(rho, channel), 0.0), 1.0)
    fano_rhs = binary_entropy(f) + (1 - f) * np.log2(d * d - 1)
    return PrivacyBoundReport(
        d=d,
        S_B=s_b,
        S_E=s_e,
        F=f,
        coherent_bound=s_b - s_e,
        fano_bound=fano_privacy_bound(s_b, f, d),
        fano_inequality_slack=float(fano_rhs - s_e),
    )


def multipartite_bound_rhs(
    reduced_B: Sequence[DensityOperator],
    reduced_E: Sequence[DensityOperator],
    ref_B_star: Sequence[DensityOperator],
) -> float:
    """S(B_1) - S(E_1) + sum_{i>=2} [-S(B*_i) - S(E_i)].

    ``ref_B_star`` holds the reference states for factors 2..N, so it has
    one entry fewer than ``reduced_B``.
    """
    n = len(reduced_B)
    if n < 1 or len(reduced_E) != n:
        raise LengthMismatch(f"need N >= 1 reduced states on each side, got {n} and {len(reduced_E)}")
    if len(ref_B_star) != n - 1:
        raise LengthMismatch(f"ref_B_star must cover factors 2..{n}, got {len(ref_B_star)} states")
    total = von_neumann_entropy(reduced_B[0]) - von_neumann_entropy(reduced_E[0])
    for star, e in zip(ref_B_star, reduced_E[1:]):
        total += -von_neumann_entropy(star) - von_neumann_entropy(e)
    return total


def multipartite_chain_check(rho_B: MultipartiteState, rho_E: MultipartiteState) -> MultipartiteBoundReport:
    """Evaluate both ends of the per-instance chain

    S(B) - S(E) >= S(B_1) - sum_{i>=2} S(B_i) - sum_i S(E_i),

    with the reference states taken to be the actual marginals B_i.
    """
    n = rho_B.n_factors
    if rho_E.n_factors != n:
        raise FactorMismatch(f"rho_B has {n} factors, rho_E has {rho_E.n_factors}")
    marg_B = [partial_trace(rho_B, {i}) for i in range(n)]
    marg_E = [partial_trace(rho_E, {i}) for i in range(n)]
    s_B = [von_neumann_entropy(m) for m in marg_B]
    s_E = [von_neumann_entropy(m) for m in marg_E]
    lhs = von_neumann_entropy(rho_B) - von_neumann_entropy(rho_E)
    rhs = s_B[0] - sum(s_B[1:]) - sum(s_E)
    return MultipartiteBoundReport(
        N=n,
        lhs=lhs,
        rhs=rhs,
        per_factor=[{"S_Bi": b, "S_Ei": e} for b, e in zip(s_B, s_E)],
    )


def additivity_check(states: Sequence[DensityOperator], channels: Sequence[KrausChannel]) -> dict:
    """Coherent information of the product instance vs the sum over factors."""
    if len(states) != len(channels) or not states:
        raise DimMismatch("need equally many (>= 1) states and channels")
    lhs = coherent_information(tensor_all(states), tensor_all_channels(channels))
    rhs = sum(coherent_information(r, c) for r, c in zip(states, channels))
    return {"lhs": lhs, "rhs": float(rhs)}
