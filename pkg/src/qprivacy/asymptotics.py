"""Finite-n experiments on entropy along convergent sequences of states.

Limits are replaced by tail windows: liminf by the minimum over
``[tail_start, n_max]`` and limsup by the maximum. Sequence elements are
evaluated on demand, a chunk at a time, so ``n_max`` can be large.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass
from typing import Iterator, Sequence

import numpy as np

from .entropy import entropies, von_neumann_entropy
from .errors import BadParam, BadWindow, ConditionViolated, DimMismatch
from .qstate import DensityOperator, validate_density

CHUNK = 4096
MONOTONE_SLACK = 1e-12
DEFAULT_TOL = 0.05
DEFAULT_CONVERGENCE_TOL = 0.01


@dataclass(frozen=True, eq=False)
class MixingSequence:
    """rho_n = (1 - a_n) base + a_n perturbation, for n = 1..n_max.

    ``schedule`` is ``"harmonic"`` (a_n = 1/n) or ``"geometric"``
    (a_n = ratio**n).
    """

    base: DensityOperator
    perturbation: DensityOperator
    schedule: str
    n_max: int
    ratio: float = 0.5

    def coefficients(self, ns) -> np.ndarray:
        ns = np.asarray(ns, dtype=float)
        if self.schedule == "harmonic":
            return 1.0 / ns
        return self.ratio**ns

    def stack(self, ns) -> np.ndarray:
        # base + a (perturbation - base): a constant sequence reproduces base exactly
        a = self.coefficients(ns)[:, None, None]
        return self.base.matrix[None] + a * (self.perturbation.matrix - self.base.matrix)[None]

    def element(self, n: int) -> DensityOperator:
        _check_index(n, self.n_max)
        return validate_density(self.stack([n])[0], self.base.dims)


@dataclass(frozen=True, eq=False)
class ExplicitSequence:
    """A user-supplied finite sequence; ``states[0]`` is element n = 1."""

    base: DensityOperator
    states: tuple[DensityOperator, ...]

    @property
    def n_max(self) -> int:
        return len(self.states)

    def stack(self, ns) -> np.ndarray:
        return np.stack([self.states[int(n) - 1].matrix for n in ns])

    def element(self, n: int) -> DensityOperator:
        _check_index(n, self.n_max)
        return self.states[n - 1]


def _check_index(n: int, n_max: int) -> None:
    if not 1 <= n <= n_max:
        raise BadWindow(f"index {n} outside 1..{n_max}")


def make_mixing_sequence(
    base: DensityOperator,
    perturbation: DensityOperator,
    schedule: str = "harmonic",
    n_max: int = 1000,
    ratio: float = 0.5,
) -> MixingSequence:
    if base.dim != perturbation.dim:
        raise DimMismatch(f"base has dim {base.dim}, perturbation {perturbation.dim}")
    if n_max < 2:
        raise BadWindow(f"n_max must be >= 2, got {n_max}")
    if schedule not in ("harmonic", "geometric"):
        raise BadParam(f"unknown schedule {schedule!r}")
    if schedule == "geometric" and not 0.0 < ratio < 1.0:
        raise BadParam(f"geometric ratio must lie in (0, 1), got {ratio}", ratio)
    return MixingSequence(base, perturbation, schedule, int(n_max), float(ratio))


def make_explicit_sequence(base: DensityOperator, states: Sequence[DensityOperator]) -> ExplicitSequence:
    if len(states) < 2:
        raise BadWindow("an explicit sequence needs at least 2 states")
    if any(s.dim != base.dim for s in states):
        raise DimMismatch("all sequence states must match the limit's dimension")
    return ExplicitSequence(base, tuple(states))


def _chunks(start: int, stop: int) -> Iterator[np.ndarray]:
    for lo in range(start, stop + 1, CHUNK):
        yield np.arange(lo, min(lo + CHUNK, stop + 1))


def _distances(seq, ns) -> np.ndarray:
    diff = seq.stack(ns) - seq.base.matrix[None]
    return np.sum(np.linalg.svd(diff, compute_uv=False), axis=-1)


def sample_indices(n_max: int, count: int = 64) -> np.ndarray:
    return np.unique(np.geomspace(1, n_max, count).round().astype(int))


def trace_distances(seq, ns=None) -> np.ndarray:
    """tr|rho_n - base| at the requested indices (log-spaced sample by default)."""
    ns = sample_indices(seq.n_max) if ns is None else np.asarray(ns)
    return _distances(seq, ns)


def check_condition_i(seq, tol: float) -> bool:
    """Final distance below ``tol`` and distances nonincreasing on a log-spaced sample."""
    ns = sample_indices(seq.n_max)
    d = _distances(seq, ns)
    monotone = bool(np.all(np.diff(d) <= MONOTONE_SLACK))
    return monotone and bool(d[-1] < tol)


def _check_window(seq, tail_start: int) -> None:
    if not 1 <= tail_start < seq.n_max:
        raise BadWindow(f"tail_start must satisfy 1 <= tail_start < n_max={seq.n_max}, got {tail_start}")


def tail_entropies(seq, tail_start: int) -> Iterator[np.ndarray]:
    """Entropies of rho_n for n in [tail_start, n_max], chunk by chunk."""
    for ns in _chunks(tail_start, seq.n_max):
        yield entropies(seq.stack(ns))


def semicontinuity_check(seq, tail_start: int, tol: float) -> bool:
    """min over the tail of S(rho_n) >= S(base) - tol."""
    _check_window(seq, tail_start)
    tail_min = min(float(s.min()) for s in tail_entropies(seq, tail_start))
    return tail_min >= von_neumann_entropy(seq.base) - tol


@dataclass(frozen=True)
class Lemma1Report:
    n_max: int
    tail_start: int
    tail_min_diff: float
    limit_diff: float
    condition_i_final: float
    conditions_hold: bool
    tail_min_neg_sum: float
    star_neg_sum: float

    def to_dict(self) -> dict:
        return asdict(self)


def lemma1_experiment(
    seq_B,
    seq_E,
    rho_star_B: DensityOperator,
    tail_start: int,
    tol: float = DEFAULT_TOL,
    convergence_tol: float = DEFAULT_CONVERGENCE_TOL,
) -> Lemma1Report:
    """Tail-window check of the two liminf inequalities for a pair of sequences.

    Preconditions, each raising :class:`ConditionViolated` when it fails:

    * both sequences converge: :func:`check_condition_i` with ``convergence_tol``;
    * max over the tail of S(rho_n^B) <= S(rho_star_B) + tol;
    * max over the tail of S(rho_n^E) <= S(seq_E.base) + tol.

    The report compares min over the tail of S(rho_n^B) - S(rho_n^E) with
    S(base_B) - S(base_E), and min over the tail of -S(rho_n^B) - S(rho_n^E)
    with -S(rho_star_B) - S(base_E); ``conditions_hold`` is true iff both
    tail minima are within ``tol`` of, or above, their targets.
    """
    if seq_B.n_max != seq_E.n_max:
        raise BadWindow(f"sequence lengths differ: {seq_B.n_max} vs {seq_E.n_max}")
    _check_window(seq_B, tail_start)
    for label, seq in (("B", seq_B), ("E", seq_E)):
        if not check_condition_i(seq, convergence_tol):
            raise ConditionViolated(
                f"condition_i_{label}",
                f"trace distance does not decrease monotonically below {convergence_tol}",
            )

    s_B = np.concatenate(list(tail_entropies(seq_B, tail_start)))
    s_E = np.concatenate(list(tail_entropies(seq_E, tail_start)))
    s_star = von_neumann_entropy(rho_star_B)
    s_B_lim = von_neumann_entropy(seq_B.base)
    s_E_lim = von_neumann_entropy(seq_E.base)

    if s_B.max() > s_star + tol:
        raise ConditionViolated(
            "condition_ii_B", f"tail max S(rho_n^B)={s_B.max():.6g} exceeds S(rho*)={s_star:.6g} + {tol}"
        )
    if s_E.max() > s_E_lim + tol:
        raise ConditionViolated(
            "condition_ii_E", f"tail max S(rho_n^E)={s_E.max():.6g} exceeds S(rho^E)={s_E_lim:.6g} + {tol}"
        )

    tail_min_diff = float(np.min(s_B - s_E))
    tail_min_neg_sum = float(np.min(-s_B - s_E))
    limit_diff = s_B_lim - s_E_lim
    star_neg_sum = -s_star - s_E_lim
    final = max(float(_distances(seq_B, [seq_B.n_max])[0]), float(_distances(seq_E, [seq_E.n_max])[0]))
    return Lemma1Report(
        n_max=seq_B.n_max,
        tail_start=int(tail_start),
        tail_min_diff=tail_min_diff,
        limit_diff=limit_diff,
        condition_i_final=final,
        conditions_hold=bool(tail_min_diff >= limit_diff - tol and tail_min_neg_sum >= star_neg_sum - tol),
        tail_min_neg_sum=tail_min_neg_sum,
        star_neg_sum=star_neg_sum,
    )


def dominating_reference(seq, tail_start: int) -> DensityOperator:
    """The tail element of largest entropy.

    Used as rho_star_B when no reference is given: it satisfies the
    limsup condition on the B side with zero slack.
    """
    _check_window(seq, tail_start)
    best_n, best_s = tail_start, -np.inf
    for ns in _chunks(tail_start, seq.n_max):
        s = entropies(seq.stack(ns))
        i = int(np.argmax(s))
        if s[i] > best_s:
            best_n, best_s = int(ns[i]), float(s[i])
    return seq.element(best_n)
