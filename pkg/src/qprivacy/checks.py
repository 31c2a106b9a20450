"""Seeded randomized suites for the entropy and privacy inequalities.

Each trial builds its instance from its own generator seeded with
``seed + trial_index``, so a report does not depend on execution order.
Every trial yields a slack (weak side minus strong side, or minus an
absolute discrepancy for identities); a trial is a violation when its
slack is below ``-atol``.
"""

from __future__ import annotations

import time
from dataclasses import asdict, dataclass
from typing import Callable

import numpy as np

from . import qchannel as qc
from .entropy import (
    binary_entropy,
    coherent_information,
    entanglement_fidelity,
    entropy_exchange,
    von_neumann_entropy,
)
from .errors import BadParam, UnknownCheck
from .privacy import additivity_check, multipartite_chain_check
from .qstate import partial_trace, random_density, random_pure

CHECK_NAMES = (
    "araki_lieb",
    "subadditivity",
    "quantum_fano",
    "theorem1_chain",
    "additivity",
    "kraus_remix",
    "env_identity",
    "fidelity_pure",
)


@dataclass(frozen=True)
class CheckSpec:
    name: str
    trials: int = 1000
    dim: int = 2
    env_dim: int = 3
    seed: int = 0
    atol: float = 1e-9

    def __post_init__(self):
        if self.name not in CHECK_NAMES:
            raise UnknownCheck(f"unknown check {self.name!r}; known: {', '.join(CHECK_NAMES)}")
        if self.trials < 1:
            raise BadParam(f"trials must be >= 1, got {self.trials}")
        if self.atol <= 0:
            raise BadParam(f"atol must be positive, got {self.atol}")
        if self.dim < 2 or self.env_dim < 1:
            raise BadParam(f"need dim >= 2 and env_dim >= 1, got {self.dim}, {self.env_dim}")


@dataclass(frozen=True)
class CheckReport:
    spec: CheckSpec
    violations: int
    worst_margin: float
    elapsed_ms: float

    @property
    def passed(self) -> bool:
        return self.violations == 0

    def to_dict(self, timing: bool = True) -> dict:
        out = asdict(self)
        if not timing:
            del out["elapsed_ms"]
        return out


class _Trial:
    """Per-trial source of sub-seeds and random instances."""

    def __init__(self, seed: int):
        self.rng = np.random.default_rng(seed)

    def seed(self) -> int:
        return int(self.rng.integers(0, 2**63 - 1))

    def state(self, d: int):
        rank = int(self.rng.integers(1, d + 1))
        return random_density(d, rank, self.seed())

    def channel(self, d: int, env_dim: int):
        return qc.random_channel(d, env_dim, self.seed())


def _araki_lieb(t: _Trial, s: CheckSpec) -> float:
    ab = t.state(s.dim * s.dim).with_dims((s.dim, s.dim))
    sa = von_neumann_entropy(partial_trace(ab, {0}))
    sb = von_neumann_entropy(partial_trace(ab, {1}))
    return von_neumann_entropy(ab) - abs(sa - sb)


def _subadditivity(t: _Trial, s: CheckSpec) -> float:
    ab = t.state(s.dim * s.dim).with_dims((s.dim, s.dim))
    sa = von_neumann_entropy(partial_trace(ab, {0}))
    sb = von_neumann_entropy(partial_trace(ab, {1}))
    return sa + sb - von_neumann_entropy(ab)


def fano_slack(rho, channel) -> float:
    """H(F) + (1 - F) log2(d^2 - 1) - S(rho, channel)."""
    d = channel.dim_in
    f = min(max(entanglement_fidelity(rho, channel), 0.0), 1.0)
    return float(binary_entropy(f) + (1 - f) * np.log2(d * d - 1) - entropy_exchange(rho, channel))


def _quantum_fano(t: _Trial, s: CheckSpec) -> float:
    return fano_slack(t.state(s.dim), t.channel(s.dim, s.env_dim))


def _theorem1_chain(t: _Trial, s: CheckSpec, n_factors: int) -> float:
    dims = (s.dim,) * n_factors
    total = s.dim**n_factors
    rho_B = t.state(total).with_dims(dims)
    rho_E = t.state(total).with_dims(dims)
    return multipartite_chain_check(rho_B, rho_E).slack


def _additivity(t: _Trial, s: CheckSpec, n_factors: int) -> float:
    states = [t.state(s.dim) for _ in range(n_factors)]
    channels = [t.channel(s.dim, s.env_dim) for _ in range(n_factors)]
    r = additivity_check(states, channels)
    return -abs(r["lhs"] - r["rhs"])


def _kraus_remix(t: _Trial, s: CheckSpec) -> float:
    rho = t.state(s.dim)
    ch = t.channel(s.dim, s.env_dim)
    remixed = qc.remix_kraus(ch, qc.random_unitary(ch.n_kraus, t.seed()))
    return -max(
        abs(entanglement_fidelity(rho, ch) - entanglement_fidelity(rho, remixed)),
        abs(entropy_exchange(rho, ch) - entropy_exchange(rho, remixed)),
        float(np.max(np.abs(qc.apply(ch, rho).matrix - qc.apply(remixed, rho).matrix))),
    )


def env_discrepancy(rho, channel) -> float:
    """max |W - tr_out(V rho V^dagger)| elementwise."""
    w = qc.environment_state(channel, rho).matrix
    joint = qc.dilate(channel, rho)
    return float(np.max(np.abs(w - partial_trace(joint, {1}).matrix)))


def _env_identity(t: _Trial, s: CheckSpec) -> float:
    return -env_discrepancy(t.state(s.dim), t.channel(s.dim, s.env_dim))


def _fidelity_pure(t: _Trial, s: CheckSpec) -> float:
    psi = random_pure(s.dim, t.seed())
    ch = t.channel(s.dim, s.env_dim)
    rho = psi.density()
    direct = np.vdot(psi.amplitudes, qc.apply(ch, rho).matrix @ psi.amplitudes).real
    return -abs(entanglement_fidelity(rho, ch) - direct)


_TRIALS: dict[str, Callable[[_Trial, CheckSpec, int], float]] = {
    "araki_lieb": lambda t, s, i: _araki_lieb(t, s),
    "subadditivity": lambda t, s, i: _subadditivity(t, s),
    "quantum_fano": lambda t, s, i: _quantum_fano(t, s),
    # factor count alternates 2, 3, 2, 3, ... over trials
    "theorem1_chain": lambda t, s, i: _theorem1_chain(t, s, 2 + i % 2),
    "additivity": lambda t, s, i: _additivity(t, s, 2 + i % 2),
    "kraus_remix": lambda t, s, i: _kraus_remix(t, s),
    "env_identity": lambda t, s, i: _env_identity(t, s),
    "fidelity_pure": lambda t, s, i: _fidelity_pure(t, s),
}


def trial_slacks(spec: CheckSpec) -> np.ndarray:
    fn = _TRIALS[spec.name]
    return np.array([fn(_Trial(spec.seed + i), spec, i) for i in range(spec.trials)])


def run_check(spec: CheckSpec) -> CheckReport:
    start = time.perf_counter()
    slacks = trial_slacks(spec)
    elapsed = (time.perf_counter() - start) * 1e3
    return CheckReport(
        spec=spec,
        violations=int(np.sum(slacks < -spec.atol)),
        worst_margin=float(slacks.min()),
        elapsed_ms=elapsed,
    )


def run_all(seed: int = 0, trials: int = 1000, dims=(2, 3), env_dim: int = 3) -> list[CheckReport]:
    return [
        run_check(CheckSpec(name, trials=trials, dim=d, env_dim=env_dim, seed=seed))
        for name in CHECK_NAMES
        for d in dims
    ]
