"""Command-line front end.

Exit codes: 0 ok, 2 malformed input or flags, 3 invalid state/channel,
4 I/O failure, 5 a checked condition or inequality failed.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import asymptotics as asym
from .checks import CHECK_NAMES, CheckSpec, run_all, run_check
from .errors import ConditionViolated, UnknownCheck, ValidationError
from .io import DocumentError, load_channel, load_state, read_json, state_from_doc
from .privacy import fano_bound_from_channel, fano_privacy_bound

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_VALIDATION = 3
EXIT_IO = 4
EXIT_CONDITION = 5


class CommandFailed(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


@dataclass(frozen=True)
class SweepSpec:
    s_b: float = 6.0
    dims: tuple[int, ...] = (2, 3, 4, 8)
    f_min: float = 0.0
    f_max: float = 1.0
    samples: int = 1000
    include_endpoints: bool = False

    def __post_init__(self):
        if not 0.0 <= self.f_min < self.f_max <= 1.0:
            raise ValidationError(f"need 0 <= f_min < f_max <= 1, got {self.f_min}, {self.f_max}")
        if self.samples < 2:
            raise ValidationError(f"samples must be >= 2, got {self.samples}")

    def grid(self) -> np.ndarray:
        """``samples`` uniformly spaced fidelities.

        An endpoint sitting exactly at F = 0 or F = 1 is left out unless
        ``include_endpoints`` is set; the spacing is then chosen so that
        exactly ``samples`` interior points remain.
        """
        drop_lo = self.f_min == 0.0 and not self.include_endpoints
        drop_hi = self.f_max == 1.0 and not self.include_endpoints
        pts = np.linspace(self.f_min, self.f_max, self.samples + drop_lo + drop_hi)
        return pts[int(drop_lo) : len(pts) - int(drop_hi)]


def fano_curve_rows(sweep: SweepSpec):
    """Yield ``(d, F, p)`` with F rounded to 9 significant digits and p evaluated there."""
    grid = np.array([float(f"{f:.9g}") for f in sweep.grid()])
    for d in sweep.dims:
        p = fano_privacy_bound(sweep.s_b, grid, d)
        for f, v in zip(grid, p):
            yield d, float(f), float(v)


def write_fano_curve(sweep: SweepSpec, stream) -> None:
    w = csv.writer(stream, lineterminator="\n")
    w.writerow(["d", "F", "p"])
    for d, f, p in fano_curve_rows(sweep):
        w.writerow([d, f"{f:.9g}", f"{p:.12g}"])


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _schedule(text: str) -> tuple[str, float]:
    if text == "harmonic":
        return "harmonic", 0.5
    if text.startswith("geometric:"):
        try:
            return "geometric", float(text.split(":", 1)[1])
        except ValueError:
            pass
    raise argparse.ArgumentTypeError(f"schedule must be 'harmonic' or 'geometric:<r>', got {text!r}")


def _emit(obj: dict) -> None:
    sys.stdout.write(json.dumps(obj) + "\n")


def cmd_bound(args) -> int:
    rho = load_state(args.state)
    channel = load_channel(args.channel)
    _emit(fano_bound_from_channel(rho, channel).to_dict())
    return EXIT_OK


def cmd_fano_curve(args) -> int:
    sweep = SweepSpec(
        s_b=args.s_b,
        dims=tuple(args.dims),
        f_min=args.f_min,
        f_max=args.f_max,
        samples=args.samples,
        include_endpoints=args.include_endpoints,
    )
    for d in sweep.dims:
        fano_privacy_bound(sweep.s_b, 0.5, d)  # validates d and s_b before any output
    buf = io.StringIO()
    write_fano_curve(sweep, buf)
    if args.out in (None, "-"):
        sys.stdout.write(buf.getvalue())
    else:
        try:
            Path(args.out).write_text(buf.getvalue())
        except OSError as exc:
            raise CommandFailed(EXIT_IO, f"cannot write {args.out}: {exc}") from None
    return EXIT_OK


def cmd_fuzz(args) -> int:
    if args.all:
        if args.dim is None:
            reports = run_all(seed=args.seed, trials=args.trials, env_dim=args.env_dim)
        else:
            reports = [
                run_check(CheckSpec(n, args.trials, args.dim, args.env_dim, args.seed, args.atol))
                for n in CHECK_NAMES
            ]
    else:
        names = [n.strip() for n in (args.checks or "").split(",") if n.strip()]
        if not names:
            raise CommandFailed(EXIT_PARSE, "give --checks n1,n2 or --all")
        unknown = [n for n in names if n not in CHECK_NAMES]
        if unknown:
            raise UnknownCheck(f"unknown check(s) {', '.join(unknown)}; known: {', '.join(CHECK_NAMES)}")
        dim = 2 if args.dim is None else args.dim
        reports = [run_check(CheckSpec(n, args.trials, dim, args.env_dim, args.seed, args.atol)) for n in names]
    for r in reports:
        _emit(r.to_dict(timing=args.timing))
    return EXIT_OK if all(r.passed for r in reports) else EXIT_CONDITION


def _pair(path) -> tuple:
    """A state document, or {"B": state, "E": state}."""
    doc = read_json(path)
    if isinstance(doc, dict) and "B" in doc and "E" in doc:
        return state_from_doc(doc["B"]), state_from_doc(doc["E"])
    s = state_from_doc(doc)
    return s, s


def _explicit(doc, label: str):
    if not isinstance(doc, dict) or label not in doc:
        raise DocumentError(f"sequence document needs a {label!r} entry")
    part = doc[label]
    if not isinstance(part, dict) or "limit" not in part or not isinstance(part.get("states"), list):
        raise DocumentError(f"sequence {label!r} needs 'limit' and a 'states' list")
    return asym.make_explicit_sequence(state_from_doc(part["limit"]), [state_from_doc(s) for s in part["states"]])


def cmd_asymptotic(args) -> int:
    if args.sequence:
        doc = read_json(args.sequence)
        seq_B, seq_E = _explicit(doc, "B"), _explicit(doc, "E")
    else:
        if not (args.base and args.perturbation):
            raise CommandFailed(EXIT_PARSE, "give --base and --perturbation, or --sequence")
        base_B, base_E = _pair(args.base)
        pert_B, pert_E = _pair(args.perturbation)
        kind, ratio = args.schedule
        seq_B = asym.make_mixing_sequence(base_B, pert_B, kind, args.n_max, ratio)
        seq_E = asym.make_mixing_sequence(base_E, pert_E, kind, args.n_max, ratio)
    tail_start = args.tail_start if args.tail_start is not None else max(1, seq_B.n_max // 10)
    if args.rho_star:
        rho_star = state_from_doc(read_json(args.rho_star))
    else:
        rho_star = asym.dominating_reference(seq_B, tail_start)
    report = asym.lemma1_experiment(seq_B, seq_E, rho_star, tail_start, args.tol, args.convergence_tol)
    _emit(report.to_dict())
    return EXIT_OK if report.conditions_hold else EXIT_CONDITION


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qprivacy", description="Lower bounds on quantum privacy.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("bound", help="coherent-information and fidelity bounds for a state and channel")
    p.add_argument("--state", required=True)
    p.add_argument("--channel", required=True)
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("fano-curve", help="CSV sweep of the fidelity bound over F")
    p.add_argument("--s-b", type=float, default=6.0)
    p.add_argument("--dims", type=_int_list, default=[2, 3, 4, 8])
    p.add_argument("--samples", type=int, default=1000)
    p.add_argument("--f-min", type=float, default=0.0)
    p.add_argument("--f-max", type=float, default=1.0)
    p.add_argument("--include-endpoints", action="store_true", help="keep F=0 / F=1 grid points")
    p.add_argument("--out", default=None, help="output path (default: standard output)")
    p.set_defaults(func=cmd_fano_curve)

    p = sub.add_parser("fuzz", help="randomized inequality suites, one JSON report per line")
    g = p.add_mutually_exclusive_group()
    g.add_argument("--checks", help=f"comma-separated subset of: {', '.join(CHECK_NAMES)}")
    g.add_argument("--all", action="store_true")
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--dim", type=int, default=None, help="system dimension (--all default: 2 and 3)")
    p.add_argument("--env-dim", type=int, default=3)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--atol", type=float, default=1e-9)
    p.add_argument("--timing", action="store_true", help="include elapsed_ms in reports")
    p.set_defaults(func=cmd_fuzz)

    p = sub.add_parser("asymptotic", help="tail-window convergence experiment")
    p.add_argument("--base")
    p.add_argument("--perturbation")
    p.add_argument("--sequence", help="explicit sequences document instead of --base/--perturbation")
    p.add_argument("--schedule", type=_schedule, default=("harmonic", 0.5))
    p.add_argument("--n-max", type=int, default=1000)
    p.add_argument("--tail-start", type=int, default=None, help="default: n_max // 10")
    p.add_argument("--tol", type=float, default=asym.DEFAULT_TOL)
    p.add_argument("--convergence-tol", type=float, default=asym.DEFAULT_CONVERGENCE_TOL)
    p.add_argument("--rho-star", help="reference state for the B limsup (default: tail max-entropy element)")
    p.set_defaults(func=cmd_asymptotic)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CommandFailed as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except (DocumentError, UnknownCheck) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except ConditionViolated as exc:
        print(f"condition violated: {exc}", file=sys.stderr)
        return EXIT_CONDITION
    except ValidationError as exc:
        print(f"invalid input: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
