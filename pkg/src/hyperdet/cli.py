"""Command-line front end.

Subcommands: ``hdet``, ``measure``, ``verify``, ``roof``, ``random-state``
and ``random-povm``.  Seeded commands take ``--seed``; when it is absent
the environment variable ``HDE_SEED`` is used, and only then an internal
default.  Exit codes: 0 for success or an all-pass suite, 1 when a suite
reports a failing check, 2 for usage, input, or budget errors.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from .cayley import DEFAULT_MAX_TERMS, BudgetError, hdet_even
from .convexroof import (
    DEFAULT_ITERATIONS,
    DEFAULT_RESTARTS,
    DensityMatrix,
    convex_roof_estimate,
)
from .locc import random_povm
from .qstate import PureState, random_haar_state
from .statefile import StateFileError, load_state, save_state
from .verify import DEFAULT_SEEDS, SUITES, run_suite


class UsageError(Exception):
    """Bad invocation or environment; maps to exit code 2."""


def _resolve_seed(value, fallback=None):
    """Explicit --seed wins, then HDE_SEED from the environment, then fallback."""
    if value is not None:
        return int(value)
    env = os.environ.get("HDE_SEED")
    if env is not None:
        try:
            return int(env)
        except ValueError:
            raise UsageError(f"HDE_SEED must be an integer, got {env!r}") from None
    return fallback


def _load_pure(args) -> PureState:
    state = load_state(args.path, check=not args.no_normalize_check)
    if not isinstance(state, PureState):
        raise UsageError(f"{args.path}: expected a pure state file, got kind 'mixed'")
    return state


def cmd_hdet(args) -> int:
    state = _load_pure(args)
    if state.n % 2:
        print(
            f"warning: {state.n} subsystems (odd), the hyperdeterminant is identically 0",
            file=sys.stderr,
        )
        print("hdet 0 0")
        print("modulus 0")
        return 0
    arr = state.amplitudes.reshape((state.d,) * state.n)
    z = hdet_even(arr, max_terms=args.budget)
    print(f"hdet {z.real:.15g} {z.imag:.15g}")
    print(f"modulus {abs(z):.15g}")
    return 0


def cmd_measure(args) -> int:
    state = _load_pure(args)
    if state.n % 2:
        print(
            f"warning: {state.n} subsystems (odd), both measures are identically 0",
            file=sys.stderr,
        )
        e1 = 0.0
    else:
        arr = state.amplitudes.reshape((state.d,) * state.n)
        e1 = abs(hdet_even(arr, max_terms=args.budget))
    print(f"E1 {e1:.15g}")
    print(f"E2 {e1 * e1:.15g}")
    return 0


def cmd_verify(args) -> int:
    seed = _resolve_seed(args.seed, DEFAULT_SEEDS[args.suite])
    rep = run_suite(args.suite, seed=seed, trials=args.trials)
    for rec in rep.records():
        print(json.dumps(rec))
    passed = sum(1 for c in rep.checks if c.passed)
    status = "PASS" if rep.all_pass else "FAIL"
    print(
        f"suite {rep.suite}: {passed}/{len(rep.checks)} checks passed,"
        f" seed {rep.seed}, {rep.elapsed:.1f}s [{status}]"
    )
    if args.report is not None:
        # deferred so the figure stack only loads on the report path
        from .report import write_report

        for path in write_report(rep, args.report):
            print(f"report {path}")
    return 0 if rep.all_pass else 1


def cmd_roof(args) -> int:
    seed = _resolve_seed(args.seed, None)
    state = load_state(args.path, check=not args.no_normalize_check)
    rho = state if isinstance(state, DensityMatrix) else DensityMatrix.from_pure(state)
    res = convex_roof_estimate(
        rho, args.which, restarts=args.restarts, iterations=args.iters, seed=seed
    )
    residual = float(np.max(np.abs(res.best.density_matrix().matrix - rho.matrix)))
    print(f"upper_bound {res.value:.15g}")
    print(f"which {res.which}")
    print(f"members {res.best.size}")
    print(f"reconstruction_residual {residual:.3e}")
    return 0


def cmd_random_state(args) -> int:
    seed = _resolve_seed(args.seed, None)
    rng = np.random.default_rng(seed)
    if args.kind == "pure":
        if args.rank is not None:
            raise UsageError("--rank applies to mixed states only")
        state = random_haar_state(args.n, args.d, rng)
    else:
        dim = args.d**args.n
        rank = dim if args.rank is None else args.rank
        if not 1 <= rank <= dim:
            raise UsageError(f"rank must lie in 1..{dim}, got {rank}")
        g = rng.standard_normal((dim, rank)) + 1j * rng.standard_normal((dim, rank))
        mat = g @ g.conj().T
        mat /= np.trace(mat).real
        state = DensityMatrix(args.n, args.d, mat)
    save_state(args.out, state)
    print(f"wrote {args.out} ({args.kind} n={args.n} d={args.d})")
    return 0


def _entry_pairs(m) -> list[list[float]]:
    flat = np.asarray(m, dtype=np.complex128).reshape(-1)
    return [[float(z.real), float(z.imag)] for z in flat]


def cmd_random_povm(args) -> int:
    seed = _resolve_seed(args.seed, None)
    povm = random_povm(args.d, seed)
    doc = {
        "d": povm.d,
        "m1": _entry_pairs(povm.m1),
        "m2": _entry_pairs(povm.m2),
        "completeness_residual": povm.completeness_residual(),
    }
    print(json.dumps(doc))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hyperdet",
        description="Hyperdeterminant evaluation, entanglement measures, and check suites.",
    )
    parser.add_argument(
        "--budget",
        type=int,
        default=DEFAULT_MAX_TERMS,
        help="cap on signed-permutation terms per evaluation (default %(default)s)",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("hdet", help="hyperdeterminant of a pure-state file")
    p.add_argument("path")
    p.add_argument(
        "--no-normalize-check",
        action="store_true",
        help="accept payloads off the unit sphere and renormalize",
    )
    p.set_defaults(func=cmd_hdet)

    p = sub.add_parser("measure", help="|hdet| and |hdet|^2 of a pure-state file")
    p.add_argument("path")
    p.add_argument("--no-normalize-check", action="store_true")
    p.set_defaults(func=cmd_measure)

    p = sub.add_parser("verify", help="run a named check suite")
    p.add_argument("suite", choices=SUITES)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--trials", type=int, default=None, help="rescale the sampled batches")
    p.add_argument("--report", default=None, metavar="DIR", help="write records and figures here")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("roof", help="upper-bound the roof measure of a state file")
    p.add_argument("path")
    p.add_argument("--which", choices=("hdet", "tangle"), default="hdet")
    p.add_argument("--restarts", type=int, default=DEFAULT_RESTARTS)
    p.add_argument("--iters", type=int, default=DEFAULT_ITERATIONS)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--no-normalize-check", action="store_true")
    p.set_defaults(func=cmd_roof)

    p = sub.add_parser("random-state", help="write a reproducible random state file")
    p.add_argument("n", type=int, help="subsystem count")
    p.add_argument("d", type=int, help="levels per subsystem")
    p.add_argument("out", help="output path")
    p.add_argument("--kind", choices=("pure", "mixed"), default="pure")
    p.add_argument("--rank", type=int, default=None, help="rank of a mixed state")
    p.add_argument("--seed", type=int, default=None)
    p.set_defaults(func=cmd_random_state)

    p = sub.add_parser("random-povm", help="print a reproducible two-outcome POVM")
    p.add_argument("d", type=int, help="levels per subsystem")
    p.add_argument("--seed", type=int, default=None)
    p.set_defaults(func=cmd_random_povm)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, StateFileError, BudgetError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
