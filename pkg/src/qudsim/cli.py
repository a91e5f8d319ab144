"""Command-line front end.

Exit codes: 0 success, 2 bad arguments, 3 unlawful sender action,
4 decode ambiguity, 5 failed verification. Reports go to stdout,
diagnostics to stderr.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import time
from decimal import ROUND_HALF_EVEN, Decimal

import numpy as np

from qudsim.checks import CHECKS, run_checks
from qudsim.errors import DecodeAmbiguityError, UnlawfulActionError
from qudsim.protocol import (
    MODES,
    SenderAction,
    build_codebook,
    capacity,
    lawful_actions,
    random_actions,
    run_roundtrip,
)
from qudsim.radix import FactorPlan, enumerate_factor_plans, make_factor_plan

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_UNLAWFUL = 3
EXIT_AMBIGUOUS = 4
EXIT_VERIFY_FAILED = 5

TOL_ENV = "QUDSIM_TOL"
DEFAULT_STATE_TOL = 1e-9


class UsageError(Exception):
    pass


def round_bits(x: float, places: int = 4) -> float:
    """Round half-even on the exact binary value of ``x``."""
    q = Decimal(1).scaleb(-places)
    return float(Decimal(x).quantize(q, rounding=ROUND_HALF_EVEN))


def state_tolerance() -> float:
    raw = os.environ.get(TOL_ENV)
    if raw is None:
        return DEFAULT_STATE_TOL
    try:
        tol = float(raw)
    except ValueError:
        raise UsageError(f"{TOL_ENV} must be a number, got {raw!r}") from None
    if not tol > 0:
        raise UsageError(f"{TOL_ENV} must be positive, got {raw!r}")
    return tol


def parse_int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise UsageError(f"expected comma-separated integers, got {text!r}") from None


def parse_actions(text: str) -> list[SenderAction]:
    """``"2:1,1:3"`` -> one ``n:i`` pair per sender, in sender order."""
    out = []
    for k, chunk in enumerate(text.split(","), start=1):
        try:
            n, i = (int(x) for x in chunk.split(":"))
        except ValueError:
            raise UsageError(f"action {chunk!r} is not of the form n:i") from None
        out.append(SenderAction(k, n, i))
    return out


def _plan_from_args(args) -> FactorPlan:
    try:
        return make_factor_plan(args.d, parse_int_list(args.factors))
    except ValueError as e:
        raise UsageError(str(e)) from None


def _dump(obj) -> str:
    return json.dumps(obj, indent=2)


def cmd_plan(args) -> int:
    if args.d < 2 or args.senders < 1:
        raise UsageError("need --d >= 2 and --senders >= 1")
    plans = enumerate_factor_plans(
        args.d, args.senders, canonical=not args.ordered, allow_delta_lt_d=args.allow_delta_lt_d
    )
    rows = []
    for plan in plans:
        report = capacity(plan)
        rows.append(
            {
                "factors": list(plan.factors),
                "delta": plan.delta,
                "per_sender": [round_bits(b) for b in report.per_sender],
                "total": round_bits(report.total),
            }
        )
    if args.output == "json":
        print(_dump({"d": args.d, "senders": args.senders, "plans": rows}))
    elif args.output == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, delimiter=";", lineterminator="\n")
        writer.writerow(
            ["factors", "delta"] + [f"bits_sender_{k}" for k in range(1, args.senders + 1)] + ["bits_total"]
        )
        for row in rows:
            writer.writerow(
                [",".join(map(str, row["factors"])), row["delta"]]
                + [f"{b:.4f}" for b in row["per_sender"]]
                + [f"{row['total']:.4f}"]
            )
        sys.stdout.write(buf.getvalue())
    else:
        for row in rows:
            per = ", ".join(f"{b:.4f}" for b in row["per_sender"])
            factors = "x".join(map(str, row["factors"]))
            print(f"{factors:<12} delta={row['delta']:<4} bits=({per}) total={row['total']:.4f}")
    return EXIT_OK


def cmd_run(args) -> int:
    plan = _plan_from_args(args)
    if args.actions is not None:
        actions = parse_actions(args.actions)
        if len(actions) != plan.n_senders:
            raise UsageError(f"need {plan.n_senders} actions, got {len(actions)}")
        for a in actions:
            if not (0 <= a.n < plan.d and 0 <= a.i < plan.d):
                raise UsageError(f"sender {a.k}: values must lie in [0, {plan.d})")
    else:
        actions = random_actions(plan, np.random.default_rng(args.seed))
    transcript = run_roundtrip(plan, args.mode, actions)
    print(_dump(transcript.to_dict(dump_state=args.dump_state)))
    return EXIT_OK if transcript.ok else EXIT_VERIFY_FAILED


def cmd_verify(args) -> int:
    plan = _plan_from_args(args)
    names = [c for c in args.checks.split(",") if c] if args.checks else list(CHECKS)
    unknown = [c for c in names if c not in CHECKS]
    if unknown:
        raise UsageError(f"unknown checks {unknown}; choose from {list(CHECKS)}")
    results = run_checks(plan, args.mode, names, state_tol=state_tolerance())
    passed = all(r.passed for r in results)
    print(
        _dump(
            {
                "plan": {"d": plan.d, "factors": list(plan.factors)},
                "mode": args.mode,
                "checks": [r.to_dict() for r in results],
                "ok": passed,
            }
        )
    )
    return EXIT_OK if passed else EXIT_VERIFY_FAILED


def cmd_sweep(args) -> int:
    plan = _plan_from_args(args)
    start = time.perf_counter()
    book = build_codebook(plan, args.mode)
    rounds = failures = 0
    for actions in lawful_actions(plan):
        rounds += 1
        try:
            if not run_roundtrip(plan, args.mode, actions, book).ok:
                failures += 1
        except DecodeAmbiguityError:
            failures += 1
    summary = {
        "plan": {"d": plan.d, "factors": list(plan.factors)},
        "mode": args.mode,
        "rounds": rounds,
        "failures": failures,
        "wall_time": round(time.perf_counter() - start, 6),
    }
    if args.output == "json":
        print(_dump(summary))
    else:
        print(f"rounds={rounds} failures={failures} wall_time={summary['wall_time']:.3f}s")
    return EXIT_OK if failures == 0 else EXIT_VERIFY_FAILED


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="qudsim", description="Multiparty qudit superdense coding simulator.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("plan", help="list factor plans with capacity table")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--senders", type=int, required=True)
    p.add_argument("--ordered", action="store_true", help="list every ordering of the factors")
    p.add_argument("--allow-delta-lt-d", action="store_true", help="include plans with product below d")
    p.add_argument("--output", choices=["text", "json", "csv"], default="text")
    p.set_defaults(func=cmd_plan)

    def plan_args(sp):
        sp.add_argument("--d", type=int, required=True)
        sp.add_argument("--factors", required=True, help="comma-separated radices, e.g. 2,2")
        sp.add_argument("--mode", choices=MODES, default="full")

    p = sub.add_parser("run", help="run one protocol round and print its transcript")
    plan_args(p)
    p.add_argument("--actions", help="n:i per sender, comma-separated; random if omitted")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--dump-state", action="store_true")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("verify", help="run numerical self-checks")
    plan_args(p)
    p.add_argument("--checks", help=f"comma-separated subset of {','.join(CHECKS)}")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("sweep", help="round-trip every lawful message")
    plan_args(p)
    p.add_argument("--output", choices=["text", "json"], default="json")
    p.set_defaults(func=cmd_sweep)
    return parser


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return args.func(args)
    except UsageError as e:
        print(f"qudsim: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except UnlawfulActionError as e:
        print(f"qudsim: unlawful action: {e}", file=sys.stderr)
        return EXIT_UNLAWFUL
    except DecodeAmbiguityError as e:
        print(f"qudsim: decode ambiguity: {e}", file=sys.stderr)
        return EXIT_AMBIGUOUS


if __name__ == "__main__":
    sys.exit(main())
