"""Numerical self-checks run by ``qudsim verify``.

Each check returns a :class:`CheckResult` with the worst residual it saw, so a
report shows how close to the tolerance a passing run came.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from qudsim.operators import dense_coding_unitary, unitarity_residual
from qudsim.protocol import (
    build_codebook,
    capacity,
    codeword,
    gram_residual,
    lawful_actions,
    run_roundtrip,
)
from qudsim.radix import FactorPlan, compose, decompose, sum_table

CHECKS = ("gram", "unitarity", "roundtrip", "bijection", "capacity")


@dataclass
class CheckResult:
    name: str
    passed: bool
    max_residual: float
    detail: dict

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "passed": self.passed,
            "max_residual": self.max_residual,
            **self.detail,
        }


def check_gram(plan: FactorPlan, mode: str, tol: float) -> CheckResult:
    book = build_codebook(plan, mode)
    residual = gram_residual(book)
    return CheckResult("gram", residual <= tol, residual, {"states": len(book), "tol": tol})


def check_unitarity(plan: FactorPlan, mode: str, tol: float = 1e-12) -> CheckResult:
    """Unitarity of every ``U(n, i)`` plus closure ``U(n,i) U(n',i') ~ U(n+n', i+i')``."""
    d = plan.d
    ops = {(n, i): dense_coding_unitary(d, n, i) for n in range(d) for i in range(d)}
    worst = max(unitarity_residual(op) for op in ops.values())
    for (n, i), (n2, i2) in itertools.product(ops, repeat=2):
        product = (ops[n, i] @ ops[n2, i2]).entries
        expected = ops[(n + n2) % d, (i + i2) % d].entries
        phase = np.exp(2j * np.pi * ((i2 * n) % d) / d)
        worst = max(worst, float(np.max(np.abs(product - phase * expected))))
    return CheckResult("unitarity", worst <= tol, worst, {"operators": len(ops), "tol": tol})


def check_roundtrip(plan: FactorPlan, mode: str, tol: float) -> CheckResult:
    """Decode every lawful message and compare encode output with the codeword."""
    book = build_codebook(plan, mode)
    rounds = failures = 0
    worst = 0.0
    for actions in lawful_actions(plan):
        rounds += 1
        transcript = run_roundtrip(plan, mode, actions, book)
        if not transcript.ok:
            failures += 1
        n = sum(a.n for a in actions)
        expected = codeword(plan, mode, n, [a.i for a in actions])
        worst = max(worst, float(np.max(np.abs(transcript.final_state.amps - expected.amps))))
    passed = failures == 0 and worst <= tol
    return CheckResult("roundtrip", passed, worst, {"rounds": rounds, "failures": failures, "tol": tol})


def check_bijection(plan: FactorPlan, mode: str) -> CheckResult:
    bad = 0
    for n in range(plan.delta):
        if compose(plan, decompose(plan, n)) != n:
            bad += 1
    try:
        table = sum_table(plan)
        image_ok = sorted(table) == list(range(plan.delta)) and max(table) < plan.d
    except ValueError:
        image_ok = False
    passed = bad == 0 and image_ok
    return CheckResult("bijection", passed, float(bad), {"delta": plan.delta, "sums_unique": image_ok})


def check_capacity(plan: FactorPlan, mode: str, tol: float = 1e-12) -> CheckResult:
    report = capacity(plan)
    residual = abs(report.total - math.fsum(report.per_sender))
    exact = math.prod(report.per_sender_messages) == report.total_messages
    if plan.delta == plan.d:
        exact = exact and report.total_messages == plan.d ** (plan.n_senders + 1)
        residual = max(residual, abs(report.total - (plan.n_senders + 1) * math.log2(plan.d)))
    return CheckResult(
        "capacity",
        exact and residual <= tol,
        residual,
        {"per_sender": list(report.per_sender), "total": report.total, "tol": tol},
    )


def run_checks(plan: FactorPlan, mode: str, names, state_tol: float = 1e-9) -> list[CheckResult]:
    results = []
    for name in names:
        if name == "gram":
            results.append(check_gram(plan, mode, state_tol))
        elif name == "unitarity":
            results.append(check_unitarity(plan, mode))
        elif name == "roundtrip":
            results.append(check_roundtrip(plan, mode, state_tol))
        elif name == "bijection":
            results.append(check_bijection(plan, mode))
        elif name == "capacity":
            results.append(check_capacity(plan, mode))
        else:
            raise ValueError(f"unknown check {name!r}; choose from {CHECKS}")
    return results
