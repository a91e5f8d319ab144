"""Integer machinery for sender message sets.

A factor plan splits the qudit dimension ``d`` into radices ``p_1..p_N`` with
``p_1 * ... * p_N = delta <= d``. Sender ``k`` may only pick phase indices
that are multiples of its step ``q_k = p_{k+1} * ... * p_N``, which turns the
joint phase index into a mixed-radix number with one digit per sender.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Sequence


def _check_dimension(d: int) -> None:
    if not isinstance(d, int) or isinstance(d, bool) or d < 2:
        raise ValueError(f"qudit dimension must be an integer >= 2, got {d!r}")


@dataclass(frozen=True)
class FactorPlan:
    """Decomposition ``d >= delta = p_1 * ... * p_N`` with its step ladder.

    Build instances with :func:`make_factor_plan`; the constructor does not
    validate.
    """

    d: int
    factors: tuple[int, ...]
    ladder: tuple[int, ...]
    delta: int

    @property
    def n_senders(self) -> int:
        return len(self.factors)

    @property
    def nontrivial(self) -> int:
        """Number of senders with a radix other than 1."""
        return sum(1 for p in self.factors if p != 1)


@dataclass(frozen=True)
class SenderSet:
    k: int
    members: tuple[int, ...]

    def __contains__(self, value: object) -> bool:
        return value in self.members

    def __len__(self) -> int:
        return len(self.members)


def make_factor_plan(d: int, factors: Sequence[int]) -> FactorPlan:
    """Validate ``factors`` against ``d`` and derive the step ladder.

    Raises:
        ValueError: if a factor is below 1, the list is empty, or the product
            exceeds ``d`` (joint sums would then wrap around modulo ``d``).
    """
    _check_dimension(d)
    factors = tuple(factors)
    if not factors:
        raise ValueError("a factor plan needs at least one sender")
    for p in factors:
        if not isinstance(p, int) or isinstance(p, bool) or p < 1:
            raise ValueError(f"factors must be positive integers, got {p!r}")
    delta = math.prod(factors)
    if delta > d:
        raise ValueError(
            f"product of factors {delta} exceeds d={d}; joint index would not be unique"
        )
    ladder = [1] * len(factors)
    for k in range(len(factors) - 2, -1, -1):
        ladder[k] = factors[k + 1] * ladder[k + 1]
    return FactorPlan(d=d, factors=factors, ladder=tuple(ladder), delta=delta)


def _ordered_factorizations(target: int, slots: int) -> list[tuple[int, ...]]:
    # trial division over divisors; fine for machine-word d
    if slots == 1:
        return [(target,)]
    out = []
    for p in range(1, target + 1):
        if target % p == 0:
            for rest in _ordered_factorizations(target // p, slots - 1):
                out.append((p,) + rest)
    return out


def enumerate_factor_plans(
    d: int,
    n_senders: int,
    canonical: bool = True,
    allow_delta_lt_d: bool = False,
) -> list[FactorPlan]:
    """List factor plans of ``d`` for ``n_senders`` senders.

    With ``canonical`` set, each multiset of factors appears once with factors
    sorted non-increasing; otherwise every ordered tuple is returned. With
    ``allow_delta_lt_d`` the products ``delta < d`` are included too.
    Plans come in descending lexicographic order of their factor tuples.
    """
    _check_dimension(d)
    if n_senders < 1:
        raise ValueError(f"n_senders must be >= 1, got {n_senders}")
    targets = range(1, d + 1) if allow_delta_lt_d else [d]
    tuples: set[tuple[int, ...]] = set()
    for target in targets:
        for fs in _ordered_factorizations(target, n_senders):
            if canonical:
                fs = tuple(sorted(fs, reverse=True))
            tuples.add(fs)
    return [make_factor_plan(d, fs) for fs in sorted(tuples, reverse=True)]


def sender_set(plan: FactorPlan, k: int) -> SenderSet:
    """Lawful phase indices ``{mu * q_k : 0 <= mu < p_k}`` of sender ``k`` (1-based)."""
    if not 1 <= k <= plan.n_senders:
        raise IndexError(f"sender index {k} out of range 1..{plan.n_senders}")
    p, q = plan.factors[k - 1], plan.ladder[k - 1]
    return SenderSet(k=k, members=tuple(mu * q for mu in range(p)))


def sender_sets(plan: FactorPlan) -> list[SenderSet]:
    return [sender_set(plan, k) for k in range(1, plan.n_senders + 1)]


def compose(plan: FactorPlan, digits: Sequence[int]) -> int:
    """Joint index ``sum(mu_k * q_k)``; never reduced modulo ``d``."""
    digits = tuple(digits)
    if len(digits) != plan.n_senders:
        raise ValueError(f"expected {plan.n_senders} digits, got {len(digits)}")
    for k, (mu, p) in enumerate(zip(digits, plan.factors), start=1):
        if not 0 <= mu < p:
            raise ValueError(f"digit {mu} of sender {k} outside radix {p}")
    return sum(mu * q for mu, q in zip(digits, plan.ladder))


def decompose(plan: FactorPlan, n: int) -> tuple[int, ...]:
    """Inverse of :func:`compose`, most significant digit first."""
    if not 0 <= n < plan.delta:
        raise ValueError(f"joint index {n} not representable, need 0 <= n < {plan.delta}")
    digits = []
    for q in plan.ladder:
        mu, n = divmod(n, q)
        digits.append(mu)
    return tuple(digits)


def add_mod(d: int, a: int, b: int) -> int:
    _check_dimension(d)
    if not (0 <= a < d and 0 <= b < d):
        raise ValueError(f"operands must lie in [0, {d}), got {a}, {b}")
    return (a + b) % d


def sum_table(plan: FactorPlan) -> dict[int, tuple[int, ...]]:
    """Map every reachable joint sum to the sender choices producing it.

    Raises:
        ValueError: if two choices collide on the same sum.
    """
    table: dict[int, tuple[int, ...]] = {}
    for choice in itertools.product(*(s.members for s in sender_sets(plan))):
        total = sum(choice)
        if total in table:
            raise ValueError(f"sum {total} reached by {table[total]} and {choice}")
        table[total] = choice
    return table
