"""One-qudit encoding unitaries and directly constructed signal states.

The encoding family is the clock-and-shift (generalized Pauli) group:

    U(n, i) = sum_j exp(2 pi 1j * j * n / d) |j + i mod d><j|

``n`` picks the phase gradient (clock power) and ``i`` the cyclic shift.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from qudsim.qudit_state import StateVector, basis_state, flat_index, tensor
from qudsim.radix import FactorPlan


@dataclass(frozen=True, eq=False)
class LocalOperator:
    """A ``d x d`` matrix with ``entries[r, c] = <r|U|c>``."""

    d: int
    entries: np.ndarray

    def __post_init__(self):
        m = np.array(self.entries, dtype=np.complex128)
        if m.shape != (self.d, self.d):
            raise ValueError(f"expected a {self.d}x{self.d} matrix, got {m.shape}")
        if not np.all(np.isfinite(m)):
            raise ValueError("operator entries must be finite")
        m.setflags(write=False)
        object.__setattr__(self, "entries", m)

    def __matmul__(self, other: "LocalOperator") -> "LocalOperator":
        return LocalOperator(self.d, self.entries @ other.entries)


def root_of_unity(d: int, k: int) -> complex:
    """``exp(2 pi 1j k / d)`` with ``k`` reduced first to keep the argument small."""
    return complex(np.exp(2j * np.pi * (k % d) / d))


def _check_residue(d: int, name: str, value: int) -> None:
    if not 0 <= value < d:
        raise ValueError(f"{name}={value} outside [0, {d})")


def dense_coding_unitary(d: int, n: int, i: int) -> LocalOperator:
    _check_residue(d, "n", n)
    _check_residue(d, "i", i)
    m = np.zeros((d, d), dtype=np.complex128)
    for j in range(d):
        m[(j + i) % d, j] = root_of_unity(d, j * n)
    return LocalOperator(d, m)


def identity(d: int) -> LocalOperator:
    return LocalOperator(d, np.eye(d, dtype=np.complex128))


def is_unitary(op: LocalOperator, tol: float = 1e-12) -> bool:
    m = op.entries
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        return False
    residual = m.conj().T @ m - np.eye(m.shape[0])
    return bool(np.max(np.abs(residual)) <= tol)


def unitarity_residual(op: LocalOperator) -> float:
    m = op.entries
    return float(np.max(np.abs(m.conj().T @ m - np.eye(op.d))))


def _entangled_part(d: int, n: int, shifts: Sequence[int]) -> np.ndarray:
    amps = np.zeros(d ** (len(shifts) + 1), dtype=np.complex128)
    norm = 1.0 / np.sqrt(d)
    for j in range(d):
        pos = flat_index(d, [j] + [(j + s) % d for s in shifts])
        amps[pos] = norm * root_of_unity(d, j * n)
    return amps


def target_state(d: int, n_senders: int, n: int, shifts: Sequence[int]) -> StateVector:
    """Signal state ``(1/sqrt d) sum_j w^(jn) |j>|j+i_1>...|j+i_N>``, phases as written.

    Particle 0 is the receiver; particle ``k`` carries sender ``k``'s shift.
    """
    _check_residue(d, "n", n)
    if len(shifts) != n_senders:
        raise ValueError(f"need {n_senders} shifts, got {len(shifts)}")
    for s in shifts:
        _check_residue(d, "i", s)
    return StateVector(d, n_senders + 1, _entangled_part(d, n, shifts))


def trivial_factors_trailing(plan: FactorPlan) -> bool:
    seen_trivial = False
    for p in plan.factors:
        if p == 1:
            seen_trivial = True
        elif seen_trivial:
            return False
    return True


def reduced_target_state(plan: FactorPlan, n: int, shifts: Sequence[int]) -> StateVector:
    """Signal state when only the nontrivial senders share entanglement.

    The receiver and the first ``N'`` senders (those with ``p_k != 1``) hold the
    entangled part; the remaining senders hold the product ``|i_k>``. Requires
    the trivial factors of ``plan`` to be trailing.
    """
    if not trivial_factors_trailing(plan):
        raise ValueError(f"trivial factors must be trailing, got {list(plan.factors)}")
    d = plan.d
    if not 0 <= n < plan.delta:
        raise ValueError(f"joint index {n} outside [0, {plan.delta})")
    if len(shifts) != plan.n_senders:
        raise ValueError(f"need {plan.n_senders} shifts, got {len(shifts)}")
    for s in shifts:
        _check_residue(d, "i", s)
    k = plan.nontrivial
    head = StateVector(d, k + 1, _entangled_part(d, n, shifts[:k]))
    if k == plan.n_senders:
        return head
    tail = basis_state(d, plan.n_senders - k, list(shifts[k:]))
    return tensor(head, tail)
