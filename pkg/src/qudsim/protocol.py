"""Multiparty superdense coding rounds.

Particle 0 belongs to the receiver and particles ``1..N`` to the senders. In
``full`` mode all ``N + 1`` particles share a GHZ state. In ``reduced`` mode
only the receiver and the senders with a nontrivial radix are entangled; the
others start in ``|0>``. Reduced mode moves trivial senders to the trailing
particle slots but keeps their original labels in keys and transcripts.
"""

from __future__ import annotations

import functools
import itertools
import math
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

import numpy as np
from scipy import sparse

from qudsim.errors import DecodeAmbiguityError, UnlawfulActionError
from qudsim.operators import dense_coding_unitary, reduced_target_state, target_state
from qudsim.qudit_state import StateVector, apply_local, basis_state, ghz_state, tensor
from qudsim.radix import FactorPlan, decompose, make_factor_plan, sender_set, sender_sets

MODES = ("full", "reduced")

DECODE_THRESHOLD = 1 - 1e-6
AMBIGUITY_GUARD = 0.5


@dataclass(frozen=True)
class SenderAction:
    k: int
    n: int
    i: int


@dataclass(frozen=True)
class CapacityReport:
    per_sender: tuple[float, ...]
    total: float
    # exact message counts behind the bit figures: p_k * d and delta * d^N
    per_sender_messages: tuple[int, ...]
    total_messages: int


@dataclass(frozen=True, eq=False)
class Codebook:
    plan: FactorPlan
    mode: str
    keys: tuple[tuple[int, tuple[int, ...]], ...]
    matrix: np.ndarray  # one codeword per row
    particles: int
    _index: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        self.matrix.setflags(write=False)
        self._index.update({key: row for row, key in enumerate(self.keys)})

    def __len__(self) -> int:
        return len(self.keys)

    def __getitem__(self, key: tuple[int, Sequence[int]]) -> StateVector:
        n, shifts = key
        row = self._index[(n, tuple(shifts))]
        return StateVector(self.plan.d, self.particles, self.matrix[row])

    @property
    def states(self) -> dict[tuple[int, tuple[int, ...]], StateVector]:
        return {key: self[key] for key in self.keys}

    def gram(self) -> np.ndarray:
        m = sparse.csr_matrix(self.matrix)
        return (m.conj() @ m.T).toarray()


@dataclass(frozen=True, eq=False)
class Transcript:
    plan: FactorPlan
    mode: str
    actions: tuple[SenderAction, ...]
    final_state: StateVector
    decoded: tuple[int, tuple[int, ...]]
    recovered: tuple[SenderAction, ...]
    capacity: CapacityReport

    @property
    def ok(self) -> bool:
        return self.recovered == self.actions

    def to_dict(self, dump_state: bool = False) -> dict:
        out = {
            "plan": {
                "d": self.plan.d,
                "factors": list(self.plan.factors),
                "ladder": list(self.plan.ladder),
                "delta": self.plan.delta,
            },
            "mode": self.mode,
            "actions": [_action_dict(a) for a in self.actions],
            "decoded": {"n": self.decoded[0], "i": list(self.decoded[1])},
            "recovered": [_action_dict(a) for a in self.recovered],
            "capacity": {
                "per_sender": list(self.capacity.per_sender),
                "total": self.capacity.total,
            },
            "ok": self.ok,
        }
        if dump_state:
            out["state"] = [list(t) for t in self.final_state.to_triples(skip_zero=True, atol=1e-12)]
        return out


def _action_dict(a: SenderAction) -> dict:
    return {"k": a.k, "n": a.n, "i": a.i}


def _check_mode(mode: str) -> None:
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}, got {mode!r}")


def particle_slots(plan: FactorPlan, mode: str = "full") -> tuple[int, ...]:
    """Particle index held by each sender, in sender order.

    Reduced mode places nontrivial senders first, keeping relative order. The
    step ``q_k`` of a nontrivial sender is unchanged by this since only factors
    equal to 1 move.
    """
    _check_mode(mode)
    if mode == "full":
        return tuple(range(1, plan.n_senders + 1))
    order = [k for k, p in enumerate(plan.factors) if p != 1]
    order += [k for k, p in enumerate(plan.factors) if p == 1]
    slots = [0] * plan.n_senders
    for slot, k in enumerate(order, start=1):
        slots[k] = slot
    return tuple(slots)


def normalized_plan(plan: FactorPlan) -> FactorPlan:
    """``plan`` with its trivial factors moved to the end."""
    fs = [p for p in plan.factors if p != 1] + [p for p in plan.factors if p == 1]
    return make_factor_plan(plan.d, fs)


def _to_slot_order(plan: FactorPlan, mode: str, values: Sequence[int]) -> list[int]:
    out = [0] * plan.n_senders
    for value, slot in zip(values, particle_slots(plan, mode)):
        out[slot - 1] = value
    return out


def initial_state(plan: FactorPlan, mode: str = "full") -> StateVector:
    _check_mode(mode)
    if mode == "full":
        return ghz_state(plan.d, plan.n_senders + 1)
    k = plan.nontrivial
    head = ghz_state(plan.d, k + 1)
    if k == plan.n_senders:
        return head
    return tensor(head, basis_state(plan.d, plan.n_senders - k, [0] * (plan.n_senders - k)))


def codeword(plan: FactorPlan, mode: str, n: int, shifts: Sequence[int]) -> StateVector:
    """Signal state for joint index ``n`` and per-sender shifts in sender order."""
    _check_mode(mode)
    if mode == "full":
        return target_state(plan.d, plan.n_senders, n, shifts)
    return reduced_target_state(normalized_plan(plan), n, _to_slot_order(plan, mode, shifts))


def normalize_actions(plan: FactorPlan, actions: Iterable[SenderAction]) -> tuple[SenderAction, ...]:
    """Sort by sender and check there is exactly one action per sender."""
    actions = tuple(sorted(actions, key=lambda a: a.k))
    if [a.k for a in actions] != list(range(1, plan.n_senders + 1)):
        raise ValueError(
            f"need exactly one action for each sender 1..{plan.n_senders}, got {[a.k for a in actions]}"
        )
    for a in actions:
        if not 0 <= a.i < plan.d:
            raise ValueError(f"sender {a.k}: shift {a.i} outside [0, {plan.d})")
        if not 0 <= a.n < plan.d:
            raise ValueError(f"sender {a.k}: phase index {a.n} outside [0, {plan.d})")
    return actions


def validate_actions(plan: FactorPlan, actions: Iterable[SenderAction]) -> tuple[SenderAction, ...]:
    actions = normalize_actions(plan, actions)
    for a in actions:
        allowed = sender_set(plan, a.k)
        if a.n not in allowed:
            raise UnlawfulActionError(
                f"sender {a.k}: phase index {a.n} not in S_{a.k} = {set(allowed.members)}"
            )
    return actions


def encode(
    plan: FactorPlan,
    mode: str,
    actions: Iterable[SenderAction],
    validate: bool = True,
) -> StateVector:
    """Apply every sender's unitary to its particle of the initial state.

    ``validate=False`` skips the sender-set check so out-of-code states can be
    produced on purpose.
    """
    actions = validate_actions(plan, actions) if validate else normalize_actions(plan, actions)
    state = initial_state(plan, mode)
    for a, slot in zip(actions, particle_slots(plan, mode)):
        state = apply_local(state, slot, dense_coding_unitary(plan.d, a.n, a.i))
    return state


@functools.lru_cache(maxsize=32)
def _cached_codebook(plan: FactorPlan, mode: str) -> Codebook:
    # vectorized form of codeword() over every key; each row has d nonzeros
    d, N = plan.d, plan.n_senders
    shifts = np.array(list(itertools.product(range(d), repeat=N)), dtype=np.int64).reshape(-1, N)
    if mode == "full":
        entangled = np.ones(N, dtype=bool)
    else:
        entangled = np.array(plan.factors) != 1
    place = d ** (N - np.array(particle_slots(plan, mode), dtype=np.int64))
    j = np.arange(d, dtype=np.int64)[:, None, None]
    digits = np.where(entangled, (j + shifts) % d, shifts)
    pos = j[:, :, 0] * d**N + (digits * place).sum(axis=-1)

    n = np.arange(plan.delta)
    phase = (1.0 / np.sqrt(d)) * np.exp(2j * np.pi * ((np.arange(d)[:, None] * n) % d) / d)
    matrix = np.zeros((plan.delta, d**N, d ** (N + 1)), dtype=np.complex128)
    cols = np.arange(d**N)
    for row_n in n:
        matrix[row_n, cols[None, :], pos] = phase[:, row_n][:, None]
    keys = tuple((int(k), tuple(int(x) for x in s)) for k in n for s in shifts)
    return Codebook(plan, mode, keys, matrix.reshape(len(keys), -1), N + 1)


def gram_residual(codebook: Codebook) -> float:
    """Largest entrywise deviation of the codebook Gram matrix from identity."""
    g = codebook.gram()
    return float(np.max(np.abs(g - np.eye(len(codebook)))))


def build_codebook(plan: FactorPlan, mode: str = "full", verify: bool = False, tol: float = 1e-9) -> Codebook:
    """All signal states ``(n, i_1..i_N)`` with ``n < delta``.

    Raises:
        RuntimeError: with ``verify`` set, if the states are not orthonormal.
    """
    _check_mode(mode)
    book = _cached_codebook(plan, mode)
    if verify:
        residual = gram_residual(book)
        if residual > tol:
            raise RuntimeError(f"codebook Gram matrix deviates from identity by {residual:.3e}")
    return book


def decode(codebook: Codebook, state: StateVector) -> tuple[int, tuple[int, ...]]:
    """Identify the codeword equal to ``state`` (up to global phase)."""
    if state.d != codebook.plan.d or state.particles != codebook.particles:
        raise ValueError(
            f"state shape (d={state.d}, M={state.particles}) does not match codebook "
            f"(d={codebook.plan.d}, M={codebook.particles})"
        )
    probs = np.abs(codebook.matrix.conj() @ state.amps) ** 2
    above_guard = np.flatnonzero(probs > AMBIGUITY_GUARD)
    best = int(np.argmax(probs))
    if probs[best] < DECODE_THRESHOLD or len(above_guard) > 1:
        raise DecodeAmbiguityError(
            f"no unique codeword: best overlap {probs[best]:.6f}, {len(above_guard)} candidates above {AMBIGUITY_GUARD}"
        )
    return codebook.keys[best]


def recover_digits(plan: FactorPlan, n: int) -> list[int]:
    """Split a joint index into each sender's phase index ``mu_k * q_k``."""
    return [mu * q for mu, q in zip(decompose(plan, n), plan.ladder)]


def capacity(plan: FactorPlan) -> CapacityReport:
    d, N = plan.d, plan.n_senders
    per_msgs = tuple(p * d for p in plan.factors)
    total_msgs = plan.delta * d**N
    return CapacityReport(
        per_sender=tuple(math.log2(m) for m in per_msgs),
        total=math.log2(total_msgs),
        per_sender_messages=per_msgs,
        total_messages=total_msgs,
    )


def run_roundtrip(
    plan: FactorPlan,
    mode: str,
    actions: Iterable[SenderAction],
    codebook: Codebook | None = None,
) -> Transcript:
    actions = validate_actions(plan, actions)
    if codebook is None:
        codebook = build_codebook(plan, mode)
    final = encode(plan, mode, actions)
    n, shifts = decode(codebook, final)
    recovered = tuple(
        SenderAction(k, n_k, i_k)
        for k, (n_k, i_k) in enumerate(zip(recover_digits(plan, n), shifts), start=1)
    )
    return Transcript(plan, mode, actions, final, (n, shifts), recovered, capacity(plan))


def lawful_actions(plan: FactorPlan) -> Iterator[tuple[SenderAction, ...]]:
    """Every lawful action tuple: ``|S_1 x ... x S_N| * d^N`` of them."""
    choices = [
        [SenderAction(s.k, n, i) for n in s.members for i in range(plan.d)]
        for s in sender_sets(plan)
    ]
    return itertools.product(*choices)


def random_actions(plan: FactorPlan, rng: np.random.Generator) -> tuple[SenderAction, ...]:
    """Draw each sender's ``(n_k, i_k)`` uniformly from ``S_k x Z_d``."""
    out = []
    for s in sender_sets(plan):
        n = s.members[int(rng.integers(len(s.members)))]
        i = int(rng.integers(plan.d))
        out.append(SenderAction(s.k, n, i))
    return tuple(out)
