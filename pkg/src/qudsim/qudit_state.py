"""Dense state vectors over ``M`` qudits of dimension ``d``.

Amplitudes are indexed big-endian: particle 0 is the most significant digit
of the flat index, so ``|j_0 j_1 ... j_{M-1}>`` lives at
``sum(j_r * d**(M-1-r))``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING, Sequence

import numpy as np

if TYPE_CHECKING:
    from qudsim.operators import LocalOperator


@dataclass(frozen=True, eq=False)
class StateVector:
    d: int
    particles: int
    amps: np.ndarray

    def __post_init__(self):
        amps = np.array(self.amps, dtype=np.complex128)
        if amps.shape != (self.d**self.particles,):
            raise ValueError(
                f"expected {self.d ** self.particles} amplitudes, got shape {amps.shape}"
            )
        if not np.all(np.isfinite(amps)):
            raise ValueError("amplitudes must be finite")
        amps.setflags(write=False)
        object.__setattr__(self, "amps", amps)

    def norm_sq(self) -> float:
        return float(np.vdot(self.amps, self.amps).real)

    def allclose(self, other: "StateVector", atol: float = 1e-9) -> bool:
        """Elementwise equality, global phase included."""
        _check_same_shape(self, other)
        return bool(np.max(np.abs(self.amps - other.amps), initial=0.0) <= atol)

    def as_tensor(self) -> np.ndarray:
        return self.amps.reshape((self.d,) * self.particles)

    def to_triples(self, skip_zero: bool = False, atol: float = 0.0) -> list[tuple[str, float, float]]:
        """Debug form: ``(base-d digit string, re, im)`` per amplitude.

        Digits above 9 are written ``a..z``, so this covers ``d <= 36``.
        """
        out = []
        for index, amp in enumerate(self.amps):
            if skip_zero and abs(amp) <= atol:
                continue
            out.append((index_string(index, self.d, self.particles), float(amp.real), float(amp.imag)))
        return out


_DIGITS = "0123456789abcdefghijklmnopqrstuvwxyz"


def index_string(index: int, d: int, particles: int) -> str:
    if d > len(_DIGITS):
        raise ValueError(f"cannot render digits for d={d}")
    chars = []
    for _ in range(particles):
        index, r = divmod(index, d)
        chars.append(_DIGITS[r])
    return "".join(reversed(chars))


def flat_index(d: int, indices: Sequence[int]) -> int:
    pos = 0
    for j in indices:
        if not 0 <= j < d:
            raise ValueError(f"basis index {j} outside [0, {d})")
        pos = pos * d + j
    return pos


def basis_state(d: int, particles: int, indices: Sequence[int]) -> StateVector:
    if len(indices) != particles:
        raise ValueError(f"need {particles} indices, got {len(indices)}")
    amps = np.zeros(d**particles, dtype=np.complex128)
    amps[flat_index(d, indices)] = 1.0
    return StateVector(d, particles, amps)


def ghz_state(d: int, particles: int) -> StateVector:
    """``(1/sqrt(d)) sum_j |j j ... j>`` on ``particles`` qudits."""
    if particles < 1:
        raise ValueError("need at least one particle")
    amps = np.zeros(d**particles, dtype=np.complex128)
    # |j...j> sits at j * (d^(M-1) + ... + d + 1)
    stride = sum(d**r for r in range(particles))
    amps[np.arange(d) * stride] = 1.0 / np.sqrt(d)
    return StateVector(d, particles, amps)


def tensor(a: StateVector, b: StateVector) -> StateVector:
    if a.d != b.d:
        raise ValueError(f"dimension mismatch: {a.d} vs {b.d}")
    return StateVector(a.d, a.particles + b.particles, np.kron(a.amps, b.amps))


def inner_product(a: StateVector, b: StateVector) -> complex:
    """``<a|b>``, conjugate-linear in ``a``."""
    _check_same_shape(a, b)
    return complex(np.vdot(a.amps, b.amps))


def apply_local(state: StateVector, particle: int, op: "LocalOperator") -> StateVector:
    """Apply ``I x ... x op x ... x I`` with ``op`` acting on ``particle``."""
    if not 0 <= particle < state.particles:
        raise IndexError(f"particle {particle} out of range 0..{state.particles - 1}")
    if op.d != state.d:
        raise ValueError(f"operator dimension {op.d} does not match state dimension {state.d}")
    psi = np.tensordot(op.entries, state.as_tensor(), axes=([1], [particle]))
    psi = np.moveaxis(psi, 0, particle)
    return StateVector(state.d, state.particles, psi.reshape(-1))


def _check_same_shape(a: StateVector, b: StateVector) -> None:
    if a.d != b.d or a.particles != b.particles:
        raise ValueError(
            f"shape mismatch: (d={a.d}, M={a.particles}) vs (d={b.d}, M={b.particles})"
        )
