"""Dense statevector engine.

Bit order: qubit 0 is the most significant bit of a basis index, so on
``n`` qubits qubit ``q`` carries weight ``2 ** (n - 1 - q)``. Reshaping the
amplitude array to ``(2,) * n`` in C order puts qubit ``q`` on axis ``q``,
which is how gates are applied: fix every control axis to 1, take the two
slices along the target axis, and mix them in place.

Shot sampling uses numpy's ``default_rng`` (the PCG64 bit generator) seeded
explicitly, so identical ``(state, shots, seed)`` give identical histograms.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Callable, Iterable

import numpy as np

from .circuit import Circuit, GateOp
from .errors import ResourceError, ValidationError

MAX_QUBITS = 26
SUPPORT_THRESHOLD = 1e-12

_SQRT_HALF = 1 / math.sqrt(2)
_H = np.array([[_SQRT_HALF, _SQRT_HALF], [_SQRT_HALF, -_SQRT_HALF]], dtype=complex)
_X = np.array([[0, 1], [1, 0]], dtype=complex)


def gate_matrix(op: GateOp) -> np.ndarray:
    """2x2 unitary of the target action of ``op`` (controls excluded)."""
    if op.kind == "H":
        return _H
    if op.kind == "X":
        return _X
    if op.kind == "Z":
        return np.diag([1, -1]).astype(complex)
    t = op.theta
    if op.kind == "PHASE":
        return np.diag([1, np.exp(1j * t)])
    c, s = math.cos(t / 2), math.sin(t / 2)
    if op.kind == "RX":
        return np.array([[c, -1j * s], [-1j * s, c]])
    # RY(t)|0> = cos(t/2)|0> + sin(t/2)|1>
    return np.array([[c, -s], [s, c]], dtype=complex)


@dataclass
class StateVector:
    num_qubits: int
    amplitudes: np.ndarray

    def __post_init__(self):
        self.amplitudes = np.asarray(self.amplitudes, dtype=complex)
        if self.amplitudes.shape != (2 ** self.num_qubits,):
            raise ValidationError(
                f"expected {2 ** self.num_qubits} amplitudes, got {self.amplitudes.shape}")

    def copy(self) -> StateVector:
        return StateVector(self.num_qubits, self.amplitudes.copy())

    @property
    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    @property
    def norm(self) -> float:
        return float(np.sum(self.probabilities))

    def tensor(self, other: StateVector) -> StateVector:
        """``self`` on the leading (more significant) qubits, ``other`` after."""
        return StateVector(self.num_qubits + other.num_qubits,
                           np.kron(self.amplitudes, other.amplitudes))

    def apply(self, op: GateOp) -> StateVector:
        """Apply ``op`` in place and return ``self``."""
        n = self.num_qubits
        if max(op.qubits) >= n:
            raise ValidationError(f"gate {op.dump()!r} out of range for {n} qubits")
        psi = self.amplitudes.reshape((2,) * n)
        idx: list = [slice(None)] * n
        for c in op.controls:
            idx[c] = 1
        i0, i1 = list(idx), list(idx)
        i0[op.target], i1[op.target] = 0, 1
        i0, i1 = tuple(i0), tuple(i1)
        if op.kind == "Z":
            psi[i1] *= -1
        elif op.kind == "PHASE":
            psi[i1] *= np.exp(1j * op.theta)
        elif op.kind == "X":
            tmp = psi[i0].copy()
            psi[i0] = psi[i1]
            psi[i1] = tmp
        else:
            u = gate_matrix(op)
            a0 = psi[i0].copy()
            a1 = psi[i1]
            psi[i0] = u[0, 0] * a0 + u[0, 1] * a1
            psi[i1] = u[1, 0] * a0 + u[1, 1] * a1
        return self

    def run(self, circuit: Circuit) -> StateVector:
        """Apply every op of ``circuit`` in place."""
        if circuit.num_qubits != self.num_qubits:
            raise ValidationError(
                f"circuit has {circuit.num_qubits} qubits, state has {self.num_qubits}")
        for op in circuit.ops:
            self.apply(op)
        return self

    def to_json(self) -> str:
        return json.dumps({
            "num_qubits": self.num_qubits,
            "amplitudes": [[float(a.real), float(a.imag)] for a in self.amplitudes],
        })

    @classmethod
    def from_json(cls, text: str) -> StateVector:
        data = json.loads(text)
        amps = np.array([complex(re, im) for re, im in data["amplitudes"]])
        return cls(int(data["num_qubits"]), amps)


def _check_size(num_qubits: int):
    if not 1 <= num_qubits <= MAX_QUBITS:
        raise ResourceError(f"qubit count {num_qubits} outside [1, {MAX_QUBITS}]")


def init_zero(num_qubits: int) -> StateVector:
    _check_size(num_qubits)
    amps = np.zeros(2 ** num_qubits, dtype=complex)
    amps[0] = 1
    return StateVector(num_qubits, amps)


def basis_state(num_qubits: int, index: int) -> StateVector:
    s = init_zero(num_qubits)
    s.amplitudes[0] = 0
    s.amplitudes[index] = 1
    return s


def apply_gate(state: StateVector, gate: GateOp) -> StateVector:
    """Return a new state with ``gate`` applied; ``state`` is untouched."""
    return state.copy().apply(gate)


def run(circuit: Circuit, state: StateVector | None = None) -> StateVector:
    """Run ``circuit`` on a copy of ``state`` (default ``|0...0>``)."""
    if state is None:
        state = init_zero(circuit.num_qubits)
    else:
        state = state.copy()
    return state.run(circuit)


def probability_of(state: StateVector, predicate: Callable[[int], bool] | Iterable[int]) -> float:
    """Born-rule probability of the set of basis states selected by ``predicate``.

    ``predicate`` is either a callable on basis indices or an iterable of indices.
    """
    probs = state.probabilities
    if callable(predicate):
        mask = np.fromiter((bool(predicate(s)) for s in range(probs.size)), dtype=bool,
                           count=probs.size)
        return float(np.sum(probs[mask]))
    idx = np.fromiter(set(predicate), dtype=np.int64)
    return float(np.sum(probs[idx])) if idx.size else 0.0


def nonzero_support(state: StateVector, threshold: float = SUPPORT_THRESHOLD) -> set[int]:
    return set(np.flatnonzero(state.probabilities > threshold).tolist())


def sample(state: StateVector, shots: int, seed: int) -> dict[int, int]:
    """Draw ``shots`` measurements of all qubits; returns nonzero counts by basis index."""
    if shots < 1:
        raise ValidationError("shots must be >= 1")
    probs = state.probabilities
    probs = probs / probs.sum()
    counts = np.random.default_rng(seed).multinomial(shots, probs)
    return {int(i): int(counts[i]) for i in np.flatnonzero(counts)}


def bitstring(index: int, num_qubits: int) -> str:
    """Basis index as a bitstring, qubit 0 leftmost."""
    return format(index, f"0{num_qubits}b") if num_qubits else ""


def from_bitstring(bits: str) -> int:
    return int(bits, 2) if bits else 0


def marginal(state: StateVector, qubits: Iterable[int]) -> np.ndarray:
    """Probability distribution over a subset of qubits, indexed MSB-first in the given order."""
    qubits = list(qubits)
    n = state.num_qubits
    probs = state.probabilities.reshape((2,) * n)
    others = tuple(q for q in range(n) if q not in qubits)
    reduced = probs.sum(axis=others) if others else probs
    # sum() keeps remaining axes in ascending order; permute to the requested order
    order = sorted(qubits)
    reduced = np.transpose(reduced, [order.index(q) for q in qubits])
    return reduced.reshape(-1)
