"""Circuit intermediate representation.

A :class:`Circuit` is an immutable, ordered list of :class:`GateOp`. Structural
operators (:func:`compose`, :func:`dagger`, :func:`controlled`, :func:`power`)
build new circuits; nothing here touches amplitudes.

Multi-controlled gates are kept as single ops. The simulator executes them
natively through a control mask, so gate counts reported by ``len(circuit)``
count an n-controlled gate as one op, not its two-qubit decomposition.

Text dump grammar (one op per line)::

    line     := GATE [ "(" angle ")" ] " " target [ " [" controls "]" ]
    GATE     := H | X | Z | PHASE | RX | RY
    controls := qubit { " " qubit }

Angles are written with ``repr(float)`` so a dump round-trips exactly.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .errors import ValidationError

FIXED_GATES = ("H", "X", "Z")
ROTATION_GATES = ("PHASE", "RX", "RY")
GATE_KINDS = FIXED_GATES + ROTATION_GATES


@dataclass(frozen=True)
class GateOp:
    kind: str
    target: int
    theta: float | None = None
    controls: frozenset[int] = field(default_factory=frozenset)

    def __post_init__(self):
        if self.kind not in GATE_KINDS:
            raise ValidationError(f"unknown gate kind {self.kind!r}")
        if not isinstance(self.controls, frozenset):
            object.__setattr__(self, "controls", frozenset(self.controls))
        if self.kind in ROTATION_GATES:
            if self.theta is None or not math.isfinite(self.theta):
                raise ValidationError(f"{self.kind} needs a finite angle, got {self.theta!r}")
            object.__setattr__(self, "theta", float(self.theta))
        elif self.theta is not None:
            raise ValidationError(f"{self.kind} takes no angle")
        if self.target < 0 or any(c < 0 for c in self.controls):
            raise ValidationError("qubit indices must be non-negative")
        if self.target in self.controls:
            raise ValidationError(f"target {self.target} is also a control")

    @property
    def qubits(self) -> frozenset[int]:
        return self.controls | {self.target}

    def inverse(self) -> GateOp:
        if self.kind in FIXED_GATES:
            return self
        return GateOp(self.kind, self.target, -self.theta, self.controls)

    def with_controls(self, extra: Iterable[int]) -> GateOp:
        extra = frozenset(extra)
        if self.target in extra:
            raise ValidationError(f"control collides with target {self.target}")
        return GateOp(self.kind, self.target, self.theta, self.controls | extra)

    def remap(self, mapping: Sequence[int] | dict[int, int]) -> GateOp:
        return GateOp(self.kind, mapping[self.target], self.theta,
                      frozenset(mapping[c] for c in self.controls))

    def dump(self) -> str:
        head = self.kind if self.theta is None else f"{self.kind}({self.theta!r})"
        line = f"{head} {self.target}"
        if self.controls:
            line += " [" + " ".join(str(c) for c in sorted(self.controls)) + "]"
        return line


# constructors, mostly for readability at call sites
def h(q, controls=()):
    return GateOp("H", q, controls=frozenset(controls))


def x(q, controls=()):
    return GateOp("X", q, controls=frozenset(controls))


def z(q, controls=()):
    return GateOp("Z", q, controls=frozenset(controls))


def phase(theta, q, controls=()):
    return GateOp("PHASE", q, theta, frozenset(controls))


def rx(theta, q, controls=()):
    return GateOp("RX", q, theta, frozenset(controls))


def ry(theta, q, controls=()):
    return GateOp("RY", q, theta, frozenset(controls))


@dataclass(frozen=True)
class Circuit:
    num_qubits: int
    ops: tuple[GateOp, ...] = ()

    def __post_init__(self):
        if self.num_qubits < 1:
            raise ValidationError("a circuit needs at least one qubit")
        object.__setattr__(self, "ops", tuple(self.ops))
        for op in self.ops:
            if max(op.qubits) >= self.num_qubits:
                raise ValidationError(
                    f"op {op.dump()!r} out of range for {self.num_qubits} qubits")

    def __len__(self):
        return len(self.ops)

    def __iter__(self):
        return iter(self.ops)

    def __add__(self, other: Circuit) -> Circuit:
        return compose(self, other)

    def append(self, *ops: GateOp) -> Circuit:
        return Circuit(self.num_qubits, self.ops + ops)

    @property
    def used_qubits(self) -> frozenset[int]:
        return frozenset().union(*(op.qubits for op in self.ops)) if self.ops else frozenset()

    def dump(self) -> str:
        return "".join(op.dump() + "\n" for op in self.ops)

    @classmethod
    def parse(cls, text: str, num_qubits: int) -> Circuit:
        return cls(num_qubits, tuple(parse_op(line) for line in text.splitlines() if line.strip()))


def parse_op(line: str) -> GateOp:
    line = line.strip()
    controls: frozenset[int] = frozenset()
    if line.endswith("]"):
        line, _, ctl = line[:-1].partition("[")
        controls = frozenset(int(t) for t in ctl.split())
    head, target = line.split()
    theta = None
    if "(" in head:
        head, _, arg = head.partition("(")
        theta = float(arg.rstrip(")"))
    return GateOp(head, int(target), theta, controls)


def empty(num_qubits: int) -> Circuit:
    return Circuit(num_qubits)


def compose(a: Circuit, b: Circuit) -> Circuit:
    """Run ``a`` then ``b``."""
    if a.num_qubits != b.num_qubits:
        raise ValidationError(f"qubit-count mismatch: {a.num_qubits} vs {b.num_qubits}")
    return Circuit(a.num_qubits, a.ops + b.ops)


def sequence(*circuits: Circuit) -> Circuit:
    out = circuits[0]
    for c in circuits[1:]:
        out = compose(out, c)
    return out


def dagger(c: Circuit) -> Circuit:
    return Circuit(c.num_qubits, tuple(op.inverse() for op in reversed(c.ops)))


def controlled(c: Circuit, control: int | Iterable[int]) -> Circuit:
    """Add ``control`` to the control set of every op."""
    ctl = frozenset([control]) if isinstance(control, int) else frozenset(control)
    if ctl & c.used_qubits:
        raise ValidationError(f"control qubits {sorted(ctl & c.used_qubits)} already used by circuit")
    if ctl and max(ctl) >= c.num_qubits:
        raise ValidationError("control index out of range")
    return Circuit(c.num_qubits, tuple(op.with_controls(ctl) for op in c.ops))


def power(c: Circuit, k: int) -> Circuit:
    if k < 0:
        raise ValidationError("power must be non-negative")
    return Circuit(c.num_qubits, c.ops * k)


def embed(c: Circuit, num_qubits: int, offset: int = 0) -> Circuit:
    """Place ``c`` on qubits ``offset .. offset + c.num_qubits - 1`` of a wider circuit."""
    if offset < 0 or offset + c.num_qubits > num_qubits:
        raise ValidationError("embedding does not fit")
    mapping = range(offset, offset + c.num_qubits)
    return Circuit(num_qubits, tuple(op.remap(mapping) for op in c.ops))


def negate(q: int, num_qubits: int) -> Circuit:
    """Global phase of -1, built as X Z X Z on qubit ``q``.

    Only observable once the circuit is wrapped with :func:`controlled`.
    """
    return Circuit(num_qubits, (z(q), x(q), z(q), x(q)))


def swap(a: int, b: int, num_qubits: int) -> Circuit:
    return Circuit(num_qubits, (x(b, [a]), x(a, [b]), x(b, [a])))


def qft(num_qubits: int, inverse: bool = False) -> Circuit:
    """Quantum Fourier transform on ``num_qubits`` qubits, qubit 0 most significant.

    Maps ``|k>`` to ``2^{-m/2} sum_j exp(2 pi i k j / 2^m) |j>``; the trailing
    swaps are included so no bit reversal leaks out.
    """
    if num_qubits < 1:
        raise ValidationError("qft needs at least one qubit")
    m = num_qubits
    ops: list[GateOp] = []
    for j in range(m):
        ops.append(h(j))
        for k in range(j + 1, m):
            ops.append(phase(2 * math.pi / 2 ** (k - j + 1), j, [k]))
    c = Circuit(m, tuple(ops))
    for j in range(m // 2):
        c = compose(c, swap(j, m - 1 - j, m))
    return dagger(c) if inverse else c
