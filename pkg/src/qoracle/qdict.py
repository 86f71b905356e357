"""Quantum Dictionary encoder for integer polynomials over binary variables.

The encoder ``B`` entangles every key ``k`` of an ``n``-qubit key register
with ``f(k) mod 2^m`` in an ``m``-qubit value register:

    H on values -> one controlled geometric rotation ladder per term -> QFT^dagger on values

Qubits ``0 .. n-1`` hold the keys (qubit ``i`` is variable ``x_i``, so ``x_0``
is the leftmost display bit) and ``n .. n+m-1`` hold the value in two's
complement.
"""
from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from . import circuit as qc
from .circuit import Circuit
from .errors import AliasingError, ParseError, ValidationError
from .simcore import StateVector, init_zero

Term = tuple[int, tuple[int, ...]]


@dataclass(frozen=True)
class PolynomialSpec:
    """Multilinear integer polynomial; ``terms`` are ``(coeff, sorted var tuple)``.

    Terms sharing a variable set are merged and zero coefficients dropped, so
    two specs describing the same polynomial compare equal.
    """

    num_vars: int
    terms: tuple[Term, ...] = ()

    def __post_init__(self):
        merged: dict[tuple[int, ...], int] = {}
        for coeff, vars_ in self.terms:
            vs = tuple(sorted(vars_))
            if len(set(vs)) != len(vs):
                raise ValidationError(f"repeated variable in term {vs}")
            if vs and (vs[0] < 0 or vs[-1] >= self.num_vars):
                raise ValidationError(f"variable index out of range in term {vs}")
            merged[vs] = merged.get(vs, 0) + int(coeff)
        canon = tuple(sorted(((c, v) for v, c in merged.items() if c != 0),
                             key=lambda t: (len(t[1]), t[1])))
        object.__setattr__(self, "terms", canon)

    @property
    def constant(self) -> int:
        return sum(c for c, v in self.terms if not v)

    def bounds(self) -> tuple[int, int]:
        """Coefficient-sign bounds ``(sum of negatives, sum of positives)``, constant included."""
        lo = sum(c for c, _ in self.terms if c < 0)
        hi = sum(c for c, _ in self.terms if c > 0)
        return lo, hi

    def __str__(self) -> str:
        return to_text(self)

    def to_json(self) -> str:
        return json.dumps({"n": self.num_vars,
                           "terms": [{"c": c, "vars": list(v)} for c, v in self.terms]})

    @classmethod
    def from_json(cls, text: str) -> PolynomialSpec:
        data = json.loads(text)
        return cls(int(data["n"]), tuple((int(t["c"]), tuple(t["vars"])) for t in data["terms"]))


_TOKEN = re.compile(r"\s*(?P<tok>(?P<int>\d+)|x(?P<var>\d+)|(?P<op>[+\-*]))")


def _tokens(text: str):
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m:
            start = pos + len(text[pos:]) - len(text[pos:].lstrip())
            raise ParseError(f"unexpected character {text[start]!r}", start)
        kind = next(k for k in ("int", "var", "op") if m.group(k) is not None)
        yield kind, m.group(kind), m.start("tok")
        pos = m.end()
    yield "end", "", len(text)


def parse_polynomial(text: str, num_vars: int | None = None) -> PolynomialSpec:
    """Parse e.g. ``"2*x0 + x1 - 5*x2 + 2*x3"`` or ``"x0*x1 + x1*x2"``.

    ``num_vars`` defaults to one more than the largest variable index.
    """
    toks = list(_tokens(text))
    i = 0
    terms: list[Term] = []

    def peek():
        return toks[i]

    sign = 1
    kind, val, pos = peek()
    if kind == "op" and val in "+-":
        sign = -1 if val == "-" else 1
        i += 1
    while True:
        coeff, vars_ = sign, []
        while True:
            kind, val, pos = peek()
            if kind == "int":
                coeff *= int(val)
            elif kind == "var":
                v = int(val)
                if v in vars_:
                    raise ParseError(f"repeated variable x{v} in one term (reduce x^2 to x first)", pos)
                vars_.append(v)
            else:
                raise ParseError("expected integer or variable", pos)
            i += 1
            kind, val, pos = peek()
            if kind == "op" and val == "*":
                i += 1
                continue
            break
        terms.append((coeff, tuple(vars_)))
        kind, val, pos = peek()
        if kind == "end":
            break
        if kind == "op" and val in "+-":
            sign = -1 if val == "-" else 1
            i += 1
            continue
        raise ParseError(f"unexpected {val!r}", pos)
    top = max((max(v) for _, v in terms if v), default=-1)
    n = top + 1 if num_vars is None else num_vars
    if top >= n:
        raise ValidationError(f"x{top} does not fit in {n} variables")
    return PolynomialSpec(n, tuple(terms))


def to_text(poly: PolynomialSpec) -> str:
    """Serialize to the grammar accepted by :func:`parse_polynomial`."""
    if not poly.terms:
        return "0"
    parts = []
    for c, vs in poly.terms:
        mono = "*".join(f"x{v}" for v in vs)
        mag = abs(c)
        body = mono if mono and mag == 1 else (f"{mag}*{mono}" if mono else str(mag))
        parts.append(("-" if c < 0 else "+", body))
    head = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    return head + "".join(f" {s} {b}" for s, b in parts[1:])


def evaluate(poly: PolynomialSpec, assignment: Sequence[int]) -> int:
    if len(assignment) != poly.num_vars:
        raise ValidationError(f"need {poly.num_vars} bits, got {len(assignment)}")
    return sum(c for c, vs in poly.terms if all(assignment[j] for j in vs))


def key_bits(key: int, n: int) -> tuple[int, ...]:
    """Bits of ``key`` as ``(x_0, ..., x_{n-1})``, ``x_0`` most significant."""
    return tuple((key >> (n - 1 - j)) & 1 for j in range(n))


def evaluate_all(poly: PolynomialSpec) -> np.ndarray:
    """``f(k)`` for every key ``k`` in ``range(2 ** n)``, exact int64 arithmetic."""
    n = poly.num_vars
    keys = np.arange(2 ** n, dtype=np.int64)
    out = np.zeros(2 ** n, dtype=np.int64)
    for c, vs in poly.terms:
        mask = np.ones(2 ** n, dtype=bool)
        for j in vs:
            mask &= ((keys >> (n - 1 - j)) & 1).astype(bool)
        out[mask] += c
    return out


@dataclass(frozen=True)
class DictionaryLayout:
    key_qubits: int
    value_qubits: int
    signed: bool = True

    def __post_init__(self):
        if self.key_qubits < 0 or self.value_qubits < 1:
            raise ValidationError("need key_qubits >= 0 and value_qubits >= 1")

    @property
    def total_qubits(self) -> int:
        return self.key_qubits + self.value_qubits

    @property
    def keys(self) -> range:
        return range(self.key_qubits)

    @property
    def values(self) -> range:
        return range(self.key_qubits, self.total_qubits)

    @property
    def value_range(self) -> tuple[int, int]:
        m = self.value_qubits
        return (-(2 ** (m - 1)), 2 ** (m - 1) - 1) if self.signed else (0, 2 ** m - 1)

    def to_signed(self, v: int) -> int:
        m = self.value_qubits
        v %= 2 ** m
        return v - 2 ** m if self.signed and v >= 2 ** (m - 1) else v

    def index(self, key: int, value: int) -> int:
        """Basis index of ``|key>|value mod 2^m>``."""
        return (key << self.value_qubits) | (value % 2 ** self.value_qubits)


def auto_size(poly: PolynomialSpec, unsigned: bool = False) -> int:
    """Smallest value-register width holding every attainable value.

    Signed mode (default) keeps a sign bit even for non-negative polynomials.
    ``unsigned`` uses ``ceil(log2(max + 1))`` and requires ``min >= 0``.
    """
    lo, hi = poly.bounds()
    if unsigned:
        if lo < 0:
            raise ValidationError("unsigned sizing needs a non-negative polynomial")
        return max(1, math.ceil(math.log2(hi + 1)))
    m = 1
    while not (-(2 ** (m - 1)) <= lo and hi <= 2 ** (m - 1) - 1):
        m += 1
    return m


def layout_for(poly: PolynomialSpec, value_qubits: int | None = None,
               unsigned: bool = False) -> DictionaryLayout:
    m = auto_size(poly, unsigned) if value_qubits is None else value_qubits
    return DictionaryLayout(poly.num_vars, m, signed=not unsigned)


def check_fits(poly: PolynomialSpec, layout: DictionaryLayout):
    lo, hi = poly.bounds()
    rlo, rhi = layout.value_range
    if lo < rlo or hi > rhi:
        kind = "signed" if layout.signed else "unsigned"
        raise AliasingError(
            f"polynomial bounds [{lo}, {hi}] exceed {kind} {layout.value_qubits}-qubit range [{rlo}, {rhi}]")


def geometric_rotation(m: int, theta: float, controls: Iterable[int] = (), *,
                       num_qubits: int | None = None, offset: int = 0) -> Circuit:
    """``U_G(theta)``: ``R(2^i theta)`` on register qubit ``m-1-i``.

    The register occupies qubits ``offset .. offset+m-1`` of a ``num_qubits``
    circuit (default: just the register). Every gate is also controlled on
    ``controls``. On ``H^m|0>`` with no controls this gives
    ``2^{-m/2} sum_k e^{i k theta} |k>``.
    """
    total = m + offset if num_qubits is None else num_qubits
    ctl = frozenset(controls)
    ops = tuple(qc.phase(2 ** i * theta, offset + m - 1 - i, ctl) for i in range(m))
    return Circuit(total, ops)


def build_encoder(poly: PolynomialSpec, layout: DictionaryLayout,
                  allow_aliasing: bool = False) -> Circuit:
    """The property-encoding operator ``B`` on ``layout.total_qubits`` qubits.

    Acts as ``|k>|0> -> |k>|f(k) mod 2^m>``. Raises :class:`AliasingError`
    when the polynomial's bounds overflow the value register, unless
    ``allow_aliasing`` is set.
    """
    if poly.num_vars != layout.key_qubits:
        raise ValidationError(
            f"polynomial has {poly.num_vars} variables, layout has {layout.key_qubits} keys")
    if not allow_aliasing:
        check_fits(poly, layout)
    n, m, total = layout.key_qubits, layout.value_qubits, layout.total_qubits
    c = Circuit(total, tuple(qc.h(q) for q in layout.values))
    for coeff, vs in poly.terms:
        c = c + geometric_rotation(m, 2 * math.pi * coeff / 2 ** m, vs,
                                   num_qubits=total, offset=n)
    return c + qc.embed(qc.qft(m, inverse=True), total, n)


@dataclass
class EncodedState:
    state: StateVector
    layout: DictionaryLayout
    poly: PolynomialSpec | None = field(default=None, repr=False)

    def amplitude_grid(self) -> np.ndarray:
        """Amplitudes as a ``(2^n keys, 2^m values)`` array."""
        return self.state.amplitudes.reshape(2 ** self.layout.key_qubits,
                                             2 ** self.layout.value_qubits)

    def value_counts(self, threshold: float = 1e-12) -> dict[int, int]:
        """Number of keys carrying each (signed, if the layout is signed) value."""
        grid = np.abs(self.amplitude_grid()) ** 2 > threshold
        out: dict[int, int] = {}
        for v in range(grid.shape[1]):
            cnt = int(grid[:, v].sum())
            if cnt:
                out[self.layout.to_signed(v)] = cnt
        return dict(sorted(out.items()))


def encode(poly: PolynomialSpec, layout: DictionaryLayout | None = None,
           allow_aliasing: bool = False) -> EncodedState:
    """Prepare ``2^{-n/2} sum_k |k>|f(k)>`` from ``|0>``."""
    layout = layout or layout_for(poly)
    total = layout.total_qubits
    prep = Circuit(total, tuple(qc.h(q) for q in layout.keys))
    state = init_zero(total).run(prep + build_encoder(poly, layout, allow_aliasing))
    return EncodedState(state, layout, poly)
