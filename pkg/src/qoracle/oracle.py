"""Phase oracles: naive predicate oracles, value matching, canonical ``B^dagger O_B B``, diffusion.

Every multi-controlled Z here targets the last qubit of its range with the
rest as controls. Z is symmetric in control and target, so the choice only
pins the text dump.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

import numpy as np

from . import circuit as qc
from .circuit import Circuit
from .errors import ValidationError
from .qdict import DictionaryLayout, PolynomialSpec, build_encoder, check_fits, evaluate_all

# keys up to this width get a precomputed marked set
PRECOMPUTE_MAX_KEYS = 20


@dataclass(frozen=True)
class CompiledOracle:
    """A phase oracle plus the classical predicate it is meant to implement.

    ``marked_predicate`` takes the index of the register named by
    ``predicate_qubits`` (MSB-first over those qubits) and says whether its
    sign gets flipped.
    """

    circuit: Circuit
    acts_on: tuple[int, ...]
    marked_predicate: Callable[[int], bool]
    predicate_qubits: tuple[int, ...] = ()

    @property
    def num_qubits(self) -> int:
        return self.circuit.num_qubits


def _match_basis(bits_of: Sequence[int], qubits: Sequence[int], num_qubits: int) -> Circuit:
    """Flip the sign of the basis state whose ``qubits`` read ``bits_of``."""
    flips = tuple(qc.x(q) for q, b in zip(qubits, bits_of) if not b)
    mcz = qc.z(qubits[-1], qubits[:-1])
    return Circuit(num_qubits, flips + (mcz,) + flips)


def _bits(value: int, width: int) -> list[int]:
    return [(value >> (width - 1 - i)) & 1 for i in range(width)]


def build_naive_oracle(good_set: Iterable[int], n: int, num_qubits: int | None = None,
                       offset: int = 0) -> CompiledOracle:
    """One X-conjugated multi-controlled Z per good state.

    The oracle acts on qubits ``offset .. offset+n-1`` of a ``num_qubits``
    circuit (default ``n``). Cost is linear in ``len(good_set)``.
    """
    good = frozenset(int(s) for s in good_set)
    if any(not 0 <= s < 2 ** n for s in good):
        raise ValidationError(f"good states must lie in [0, {2 ** n})")
    total = n + offset if num_qubits is None else num_qubits
    qubits = tuple(range(offset, offset + n))
    c = Circuit(total)
    for s in sorted(good):
        c = c + _match_basis(_bits(s, n), qubits, total)
    return CompiledOracle(c, qubits, good.__contains__, qubits)


def reduce_value(value: int, m: int) -> int:
    """Two's-complement reduction of ``value`` into ``m`` bits."""
    if not -(2 ** (m - 1)) <= value < 2 ** m:
        raise ValidationError(f"match value {value} not representable in {m} bits")
    return value % 2 ** m


def build_matching_oracle(layout: DictionaryLayout, match_value: int) -> CompiledOracle:
    """``O_B``: flip every state whose value register reads ``match_value`` mod ``2^m``."""
    m = layout.value_qubits
    target = reduce_value(match_value, m)
    values = tuple(layout.values)
    c = _match_basis(_bits(target, m), values, layout.total_qubits)

    def pred(index: int) -> bool:
        return index % 2 ** m == target

    return CompiledOracle(c, values, pred, tuple(range(layout.total_qubits)))


def build_canonical_oracle(poly: PolynomialSpec, layout: DictionaryLayout, match_value: int,
                           allow_aliasing: bool = False) -> CompiledOracle:
    """``O = B^dagger O_B B`` on keys + value register.

    With the value register in ``|0>``, flips key ``k`` exactly when
    ``f(k) == match_value (mod 2^m)`` and leaves the value register at ``|0>``.
    """
    if not allow_aliasing:
        check_fits(poly, layout)
    b = build_encoder(poly, layout, allow_aliasing=True)
    ob = build_matching_oracle(layout, match_value)
    c = qc.sequence(b, ob.circuit, qc.dagger(b))
    m = layout.value_qubits
    target = reduce_value(match_value, m)

    if layout.key_qubits <= PRECOMPUTE_MAX_KEYS:
        marked = frozenset(np.flatnonzero(evaluate_all(poly) % 2 ** m == target).tolist())
        pred = marked.__contains__
    else:
        from .qdict import evaluate, key_bits

        def pred(k: int) -> bool:
            return evaluate(poly, key_bits(k, layout.key_qubits)) % 2 ** m == target

    return CompiledOracle(c, tuple(range(layout.total_qubits)), pred, tuple(layout.keys))


def build_diffusion(qubits: Iterable[int], num_qubits: int | None = None) -> Circuit:
    """``D``: negate the amplitude of ``|0...0>`` on ``qubits``, nothing else."""
    qubits = tuple(qubits)
    if not qubits:
        raise ValidationError("diffusion needs a nonempty qubit range")
    total = max(qubits) + 1 if num_qubits is None else num_qubits
    return _match_basis([0] * len(qubits), qubits, total)
