"""Preset problems: Fibonacci strings (three encodings) and zero-sum subsets.

Fibonacci indexing follows string length: ``F(n)`` counts binary strings of
length ``n`` with no two adjacent ones, so ``F(1) = 2``, ``F(2) = 3``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from . import circuit as qc
from .circuit import Circuit
from .errors import ResourceError, ValidationError
from .qdict import PolynomialSpec, evaluate_all

METHODS = ("heuristic", "naive", "canonical")
MAX_CLASSICAL_VARS = 24


def fibonacci(n: int) -> int:
    """Number of length-``n`` binary strings without consecutive ones."""
    if n < 1:
        raise ValidationError("n must be >= 1")
    a, b = 2, 3
    for _ in range(n - 1):
        a, b = b, a + b
    return a


@dataclass(frozen=True)
class FibonacciInstance:
    n: int
    method: str = "canonical"

    def __post_init__(self):
        if self.n < 1:
            raise ValidationError("n must be >= 1")
        if self.method not in METHODS:
            raise ValidationError(f"method must be one of {METHODS}")


@dataclass(frozen=True)
class SubsetSumInstance:
    multiset: tuple[int, ...]
    target: int = 0

    def __post_init__(self):
        object.__setattr__(self, "multiset", tuple(int(a) for a in self.multiset))
        if not self.multiset:
            raise ValidationError("multiset must be nonempty")


def bell_circuit() -> Circuit:
    return Circuit(2, (qc.h(0), qc.x(1, [0])))


def fib_heuristic_circuit(n: int) -> Circuit:
    """Chain of ``R_y`` rotations whose support is exactly the strings with no ``11``.

    Qubit ``i`` is put in superposition, then rotated back to ``|0>`` when
    qubit ``i-1`` is 1.
    """
    if n < 1:
        raise ValidationError("n must be >= 1")
    ops = [qc.ry(math.pi / 2, 0)]
    for i in range(1, n):
        ops += [qc.ry(math.pi / 2, i), qc.ry(-math.pi / 2, i, [i - 1])]
    return Circuit(n, tuple(ops))


def fib_naive_predicate(n: int) -> Callable[[int], bool]:
    if n < 1:
        raise ValidationError("n must be >= 1")

    def predicate(k: int) -> bool:
        return k & k >> 1 == 0

    return predicate


def fib_good_set(n: int) -> set[int]:
    pred = fib_naive_predicate(n)
    return {k for k in range(2 ** n) if pred(k)}


def fib_canonical_poly(n: int) -> PolynomialSpec:
    """``sum_i x_i x_{i+1}``: number of adjacent ``11`` pairs. Zero exactly on Fibonacci strings."""
    if n < 1:
        raise ValidationError("n must be >= 1")
    return PolynomialSpec(n, tuple((1, (i, i + 1)) for i in range(n - 1)))


def subset_sum_poly(instance: SubsetSumInstance | Sequence[int], target: int = 0) -> PolynomialSpec:
    """``sum_i a_i x_i - target``; its zero set is the subsets summing to ``target``."""
    if not isinstance(instance, SubsetSumInstance):
        instance = SubsetSumInstance(tuple(instance), target)
    terms = [(a, (i,)) for i, a in enumerate(instance.multiset)]
    if instance.target:
        terms.append((-instance.target, ()))
    return PolynomialSpec(len(instance.multiset), tuple(terms))


def classical_count(poly: PolynomialSpec, match_value: int) -> int:
    """Exact brute-force count of keys with ``f(k) == match_value`` (no modular reduction)."""
    if poly.num_vars > MAX_CLASSICAL_VARS:
        raise ResourceError(f"enumeration limited to {MAX_CLASSICAL_VARS} variables")
    return int(np.count_nonzero(evaluate_all(poly) == match_value))


def zero_set(poly: PolynomialSpec, match_value: int = 0) -> set[int]:
    if poly.num_vars > MAX_CLASSICAL_VARS:
        raise ResourceError(f"enumeration limited to {MAX_CLASSICAL_VARS} variables")
    return set(np.flatnonzero(evaluate_all(poly) == match_value).tolist())
