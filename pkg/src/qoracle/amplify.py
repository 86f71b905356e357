"""Generalized Grover iterate, Grover search, Amplitude Estimation, Quantum Counting.

Sign convention. The default iterate is ``G = A D A^dagger O`` without the
leading minus. Its eigenphases are those of ``-G`` shifted by pi, so an
outcome ``y`` of ``m`` result qubits maps to the estimate
``cos^2(pi y / 2^m)``. ``sign="minus"`` builds ``-G`` and maps with
``sin^2(pi y / 2^m)``. Both give the same distribution over estimates.

Phase estimation layout: the main register comes first, then ``m`` result
qubits. The result qubit of weight ``2^k`` (qubit ``main + m - 1 - k`` in the
MSB-first numbering) controls ``G^(2^k)``, so the register reads ``y``
directly after the inverse QFT.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from . import circuit as qc
from .circuit import Circuit
from .errors import ResourceError, ValidationError
from .oracle import CompiledOracle, build_canonical_oracle, build_diffusion, build_naive_oracle
from .qdict import PolynomialSpec, build_encoder, layout_for
from .simcore import MAX_QUBITS, StateVector, init_zero, marginal, sample

MAX_RESULT_QUBITS = 8
SIGNS = ("plus", "minus")
# probabilities closer than this count as a tie when picking the modal outcome
TIE_TOL = 1e-12


@dataclass(frozen=True)
class GroverConfig:
    a_op: Circuit
    oracle: CompiledOracle
    diffusion_range: tuple[int, ...]
    sign: str = "plus"

    def __post_init__(self):
        object.__setattr__(self, "diffusion_range", tuple(self.diffusion_range))
        if self.sign not in SIGNS:
            raise ValidationError(f"sign must be one of {SIGNS}")
        if self.a_op.num_qubits != self.oracle.num_qubits:
            raise ValidationError("state preparation and oracle act on different registers")
        if not self.diffusion_range or max(self.diffusion_range) >= self.a_op.num_qubits:
            raise ValidationError("diffusion range does not fit the register")

    @property
    def num_qubits(self) -> int:
        return self.a_op.num_qubits

    @property
    def search_space(self) -> int:
        return 2 ** len(self.diffusion_range)


def uniform_prep(num_keys: int, num_qubits: int | None = None) -> Circuit:
    """``H`` on qubits ``0 .. num_keys-1``."""
    return Circuit(num_qubits or num_keys, tuple(qc.h(q) for q in range(num_keys)))


def grover_iterate(config: GroverConfig) -> Circuit:
    """``G = A D A^dagger O``, applied right to left (``O`` first)."""
    n = config.num_qubits
    g = qc.sequence(config.oracle.circuit, qc.dagger(config.a_op),
                    build_diffusion(config.diffusion_range, n), config.a_op)
    if config.sign == "minus":
        g = g + qc.negate(config.diffusion_range[0], n)
    return g


def marked_probability(state: StateVector, oracle: CompiledOracle) -> float:
    """Probability that the predicate register holds a marked index."""
    dist = marginal(state, oracle.predicate_qubits)
    mask = np.fromiter((bool(oracle.marked_predicate(i)) for i in range(dist.size)),
                       dtype=bool, count=dist.size)
    return float(dist[mask].sum())


def optimal_iterations(search_space: int, num_solutions: int) -> int:
    """``floor(pi/4 * sqrt(|S| / |E|))``."""
    if num_solutions < 1:
        raise ValidationError("number of solutions must be >= 1 to pick an iteration count")
    if num_solutions > search_space:
        raise ValidationError("more solutions than states")
    return math.floor(math.pi / 4 * math.sqrt(search_space / num_solutions))


@dataclass
class SearchResult:
    circuit: Circuit
    iterations: int
    success_probability: float
    state: StateVector
    counts: dict[int, int] = field(default_factory=dict)


def grover_search(config: GroverConfig, num_solutions: int, finish: Circuit | None = None,
                  shots: int = 1024, seed: int = 7) -> SearchResult:
    """Run ``finish G^k A`` with the textbook ``k`` and sample the result.

    ``finish`` is the encoder ``B`` for canonical oracles so measurements show
    (key, value) pairs. ``success_probability`` is taken before ``finish``;
    ``B`` only touches the value register, so the key marginal is unchanged.
    """
    k = optimal_iterations(config.search_space, num_solutions)
    body = config.a_op + qc.power(grover_iterate(config), k)
    state = init_zero(config.num_qubits).run(body)
    p = marked_probability(state, config.oracle)
    full = body
    if finish is not None:
        state.run(finish)
        full = body + finish
    return SearchResult(full, k, p, state, sample(state, shots, seed))


def estimate_grid(m_result: int, sign: str = "plus") -> np.ndarray:
    """Probability estimate for every outcome ``y`` of an ``m_result``-qubit register."""
    angles = np.pi * np.arange(2 ** m_result) / 2 ** m_result
    return np.cos(angles) ** 2 if sign == "plus" else np.sin(angles) ** 2


def _modal(dist: np.ndarray) -> int:
    return int(np.flatnonzero(dist >= dist.max() - TIE_TOL)[0])


@dataclass
class EstimateResult:
    m_result: int
    measured_y: int
    p_estimate: float
    count_estimate: float
    exact_distribution: np.ndarray
    sign: str = "plus"
    num_keys: int = 0
    counts: dict[int, int] | None = None

    @property
    def rounded_count(self) -> int:
        return int(round(self.count_estimate))

    def estimate_distribution(self, digits: int = 12) -> dict[float, float]:
        """Exact probability of each distinct estimate value (folds ``y`` and its mirror)."""
        out: dict[float, float] = {}
        for est, p in zip(estimate_grid(self.m_result, self.sign), self.exact_distribution):
            key = round(float(est), digits)
            out[key] = out.get(key, 0.0) + float(p)
        return dict(sorted(out.items()))

    def to_dict(self) -> dict:
        return {
            "y": self.measured_y,
            "m_result": self.m_result,
            "p_estimate": self.p_estimate,
            "count_estimate": self.count_estimate,
            "distribution": [float(p) for p in self.exact_distribution],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_json(cls, text: str, sign: str = "plus", num_keys: int = 0) -> EstimateResult:
        d = json.loads(text)
        return cls(int(d["m_result"]), int(d["y"]), float(d["p_estimate"]),
                   float(d["count_estimate"]), np.array(d["distribution"], dtype=float),
                   sign, num_keys)


def ae_circuit(config: GroverConfig, m_result: int, iterate: Circuit | None = None) -> Circuit:
    """``A`` on the main register, ``H`` on results, controlled powers, inverse QFT."""
    main = config.num_qubits
    total = main + m_result
    g = grover_iterate(config) if iterate is None else iterate
    c = qc.embed(config.a_op, total)
    c = c.append(*(qc.h(main + j) for j in range(m_result)))
    for k in range(m_result):
        ctl = main + m_result - 1 - k
        c = c + qc.controlled(qc.embed(qc.power(g, 2 ** k), total), ctl)
    return c + qc.embed(qc.qft(m_result, inverse=True), total, main)


def amplitude_estimation(config: GroverConfig, m_result: int, shots: int | None = None,
                         seed: int = 7, iterate: Circuit | None = None) -> EstimateResult:
    """Estimate the marked probability of ``A|0>``.

    The modal ``y`` comes from the exact outcome distribution unless
    ``shots`` is given, in which case it is the most frequent sampled
    outcome. Ties go to the smaller ``y``. ``iterate`` replaces ``G`` (used
    to check control wiring with an identity).
    """
    if not 1 <= m_result <= MAX_RESULT_QUBITS:
        raise ResourceError(f"m_result must be in [1, {MAX_RESULT_QUBITS}]")
    total = config.num_qubits + m_result
    if total > MAX_QUBITS:
        raise ResourceError(f"{total} qubits exceeds the {MAX_QUBITS}-qubit budget")
    state = init_zero(total).run(ae_circuit(config, m_result, iterate))
    dist = marginal(state, range(config.num_qubits, total))
    counts = None
    if shots is None:
        y = _modal(dist)
    else:
        counts = sample(StateVector(m_result, np.sqrt(dist).astype(complex)), shots, seed)
        top = max(counts.values())
        y = min(k for k, v in counts.items() if v == top)
    p = float(estimate_grid(m_result, config.sign)[y])
    n = len(config.diffusion_range)
    return EstimateResult(m_result, y, p, p * 2 ** n, dist, config.sign, n, counts)


def best_two_mass(result: EstimateResult, true_p: float) -> float:
    """Exact probability of landing on one of the two grid estimates bracketing ``true_p``.

    Grid points are indexed by the folded outcome ``j = min(s, M - s)`` with
    ``s`` the outcome in the ``sin^2`` convention; estimates increase with
    ``j``, so the bracket is ``floor`` and ``floor + 1`` of ``M asin(sqrt p) / pi``.
    """
    m = result.m_result
    big = 2 ** m
    pos = big * math.asin(math.sqrt(min(max(true_p, 0.0), 1.0))) / math.pi
    lo = min(math.floor(pos), big // 2)
    hi = lo + 1 if lo < big // 2 else lo - 1
    ys = np.arange(big)
    s = ys if result.sign == "minus" else (ys + big // 2) % big
    folded = np.minimum(s, big - s)
    mask = (folded == lo) | (folded == hi)
    return float(result.exact_distribution[mask].sum())


def canonical_config(poly: PolynomialSpec, match_value: int, value_qubits: int | None = None,
                     unsigned: bool = False, sign: str = "plus",
                     allow_aliasing: bool = False) -> tuple[GroverConfig, Circuit]:
    """Grover setup for ``f(k) == match_value``: uniform keys, canonical oracle.

    Returns the config and the encoder ``B`` (for ``B G^r A`` searches).
    """
    layout = layout_for(poly, value_qubits, unsigned)
    oracle = build_canonical_oracle(poly, layout, match_value, allow_aliasing)
    a_op = uniform_prep(layout.key_qubits, layout.total_qubits)
    cfg = GroverConfig(a_op, oracle, tuple(layout.keys), sign)
    return cfg, build_encoder(poly, layout, allow_aliasing=True)


def naive_config(good_set, n: int, a_op: Circuit | None = None, sign: str = "plus") -> GroverConfig:
    a_op = uniform_prep(n) if a_op is None else a_op
    return GroverConfig(a_op, build_naive_oracle(good_set, n), tuple(range(n)), sign)


def quantum_count(poly: PolynomialSpec, match_value: int, m_result: int,
                  value_qubits: int | None = None, unsigned: bool = False,
                  sign: str = "plus", shots: int | None = None, seed: int = 7) -> EstimateResult:
    """Estimate ``|{k : f(k) == match_value}|`` by amplitude estimation on uniform keys."""
    cfg, _ = canonical_config(poly, match_value, value_qubits, unsigned, sign)
    if cfg.num_qubits + m_result > MAX_QUBITS:
        raise ResourceError("key + value + result qubits exceed the budget")
    return amplitude_estimation(cfg, m_result, shots, seed)
