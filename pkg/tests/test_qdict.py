import math
import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qoracle import circuit as qc
from qoracle.circuit import Circuit, dagger, embed, qft
from qoracle.errors import AliasingError, ParseError, ValidationError
from qoracle.qdict import (DictionaryLayout, PolynomialSpec, auto_size, build_encoder, encode,
                           evaluate, evaluate_all, geometric_rotation, key_bits, layout_for,
                           parse_polynomial, to_text)
from qoracle.simcore import init_zero, run

from conftest import polynomials, random_state

EQ3 = "2*x0 + x1 - 5*x2 + 2*x3"


def test_parse_eq3():
    p = parse_polynomial(EQ3)
    assert p.num_vars == 4
    assert sorted(p.terms) == sorted([(2, (0,)), (1, (1,)), (-5, (2,)), (2, (3,))])


def test_parse_bell_partition():
    assert parse_polynomial("x0 - x1").terms == ((1, (0,)), (-1, (1,)))


def test_parse_merges():
    assert parse_polynomial("x0*x1 + x1*x0").terms == ((2, (0, 1)),)
    assert parse_polynomial("x0 - x0").terms == ()


@pytest.mark.parametrize("text", ["3", "-x2", "x0*x1 + x1*x2", "-3*x0*x2 + 7 - x1", "0"])
def test_parse_round_trip(text):
    p = parse_polynomial(text, 3)
    assert parse_polynomial(to_text(p), 3) == p
    assert to_text(parse_polynomial(to_text(p), 3)) == to_text(p)


@pytest.mark.parametrize("text,pos", [("x0 +* x1", 4), ("x0 x1", 3), ("", 0), ("2*y1", 2),
                                      ("x0*x0", 3), ("x0 +", 4)])
def test_parse_errors(text, pos):
    with pytest.raises(ParseError) as err:
        parse_polynomial(text)
    assert err.value.position == pos


def test_parse_num_vars_override():
    assert parse_polynomial("x0", 3).num_vars == 3
    with pytest.raises(ValidationError):
        parse_polynomial("x4", 3)


def test_json_round_trip():
    p = parse_polynomial("x0*x1 - 3*x2 + 4")
    assert PolynomialSpec.from_json(p.to_json()) == p


def test_evaluate():
    assert evaluate(parse_polynomial(EQ3), (1, 1, 1, 1)) == 0
    assert evaluate(parse_polynomial("x0*x1 + x1*x2"), (1, 1, 0)) == 1
    assert evaluate(parse_polynomial("x0*x1 - 3", 2), (0, 0)) == -3


@settings(max_examples=100, deadline=None)
@given(polynomials())
def test_evaluate_all_matches_evaluate(poly):
    vals = evaluate_all(poly)
    for k in range(2 ** poly.num_vars):
        assert vals[k] == evaluate(poly, key_bits(k, poly.num_vars))


def test_auto_size():
    assert auto_size(parse_polynomial(EQ3)) == 4
    assert auto_size(parse_polynomial("x0*x1 + x1*x2")) == 3
    assert auto_size(parse_polynomial("x0*x1 + x1*x2"), unsigned=True) == 2
    assert auto_size(parse_polynomial("0")) == 1
    assert auto_size(parse_polynomial("-1", 1)) == 1
    assert auto_size(parse_polynomial("1", 1)) == 2


@settings(max_examples=200, deadline=None)
@given(polynomials())
def test_auto_size_is_minimal(poly):
    lo, hi = poly.bounds()
    m = auto_size(poly)
    assert -(2 ** (m - 1)) <= lo and hi <= 2 ** (m - 1) - 1
    if m > 1:
        assert not (-(2 ** (m - 2)) <= lo and hi <= 2 ** (m - 2) - 1)


def _geometric_then_iqft(m, theta):
    c = Circuit(m, tuple(qc.h(q) for q in range(m)))
    c = c + geometric_rotation(m, theta) + qft(m, inverse=True)
    return run(c)


def test_geometric_rotation_single():
    assert geometric_rotation(1, math.pi).ops == (qc.phase(math.pi, 0),)


def test_geometric_rotation_ladder():
    c = geometric_rotation(3, 0.1)
    assert [(op.target, op.theta) for op in c.ops] == [(2, 0.1), (1, 0.2), (0, 0.4)]


def test_geometric_sequence_state():
    m, theta = 3, 0.37
    c = Circuit(m, tuple(qc.h(q) for q in range(m))) + geometric_rotation(m, theta)
    want = np.exp(1j * theta * np.arange(2 ** m)) / math.sqrt(2 ** m)
    assert np.max(np.abs(run(c).amplitudes - want)) < 1e-12


@pytest.mark.parametrize("k,expect", [(3, 3), (-1, 7), (-4, 4), (0, 0)])
def test_integer_encoding_m3(k, expect):
    s = _geometric_then_iqft(3, 2 * math.pi * k / 8)
    assert abs(s.amplitudes[expect]) ** 2 == pytest.approx(1.0, abs=1e-9)


def _encoded_table(poly, layout):
    enc = encode(poly, layout)
    grid = enc.amplitude_grid()
    return {k: set(np.flatnonzero(np.abs(grid[k]) > 1e-6).tolist()) for k in range(grid.shape[0])}


def test_bell_partition_encoding():
    table = _encoded_table(parse_polynomial("x0 - x1"), DictionaryLayout(2, 2))
    assert table == {0b00: {0}, 0b11: {0}, 0b01: {3}, 0b10: {1}}


def test_zero_sum_encoding():
    table = _encoded_table(parse_polynomial(EQ3), DictionaryLayout(4, 4))
    assert {k for k, v in table.items() if v == {0}} == {0b0000, 0b1111}


def test_fibonacci_encoding_unsigned():
    table = _encoded_table(parse_polynomial("x0*x1 + x1*x2"), DictionaryLayout(3, 2, signed=False))
    assert sum(v == {0} for v in table.values()) == 5


def test_aliasing_rejected():
    poly = parse_polynomial(EQ3)
    with pytest.raises(AliasingError):
        build_encoder(poly, DictionaryLayout(4, 3))
    build_encoder(poly, DictionaryLayout(4, 3), allow_aliasing=True)
    with pytest.raises(AliasingError):
        build_encoder(parse_polynomial("x0*x1 + x1*x2"), DictionaryLayout(3, 2))


def test_encoder_gate_count():
    poly = parse_polynomial(EQ3)
    b = build_encoder(poly, DictionaryLayout(4, 4))
    phases = [op for op in b.ops if op.kind == "PHASE" and op.controls & set(range(4))]
    assert len(phases) == 4 * 4


def test_constant_term_is_uncontrolled():
    b = build_encoder(parse_polynomial("x0 + 3", 1), DictionaryLayout(1, 4))
    free = [op for op in b.ops if op.kind == "PHASE" and not op.controls]
    assert [op.target for op in free] == [4, 3, 2, 1]


@settings(max_examples=120, deadline=None)
@given(polynomials())
def test_encoder_correctness(poly):
    layout = layout_for(poly)
    n, m = layout.key_qubits, layout.value_qubits
    grid = encode(poly, layout).amplitude_grid()
    vals = evaluate_all(poly) % 2 ** m
    expected = np.zeros_like(grid)
    expected[np.arange(2 ** n), vals] = 1
    # exact value placement and uniform 2^{-n/2} magnitude
    assert np.max(np.abs(np.abs(grid) - expected / math.sqrt(2 ** n))) < 1e-9
    assert np.allclose((np.abs(grid) ** 2).sum(axis=1), 2.0 ** -n, atol=1e-9)


@settings(max_examples=60, deadline=None)
@given(polynomials(), st.randoms(use_true_random=False))
def test_term_order_independence(poly, rnd: random.Random):
    layout = layout_for(poly)
    terms = list(poly.terms)
    rnd.shuffle(terms)
    n, total = layout.key_qubits, layout.total_qubits
    b1 = build_encoder(poly, layout)
    # rebuild the rotation stage by hand in the shuffled order
    ops = [qc.h(q) for q in layout.values]
    for c, vs in terms:
        ops += geometric_rotation(layout.value_qubits, 2 * math.pi * c / 2 ** layout.value_qubits,
                                  vs, num_qubits=total, offset=n).ops
    b2 = Circuit(total, tuple(ops)) + embed(qft(layout.value_qubits, inverse=True), total, n)
    prep = Circuit(total, tuple(qc.h(q) for q in layout.keys))
    s1, s2 = run(prep + b1), run(prep + b2)
    assert np.max(np.abs(s1.amplitudes - s2.amplitudes)) < 1e-9


@settings(max_examples=40, deadline=None)
@given(polynomials(), st.integers(0, 2 ** 31))
def test_encoder_dagger_roundtrip(poly, seed):
    layout = layout_for(poly)
    b = build_encoder(poly, layout)
    psi = random_state(layout.total_qubits, np.random.default_rng(seed))
    back = run(dagger(b), run(b, psi))
    assert np.max(np.abs(back.amplitudes - psi.amplitudes)) < 1e-10


def test_value_counts():
    enc = encode(parse_polynomial(EQ3))
    counts = enc.value_counts()
    assert counts[0] == 2
    assert sum(counts.values()) == 16
