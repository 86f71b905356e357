import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qoracle import circuit as qc
from qoracle.circuit import Circuit
from qoracle.errors import AliasingError, ValidationError
from qoracle.oracle import (build_canonical_oracle, build_diffusion, build_matching_oracle,
                            build_naive_oracle, reduce_value)
from qoracle.problems import fib_canonical_poly
from qoracle.qdict import DictionaryLayout, encode, evaluate_all, layout_for, parse_polynomial
from qoracle.simcore import StateVector, basis_state, init_zero, run

from conftest import polynomials, random_state
from dense import circuit_matrix


def flipped(oracle_circuit, n):
    """Indices whose sign the (diagonal) oracle flips, read off its dense matrix."""
    u = circuit_matrix(oracle_circuit)
    assert np.allclose(u, np.diag(np.diag(u)), atol=1e-12)
    return set(np.flatnonzero(np.isclose(np.diag(u), -1)).tolist())


def test_naive_oracle_fig11():
    o = build_naive_oracle({5, 6}, 3)
    assert flipped(o.circuit, 3) == {5, 6}
    assert o.marked_predicate(5) and not o.marked_predicate(4)


def test_naive_oracle_fig11_gate_layout():
    o = build_naive_oracle({5, 6}, 3)
    assert o.circuit.ops == (
        qc.x(1), qc.z(2, [0, 1]), qc.x(1),
        qc.x(2), qc.z(2, [0, 1]), qc.x(2),
    )


def test_naive_oracle_empty_and_full(rng):
    psi = random_state(3, rng)
    assert np.max(np.abs(run(build_naive_oracle(set(), 3).circuit, psi).amplitudes
                         - psi.amplitudes)) < 1e-12
    full = run(build_naive_oracle(range(8), 3).circuit, psi)
    assert np.max(np.abs(full.amplitudes + psi.amplitudes)) < 1e-12


def test_naive_oracle_range_check():
    with pytest.raises(ValidationError):
        build_naive_oracle({8}, 3)


def test_matching_oracle_m1():
    o = build_matching_oracle(DictionaryLayout(0, 1), 0)
    assert o.circuit.ops == (qc.x(0), qc.z(0), qc.x(0))


def test_matching_negative_value():
    assert reduce_value(-5, 4) == 0b1011
    o = build_matching_oracle(DictionaryLayout(1, 4), -5)
    assert flipped(o.circuit, 5) == {0b01011, 0b11011}
    with pytest.raises(ValidationError):
        reduce_value(-9, 4)


def test_matching_oracle_on_fib_encoding():
    poly = fib_canonical_poly(3)
    layout = DictionaryLayout(3, 2, signed=False)
    enc = encode(poly, layout)
    o = build_matching_oracle(layout, 0)
    after = run(o.circuit, enc.state)
    diff = np.flatnonzero(np.abs(after.amplitudes - enc.state.amplitudes) > 1e-9)
    assert len(diff) == 5
    assert all(i % 4 == 0 for i in diff)


def _key_flips(poly, layout, match):
    """Sign pattern of the canonical oracle on |k>|0>, one basis key at a time."""
    o = build_canonical_oracle(poly, layout, match)
    out = set()
    for k in range(2 ** layout.key_qubits):
        s = run(o.circuit, basis_state(layout.total_qubits, layout.index(k, 0)))
        a = s.amplitudes[layout.index(k, 0)]
        assert abs(abs(a) - 1) < 1e-9
        if a.real < 0:
            out.add(k)
    return out


def test_canonical_bell_partition():
    poly = parse_polynomial("x0 - x1")
    assert _key_flips(poly, layout_for(poly), 0) == {0b00, 0b11}


def test_canonical_zero_sum():
    poly = parse_polynomial("2*x0 + x1 - 5*x2 + 2*x3")
    assert _key_flips(poly, layout_for(poly), 0) == {0b0000, 0b1111}


def test_canonical_fibonacci():
    poly = fib_canonical_poly(3)
    assert len(_key_flips(poly, layout_for(poly), 0)) == 5
    assert len(_key_flips(poly, layout_for(poly, unsigned=True), 0)) == 5


def test_canonical_aliasing():
    with pytest.raises(AliasingError):
        build_canonical_oracle(fib_canonical_poly(3), DictionaryLayout(3, 2), 0)


def test_diffusion():
    assert build_diffusion([0]).ops == (qc.x(0), qc.z(0), qc.x(0))
    s = run(build_diffusion(range(3)), init_zero(3))
    assert np.allclose(s.amplitudes, -init_zero(3).amplitudes)
    uniform = run(Circuit(3, tuple(qc.h(q) for q in range(3))))
    after = run(build_diffusion(range(3)), uniform)
    want = uniform.amplitudes.copy()
    want[0] *= -1
    assert np.max(np.abs(after.amplitudes - want)) < 1e-12


def test_diffusion_key_only_equals_full_when_value_zero(rng):
    # value register at |0>: reflecting about keys alone or keys+value is the same
    psi = random_state(3, rng)
    full = psi.tensor(basis_state(2, 0))
    a = run(build_diffusion(range(3), 5), full)
    b = run(build_diffusion(range(5), 5), full)
    assert np.max(np.abs(a.amplitudes - b.amplitudes)) < 1e-12


def canonical_vs_naive_error(poly, match, rng):
    layout = layout_for(poly)
    m = layout.value_qubits
    good = set(np.flatnonzero(evaluate_all(poly) % 2 ** m == match % 2 ** m).tolist())
    psi = random_state(layout.key_qubits, rng)
    zero = basis_state(m, 0)
    canon = run(build_canonical_oracle(poly, layout, match).circuit, psi.tensor(zero))
    naive = run(build_naive_oracle(good, layout.key_qubits).circuit, psi).tensor(zero)
    return float(np.max(np.abs(canon.amplitudes - naive.amplitudes)))


@settings(max_examples=80, deadline=None)
@given(polynomials(), st.integers(0, 2 ** 31), st.data())
def test_canonical_equals_naive(poly, seed, data):
    m = layout_for(poly).value_qubits
    match = data.draw(st.integers(-(2 ** (m - 1)), 2 ** (m - 1) - 1))
    assert canonical_vs_naive_error(poly, match, np.random.default_rng(seed)) <= 1e-9


@settings(max_examples=40, deadline=None)
@given(polynomials(max_vars=3), st.integers(0, 2 ** 31))
def test_oracles_are_involutions(poly, seed):
    rng = np.random.default_rng(seed)
    layout = layout_for(poly)
    psi = random_state(layout.total_qubits, rng)
    diagonal = (build_matching_oracle(layout, 1), build_naive_oracle({0, 3}, layout.total_qubits))
    for o in diagonal:
        once = run(o.circuit, psi)
        assert np.max(np.abs(np.abs(once.amplitudes) - np.abs(psi.amplitudes))) < 1e-12
    for o in diagonal + (build_canonical_oracle(poly, layout, 0),):
        twice = run(o.circuit, run(o.circuit, psi))
        assert np.max(np.abs(twice.amplitudes - psi.amplitudes)) < 1e-10


@settings(max_examples=40, deadline=None)
@given(polynomials(max_vars=3), st.integers(0, 2 ** 31))
def test_canonical_phase_only_on_value_zero(poly, seed):
    rng = np.random.default_rng(seed)
    layout = layout_for(poly)
    psi = random_state(layout.key_qubits, rng).tensor(basis_state(layout.value_qubits, 0))
    once = run(build_canonical_oracle(poly, layout, 0).circuit, psi)
    assert np.max(np.abs(np.abs(once.amplitudes) - np.abs(psi.amplitudes))) < 1e-12
