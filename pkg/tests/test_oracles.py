import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st

from monocirc.baselines import gen_convolution, gen_matmul
from monocirc.circuit_ir import AND, Circuit, CircuitBuilder, Gate
from monocirc.encodings import antichain_a0, antichain_a1
from monocirc.oracles import (VerificationError, check_completion, conv_operator, conv_spec,
                              matmul_operator, matmul_spec, perm_operator, perm_spec,
                              shift_operator, shift_permutation, shift_spec, verify)
from monocirc.perm_gen import batcher_network, gen_perm_sortnet
from monocirc.shift_gen import gen_shift


def test_shift_spec_examples():
    assert shift_spec([1, 0, 0, 0], 1).tolist() == [0, 1, 0, 0]
    x = np.array([1, 1, 0, 1])
    assert shift_spec(x, 0).tolist() == x.tolist()
    assert shift_spec(shift_spec(x, 1), 3).tolist() == x.tolist()
    with pytest.raises(ValueError):
        shift_spec(x, 4)


def test_shift_spec_moves_element_i_to_i_plus_k():
    labels = np.eye(4, dtype=int)  # column i marks element i
    out = shift_spec(labels, 1)
    # (x0, x1, x2, x3) >> 1 = (x3, x0, x1, x2)
    assert [int(np.argmax(out[:, t])) for t in range(4)] == [3, 0, 1, 2]


@given(st.lists(st.integers(0, 1), min_size=1, max_size=9))
def test_shift_n_times_is_identity(x):
    v = np.array(x)
    for _ in range(len(x)):
        v = shift_spec(v, 1 % len(x))
    assert v.tolist() == x


def test_perm_spec_examples():
    x = np.eye(3, dtype=int)  # a, b, c as unit columns
    out = perm_spec(x, (2, 0, 1))
    assert [int(np.argmax(out[:, t])) for t in range(3)] == [2, 0, 1]
    assert perm_spec([1, 0, 1], (0, 1, 2)).tolist() == [1, 0, 1]
    with pytest.raises(ValueError):
        perm_spec([1, 0, 1], (0, 0, 1))


def test_shift_is_a_permutation():
    for k in range(4):
        for x in itertools.product((0, 1), repeat=4):
            assert perm_spec(x, shift_permutation(4, k)).tolist() == shift_spec(x, k).tolist()


@given(st.permutations(list(range(6))), st.lists(st.integers(0, 1), min_size=6, max_size=6))
def test_perm_inverse_composition(perm, x):
    inverse = [0] * 6
    for t, p in enumerate(perm):
        inverse[p] = t
    assert perm_spec(perm_spec(x, inverse), perm).tolist() == x


def test_conv_and_matmul_examples():
    assert conv_spec([1, 0, 0, 0], [1, 0, 0, 0]).tolist() == [1, 0, 0, 0]
    assert conv_spec([1, 1, 0], [0, 1, 1]).tolist() == [1, 1, 1]
    assert matmul_spec(np.ones((2, 3)), np.zeros((3, 3))).tolist() == [[0] * 3] * 2
    with pytest.raises(ValueError):
        matmul_spec(np.ones((2, 3)), np.zeros((2, 2)))
    with pytest.raises(ValueError):
        conv_spec([1, 0], [1])


def test_verify_shift_case_count():
    a = antichain_a0(4)
    report = verify(gen_shift(4, 1, a), shift_operator(a))
    assert report.passed and report.cases == 2 ** 4 * 4


def test_verify_matmul_total_domain():
    report = verify(gen_matmul(1, 3), matmul_operator(1, 3))
    assert report.passed and report.cases == 2 ** (3 + 9)


def test_verify_conv_total_domain():
    assert verify(gen_convolution(4), conv_operator(4)).passed


def test_verify_catches_swapped_outputs():
    a = antichain_a1(3)
    c = gen_shift(3, 1, a)
    out = list(c.outputs)
    out[0], out[1] = out[1], out[0]
    report = verify(c.with_outputs(out), shift_operator(a))
    assert report.status == "fail"
    cx = report.counterexample
    assert cx["output"] != cx["expected"]


def test_verify_random_reproducible():
    net = batcher_network(6)
    spec = perm_operator(6, 1, "pi_comparator", net)
    c = gen_perm_sortnet(6, 1, net)
    r1 = verify(c, spec, "random", trials=500, seed=7)
    r2 = verify(c, spec, "random", trials=500, seed=7)
    assert r1.passed and r1.to_dict() == r2.to_dict() and r1.cases == 500


def test_verify_errors():
    a = antichain_a1(3)
    with pytest.raises(VerificationError, match="inputs"):
        verify(gen_shift(4, 1, antichain_a1(4)), shift_operator(a))
    with pytest.raises(VerificationError, match="cap"):
        verify(gen_shift(3, 1, a), shift_operator(a), cap=10)
    with pytest.raises(VerificationError):
        verify(gen_shift(3, 1, a), shift_operator(a), mode="symbolic")


def test_verify_is_deterministic_and_counts_exactly():
    a = antichain_a1(5)
    c = gen_shift(5, 2, a)
    r1, r2 = verify(c, shift_operator(a, 2)), verify(c, shift_operator(a, 2))
    assert r1.to_dict() == r2.to_dict()
    assert r1.cases == 2 ** 10 * 5


@pytest.mark.parametrize("n", range(1, 6))
def test_completion_on_generated_circuits(n):
    conv = check_completion(gen_convolution(n), n)
    assert conv.passed and conv.realized_g == [0] * n
    shift = check_completion(gen_shift(n, 1, antichain_a1(n)), n)
    assert shift.passed, shift.failures
    # with no mux layers the single output is the wire x0, i.e. the conjunction
    assert shift.realized_g == ([1] if n == 1 else [0] * n)


def test_completion_flags_partial_variable():
    # output 0 at Y=0 is x0 alone: neither 0 nor x0 & x1
    n = 2
    conv = gen_convolution(n)
    b = CircuitBuilder.from_circuit(conv)
    leak = b.add_or(conv.outputs[0], 0)
    c = b.build([leak, conv.outputs[1]])
    report = check_completion(c, n)
    assert not report.passed
    assert any("output 0" in f for f in report.failures)


def test_completion_accepts_conjunction_term():
    n = 3
    conv = gen_convolution(n)
    b = CircuitBuilder.from_circuit(conv)
    full = b.add_and(b.add_and(0, 1), 2)
    c = b.build([b.add_or(conv.outputs[0], full), conv.outputs[1], conv.outputs[2]])
    report = check_completion(c, n)
    assert report.passed and report.realized_g == [1, 0, 0]


def test_completion_too_large():
    with pytest.raises(VerificationError, match="random"):
        check_completion(gen_convolution(6), 6, cap=100)


def _monotone_functions(n):
    points = list(itertools.product((0, 1), repeat=n))
    le = [[all(a <= b for a, b in zip(u, v)) for v in points] for u in points]
    for table in itertools.product((0, 1), repeat=len(points)):
        if all(table[i] <= table[j] for i in range(len(points)) for j in range(len(points)) if le[i][j]):
            yield points, table


@pytest.mark.parametrize("n", [1, 2, 3])
def test_functions_below_conjunction_are_zero_or_conjunction(n):
    for points, table in _monotone_functions(n):
        conj = [int(all(p)) for p in points]
        if all(t <= c for t, c in zip(table, conj)):
            assert list(table) in ([0] * len(points), conj)
