import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st

from monocirc.circuit_ir import evaluate_batch, validate
from monocirc.encodings import (Antichain, antichain_a0, antichain_a1, antichain_from_dict,
                                doubling, encode_shift, is_antichain, monomial_circuit)


def test_a0_length():
    assert antichain_a0(8).m == 8
    assert antichain_a0(4).m == 6


def test_a0_codes_lsb_first():
    a = antichain_a0(4)
    assert a.codes[0] == (0, 0, 0, 1, 1, 1)
    assert a.codes[2][:3] == (0, 1, 0)
    assert a.codes[2][3:] == (1, 0, 1)


def test_a1_codes():
    assert antichain_a1(3).codes == ((1, 0, 0), (0, 1, 0), (0, 0, 1))
    assert antichain_a1(1).codes == ((1,),)
    assert is_antichain(antichain_a1(5).codes)


def test_is_antichain_small_cases():
    assert is_antichain([(1, 0), (0, 1)])
    assert not is_antichain([(1, 0), (1, 1)])
    assert not is_antichain([(1, 0), (1, 0)])
    with pytest.raises(ValueError):
        is_antichain([(1, 0), (1,)])


def _brute_incomparable(u, v):
    le = all(a <= b for a, b in zip(u, v))
    ge = all(a >= b for a, b in zip(u, v))
    return not le and not ge


def test_doubled_distinct_words_are_incomparable_bruteforce():
    words = list(itertools.product((0, 1), repeat=2))
    for u, v in itertools.combinations(words, 2):
        assert _brute_incomparable(doubling(u), doubling(v))
    assert is_antichain([doubling(w) for w in words])


@pytest.mark.parametrize("n", list(range(1, 65)))
def test_constructed_antichains_are_antichains(n):
    assert is_antichain(antichain_a0(n).codes)
    assert is_antichain(antichain_a1(n).codes)


def test_is_antichain_matches_bruteforce():
    gen = np.random.default_rng(3)
    for _ in range(200):
        codes = [tuple(gen.integers(0, 2, 4)) for _ in range(gen.integers(1, 6))]
        brute = all(_brute_incomparable(u, v) for u, v in itertools.combinations(codes, 2))
        assert is_antichain(codes) == brute


def test_doubling_examples():
    assert doubling((1, 0)) == (1, 0, 0, 1)
    assert doubling((0, 0)) == (0, 0, 1, 1)


@given(st.lists(st.integers(0, 1), max_size=40))
def test_doubling_weight(v):
    d = doubling(v)
    assert len(d) == 2 * len(v)
    assert sum(d) == len(v)


def _check_monomials(a):
    system = monomial_circuit(a)
    c = system.circuit
    assert validate(c) == []
    ys = np.array(list(itertools.product((0, 1), repeat=a.m)), dtype=bool)
    outs = evaluate_batch(c, ys)[list(c.outputs)]
    codes = a.as_array()
    for k in range(a.n):
        want = np.all(ys >= codes[k], axis=1)
        assert np.array_equal(outs[k], want), k
    return c


def test_monomials_a1_need_no_gates():
    assert _check_monomials(antichain_a1(4)).gate_count == 0


def test_monomials_a0_n8():
    assert _check_monomials(antichain_a0(8)).gate_count <= 16


@pytest.mark.parametrize("n", [2, 3, 5, 6, 7])
def test_monomials_a0_exhaustive(n):
    c = _check_monomials(antichain_a0(n))
    assert c.gate_count <= 2 * n


def test_monomial_a0_n1_is_a_literal():
    # code (0, 1): the monomial is y_1 alone
    c = _check_monomials(antichain_a0(1))
    assert c.gate_count == 0 and c.outputs == (1,)


@pytest.mark.parametrize("n", [33, 65, 100, 129, 1000, 4095, 4096])
def test_monomials_a0_gate_bound(n):
    assert monomial_circuit(antichain_a0(n)).circuit.gate_count <= 2 * n


def test_monomials_general_antichain():
    a = Antichain.from_codes([(1, 1, 0, 0), (0, 1, 1, 0), (0, 0, 1, 1), (1, 0, 0, 1)])
    _check_monomials(a)


def test_encode_shift():
    assert encode_shift(antichain_a1(4), 2) == (0, 0, 1, 0)
    assert encode_shift(antichain_a0(4), 0) == (0, 0, 0, 1, 1, 1)
    with pytest.raises(ValueError):
        encode_shift(antichain_a1(4), 4)
    a = antichain_a0(7)
    assert all(encode_shift(a, k) == a.codes[k] for k in range(7))


def test_antichain_dict_round_trip():
    for a in (antichain_a0(6), antichain_a1(3)):
        assert antichain_from_dict(a.to_dict()) == a
    with pytest.raises(ValueError):
        Antichain.from_codes([(1, 0), (1, 1)])
