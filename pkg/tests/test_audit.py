import itertools

import numpy as np
import pytest

from monocirc.audit import (AuditReport, TraceError, gate_identity_probe, log2_factorial,
                            probe_flags, run_audit, trace_paths)
from monocirc.baselines import gen_matmul
from monocirc.circuit_ir import AND, OR, CircuitBuilder
from monocirc.encodings import Antichain, antichain_a0, antichain_a1
from monocirc.shift_gen import gen_shift


def probe_circuit():
    """x0, x1 plus one selector input y0; nodes x0&x1, x0|x1 and x0&x0."""
    b = CircuitBuilder()
    x0, x1, y0, y1 = b.add_inputs(["x0", "x1", "y0", "y1"])
    g_and = b.add_and(x0, x1)
    g_or = b.add_or(x0, x1)
    g_id = b.add_and(x0, x0)
    return b.build([g_id, g_and]), (g_and, g_or, g_id)


def test_probe_examples():
    c, (g_and, g_or, g_id) = probe_circuit()
    flags = gate_identity_probe(c, antichain_a1(2), 0, 0)
    assert not flags[g_and]
    assert not flags[g_or]
    assert flags[g_id]
    assert flags[0] and not flags[1]


def _monotone_tables(n):
    points = list(itertools.product((0, 1), repeat=n))
    index = {p: i for i, p in enumerate(points)}
    covers = [(index[p], index[p[:j] + (1,) + p[j + 1:]])
              for p in points for j in range(n) if p[j] == 0]
    for table in itertools.product((0, 1), repeat=len(points)):
        if all(table[a] <= table[b] for a, b in covers):
            yield points, index, table


@pytest.mark.parametrize("n,count", [(1, 3), (2, 6), (3, 20), (4, 168)])
def test_two_point_probe_sound_for_all_monotone_functions(n, count):
    seen = 0
    for points, index, table in _monotone_tables(n):
        seen += 1
        for i in range(n):
            unit = tuple(int(j == i) for j in range(n))
            co = tuple(1 - b for b in unit)
            probe = table[index[unit]] == 1 and table[index[co]] == 0
            is_xi = all(table[index[p]] == p[i] for p in points)
            assert probe == is_xi
    assert seen == count


def test_trace_zero_gate_circuit():
    b = CircuitBuilder()
    x, y = b.add_inputs(["x0", "y0"])
    c = b.build([x])
    assert trace_paths(c, antichain_a1(1), 0) == [[]]


def test_trace_shift_n2():
    a = antichain_a1(2)
    c = gen_shift(2, 1, a)
    flags = probe_flags(c, a, 1)
    paths = trace_paths(c, a, 1)
    assert len(paths) == 2
    for i, path in enumerate(paths):
        assert path and all(flags[node, i] for node in path)
        assert path[0] == c.outputs[(i + 1) % 2]


def test_census_by_hand_n2():
    # gates in order: moved0, kept0, or0, moved1, kept1, or1.
    # k=0: x0 -> kept0 -> or0, x1 -> kept1 -> or1
    # k=1: x0 -> moved1 -> or1, x1 -> moved0 -> or0
    a = antichain_a1(2)
    c = gen_shift(2, 1, a)
    assert c.gate_count == 6
    report = run_audit(c, a)
    assert report.chi == [1, 1, 2, 1, 1, 2]
    assert report.per_output_sums == [4, 4]
    assert report.total_chi == 8 and report.ok


def test_matmul_audited_as_wrong_shift_fails():
    # gen_matmul(1, 2) has 2 + 4 inputs, the same arity as the n=2 A0 shift
    a = antichain_a0(2)
    c = gen_matmul(1, 2)
    with pytest.raises(TraceError):
        trace_paths(c, a, 0)
    report = run_audit(c, a)
    assert report.failures and not report.ok


def test_log2_factorial():
    assert log2_factorial(1) == 0
    assert log2_factorial(2) == 1
    assert abs(log2_factorial(4) - np.log2(24)) < 1e-12
    assert abs(log2_factorial(16) - 44.25014046988262) < 1e-9


@pytest.mark.parametrize("n", [2, 4, 8, 16])
@pytest.mark.parametrize("family", ["a0", "a1"])
def test_shift_audit_verdicts(n, family):
    a = antichain_a0(n) if family == "a0" else antichain_a1(n)
    c = gen_shift(n, 1, a)
    r = run_audit(c, a)
    assert r.failures == []
    assert r.max_chi <= n
    assert all(s >= log2_factorial(n) - 1e-9 for s in r.per_output_sums)
    assert r.total_chi <= c.gate_count * n
    assert r.implied_lower_bound <= c.gate_count
    assert sum(r.per_output_sums) == r.total_chi


def test_audit_q2():
    a = antichain_a0(4)
    c = gen_shift(4, 2, a)
    r = run_audit(c, a, q=2)
    assert r.ok and len(r.per_output_sums) == 8
    assert r.total_chi == sum(r.per_output_sums)


def test_audit_deterministic_and_paths_on_request():
    a = antichain_a0(8)
    c = gen_shift(8, 1, a)
    r1, r2 = run_audit(c, a), run_audit(c, a, keep_paths=True)
    assert r1.to_dict() == r2.to_dict()
    assert r1.paths is None and len(r2.paths) == 64


def test_audit_n1():
    a = antichain_a1(1)
    r = run_audit(gen_shift(1, 1, a), a)
    assert r.log2_factorial_bound == 0 and r.ok


def test_audit_report_json_fields():
    a = antichain_a1(4)
    doc = run_audit(gen_shift(4, 1, a), a).to_dict()
    assert set(doc) == {"n", "q", "L", "max_chi", "total_chi", "per_output_sums",
                        "log2_factorial_bound", "eq1_ok", "eq2_ok", "implied_lower_bound",
                        "failures"}


def test_audit_arity_mismatch():
    with pytest.raises(ValueError):
        run_audit(gen_shift(4, 1, antichain_a1(4)), antichain_a0(4))


def test_chi_overflow_reported():
    r = AuditReport(n=2, q=1, L=1, chi=[3], per_output_sums=[3, 3], log2_factorial_bound=1.0)
    assert not r.chi_ok and not r.ok


def test_threaded_matches_serial(monkeypatch):
    from monocirc.oracles import shift_operator, verify
    a = antichain_a0(16)
    c = gen_shift(16, 1, a)
    serial_audit, serial_verify = run_audit(c, a).to_dict(), verify(c, shift_operator(a)).to_dict()
    monkeypatch.setenv("MONOCIRC_THREADS", "4")
    assert run_audit(c, a).to_dict() == serial_audit
    assert verify(c, shift_operator(a)).to_dict() == serial_verify
