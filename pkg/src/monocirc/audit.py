"""Path-census certification of circuits claimed to compute a shift operator.

For every selector Y = alpha_k and every input element i, the output
carrying x_i must be reachable from x_i through gates that each compute
exactly x_i.  A gate computes x_i (as a function of X with Y fixed) iff it
is 1 at the unit vector e_i and 0 at its complement; this two-point probe
is sound only because every node function is monotone in X.

Tracing these paths and counting how many pass through each gate yields
the census chi(e).  A gate carries at most one path per k, so
sum chi <= L*n; each output collects n paths whose lengths sum to at least
log2 n!.  Together these certify ``total_chi / n`` as a lower bound on the
audited circuit's size.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ._parallel import pmap
from .circuit_ir import Circuit, evaluate_batch
from .encodings import Antichain

SLACK = 1e-9


class TraceError(RuntimeError):
    """No identity-carrying path exists; the circuit does not compute the shift."""

    def __init__(self, message: str, node: int | None = None):
        super().__init__(message)
        self.node = node


def log2_factorial(n: int) -> float:
    return math.fsum(math.log2(t) for t in range(2, n + 1))


def _layout(circuit: Circuit, a: Antichain, q: int) -> int:
    nq = a.n * q
    if circuit.num_inputs != nq + a.m:
        raise ValueError(f"circuit has {circuit.num_inputs} inputs, expected {nq + a.m}")
    if len(circuit.outputs) != nq:
        raise ValueError(f"circuit has {len(circuit.outputs)} outputs, expected {nq}")
    return nq


def probe_flags(circuit: Circuit, a: Antichain, k: int, q: int = 1) -> np.ndarray:
    """flags[node, i*q + c] is True iff the node computes x_{i,c} under Y = alpha_k.

    Uses 2nq circuit evaluations: unit vectors and their complements.
    """
    nq = _layout(circuit, a, q)
    if not 0 <= k < a.n:
        raise ValueError(f"shift {k} out of range")
    units = np.eye(nq, dtype=bool)
    xs = np.empty((2 * nq, nq), dtype=bool)
    xs[0::2] = units
    xs[1::2] = ~units
    ys = np.broadcast_to(np.array(a.codes[k], dtype=bool), (2 * nq, a.m))
    values = evaluate_batch(circuit, np.concatenate([xs, ys], axis=1))
    return values[:, 0::2] & ~values[:, 1::2]


def gate_identity_probe(circuit: Circuit, a: Antichain, k: int, i: int,
                        q: int = 1, c: int = 0) -> np.ndarray:
    """Per-node flag: does the node compute x_{i,c} once Y = alpha_k?"""
    if not 0 <= i < a.n or not 0 <= c < q:
        raise ValueError("probe index out of range")
    return probe_flags(circuit, a, k, q)[:, i * q + c]


def _trace(circuit: Circuit, flags: np.ndarray, start: int, target: int,
           col: int) -> list[int]:
    """Walk from ``start`` back to input ``target`` through flagged nodes."""
    ni = circuit.num_inputs
    if not flags[start, col]:
        raise TraceError(f"output node {start} does not compute input {target}", start)
    path = []
    node = start
    while node >= ni:
        path.append(node)
        g = circuit.gates[node - ni]
        nxt = [r for r in sorted((g.left, g.right)) if flags[r, col]]
        if not nxt:
            raise TraceError(f"node {node} has no fan-in computing input {target}", node)
        node = nxt[0]
    if node != target:
        raise TraceError(f"path for input {target} ended at input {node}", node)
    return path


def trace_paths(circuit: Circuit, a: Antichain, k: int, q: int = 1) -> list[list[int]]:
    """Identity paths for shift k, indexed i*q + c; each lists gate refs output-first."""
    flags = probe_flags(circuit, a, k, q)
    n = a.n
    paths = []
    for i in range(n):
        for c in range(q):
            out = circuit.outputs[((i + k) % n) * q + c]
            paths.append(_trace(circuit, flags, out, i * q + c, i * q + c))
    return paths


@dataclass
class AuditReport:
    n: int
    q: int
    L: int
    chi: list[int]
    per_output_sums: list[int]
    log2_factorial_bound: float
    failures: list[str] = field(default_factory=list)
    paths: dict | None = None

    @property
    def total_chi(self) -> int:
        return sum(self.chi)

    @property
    def max_chi(self) -> int:
        return max(self.chi, default=0)

    @property
    def eq1_ok(self) -> bool:
        return not self.failures and self.total_chi <= self.L * self.n

    @property
    def eq2_per_output(self) -> list[bool]:
        return [s >= self.log2_factorial_bound - SLACK for s in self.per_output_sums]

    @property
    def eq2_ok(self) -> bool:
        return not self.failures and all(self.eq2_per_output)

    @property
    def chi_ok(self) -> bool:
        return not self.failures and self.max_chi <= self.n

    @property
    def implied_lower_bound(self) -> float:
        return self.total_chi / self.n

    @property
    def ok(self) -> bool:
        return self.eq1_ok and self.eq2_ok and self.chi_ok

    def to_dict(self) -> dict:
        return {
            "n": self.n, "q": self.q, "L": self.L,
            "max_chi": self.max_chi, "total_chi": self.total_chi,
            "per_output_sums": self.per_output_sums,
            "log2_factorial_bound": self.log2_factorial_bound,
            "eq1_ok": self.eq1_ok, "eq2_ok": self.eq2_ok,
            "implied_lower_bound": self.implied_lower_bound,
            "failures": self.failures,
        }


def run_audit(circuit: Circuit, a: Antichain, q: int = 1,
              keep_paths: bool = False) -> AuditReport:
    """Trace all q*n^2 identity paths and check the census bounds.

    chi counts paths per gate over all components; since a gate computes a
    single function of X for each k, chi(e) <= n holds across components,
    which implies the per-component bound.  Trace failures are collected in
    ``failures`` rather than raised.
    """
    nq = _layout(circuit, a, q)
    n, ni = a.n, circuit.num_inputs

    def one_shift(k: int):
        try:
            return k, trace_paths(circuit, a, k, q), None
        except TraceError as exc:
            return k, None, f"k={k}: {exc}"

    chi = [0] * circuit.gate_count
    sums = [0] * nq
    failures: list[str] = []
    kept: dict = {}
    for k, paths, err in pmap(one_shift, range(n)):
        if err is not None:
            failures.append(err)
            continue
        for i in range(n):
            for c in range(q):
                path = paths[i * q + c]
                for node in path:
                    chi[node - ni] += 1
                sums[((i + k) % n) * q + c] += len(path)
                if keep_paths:
                    kept[f"{i},{k},{c}"] = path
    report = AuditReport(n, q, circuit.gate_count, chi, sums, log2_factorial(n), failures,
                         kept if keep_paths else None)
    if not failures and report.max_chi > n:
        worst = int(np.argmax(chi)) + ni
        report.failures.append(f"gate {worst} lies on {report.max_chi} > {n} paths")
    return report
