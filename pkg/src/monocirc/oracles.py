"""Brute-force operator semantics and equivalence checking.

Oracle functions take X in the q x n orientation (row = component, column =
element); a length-n vector is the q = 1 case.  Circuits store X
element-major, i.e. the flattening of the n x q transpose.
"""
from __future__ import annotations

from dataclasses import asdict, dataclass, field
from typing import Any, Sequence

import numpy as np

from ._parallel import pmap
from .circuit_ir import Circuit, evaluate_outputs
from .encodings import Antichain, antichain_from_dict, bitstring
from .perm_gen import (ComparatorNetwork, all_permutations, comparator_encode,
                       encode_pi0, encode_pi1)

DEFAULT_CAP = 1 << 24
CHUNK = 1 << 15

SHIFT, PERM, CONV, MATMUL = "shift", "perm", "conv", "matmul"


class VerificationError(ValueError):
    """Arity mismatch, oversized exhaustive domain, or malformed operator."""


def _as_matrix(X) -> tuple[np.ndarray, bool]:
    arr = np.asarray(X, dtype=bool)
    if arr.ndim == 1:
        return arr[None, :], True
    if arr.ndim != 2:
        raise ValueError(f"X must be a vector or a q x n matrix, got shape {arr.shape}")
    return arr, False


def _restore(arr: np.ndarray, was_vector: bool) -> np.ndarray:
    return arr.astype(np.uint8)[0] if was_vector else arr.astype(np.uint8)


def shift_spec(X, k: int) -> np.ndarray:
    """Cyclic right shift by k: element i moves to position (i + k) mod n."""
    mat, vec = _as_matrix(X)
    n = mat.shape[1]
    if not 0 <= k < n:
        raise ValueError(f"shift {k} out of range [0, {n})")
    out = np.zeros_like(mat)
    for i in range(n):
        out[:, (i + k) % n] = mat[:, i]
    return _restore(out, vec)


def perm_spec(X, perm: Sequence[int]) -> np.ndarray:
    """Output position t receives element perm[t]."""
    mat, vec = _as_matrix(X)
    n = mat.shape[1]
    if sorted(perm) != list(range(n)):
        raise ValueError(f"{tuple(perm)!r} is not a permutation of {n} elements")
    return _restore(mat[:, list(perm)], vec)


def shift_permutation(n: int, k: int) -> tuple[int, ...]:
    """The permutation realising a right shift by k under perm_spec."""
    return tuple((t - k) % n for t in range(n))


def conv_spec(X, Y) -> np.ndarray:
    x = np.asarray(X, dtype=bool)
    y = np.asarray(Y, dtype=bool)
    if x.ndim != 1 or x.shape != y.shape:
        raise ValueError("conv_spec needs two vectors of equal length")
    n = len(x)
    out = np.zeros(n, dtype=np.uint8)
    for j in range(n):
        for k in range(n):
            if x[j] and y[k]:
                out[(j + k) % n] = 1
    return out


def matmul_spec(X, Y) -> np.ndarray:
    mat, vec = _as_matrix(X)
    y = np.asarray(Y, dtype=bool)
    q, n = mat.shape
    if y.shape != (n, n):
        raise ValueError(f"Y must be {n} x {n}, got {y.shape}")
    out = np.zeros((q, n), dtype=bool)
    for c in range(q):
        for k in range(n):
            out[c, k] = any(mat[c, j] and y[j, k] for j in range(n))
    return _restore(out, vec)


# -- operator specs -------------------------------------------------------------

@dataclass
class OperatorSpec:
    """An operator with its admissible selector values.

    ``codebook`` lists admissible Y words (partial operators); ``None`` means
    Y ranges over all of B^m (total operators).  ``params`` holds the shift
    amount or permutation attached to each codebook row.
    """
    kind: str
    n: int
    q: int
    m: int
    codebook: np.ndarray | None = None
    params: list = field(default_factory=list)

    @property
    def x_bits(self) -> int:
        return self.n * self.q

    @property
    def y_count(self) -> int:
        return len(self.codebook) if self.codebook is not None else 1 << self.m

    @property
    def domain_size(self) -> int:
        return (1 << self.x_bits) * self.y_count

    def expected(self, X: np.ndarray, Y: np.ndarray, idx: np.ndarray | None) -> np.ndarray:
        """Batch semantics.  X: (B, n, q) element-major, Y: (B, m) -> (B, n, q)."""
        n = self.n
        if self.kind == SHIFT:
            out = np.empty_like(X)
            shifts = np.array(self.params)[idx]
            for k in np.unique(shifts):
                sel = shifts == k
                out[sel] = np.roll(X[sel], int(k), axis=1)
            return out
        if self.kind == PERM:
            out = np.empty_like(X)
            for code in np.unique(idx):
                sel = idx == code
                out[sel] = X[sel][:, list(self.params[code]), :]
            return out
        if self.kind == CONV:
            out = np.zeros_like(X)
            for j in range(n):
                for k in range(n):
                    out[:, (j + k) % n, 0] |= X[:, j, 0] & Y[:, k]
            return out
        if self.kind == MATMUL:
            Ym = Y.reshape(-1, n, n)
            out = np.zeros_like(X)
            for j in range(n):
                out |= X[:, j, None, :] & Ym[:, j, :, None]
            return out
        raise VerificationError(f"unknown operator kind {self.kind!r}")


def shift_operator(a: Antichain, q: int = 1) -> OperatorSpec:
    return OperatorSpec(SHIFT, a.n, q, a.m, a.as_array(), list(range(a.n)))


def perm_operator(n: int, q: int = 1, family: str = "pi_comparator",
                  net: ComparatorNetwork | None = None) -> OperatorSpec:
    perms = list(all_permutations(n))
    if family == "pi_comparator":
        if net is None:
            raise VerificationError("pi_comparator codes need the comparator network")
        codes = [comparator_encode(net, p).code for p in perms]
    elif family == "pi1_matrix":
        codes = [encode_pi1(p).code for p in perms]
    elif family == "pi0":
        codes = [encode_pi0(p).code for p in perms]
    else:
        raise VerificationError(f"unknown permutation family {family!r}")
    arr = np.array(codes, dtype=bool).reshape(len(perms), -1)
    return OperatorSpec(PERM, n, q, arr.shape[1], arr, perms)


def conv_operator(n: int) -> OperatorSpec:
    return OperatorSpec(CONV, n, 1, n)


def matmul_operator(q: int, n: int) -> OperatorSpec:
    return OperatorSpec(MATMUL, n, q, n * n)


def spec_from_encoding(enc: dict[str, Any]) -> OperatorSpec:
    """Rebuild the claimed operator from a netlist ``encoding`` block."""
    if not enc:
        raise VerificationError("netlist carries no encoding block")
    family = enc.get("family")
    n, q = int(enc["n"]), int(enc.get("q", 1))
    if family in ("pi_comparator", "pi1_matrix"):
        net = ComparatorNetwork(n, tuple(tuple(p) for p in enc.get("network", [])))
        return perm_operator(n, q, family, net)
    if family == "conv":
        return conv_operator(n)
    if family == "matmul":
        return matmul_operator(q, n)
    return shift_operator(antichain_from_dict(enc), q)


# -- verification ---------------------------------------------------------------

@dataclass
class VerificationReport:
    status: str
    cases: int
    mode: str
    counterexample: dict | None = None
    seed: int | None = None

    @property
    def passed(self) -> bool:
        return self.status == "pass"

    def to_dict(self) -> dict:
        doc = {"status": self.status, "cases": self.cases, "mode": self.mode}
        if self.counterexample is not None:
            doc["counterexample"] = self.counterexample
        if self.seed is not None:
            doc["seed"] = self.seed
        return doc


def _bits_of(values: np.ndarray, width: int) -> np.ndarray:
    """Row b holds the little-endian bits of values[b]."""
    shifts = np.arange(width, dtype=np.int64)
    return ((values[:, None].astype(np.int64) >> shifts) & 1).astype(bool)


def _check_arity(circuit: Circuit, spec: OperatorSpec) -> None:
    if circuit.num_inputs != spec.x_bits + spec.m:
        raise VerificationError(
            f"circuit has {circuit.num_inputs} inputs, operator needs {spec.x_bits + spec.m}")
    if len(circuit.outputs) != spec.x_bits:
        raise VerificationError(
            f"circuit has {len(circuit.outputs)} outputs, operator needs {spec.x_bits}")


def _check_batch(circuit: Circuit, spec: OperatorSpec, xbits: np.ndarray,
                 ybits: np.ndarray, idx: np.ndarray | None) -> int | None:
    """Index of the first mismatching row, or None."""
    got = evaluate_outputs(circuit, np.concatenate([xbits, ybits], axis=1))
    X = xbits.reshape(-1, spec.n, spec.q)
    want = spec.expected(X, ybits, idx).reshape(len(xbits), -1)
    bad = np.flatnonzero(np.any(got != want, axis=1))
    return int(bad[0]) if len(bad) else None


def _counterexample(circuit: Circuit, spec: OperatorSpec, x: np.ndarray, y: np.ndarray,
                    idx: int | None) -> dict:
    got = evaluate_outputs(circuit, np.concatenate([x, y])[None, :])[0]
    want = spec.expected(x.reshape(1, spec.n, spec.q), y[None, :],
                         None if idx is None else np.array([idx]))[0].reshape(-1)
    return {"X": bitstring(x), "Y": bitstring(y), "output": bitstring(got),
            "expected": bitstring(want)}


def verify(circuit: Circuit, spec: OperatorSpec, mode: str = "exhaustive",
           trials: int = 1000, seed: int = 0, cap: int = DEFAULT_CAP) -> VerificationReport:
    """Compare ``circuit`` with ``spec`` on admissible inputs.

    ``exhaustive`` enumerates every X and every admissible Y (refusing
    domains above ``cap``); ``random`` draws X uniformly and Y uniformly from
    the codebook, reproducibly from ``seed``.
    """
    _check_arity(circuit, spec)
    if mode == "exhaustive":
        total = spec.domain_size
        if total > cap:
            raise VerificationError(
                f"exhaustive domain has {total} cases, above the cap of {cap}; use random mode")
        nx = 1 << spec.x_bits

        def run(start: int):
            z = np.arange(start, min(start + CHUNK, total), dtype=np.int64)
            yi, xi = z // nx, z % nx
            xbits = _bits_of(xi, spec.x_bits)
            if spec.codebook is not None:
                ybits, idx = spec.codebook[yi], yi
            else:
                ybits, idx = _bits_of(yi, spec.m), None
            bad = _check_batch(circuit, spec, xbits, ybits, idx)
            if bad is None:
                return None
            return (start + bad, xbits[bad], ybits[bad], None if idx is None else int(idx[bad]))

        failures = [f for f in pmap(run, range(0, total, CHUNK)) if f is not None]
        if failures:
            _, x, y, idx = min(failures, key=lambda f: f[0])
            return VerificationReport("fail", total, mode, _counterexample(circuit, spec, x, y, idx))
        return VerificationReport("pass", total, mode)

    if mode == "random":
        rng = np.random.default_rng(seed)
        xbits = rng.integers(0, 2, size=(trials, spec.x_bits)).astype(bool)
        if spec.codebook is not None:
            idx = rng.integers(0, len(spec.codebook), size=trials)
            ybits = spec.codebook[idx]
        else:
            idx = None
            ybits = rng.integers(0, 2, size=(trials, spec.m)).astype(bool)
        bad = _check_batch(circuit, spec, xbits, ybits, idx)
        if bad is not None:
            cx = _counterexample(circuit, spec, xbits[bad], ybits[bad],
                                 None if idx is None else int(idx[bad]))
            return VerificationReport("fail", trials, mode, cx, seed)
        return VerificationReport("pass", trials, mode, seed=seed)

    raise VerificationError(f"unknown verification mode {mode!r}")


# -- completion properties of the A1 shift -----------------------------------------

@dataclass
class CompletionReport:
    status: str
    cases: int
    realized_g: list[int] | None = None
    counterexample: dict | None = None
    failures: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.status == "pass"

    def to_dict(self) -> dict:
        return {k: v for k, v in asdict(self).items() if v is not None}


def check_completion(circuit: Circuit, n: int | None = None,
                     cap: int = DEFAULT_CAP) -> CompletionReport:
    """Check the testable consequences of completing the weight-1 shift.

    1. On every Y of weight 1 and every X the outputs equal the cyclic
       convolution of X and Y.
    2. At Y = 0 every output is either identically 0 or identically the
       conjunction of all x; the realised choice per output is ``realized_g``.
    """
    if n is None:
        n = len(circuit.outputs)
    if circuit.num_inputs != 2 * n or len(circuit.outputs) != n:
        raise VerificationError(
            f"expected {2 * n} inputs and {n} outputs, got {circuit.num_inputs} and "
            f"{len(circuit.outputs)}")
    cases = (1 << n) * (n + 1)
    if cases > cap:
        raise VerificationError(
            f"exhaustive completion check needs {cases} cases (cap {cap}); use random verify")

    failures: list[str] = []
    counterexample = None
    xs = _bits_of(np.arange(1 << n), n)
    for k in range(n):
        ys = np.zeros((len(xs), n), dtype=bool)
        ys[:, k] = True
        got = evaluate_outputs(circuit, np.concatenate([xs, ys], axis=1))
        want = np.zeros_like(got)
        for j in range(n):
            want[:, (j + k) % n] = xs[:, j]
        bad = np.flatnonzero(np.any(got != want, axis=1))
        if len(bad) and counterexample is None:
            r = bad[0]
            counterexample = {"X": bitstring(xs[r]), "Y": bitstring(ys[r]),
                              "output": bitstring(got[r]), "expected": bitstring(want[r])}
            failures.append(f"weight-1 selector y_{k} disagrees with convolution")

    zero = np.zeros((len(xs), n), dtype=bool)
    got = evaluate_outputs(circuit, np.concatenate([xs, zero], axis=1))
    conj = np.all(xs, axis=1)
    g = []
    for j in range(n):
        col = got[:, j]
        if not col.any():
            g.append(0)
        elif np.array_equal(col, conj):
            g.append(1)
        else:
            g.append(-1)
            failures.append(f"output {j} at Y=0 is neither 0 nor the full conjunction")
    status = "fail" if failures else "pass"
    return CompletionReport(status, cases, None if -1 in g else g, counterexample, failures)
