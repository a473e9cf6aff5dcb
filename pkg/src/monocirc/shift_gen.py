"""Monotone cyclic shift circuits: monomials, dyadic indicators, mux layers."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .circuit_ir import Circuit, CircuitBuilder
from .encodings import Antichain, MonomialSystem, build_monomials


def shift_levels(n: int) -> int:
    """Number of mux layers, ceil(log2 n)."""
    return (n - 1).bit_length() if n > 1 else 0


@dataclass(frozen=True)
class IndicatorBank:
    """Y^{i,beta} for every level i < ceil(log2 n) and beta in {0, 1}.

    ``indicators[(i, beta)]`` is the node ref; ``tree[i]`` lists the dyadic
    OR nodes over index intervals [t*2^i, (t+1)*2^i) clipped to n.  When
    produced by :func:`dyadic_indicators`, ``circuit`` carries the
    indicators as outputs in the order (0,0), (0,1), (1,0), ...
    """
    n: int
    indicators: dict[tuple[int, int], int]
    tree: tuple[tuple[int, ...], ...]
    circuit: Circuit | None = None

    @property
    def levels(self) -> int:
        return len(self.tree)


def build_indicators(b: CircuitBuilder, monomials: Sequence[int]) -> IndicatorBank:
    """OR the n monomial refs into bit-level indicators.

    Y^{i,beta} is 1 exactly on codes alpha_k with bit i of k equal to beta.
    One dyadic OR tree over the monomials is shared by all levels; level i
    needs n/2^i - 2 further ORs, so the bank costs O(n) gates overall.
    """
    n = len(monomials)
    levels = shift_levels(n)
    tree: list[tuple[int, ...]] = []
    indicators: dict[tuple[int, int], int] = {}
    nodes = list(monomials)
    for i in range(levels):
        if i > 0:
            nodes = [b.add_or(nodes[t], nodes[t + 1]) if t + 1 < len(nodes) else nodes[t]
                     for t in range(0, len(nodes), 2)]
        tree.append(tuple(nodes))
        for beta in (0, 1):
            indicators[(i, beta)] = b.or_chain(nodes[beta::2])
    return IndicatorBank(n, indicators, tuple(tree))


def dyadic_indicators(monomials: MonomialSystem, n: int, dedup: bool = False) -> IndicatorBank:
    if len(monomials.circuit.outputs) != n:
        raise ValueError(f"monomial system has {len(monomials.circuit.outputs)} outputs, expected {n}")
    b = CircuitBuilder.from_circuit(monomials.circuit, dedup=dedup)
    bank = build_indicators(b, list(monomials.circuit.outputs))
    outs = [bank.indicators[(i, beta)] for i in range(bank.levels) for beta in (0, 1)]
    circuit = b.build(outs, label=f"indicators n={n}")
    return IndicatorBank(bank.n, bank.indicators, bank.tree, circuit)


def x_name(i: int, c: int, q: int) -> str:
    return f"x{i}" if q == 1 else f"x{i}_{c}"


def gen_shift(n: int, q: int, a: Antichain, dedup: bool = False) -> Circuit:
    """Circuit for the partial operator mapping (X, alpha_k) to X >> k.

    Inputs are x_{i,c} element-major (index i*q + c) followed by y_0..y_{m-1};
    output (i + k) mod n, component c, carries x_{i,c} under Y = alpha_k.
    Layer i shifts by 0 or 2^i using (Y^{i,1} & a) | (Y^{i,0} & b).
    """
    if n < 1 or q < 1:
        raise ValueError("n and q must be >= 1")
    if a.n != n:
        raise ValueError(f"antichain has {a.n} codes, expected {n}")
    b = CircuitBuilder(dedup=dedup)
    x = [[b.add_input(x_name(i, c, q)) for c in range(q)] for i in range(n)]
    y = b.add_inputs([f"y{j}" for j in range(a.m)])
    monomials = build_monomials(b, a, y)
    bank = build_indicators(b, monomials)

    cur = x
    for i in range(bank.levels):
        step = 1 << i
        sel1, sel0 = bank.indicators[(i, 1)], bank.indicators[(i, 0)]
        nxt = []
        for j in range(n):
            src = cur[(j - step) % n]
            row = []
            for c in range(q):
                moved = b.add_and(sel1, src[c])
                kept = b.add_and(sel0, cur[j][c])
                row.append(b.add_or(moved, kept))
            nxt.append(row)
        cur = nxt

    outputs = [cur[j][c] for j in range(n) for c in range(q)]
    enc = {"family": a.family, "operator": "shift", "n": n, "q": q, "m": a.m,
           "codes": a.to_dict()["codes"]}
    label = (f"shift n={n} q={q} encoding={a.family}; inputs x_(i,c) element-major "
             f"(i*q+c) then y_0..y_{a.m - 1}; outputs s_(j,c) at j*q+c")
    return b.build(outputs, label=label, encoding=enc)
