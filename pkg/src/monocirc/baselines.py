"""Naive total operators: cyclic boolean convolution and boolean matrix product.

Both use left-to-right OR chains so gate counts are exact closed forms:
2n^2 - n for convolution and qn(2n - 1) for the matrix product.
"""
from __future__ import annotations

from .circuit_ir import Circuit, CircuitBuilder
from .shift_gen import x_name


def gen_convolution(n: int, dedup: bool = False) -> Circuit:
    """c_i = OR over j of x_j & y_{(i - j) mod n}.  Inputs x_0..x_{n-1}, y_0..y_{n-1}."""
    if n < 1:
        raise ValueError("n must be >= 1")
    b = CircuitBuilder(dedup=dedup)
    x = b.add_inputs([f"x{i}" for i in range(n)])
    y = b.add_inputs([f"y{i}" for i in range(n)])
    outs = []
    for i in range(n):
        products = [b.add_and(x[j], y[(i - j) % n]) for j in range(n)]
        outs.append(b.or_chain(products))
    enc = {"family": "conv", "operator": "conv", "n": n, "q": 1, "m": n}
    return b.build(outs, label=f"conv n={n}; inputs x_0..x_{n - 1} then y_0..y_{n - 1}",
                   encoding=enc)


def gen_matmul(q: int, n: int, dedup: bool = False) -> Circuit:
    """z_{c,k} = OR over j of x_{c,j} & y_{j,k}.

    X is q x n stored column-by-column (x_{j} component c at j*q + c, the same
    element-major layout as the shift and permutation circuits); Y is n x n
    row-major.  Output z_{c,k} sits at k*q + c.
    """
    if q < 1 or n < 1:
        raise ValueError("q and n must be >= 1")
    b = CircuitBuilder(dedup=dedup)
    x = [[b.add_input(x_name(j, c, q)) for c in range(q)] for j in range(n)]
    y = [[b.add_input(f"y{j}_{k}") for k in range(n)] for j in range(n)]
    outs = []
    for k in range(n):
        for c in range(q):
            outs.append(b.or_chain([b.add_and(x[j][c], y[j][k]) for j in range(n)]))
    enc = {"family": "matmul", "operator": "matmul", "n": n, "q": q, "m": n * n}
    return b.build(outs, label=f"matmul q={q} n={n}; inputs x element-major then y row-major",
                   encoding=enc)


def convolution_gate_count(n: int) -> int:
    return 2 * n * n - n


def matmul_gate_count(q: int, n: int) -> int:
    return q * n * (2 * n - 1)
