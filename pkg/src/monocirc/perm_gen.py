"""Monotone permutation circuits built from comparator networks.

Two encodings are supported:

* ``pi_comparator`` - the swap bits of a sorting network run on the ranks of
  the target permutation, doubled so every swap bit comes with its
  complement.  Each comparator becomes a 6q-gate monotone exchange.
* ``pi1_matrix`` - permutation matrices.  Each row is recoded to a doubled
  binary key (the column of its 1) and the (key, payload) records are
  sorted with monotone keyed comparators.

Batcher's odd-even mergesort stands in for an asymptotically optimal
sorting network, so sizes grow as O(q n log^2 n + n^2).
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Sequence

from .circuit_ir import Circuit, CircuitBuilder
from .encodings import Word, bitstring, binary_width, doubling, to_bits
from .shift_gen import build_indicators, shift_levels, x_name

# keyed comparator cost: 22*width + 6*q - 4 gates
COMPARATOR_WIDTH_GATES = 22
COMPARATOR_PAYLOAD_GATES = 6
# bounds asserted for gen_perm_matrix(n, 1): c1*n^2 + c2*comparators*(1 + ceil(log2 n))
MATRIX_ROW_CONST = 4
MATRIX_NODE_CONST = 22


@dataclass(frozen=True)
class ComparatorNetwork:
    n: int
    comparators: tuple[tuple[int, int], ...]

    def __post_init__(self):
        for u, v in self.comparators:
            if not 0 <= u < v < self.n:
                raise ValueError(f"bad comparator ({u}, {v}) for {self.n} lanes")

    def __len__(self) -> int:
        return len(self.comparators)

    def apply(self, keys: Sequence) -> list:
        lanes = list(keys)
        for u, v in self.comparators:
            if lanes[u] > lanes[v]:
                lanes[u], lanes[v] = lanes[v], lanes[u]
        return lanes


def _oddeven_merge(idx: list) -> list[tuple]:
    if len(idx) <= 1:
        return []
    if len(idx) == 2:
        return [(idx[0], idx[1])]
    out = _oddeven_merge(idx[0::2]) + _oddeven_merge(idx[1::2])
    out.extend(zip(idx[1:-1:2], idx[2::2]))
    return out


def _oddeven_sort(idx: list) -> list[tuple]:
    if len(idx) <= 1:
        return []
    mid = len(idx) // 2
    return _oddeven_sort(idx[:mid]) + _oddeven_sort(idx[mid:]) + _oddeven_merge(idx)


def batcher_network(n: int) -> ComparatorNetwork:
    """Odd-even mergesort on n lanes.

    Non-powers of two are padded to the next power of two with virtual
    -inf lanes in front and +inf lanes at the back; comparators touching a
    virtual lane never swap and are dropped.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    size = 1 << shift_levels(n)
    fill = size - n
    front = fill // 2
    lanes = [None] * front + list(range(n)) + [None] * (fill - front)
    comps = [(u, v) for u, v in _oddeven_sort(lanes) if u is not None and v is not None]
    return ComparatorNetwork(n, tuple(comps))


def sorts_zero_one(net: ComparatorNetwork) -> bool:
    """Exhaustive 0-1 principle check over all 2^n binary inputs."""
    for bits in itertools.product((0, 1), repeat=net.n):
        out = net.apply(bits)
        if any(out[t] > out[t + 1] for t in range(net.n - 1)):
            return False
    return True


# -- permutation codes ----------------------------------------------------------

@dataclass(frozen=True)
class PermutationCode:
    perm: tuple[int, ...]
    code: Word
    family: str

    @property
    def m(self) -> int:
        return len(self.code)


def _check_perm(perm: Sequence[int]) -> tuple[int, ...]:
    perm = tuple(int(p) for p in perm)
    if sorted(perm) != list(range(len(perm))):
        raise ValueError(f"{perm!r} is not a permutation")
    return perm


def swap_bits(net: ComparatorNetwork, perm: Sequence[int]) -> tuple[int, ...]:
    """Swap flag of every comparator when sorting the ranks r[perm[t]] = t."""
    perm = _check_perm(perm)
    if len(perm) != net.n:
        raise ValueError(f"permutation of size {len(perm)} for a {net.n}-lane network")
    keys = [0] * net.n
    for t, p in enumerate(perm):
        keys[p] = t
    flags = []
    for u, v in net.comparators:
        swap = keys[u] > keys[v]
        flags.append(int(swap))
        if swap:
            keys[u], keys[v] = keys[v], keys[u]
    return tuple(flags)


def comparator_encode(net: ComparatorNetwork, perm: Sequence[int]) -> PermutationCode:
    return PermutationCode(_check_perm(perm), doubling(swap_bits(net, perm)), "pi_comparator")


def encode_pi0(perm: Sequence[int]) -> PermutationCode:
    """Concatenated [perm(t)]_2 fields, floor(log2 n) + 1 bits each, LSB first."""
    perm = _check_perm(perm)
    w = binary_width(len(perm))
    return PermutationCode(perm, tuple(b for p in perm for b in to_bits(p, w)), "pi0")


def encode_pi1(perm: Sequence[int]) -> PermutationCode:
    """Row-major permutation matrix with y[perm(k)][k] = 1."""
    perm = _check_perm(perm)
    n = len(perm)
    rows = [[0] * n for _ in range(n)]
    for k, p in enumerate(perm):
        rows[p][k] = 1
    return PermutationCode(perm, tuple(b for row in rows for b in row), "pi1_matrix")


# -- circuits -------------------------------------------------------------------

def _exchange(b: CircuitBuilder, sel: int, sel_bar: int, a: int, c: int) -> int:
    """(a & sel) | (c & sel_bar)"""
    return b.add_or(b.add_and(a, sel), b.add_and(c, sel_bar))


def gen_perm_sortnet(n: int, q: int, net: ComparatorNetwork, dedup: bool = False) -> Circuit:
    """Permutation circuit driven by doubled comparator swap bits.

    Inputs: X element-major, then y_e for each comparator, then their
    complements.  With Y = comparator_encode(net, perm).code the outputs are
    (x_perm(0), ..., x_perm(n-1)).
    """
    if n < 1 or q < 1:
        raise ValueError("n and q must be >= 1")
    if net.n != n:
        raise ValueError(f"network has {net.n} lanes, expected {n}")
    b = CircuitBuilder(dedup=dedup)
    lanes = [[b.add_input(x_name(i, c, q)) for c in range(q)] for i in range(n)]
    ne = len(net)
    y = b.add_inputs([f"y{e}" for e in range(ne)])
    ybar = b.add_inputs([f"ybar{e}" for e in range(ne)])
    for e, (u, v) in enumerate(net.comparators):
        lo = [_exchange(b, ybar[e], y[e], lanes[u][c], lanes[v][c]) for c in range(q)]
        hi = [_exchange(b, y[e], ybar[e], lanes[u][c], lanes[v][c]) for c in range(q)]
        lanes[u], lanes[v] = lo, hi
    outputs = [lanes[t][c] for t in range(n) for c in range(q)]
    enc = {"family": "pi_comparator", "operator": "perm", "n": n, "q": q, "m": 2 * ne,
           "network": [list(p) for p in net.comparators]}
    label = (f"perm n={n} q={q} encoding=pi_comparator; inputs x element-major, "
             f"then y_e and their complements ({ne} comparators)")
    return b.build(outputs, label=label, encoding=enc)


@dataclass
class _Record:
    key: list[int]       # LSB first
    key_bar: list[int]
    payload: list[int]


def _keyed_comparator(b: CircuitBuilder, ra: _Record, rb: _Record) -> tuple[_Record, _Record, int, int]:
    """Monotone compare-exchange on doubled keys.

    Returns (min record, max record, lt, geq) with lt = [a < b] and
    geq = [a >= b], both monotone in the doubled key literals.
    """
    w = len(ra.key)
    a, abar, c, cbar = ra.key, ra.key_bar, rb.key, rb.key_bar
    eq = [b.add_or(b.add_and(a[j], c[j]), b.add_and(abar[j], cbar[j])) for j in range(w)]
    # prefix[j]: all bits above j agree (None for the MSB)
    prefix: list[int | None] = [None] * w
    for j in range(w - 2, -1, -1):
        above = prefix[j + 1]
        prefix[j] = eq[j + 1] if above is None else b.add_and(above, eq[j + 1])
    eq_all = eq[0] if prefix[0] is None else b.add_and(prefix[0], eq[0])

    def strict(x: list[int], ybar: list[int]) -> int:
        # x > y scanning from the MSB: x_j & ~y_j & (higher bits equal)
        terms = []
        for j in range(w - 1, -1, -1):
            t = b.add_and(x[j], ybar[j])
            if prefix[j] is not None:
                t = b.add_and(t, prefix[j])
            terms.append(t)
        return b.or_chain(terms)

    lt = strict(c, abar)
    gt = strict(a, cbar)
    geq = b.add_or(gt, eq_all)

    def route(sa: int, sb: int) -> _Record:
        pick = lambda xs, ys: [_exchange(b, sa, sb, u, v) for u, v in zip(xs, ys)]
        return _Record(pick(ra.key, rb.key), pick(ra.key_bar, rb.key_bar),
                       pick(ra.payload, rb.payload))

    return route(lt, geq), route(geq, lt), lt, geq


def keyed_comparator_gates(width: int, q: int) -> int:
    return COMPARATOR_WIDTH_GATES * width + COMPARATOR_PAYLOAD_GATES * q - 4


def doubled_word_comparator(width: int, q: int, dedup: bool = False) -> Circuit:
    """Stand-alone keyed comparator fragment.

    Inputs: a (width bits, LSB first), a complement, b, b complement,
    payload a (q bits), payload b.  Outputs: min record (key, complement,
    payload), max record in the same layout, then lt and geq.  Costs
    ``22*width + 6*q - 4`` gates.
    """
    if width < 1 or q < 0:
        raise ValueError("width must be >= 1")
    b = CircuitBuilder(dedup=dedup)
    a_key = b.add_inputs([f"a{j}" for j in range(width)])
    a_bar = b.add_inputs([f"abar{j}" for j in range(width)])
    b_key = b.add_inputs([f"b{j}" for j in range(width)])
    b_bar = b.add_inputs([f"bbar{j}" for j in range(width)])
    pa = b.add_inputs([f"pa{c}" for c in range(q)])
    pb = b.add_inputs([f"pb{c}" for c in range(q)])
    lo, hi, lt, geq = _keyed_comparator(b, _Record(a_key, a_bar, pa), _Record(b_key, b_bar, pb))
    outs = lo.key + lo.key_bar + lo.payload + hi.key + hi.key_bar + hi.payload + [lt, geq]
    return b.build(outs, label=f"keyed comparator width={width} q={q}")


def gen_perm_matrix(n: int, q: int, net: ComparatorNetwork | None = None,
                    dedup: bool = False) -> Circuit:
    """Permutation circuit for permutation-matrix selectors.

    Inputs: X element-major, then Y row-major (y_{j,k} at n*q + j*n + k).
    Row j is recoded to the doubled binary index of its 1 with the dyadic
    indicator construction, then records (key_j, x_j) are sorted ascending.
    Output column k receives x_j for the j with y_{j,k} = 1, matching the
    boolean product on permutation matrices.
    """
    if n < 1 or q < 1:
        raise ValueError("n and q must be >= 1")
    net = net if net is not None else batcher_network(n)
    if net.n != n:
        raise ValueError(f"network has {net.n} lanes, expected {n}")
    b = CircuitBuilder(dedup=dedup)
    x = [[b.add_input(x_name(i, c, q)) for c in range(q)] for i in range(n)]
    y = [[b.add_input(f"y{j}_{k}") for k in range(n)] for j in range(n)]
    records = []
    for j in range(n):
        bank = build_indicators(b, y[j])
        key = [bank.indicators[(i, 1)] for i in range(bank.levels)]
        key_bar = [bank.indicators[(i, 0)] for i in range(bank.levels)]
        records.append(_Record(key, key_bar, list(x[j])))
    if n > 1:
        for u, v in net.comparators:
            records[u], records[v], _, _ = _keyed_comparator(b, records[u], records[v])
    outputs = [records[t].payload[c] for t in range(n) for c in range(q)]
    enc = {"family": "pi1_matrix", "operator": "perm", "n": n, "q": q, "m": n * n,
           "network": [list(p) for p in net.comparators]}
    label = (f"perm n={n} q={q} encoding=pi1_matrix; inputs x element-major, "
             f"then y row-major")
    return b.build(outputs, label=label, encoding=enc)


def all_permutations(n: int):
    return itertools.permutations(range(n))


def codebook_strings(codes: Sequence[PermutationCode]) -> list[str]:
    return [bitstring(c.code) for c in codes]
