"""Antichain codebooks for shift values and their monomial circuits."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .circuit_ir import Circuit, CircuitBuilder, CircuitError

Word = tuple[int, ...]


def _word(bits) -> Word:
    return tuple(1 if b else 0 for b in bits)


def bitstring(word: Sequence[int]) -> str:
    return "".join("1" if b else "0" for b in word)


def parse_bitstring(text: str) -> Word:
    if set(text) - {"0", "1"}:
        raise ValueError(f"not a bitstring: {text!r}")
    return tuple(int(ch) for ch in text)


def binary_width(n: int) -> int:
    """floor(log2 n) + 1, the number of bits in [n]_2 (and in [k]_2 for k < n)."""
    return max(n, 1).bit_length()


def to_bits(k: int, width: int) -> Word:
    """Least-significant bit first."""
    return tuple((k >> i) & 1 for i in range(width))


@dataclass(frozen=True)
class Antichain:
    codes: tuple[Word, ...]
    family: str = "custom"

    def __post_init__(self):
        if not self.codes:
            raise ValueError("antichain must contain at least one code")
        if len({len(c) for c in self.codes}) != 1:
            raise ValueError("ragged code lengths")
        if len(self.codes[0]) < 1:
            raise ValueError("codes must have at least one bit")

    @property
    def n(self) -> int:
        return len(self.codes)

    @property
    def m(self) -> int:
        return len(self.codes[0])

    def as_array(self) -> np.ndarray:
        return np.array(self.codes, dtype=bool)

    def to_dict(self) -> dict:
        return {"family": self.family, "n": self.n, "m": self.m,
                "codes": [bitstring(c) for c in self.codes]}

    @classmethod
    def from_codes(cls, codes: Sequence[Sequence[int]], family: str = "custom",
                   check: bool = True) -> "Antichain":
        a = cls(tuple(_word(c) for c in codes), family)
        if check and not is_antichain(a.codes):
            raise ValueError("codes are not pairwise incomparable")
        return a


def is_antichain(codes: Sequence[Sequence[int]]) -> bool:
    """True iff the words are pairwise incomparable (hence also distinct)."""
    if not codes:
        return True
    lengths = {len(c) for c in codes}
    if len(lengths) != 1:
        raise ValueError("ragged word lengths")
    arr = np.asarray(codes, dtype=bool)
    for k in range(len(arr)):
        # rows l with arr[k] <= arr[l]
        below = ~np.any(arr[k] & ~arr, axis=1)
        below[k] = False
        if below.any():
            return False
    return True


def doubling(v: Sequence[int]) -> Word:
    v = _word(v)
    return v + tuple(1 - b for b in v)


def antichain_a0(n: int) -> Antichain:
    """Doubled binary representations ([k]_2, complement), LSB first."""
    if n < 1:
        raise ValueError("n must be >= 1")
    w = binary_width(n)
    return Antichain(tuple(doubling(to_bits(k, w)) for k in range(n)), "a0")


def antichain_a1(n: int) -> Antichain:
    """Weight-1 vectors of length n."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return Antichain(tuple(tuple(int(i == k) for i in range(n)) for k in range(n)), "a1")


def encode_shift(a: Antichain, k: int) -> Word:
    if not 0 <= k < a.n:
        raise ValueError(f"shift {k} out of range [0, {a.n})")
    return a.codes[k]


def antichain_from_dict(doc: dict) -> Antichain:
    family = doc.get("family", "custom")
    if family == "a0" and "codes" not in doc:
        return antichain_a0(int(doc["n"]))
    if family == "a1" and "codes" not in doc:
        return antichain_a1(int(doc["n"]))
    codes = [parse_bitstring(c) for c in doc["codes"]]
    a = Antichain.from_codes(codes, family=family, check=family not in ("a0", "a1"))
    if family == "a0" and a != antichain_a0(a.n):
        raise ValueError("codes do not match the a0 family")
    if family == "a1" and a != antichain_a1(a.n):
        raise ValueError("codes do not match the a1 family")
    return a


# -- monomials -----------------------------------------------------------------

@dataclass(frozen=True)
class MonomialSystem:
    """Circuit over y_0..y_{m-1} whose output k is the monomial of code k."""
    circuit: Circuit
    antichain: Antichain


def _general_monomials(b: CircuitBuilder, a: Antichain, y: Sequence[int]) -> list[int]:
    refs = []
    for code in a.codes:
        support = [y[i] for i, bit in enumerate(code) if bit]
        if not support:
            raise CircuitError("the all-zero code has the constant monomial 1")
        refs.append(b.and_tree(support))
    return refs


def _a0_monomials(b: CircuitBuilder, n: int, y: Sequence[int]) -> list[int]:
    """Monomials of A0 with shared sub-products.

    Every code picks one literal per bit position (y_i for a 1, y_{w+i} for a
    0), so the monomial of k is the minterm of its bits.  Minterms over a bit
    range are built from the minterms of its lower and upper halves; only
    values that occur for some k < n are materialised.  Uses < 2n gates.
    """
    w = binary_width(n)

    def literal(i: int, bit: int) -> int:
        return y[i] if bit else y[w + i]

    def minterms(lo: int, bits: int, count: int) -> list[int]:
        # minterms over bit positions lo..lo+bits-1 for values 0..count-1
        if bits == 1:
            return [literal(lo, v) for v in range(count)]
        low_bits = bits // 2
        low = minterms(lo, low_bits, min(count, 1 << low_bits))
        high = minterms(lo + low_bits, bits - low_bits, -(-count // (1 << low_bits)))
        mask = (1 << low_bits) - 1
        return [b.add_and(high[v >> low_bits], low[v & mask]) for v in range(count)]

    return minterms(0, w, n)


def build_monomials(b: CircuitBuilder, a: Antichain, y: Sequence[int]) -> list[int]:
    """Emit the monomial system of ``a`` into ``b`` given the y input refs."""
    if len(y) != a.m:
        raise CircuitError(f"need {a.m} y refs, got {len(y)}")
    if a.family == "a0":
        return _a0_monomials(b, a.n, y)
    return _general_monomials(b, a, y)


def monomial_circuit(a: Antichain, dedup: bool = False) -> MonomialSystem:
    b = CircuitBuilder(dedup=dedup)
    y = b.add_inputs([f"y{j}" for j in range(a.m)])
    outs = build_monomials(b, a, y)
    circuit = b.build(outs, label=f"monomials family={a.family} n={a.n} m={a.m}",
                      encoding=a.to_dict())
    return MonomialSystem(circuit, a)
