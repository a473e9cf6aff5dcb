"""Monotone circuits over the basis {OR, AND}.

Nodes are dense integer references in topological order: input ``j`` is
ref ``j`` and gate ``t`` is ref ``len(inputs) + t``.  Circuits are immutable
once built; use :class:`CircuitBuilder` to construct them.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any, NamedTuple, Sequence

import numpy as np

INPUT = "input"
AND = "and"
OR = "or"
GATE_KINDS = (AND, OR)

NETLIST_VERSION = 1


class CircuitError(ValueError):
    """Raised on malformed construction, evaluation or parsing."""


class Gate(NamedTuple):
    kind: str
    left: int
    right: int


@dataclass(frozen=True)
class CircuitStats:
    gate_count: int
    depth: int
    input_count: int
    output_count: int

    def line(self) -> str:
        return (f"gates={self.gate_count} depth={self.depth} "
                f"inputs={self.input_count} outputs={self.output_count}")


@dataclass(frozen=True)
class Circuit:
    inputs: tuple[str, ...]
    gates: tuple[Gate, ...]
    outputs: tuple[int, ...]
    label: str = ""
    encoding: dict[str, Any] | None = field(default=None, compare=False)

    @property
    def num_inputs(self) -> int:
        return len(self.inputs)

    @property
    def num_nodes(self) -> int:
        return len(self.inputs) + len(self.gates)

    @property
    def gate_count(self) -> int:
        return len(self.gates)

    def gate_ref(self, t: int) -> int:
        return len(self.inputs) + t

    def with_outputs(self, outputs: Sequence[int]) -> "Circuit":
        return Circuit(self.inputs, self.gates, tuple(outputs), self.label,
                       self.encoding)


class CircuitBuilder:
    """Single-owner, append-only circuit construction.

    All inputs must be declared before the first gate.  With ``dedup=True``
    structurally identical gates (up to operand order) are hash-consed, which
    changes gate counts; exact-count generators keep it off.
    """

    def __init__(self, dedup: bool = False):
        self.inputs: list[str] = []
        self.gates: list[Gate] = []
        self.dedup = dedup
        self._seen: dict[tuple[str, int, int], int] = {}

    @classmethod
    def from_circuit(cls, circuit: Circuit, dedup: bool = False) -> "CircuitBuilder":
        b = cls(dedup=dedup)
        b.inputs = list(circuit.inputs)
        for g in circuit.gates:
            b._append(g.kind, g.left, g.right)
        return b

    @property
    def num_nodes(self) -> int:
        return len(self.inputs) + len(self.gates)

    def _check_ref(self, ref: int) -> None:
        if not isinstance(ref, (int, np.integer)) or not 0 <= ref < self.num_nodes:
            raise CircuitError(f"dangling node reference {ref!r}")

    def _append(self, kind: str, left: int, right: int) -> int:
        if self.dedup:
            key = (kind, min(left, right), max(left, right))
            hit = self._seen.get(key)
            if hit is not None:
                return hit
        ref = self.num_nodes
        self.gates.append(Gate(kind, int(left), int(right)))
        if self.dedup:
            self._seen[key] = ref
        return ref

    def add_node(self, kind: str, fanins: Sequence[int] = (), name: str | None = None) -> int:
        if kind == INPUT:
            if fanins:
                raise CircuitError("input nodes take no fan-ins")
            return self.add_input(name if name is not None else f"i{len(self.inputs)}")
        if kind not in GATE_KINDS:
            raise CircuitError(f"unknown node kind {kind!r}")
        if len(fanins) != 2:
            raise CircuitError(f"{kind} gate needs exactly 2 fan-ins, got {len(fanins)}")
        for r in fanins:
            self._check_ref(r)
        return self._append(kind, fanins[0], fanins[1])

    def add_input(self, name: str) -> int:
        if self.gates:
            raise CircuitError("inputs must be declared before any gate")
        self.inputs.append(name)
        return len(self.inputs) - 1

    def add_inputs(self, names: Sequence[str]) -> list[int]:
        return [self.add_input(nm) for nm in names]

    def add_and(self, a: int, b: int) -> int:
        return self.add_node(AND, (a, b))

    def add_or(self, a: int, b: int) -> int:
        return self.add_node(OR, (a, b))

    def or_chain(self, refs: Sequence[int]) -> int:
        """Left-to-right OR chain; ``len(refs) - 1`` gates."""
        if not refs:
            raise CircuitError("empty OR (would need a constant)")
        acc = refs[0]
        for r in refs[1:]:
            acc = self.add_or(acc, r)
        return acc

    def and_tree(self, refs: Sequence[int]) -> int:
        """Balanced AND tree; ``len(refs) - 1`` gates."""
        if not refs:
            raise CircuitError("empty AND (would need a constant)")
        layer = list(refs)
        while len(layer) > 1:
            nxt = [self.add_and(layer[i], layer[i + 1]) for i in range(0, len(layer) - 1, 2)]
            if len(layer) % 2:
                nxt.append(layer[-1])
            layer = nxt
        return layer[0]

    def or_tree(self, refs: Sequence[int]) -> int:
        if not refs:
            raise CircuitError("empty OR (would need a constant)")
        layer = list(refs)
        while len(layer) > 1:
            nxt = [self.add_or(layer[i], layer[i + 1]) for i in range(0, len(layer) - 1, 2)]
            if len(layer) % 2:
                nxt.append(layer[-1])
            layer = nxt
        return layer[0]

    def build(self, outputs: Sequence[int], label: str = "",
              encoding: dict[str, Any] | None = None) -> Circuit:
        for r in outputs:
            self._check_ref(r)
        return Circuit(tuple(self.inputs), tuple(self.gates),
                       tuple(int(r) for r in outputs), label, encoding)


def evaluate(circuit: Circuit, assignment: Sequence[int]) -> list[int]:
    """Evaluate one assignment; returns the value of every node (inputs first)."""
    if len(assignment) != circuit.num_inputs:
        raise CircuitError(
            f"assignment has {len(assignment)} bits, circuit has {circuit.num_inputs} inputs")
    values = [1 if v else 0 for v in assignment]
    for g in circuit.gates:
        if g.kind == AND:
            values.append(values[g.left] & values[g.right])
        elif g.kind == OR:
            values.append(values[g.left] | values[g.right])
        else:
            raise CircuitError(f"unknown gate kind {g.kind!r}")
    return values


def output_values(circuit: Circuit, values: Sequence[int]) -> list[int]:
    return [values[r] for r in circuit.outputs]


def evaluate_batch(circuit: Circuit, inputs: np.ndarray) -> np.ndarray:
    """Vectorised evaluation.

    ``inputs`` has shape ``(batch, num_inputs)``; the result has shape
    ``(num_nodes, batch)`` with dtype bool.
    """
    inputs = np.asarray(inputs, dtype=bool)
    if inputs.ndim != 2 or inputs.shape[1] != circuit.num_inputs:
        raise CircuitError(
            f"expected input batch of shape (*, {circuit.num_inputs}), got {inputs.shape}")
    ni = circuit.num_inputs
    values = np.empty((circuit.num_nodes, inputs.shape[0]), dtype=bool)
    values[:ni] = inputs.T
    for t, g in enumerate(circuit.gates):
        if g.kind == AND:
            np.logical_and(values[g.left], values[g.right], out=values[ni + t])
        elif g.kind == OR:
            np.logical_or(values[g.left], values[g.right], out=values[ni + t])
        else:
            raise CircuitError(f"unknown gate kind {g.kind!r}")
    return values


def evaluate_outputs(circuit: Circuit, inputs: np.ndarray) -> np.ndarray:
    """Batch evaluation projected on outputs: shape ``(batch, num_outputs)``."""
    values = evaluate_batch(circuit, inputs)
    return values[list(circuit.outputs)].T


def node_depths(circuit: Circuit) -> list[int]:
    depth = [0] * circuit.num_inputs
    for g in circuit.gates:
        depth.append(1 + max(depth[g.left], depth[g.right]))
    return depth


def stats(circuit: Circuit) -> CircuitStats:
    depth = node_depths(circuit)
    return CircuitStats(
        gate_count=circuit.gate_count,
        depth=max((depth[r] for r in circuit.outputs), default=0),
        input_count=circuit.num_inputs,
        output_count=len(circuit.outputs),
    )


def validate(circuit: Circuit) -> list[str]:
    """Structural check; returns a list of violations (empty when well formed)."""
    problems: list[str] = []
    ni = circuit.num_inputs
    if len(set(circuit.inputs)) != ni:
        problems.append("duplicate input names")
    for t, g in enumerate(circuit.gates):
        ref = ni + t
        if len(g) != 3:
            problems.append(f"arity violation: gate {ref} has {len(g) - 1} fan-ins")
            continue
        if g.kind not in GATE_KINDS:
            problems.append(f"basis violation: gate {ref} has kind {g.kind!r}")
        for r in (g.left, g.right):
            if not isinstance(r, (int, np.integer)) or isinstance(r, bool) or r < 0:
                problems.append(f"reference violation: gate {ref} refers to {r!r}")
            elif r >= ref:
                problems.append(f"order violation: gate {ref} refers to node {r}")
    for pos, r in enumerate(circuit.outputs):
        if not isinstance(r, (int, np.integer)) or not 0 <= r < circuit.num_nodes:
            problems.append(f"output violation: output {pos} refers to {r!r}")
    return problems


# -- netlist JSON ---------------------------------------------------------------

def to_json(circuit: Circuit) -> str:
    doc: dict[str, Any] = {
        "version": NETLIST_VERSION,
        "label": circuit.label,
        "inputs": list(circuit.inputs),
        "gates": [[g.kind, g.left, g.right] for g in circuit.gates],
        "outputs": list(circuit.outputs),
    }
    if circuit.encoding is not None:
        doc["encoding"] = circuit.encoding
    return json.dumps(doc, separators=(",", ":")) + "\n"


def from_json(text: str) -> Circuit:
    """Parse a netlist document.  The result is not validated."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise CircuitError(f"netlist is not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise CircuitError("netlist must be a JSON object")
    if doc.get("version") != NETLIST_VERSION:
        raise CircuitError(f"unsupported netlist version {doc.get('version')!r}")
    try:
        gates = []
        for entry in doc["gates"]:
            if len(entry) != 3:
                raise CircuitError(f"gate entry {entry!r} must be [kind, left, right]")
            gates.append(Gate(str(entry[0]), entry[1], entry[2]))
        return Circuit(
            inputs=tuple(doc["inputs"]),
            gates=tuple(gates),
            outputs=tuple(doc["outputs"]),
            label=doc.get("label", ""),
            encoding=doc.get("encoding"),
        )
    except KeyError as exc:
        raise CircuitError(f"netlist missing field {exc}") from exc
