"""``monocirc`` command line: gen | verify | audit | bench.

Exit status: 0 pass, 1 fail, 2 usage or parse error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
import tempfile
from typing import Sequence

from .audit import run_audit
from .baselines import gen_convolution, gen_matmul
from .circuit_ir import Circuit, CircuitError, from_json, stats, to_json, validate
from .encodings import Antichain, antichain_a0, antichain_a1, antichain_from_dict
from .oracles import (DEFAULT_CAP, VerificationError, check_completion, shift_operator,
                      shift_permutation, spec_from_encoding, verify)
from .perm_gen import (ComparatorNetwork, batcher_network, comparator_encode,
                       encode_pi1, gen_perm_matrix, gen_perm_sortnet)
from .shift_gen import gen_shift

EXIT_PASS, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

OPERATORS = {
    "shift": ("a0", "a1"),
    "perm": ("pi_comparator", "pi1_matrix"),
    "conv": ("conv",),
    "matmul": ("matmul",),
}


class UsageError(Exception):
    pass


def generate(operator: str, n: int, q: int = 1, encoding: str | None = None,
             dedup: bool = False) -> Circuit:
    if n < 1 or q < 1:
        raise UsageError("--n and --q must be >= 1")
    families = OPERATORS.get(operator)
    if families is None:
        raise UsageError(f"unknown operator {operator!r}")
    encoding = encoding or families[0]
    if encoding not in families:
        raise UsageError(f"encoding {encoding!r} does not apply to {operator} "
                         f"(choose from {', '.join(families)})")
    if operator == "shift":
        a = antichain_a0(n) if encoding == "a0" else antichain_a1(n)
        return gen_shift(n, q, a, dedup=dedup)
    if operator == "perm":
        net = batcher_network(n)
        if encoding == "pi_comparator":
            return gen_perm_sortnet(n, q, net, dedup=dedup)
        return gen_perm_matrix(n, q, net, dedup=dedup)
    if operator == "conv":
        if q != 1:
            raise UsageError("convolution is defined for q = 1 only")
        return gen_convolution(n, dedup=dedup)
    return gen_matmul(q, n, dedup=dedup)


def shift_view(circuit: Circuit) -> tuple[Antichain, int]:
    """The shift operator a netlist claims to compute, as (antichain, q).

    Permutation and matrix-product circuits restrict to a shift operator on
    the codes of the cyclic shifts.
    """
    enc = circuit.encoding or {}
    family = enc.get("family")
    if family is None:
        raise UsageError("netlist has no encoding block")
    n, q = int(enc["n"]), int(enc.get("q", 1))
    if family == "conv":
        return antichain_a1(n), 1
    if family in ("pi1_matrix", "matmul"):
        codes = [encode_pi1(shift_permutation(n, k)).code for k in range(n)]
        return Antichain.from_codes(codes, family="shift_matrices", check=False), q
    if family == "pi_comparator":
        net = ComparatorNetwork(n, tuple(tuple(p) for p in enc.get("network", [])))
        codes = [comparator_encode(net, shift_permutation(n, k)).code for k in range(n)]
        return Antichain.from_codes(codes, family="shift_swaps", check=False), q
    return antichain_from_dict(enc), q


def _write(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
        return
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".monocirc-")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _dump(doc: dict) -> str:
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def _load(path: str) -> Circuit:
    try:
        with open(path, encoding="utf-8") as fh:
            return from_json(fh.read())
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc}") from exc
    except CircuitError as exc:
        raise UsageError(str(exc)) from exc


# -- commands -------------------------------------------------------------------

def cmd_gen(args) -> int:
    circuit = generate(args.operator, args.n, args.q, args.encoding, args.dedup)
    line = stats(circuit).line()
    if args.out in (None, "-"):
        _write(None, to_json(circuit))
        print(line, file=sys.stderr)
    else:
        _write(args.out, to_json(circuit))
        print(line)
    return EXIT_PASS


def cmd_verify(args) -> int:
    circuit = _load(args.netlist)
    problems = validate(circuit)
    if problems:
        doc = {"status": "invalid", "cases": 0, "violations": problems}
        _write(args.out, _dump(doc))
        return EXIT_FAIL
    try:
        spec = spec_from_encoding(circuit.encoding or {})
        report = verify(circuit, spec, args.mode, args.trials, args.seed, args.cap)
    except (VerificationError, KeyError, ValueError) as exc:
        _write(args.out, _dump({"status": "error", "cases": 0, "error": str(exc)}))
        return EXIT_FAIL
    doc = report.to_dict()
    status_ok = report.passed
    if args.completion:
        comp = check_completion(circuit, cap=args.cap)
        doc["completion"] = comp.to_dict()
        if comp.realized_g is not None:
            doc["realized_g"] = comp.realized_g
        status_ok = status_ok and comp.passed
        doc["status"] = "pass" if status_ok else "fail"
    _write(args.out, _dump(doc))
    return EXIT_PASS if status_ok else EXIT_FAIL


def cmd_audit(args) -> int:
    circuit = _load(args.netlist)
    problems = validate(circuit)
    if problems:
        _write(args.out, _dump({"failures": problems}))
        return EXIT_FAIL
    a, q = shift_view(circuit)
    if not args.force:
        spec = shift_operator(a, q)
        try:
            mode = "exhaustive" if spec.domain_size <= args.cap else "random"
            report = verify(circuit, spec, mode, args.trials, args.seed, args.cap)
        except VerificationError as exc:
            _write(args.out, _dump({"failures": [str(exc)]}))
            return EXIT_FAIL
        if not report.passed:
            doc = {"failures": ["functional verification failed"],
                   "verification": report.to_dict()}
            _write(args.out, _dump(doc))
            return EXIT_FAIL
    try:
        audit = run_audit(circuit, a, q)
    except ValueError as exc:
        _write(args.out, _dump({"failures": [str(exc)]}))
        return EXIT_FAIL
    _write(args.out, _dump(audit.to_dict()))
    return EXIT_PASS if audit.ok else EXIT_FAIL


def bench_rows(operator: str, encoding: str | None, sizes: Sequence[int], q: int = 1,
               audit_max: int = 32) -> list[dict]:
    rows = []
    for n in sizes:
        circuit = generate(operator, n, q, encoding)
        st = stats(circuit)
        family = (circuit.encoding or {}).get("family", operator)
        ratio = st.gate_count / (n * math.log2(n)) if n > 1 else ""
        bound = ""
        if n <= audit_max:
            a, qq = shift_view(circuit)
            bound = run_audit(circuit, a, qq).implied_lower_bound
        rows.append({"n": n, "family": family, "gates": st.gate_count, "depth": st.depth,
                     "gates_per_nlogn": ratio, "implied_lower_bound": bound})
    return rows


def cmd_bench(args) -> int:
    if args.n_min < 1 or args.n_max < args.n_min:
        raise UsageError("need 1 <= --n-min <= --n-max")
    for v in (args.n_min, args.n_max):
        if v & (v - 1):
            raise UsageError("bench sizes must be powers of two")
    sizes = []
    n = args.n_min
    while n <= args.n_max:
        sizes.append(n)
        n *= 2
    rows = bench_rows(args.operator, args.encoding, sizes, args.q, args.audit_max)
    buf = io.StringIO()
    fields = ["n", "family", "gates", "depth", "gates_per_nlogn", "implied_lower_bound"]
    writer = csv.DictWriter(buf, fieldnames=fields, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow({k: (f"{v:.6f}" if isinstance(v, float) else v) for k, v in row.items()})
    _write(args.out, buf.getvalue())
    return EXIT_PASS


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="monocirc", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--out", default=None, help="output path (default stdout)")

    p = sub.add_parser("gen", help="generate a netlist")
    p.add_argument("operator", choices=sorted(OPERATORS))
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--q", type=int, default=1)
    p.add_argument("--encoding", default=None)
    p.add_argument("--dedup", action=argparse.BooleanOptionalAction, default=False,
                   help="hash-cons identical gates (changes gate counts)")
    common(p)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("verify", help="check a netlist against its operator")
    p.add_argument("netlist")
    p.add_argument("--mode", choices=("exhaustive", "random"), default="exhaustive")
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--cap", type=int, default=DEFAULT_CAP)
    p.add_argument("--completion", action="store_true",
                   help="also check the convolution completion properties")
    common(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("audit", help="path-census lower-bound certification")
    p.add_argument("netlist")
    p.add_argument("--force", action="store_true", help="skip functional verification")
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--cap", type=int, default=DEFAULT_CAP)
    common(p)
    p.set_defaults(func=cmd_audit)

    p = sub.add_parser("bench", help="gate-count sweep as CSV")
    p.add_argument("operator", choices=sorted(OPERATORS))
    p.add_argument("--encoding", default=None)
    p.add_argument("--q", type=int, default=1)
    p.add_argument("--n-min", type=int, default=4)
    p.add_argument("--n-max", type=int, default=1024)
    p.add_argument("--audit-max", type=int, default=32,
                   help="largest n for which the audit column is filled")
    common(p)
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"monocirc: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"monocirc: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
