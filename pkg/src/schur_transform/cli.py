"""Command-line entry point: ``schur-transform {gen,verify,bench,tables}``.

Exit codes: 0 success, 1 verification failure, 2 usage error, 3 resource cap.
"""
from __future__ import annotations

import argparse
import csv
import io
import sys
import time
from fractions import Fraction

import numpy as np

from . import gatestream
from .cg import spin_of
from .circuit import build_schur_circuit, expand_full_matrix
from .combinatorics import dim_Q, format_partition, multiplicity, partitions
from .errors import SpaceCapExceeded
from .twolevel import circuit_rotations, direct_decompose_baseline, sequence_length
from .verifier import verify_all

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_CAP = 0, 1, 2, 3
BENCH_MAX_N = 20
DIRECT_MAX_N = 6


class UsageError(Exception):
    pass


def _positive(min_value: int):
    def parse(text: str) -> int:
        try:
            value = int(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
        if value < min_value:
            raise argparse.ArgumentTypeError(f"must be >= {min_value}")
        return value

    return parse


def _write_csv(rows: list[list], header: list[str], path: str | None) -> None:
    buf = io.StringIO(newline="")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    if path in (None, "-"):
        sys.stdout.write(buf.getvalue())
    else:
        with open(path, "w", newline="") as fh:
            fh.write(buf.getvalue())


def _number(x) -> str:
    if isinstance(x, Fraction):
        return str(x.numerator) if x.denominator == 1 else repr(float(x))
    return str(x)


# --- subcommands ----------------------------------------------------------------


def cmd_gen(args) -> int:
    circuit = build_schur_circuit(args.n, args.d)
    output = args.output or f"schur_n{args.n}_d{args.d}.gates"
    rotations = circuit_rotations(circuit)
    if args.expand:
        full = expand_full_matrix(circuit)
        err = float(np.max(np.abs(gatestream.replay(gatestream.loads(gatestream.dumps(circuit, rotations))) - full.toarray())))
    if output == "-":
        sys.stdout.write(gatestream.dumps(circuit, rotations))
        out = sys.stderr
    else:
        gatestream.write(circuit, output, rotations)
        out = sys.stdout
    print(f"n={args.n} d={args.d}", file=out)
    print(f"two_level_count={len(rotations)}", file=out)
    print(f"ancilla_count={circuit.ancilla_count}", file=out)
    print(f"register_size={circuit.register_size}", file=out)
    if args.expand:
        print(f"replay_max_error={err:.3e}", file=out)
    print(f"output={output}", file=out)
    return EXIT_OK


def cmd_verify(args) -> int:
    circuit = build_schur_circuit(args.n, args.d)
    start = time.perf_counter()
    reports = verify_all(circuit, samples=args.samples, seed=args.seed)
    elapsed = time.perf_counter() - start
    print(f"verify n={args.n} d={args.d} samples={args.samples} seed={args.seed}")
    for slot in circuit.layout.slots:
        print(
            f"  slot {format_partition(slot.partition, args.d)}: dim={slot.dimension} "
            f"multiplicity={multiplicity(slot.partition)}"
        )
    for r in reports:
        print("  " + r.line())
    ok = all(r.passed for r in reports)
    print(f"  {'all checks passed' if ok else 'FAILED: ' + ', '.join(r.name for r in reports if not r.passed)}"
          f" ({elapsed:.2f}s)")
    # machine-readable records
    for r in reports:
        print(f"check={r.name} passed={int(r.passed)} max_residual={r.max_residual:.6e}")
    print(f"result={'pass' if ok else 'fail'}")
    return EXIT_OK if ok else EXIT_FAIL


def cmd_bench(args) -> int:
    if args.max_n > BENCH_MAX_N:
        raise UsageError(f"--max-n is limited to {BENCH_MAX_N}")
    if args.max_n < 2:
        raise UsageError("--max-n must be >= 2")
    rows = []
    for n in range(2, args.max_n + 1):
        rep = sequence_length(n, args.d)
        bound = rep.bounds["analytic_cubic"] if args.d == 2 else rep.bounds["qudit"]
        direct = ""
        if args.include_direct and n <= DIRECT_MAX_N:
            direct = direct_decompose_baseline(n, args.d)
        rows.append([n, rep.total, _number(bound), n**3, direct])
    _write_csv(rows, ["n", "structured_count", "analytic_bound", "cubic_envelope", "direct_count"], args.csv)
    return EXIT_OK


def cmd_tables(args) -> int:
    if args.n > 20:
        raise UsageError("--n is limited to 20")
    rows = []
    for lam in partitions(args.n, args.d):
        spin = _number(spin_of(lam)) if args.d == 2 else ""
        rows.append([format_partition(lam, args.d), dim_Q(lam, args.d), multiplicity(lam), spin])
    _write_csv(rows, ["partition", "dim_Q", "multiplicity", "spin"], args.csv)
    return EXIT_OK


# --- parser ---------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="schur-transform", description="Compile and check Schur transform circuits.")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="write the two-level gate stream")
    g.add_argument("--n", type=_positive(1), required=True)
    g.add_argument("--d", type=_positive(2), default=2)
    g.add_argument("--output", "-o", help="output path ('-' for stdout); default schur_n<N>_d<D>.gates")
    g.add_argument("--expand", action="store_true", help="also expand the full register and check the replay")
    g.set_defaults(func=cmd_gen)

    v = sub.add_parser("verify", help="run the representation-theory checks")
    v.add_argument("--n", type=_positive(1), required=True)
    v.add_argument("--d", type=_positive(2), default=2)
    v.add_argument("--samples", type=_positive(1), default=20)
    v.add_argument("--seed", type=int, default=1234)
    v.set_defaults(func=cmd_verify)

    b = sub.add_parser("bench", help="sequence-length table as CSV")
    b.add_argument("--max-n", type=_positive(1), required=True)
    b.add_argument("--d", type=_positive(2), default=2)
    b.add_argument("--csv", help="output path (default stdout)")
    b.add_argument("--include-direct", action="store_true", help=f"add the direct baseline for n <= {DIRECT_MAX_N}")
    b.set_defaults(func=cmd_bench)

    t = sub.add_parser("tables", help="partitions with dimensions and multiplicities as CSV")
    t.add_argument("--n", type=_positive(1), required=True)
    t.add_argument("--d", type=_positive(2), default=2)
    t.add_argument("--csv", help="output path (default stdout)")
    t.set_defaults(func=cmd_tables)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SpaceCapExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAP
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
