"""Line-oriented serialization of a Schur circuit's two-level rotations.

File layout::

    {json header on one line}
    ---
    k kind p q  re00 im00 re01 im01 re10 im10 re11 im11  replicated

Records are in application order.  ``p`` and ``q`` index the reorder space
of iteration ``k``, whose wires are listed in ``header["wire_steps"][k-1]``;
a replicated record acts identically for every value of the wires above it.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .circuit import SchurCircuit
from .combinatorics import format_partition
from .twolevel import TwoLevelRotation, circuit_rotations

FORMAT_VERSION = 1
SEPARATOR = "---"
LABELING_MAX_N = 12


def header_for(circuit: SchurCircuit) -> dict:
    lay = circuit.layout
    head = {
        "format": "schur-gatestream",
        "version": FORMAT_VERSION,
        "n": circuit.n,
        "d": circuit.d,
        "seq_size": lay.seq_size,
        "par_size": lay.par_size,
        "stat_size": lay.stat_size,
        "register_size": circuit.register_size,
        "ancilla_count": circuit.ancilla_count,
        "slots": [
            {"index": s.index, "partition": list(s.partition), "dimension": s.dimension, "capacity": s.capacity}
            for s in lay.slots
        ],
        "wires": list(circuit.wires.wires),
        "wire_steps": [list(w) for w in circuit.wires.steps],
        "seq_above": list(circuit.wires.seq_above),
        "routing": "new seq digit = index of source slot among the partitions reached by removing one box",
    }
    if circuit.n <= LABELING_MAX_N:
        head["labeling"] = {
            format_partition(lam, circuit.d): {str(col): str(t) for col, t in sorted(cols.items())}
            for lam, cols in circuit.labeling.columns.items()
        }
    return head


def _fmt(x: float) -> str:
    return "%.17g" % (x + 0.0)  # + 0.0 folds -0.0


def format_record(r: TwoLevelRotation) -> str:
    m = np.asarray(r.matrix, dtype=complex).ravel()
    nums = " ".join(f"{_fmt(z.real)} {_fmt(z.imag)}" for z in m)
    return f"{r.k} {r.kind} {r.p} {r.q} {nums} {int(r.replicated_over_seq)}"


def dumps(circuit: SchurCircuit, rotations: list[TwoLevelRotation] | None = None) -> str:
    rotations = circuit_rotations(circuit) if rotations is None else rotations
    lines = [json.dumps(header_for(circuit), sort_keys=True), SEPARATOR]
    lines += [format_record(r) for r in rotations]
    return "\n".join(lines) + "\n"


def write(circuit: SchurCircuit, path, rotations: list[TwoLevelRotation] | None = None) -> int:
    """Write the stream to ``path``; returns the number of records."""
    rotations = circuit_rotations(circuit) if rotations is None else rotations
    with open(path, "w", newline="\n") as fh:
        fh.write(dumps(circuit, rotations))
    return len(rotations)


# --- loading and replay ---------------------------------------------------------


@dataclass(frozen=True)
class Record:
    k: int
    kind: str
    p: int
    q: int
    matrix: np.ndarray
    replicated: bool


@dataclass(frozen=True)
class GateStream:
    header: dict
    records: tuple[Record, ...]


def loads(text: str) -> GateStream:
    head_line, sep, *body = text.splitlines()
    if sep != SEPARATOR:
        raise ValueError("missing header separator")
    header = json.loads(head_line)
    if header.get("version") != FORMAT_VERSION:
        raise ValueError(f"unsupported gate-stream version {header.get('version')}")
    records = []
    for line in body:
        if not line.strip():
            continue
        f = line.split()
        vals = np.array([float(x) for x in f[4:12]])
        m = (vals[0::2] + 1j * vals[1::2]).reshape(2, 2)
        records.append(Record(int(f[0]), f[1], int(f[2]), int(f[3]), m, bool(int(f[12]))))
    return GateStream(header, tuple(records))


def load(path) -> GateStream:
    return loads(Path(path).read_text())


def replay(stream: GateStream) -> np.ndarray:
    """Dense full-register unitary obtained by applying every record in order.

    Only the header's wire lists are used: each record's local indices are
    spread over its wires and the rotation is applied for every value of
    the remaining wires.
    """
    h = stream.header
    d, digits = h["d"], h["register_size"]
    dim = d**digits
    wires = h["wires"]
    out = np.eye(dim, dtype=complex)
    cache: dict[int, tuple[np.ndarray, np.ndarray, np.ndarray]] = {}
    for rec in stream.records:
        if rec.k not in cache:
            step = h["wire_steps"][rec.k - 1]
            place = np.array([d ** (digits - 1 - wires.index(w)) for w in step], dtype=np.int64)
            L = len(step)
            idx = np.arange(dim, dtype=np.int64)
            local_digits = (idx[:, None] // place[None, :]) % d
            base = idx[(local_digits == 0).all(axis=1)]
            weights = d ** np.arange(L - 1, -1, -1, dtype=np.int64)
            cache[rec.k] = (base, place, weights)
        base, place, weights = cache[rec.k]
        dp = ((rec.p // weights) % d) @ place
        dq = ((rec.q // weights) % d) @ place
        rows_p, rows_q = base + dp, base + dq
        a, b = out[rows_p], out[rows_q]
        m = rec.matrix
        out[rows_p] = m[0, 0] * a + m[0, 1] * b
        out[rows_q] = m[1, 0] * a + m[1, 1] * b
    return out
