"""Recursive assembly of the Schur transform.

Iteration k (adding qudit k + 1) consists of a super-CG transform, which is a
direct sum of one CG block per slot acting inside one column, followed by a
reorder permutation that routes every output irrep to its slot in the next
layout.  Both act on the reorder space ``R_k`` (see :mod:`.layout`) and are
copied over the seq digits above it.  Steps are stored column-local; the
exponentially large register is only built by :func:`expand_full_matrix`.
"""
from __future__ import annotations

import itertools
import os
from dataclasses import dataclass
from functools import cached_property, lru_cache

import numpy as np
import scipy.sparse as sp
from scipy.sparse.csgraph import connected_components

from .cg import CGBlock, cg_block
from .combinatorics import Partition
from .errors import SpaceCapExceeded
from .layout import (
    BasisLayout,
    MultiplicityLabeling,
    WireMap,
    branch_digit,
    layout_for,
    multiplicity_labeling,
    wire_map,
)

DEFAULT_SPACE_CAP = 2**14


@dataclass(frozen=True, eq=False)
class SuperCG:
    """Block-diagonal CG action on the low ``d * column_size`` indices of ``R_k``.

    Each block is stored with a row placement: position ``i`` of the slot
    range holds row ``row_order[i]`` of the CG block.  Placement puts every
    coupled group of rows on the diagonal positions of its columns, which
    keeps the two-level count low; the reorder step undoes it.
    """

    k: int
    d: int
    size: int  # dimension of R_k
    blocks: tuple[tuple[int, CGBlock, tuple[int, ...]], ...]  # (offset in R_k, block, row order)

    def placed(self, i: int) -> np.ndarray:
        _, blk, order = self.blocks[i]
        return blk.matrix[list(order)]

    def column_matrix(self) -> sp.csr_matrix:
        """Sparse unitary on ``R_k``; identity off the occupied slot ranges."""
        diag = np.ones(self.size)
        rows, cols, vals = [], [], []
        for i, (off, blk, _) in enumerate(self.blocks):
            mat = self.placed(i)
            diag[off : off + blk.side] = 0
            r, c = np.nonzero(mat)
            rows.append(r + off)
            cols.append(c + off)
            vals.append(mat[r, c])
        ident = np.flatnonzero(diag)
        rows.append(ident)
        cols.append(ident)
        vals.append(np.ones(len(ident)))
        return sp.csr_matrix(
            (np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))), shape=(self.size, self.size)
        )


@dataclass(frozen=True, eq=False)
class ReorderStep:
    """Permutation of ``R_k``: ``perm[src] = dst``."""

    k: int
    perm: np.ndarray

    @property
    def size(self) -> int:
        return len(self.perm)

    @cached_property
    def support(self) -> np.ndarray:
        return np.flatnonzero(self.perm != np.arange(self.size))

    def matrix(self) -> sp.csr_matrix:
        n = self.size
        return sp.csr_matrix((np.ones(n), (self.perm, np.arange(n))), shape=(n, n))


@dataclass(frozen=True, eq=False)
class IterationStep:
    k: int
    supercg: SuperCG
    reorder: ReorderStep
    layout_in: BasisLayout
    layout_out: BasisLayout
    wires: tuple[str, ...]  # wires of R_k, most significant first
    seq_above: int


def _complete_permutation(mapping: dict[int, int], size: int) -> np.ndarray:
    # Indices outside the mapping stay fixed, except targets that are not
    # sources: each routing path src -> ... -> dst is closed back onto its own
    # start, which maximizes the cycle count and so minimizes rotations.
    perm = np.arange(size)
    for s, t in mapping.items():
        perm[s] = t
    images = set(mapping.values())
    for start in sorted(set(mapping) - images):
        x = start
        while x in mapping:
            x = mapping[x]
        perm[x] = start
    return perm


def _rotation_count(mat: np.ndarray) -> int:
    from .twolevel import decompose

    return len(decompose(mat))


def placement(mat: np.ndarray, tol: float = 1e-12, brute_force_max: int = 5) -> tuple[int, ...]:
    """Row order putting each coupled row group on its own column positions.

    Rows and columns split into connected components of the nonzero pattern.
    A component's rows are placed at its column positions, in the order with
    the fewest two-level rotations (exhaustive for small components, by
    largest entry otherwise).
    """
    side = mat.shape[0]
    nz = np.abs(mat) > tol
    graph = sp.csr_matrix(np.block([[np.zeros((side, side)), nz], [nz.T, np.zeros((side, side))]]))
    _, labels = connected_components(graph, directed=False)
    order = [-1] * side
    for comp in sorted(set(labels.tolist()), key=lambda c: int(np.flatnonzero(labels == c)[0])):
        members = np.flatnonzero(labels == comp)
        rows = [int(m) for m in members if m < side]
        cols = [int(m) - side for m in members if m >= side]
        if len(rows) != len(cols):
            raise AssertionError("nonzero pattern of a unitary block is not square")
        sub = mat[np.ix_(rows, cols)]
        if len(rows) <= brute_force_max:
            best = min(
                itertools.permutations(range(len(rows))),
                key=lambda p: (_rotation_count(sub[list(p)]), p),
            )
        else:
            best, free = [], set(range(len(rows)))
            for c in range(len(cols)):
                pick = max(sorted(free), key=lambda r: abs(sub[r, c]))
                best.append(pick)
                free.remove(pick)
        for pos, r in zip(cols, best):
            order[pos] = rows[r]
    return tuple(order)


@lru_cache(maxsize=None)
def _placement_for(mu: Partition, d: int) -> tuple[int, ...]:
    return placement(cg_block(mu, d).matrix)


def iteration_step(
    k: int, d: int = 2, prior: BasisLayout | None = None, wires: WireMap | None = None
) -> tuple[SuperCG, ReorderStep, BasisLayout]:
    """Super-CG and reorder that lift the Schur basis of k qudits to k + 1."""
    step = _iteration_step(k, d, prior, wires)
    return step.supercg, step.reorder, step.layout_out


def _iteration_step(k: int, d: int, prior: BasisLayout | None, wires: WireMap | None) -> IterationStep:
    if k < 1:
        raise ValueError("k must be >= 1")
    prior = prior or layout_for(k, d)
    if prior.n != k or prior.d != d:
        raise ValueError("prior layout inconsistent with k, d")
    new = layout_for(k + 1, d)
    new_seq = 1 if k >= 2 else 0
    size = d ** (new.par_size + new.stat_size + new_seq)
    in_slot_span = prior.slot_capacity * d

    blocks = []
    mapping: dict[int, int] = {}
    for slot in prior.slots:
        blk = cg_block(slot.partition, d)
        order = _placement_for(slot.partition, d)
        off = (slot.index - 1) * in_slot_span
        blocks.append((off, blk, order))
        dst = {}
        for lam, start, stop in blk.output_irreps:
            digit = branch_digit(slot.partition, lam) if new_seq else 0
            dst0 = digit * new.column_size + new.slot_offset(lam)
            for r in range(start, stop):
                dst[r] = dst0 + (r - start)
        for pos, r in enumerate(order):
            mapping[off + pos] = dst[r]
    scg = SuperCG(k=k, d=d, size=size, blocks=tuple(blocks))
    reorder = ReorderStep(k=k, perm=_complete_permutation(mapping, size))
    if wires is None:
        wires = wire_map(k + 1, d)
    return IterationStep(
        k=k,
        supercg=scg,
        reorder=reorder,
        layout_in=prior,
        layout_out=new,
        wires=wires.steps[k - 1],
        seq_above=wires.seq_above[k - 1],
    )


@dataclass(frozen=True, eq=False)
class SchurCircuit:
    n: int
    d: int
    steps: tuple[IterationStep, ...]
    layout: BasisLayout
    wires: WireMap

    @cached_property
    def labeling(self) -> MultiplicityLabeling:
        return multiplicity_labeling(self.n, self.d)

    @property
    def register_size(self) -> int:
        return len(self.wires.wires)

    @property
    def ancilla_count(self) -> int:
        return self.register_size - self.n


def build_schur_circuit(n: int, d: int = 2) -> SchurCircuit:
    if n < 1:
        raise ValueError("n must be positive")
    wires = wire_map(n, d)
    layout = layout_for(1, d)
    steps = []
    for k in range(1, n):
        step = _iteration_step(k, d, layout, wires)
        steps.append(step)
        layout = step.layout_out
    return SchurCircuit(n=n, d=d, steps=tuple(steps), layout=layout, wires=wires)


# --- expansion onto the full register -----------------------------------------


def _space_cap(cap: int | None) -> int:
    if cap is not None:
        return cap
    return int(os.environ.get("SCHUR_SPACE_CAP", DEFAULT_SPACE_CAP))


def embed_local(op: sp.spmatrix, positions: list[int], digits: int, d: int) -> sp.csr_matrix:
    """Embed ``op`` acting on the wires at ``positions`` into a ``digits``-wire register."""
    dim = d**digits
    L = len(positions)
    place = np.array([d ** (digits - 1 - p) for p in positions], dtype=np.int64)
    local_place = d ** np.arange(L - 1, -1, -1, dtype=np.int64)

    idx = np.arange(dim, dtype=np.int64)
    local_digits = (idx[:, None] // place[None, :]) % d
    local = local_digits @ local_place
    rest = idx - local_digits @ place
    v = np.arange(d**L, dtype=np.int64)
    offsets = ((v[:, None] // local_place[None, :]) % d) @ place

    op = sp.csc_matrix(op)
    rows, cols, vals = [], [], []
    order = np.argsort(local, kind="stable")
    bounds = np.searchsorted(local[order], np.arange(d**L + 1))
    for lv in range(d**L):
        start, stop = op.indptr[lv], op.indptr[lv + 1]
        if start == stop:
            continue
        xs = order[bounds[lv] : bounds[lv + 1]]
        r_local = op.indices[start:stop]
        rows.append((rest[xs][:, None] + offsets[r_local][None, :]).ravel())
        cols.append(np.repeat(xs, stop - start))
        vals.append(np.tile(op.data[start:stop], len(xs)))
    return sp.csr_matrix((np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))), shape=(dim, dim))


def step_operator(circuit: SchurCircuit, step: IterationStep) -> sp.csr_matrix:
    """Reorder . super-CG of one iteration, embedded in the full register."""
    local = step.reorder.matrix() @ step.supercg.column_matrix()
    positions = [circuit.wires.position(w) for w in step.wires]
    return embed_local(local, positions, circuit.register_size, circuit.d)


def expand_full_matrix(circuit: SchurCircuit, cap: int | None = None) -> sp.csr_matrix:
    """Product of all iteration operators on the full register (sparse)."""
    cap = _space_cap(cap)
    dim = circuit.d**circuit.register_size
    if dim > cap:
        raise SpaceCapExceeded(f"register space {dim} exceeds cap {cap}")
    total = sp.identity(dim, format="csr", dtype=float)
    for step in circuit.steps:
        total = step_operator(circuit, step) @ total
    total.eliminate_zeros()
    return total.tocsr()


def input_indices(circuit: SchurCircuit) -> np.ndarray:
    """Full-register index of each computational input state (ancillas zero).

    Input states are ordered with qudit 1 most significant.
    """
    n, d, digits = circuit.n, circuit.d, circuit.register_size
    place = [d ** (digits - 1 - p) for p in circuit.wires.input_wires]
    out = np.zeros(d**n, dtype=np.int64)
    for x in range(d**n):
        rem = x
        for i in range(n - 1, -1, -1):
            out[x] += (rem % d) * place[i]
            rem //= d
    return out


def occupied_outputs(circuit: SchurCircuit) -> list[tuple[int, Partition, int, int]]:
    """``(index, lam, column, stat)`` of every occupied Schur basis state.

    Column and stat are 1-based; sorted by register index.
    """
    lay = circuit.layout
    out = []
    for slot in lay.slots:
        for col in circuit.labeling.occupied(slot.partition):
            base = (col - 1) * lay.column_size + (slot.index - 1) * lay.slot_capacity
            for s in range(slot.dimension):
                out.append((base + s, slot.partition, col, s + 1))
    return sorted(out)


def schur_matrix(circuit: SchurCircuit, cap: int | None = None) -> tuple[np.ndarray, list]:
    """The transform restricted to occupied outputs and computational inputs.

    Returns ``(S, outputs)`` where ``S`` is ``d**n x d**n`` and ``outputs`` is
    :func:`occupied_outputs`, labelling the rows of ``S``.
    """
    full = expand_full_matrix(circuit, cap)
    outs = occupied_outputs(circuit)
    rows = np.array([o[0] for o in outs], dtype=np.int64)
    S = full[rows][:, input_indices(circuit)].toarray()
    return S, outs
