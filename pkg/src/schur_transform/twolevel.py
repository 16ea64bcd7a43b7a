"""Two-level decomposition and sequence-length accounting."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
import scipy.sparse as sp

from .circuit import SchurCircuit, build_schur_circuit, expand_full_matrix, input_indices, occupied_outputs
from .errors import NotUnitary

ZERO_TOL = 1e-12
UNITARY_TOL = 1e-10
SOLOVAY_KITAEV_EXPONENT = 3.97


@dataclass(frozen=True, eq=False)
class TwoLevelRotation:
    """Unitary acting as ``matrix`` on indices ``(p, q)``, identity elsewhere.

    Indices are local to the reorder space of iteration ``k``; when
    ``replicated_over_seq`` is set the same rotation is applied for every
    value of the seq digits above it.
    """

    p: int
    q: int
    matrix: np.ndarray
    k: int = 0
    kind: str = ""
    replicated_over_seq: bool = False

    def __post_init__(self):
        if not self.p < self.q:
            raise ValueError(f"index pair must satisfy p < q, got ({self.p}, {self.q})")

    def apply_rows(self, mat: np.ndarray) -> None:
        """In place ``mat <- R @ mat``."""
        rows = mat[[self.p, self.q]]
        mat[[self.p, self.q]] = self.matrix @ rows

    def as_dense(self, size: int) -> np.ndarray:
        out = np.eye(size, dtype=complex)
        out[np.ix_([self.p, self.q], [self.p, self.q])] = self.matrix
        return out

    def shifted(self, offset: int, **changes) -> "TwoLevelRotation":
        kw = dict(k=self.k, kind=self.kind, replicated_over_seq=self.replicated_over_seq)
        kw.update(changes)
        return TwoLevelRotation(self.p + offset, self.q + offset, self.matrix, **kw)


def decompose(U, tol: float = ZERO_TOL, unitary_tol: float = UNITARY_TOL) -> list[TwoLevelRotation]:
    """Two-level rotations whose product, in list order, is ``U``.

    Columns are cleared left to right; within a column each nonzero below the
    diagonal is removed top to bottom by a rotation on (diagonal row, that
    row).  The remaining diagonal is removed with one phase rotation per entry
    that is not 1.  The returned list is in application order, so
    ``U = R[-1] @ ... @ R[0]``.
    """
    V = np.array(U.toarray() if sp.issparse(U) else U, dtype=complex)
    n = V.shape[0]
    if V.ndim != 2 or V.shape[1] != n:
        raise NotUnitary(f"expected a square matrix, got shape {V.shape}")
    if np.max(np.abs(V.conj().T @ V - np.eye(n)), initial=0.0) > unitary_tol:
        raise NotUnitary("matrix is not unitary")

    eliminations: list[TwoLevelRotation] = []
    for j in range(n - 1):
        for i in np.flatnonzero(np.abs(V[j + 1 :, j]) > tol) + j + 1:
            x, y = V[j, j], V[i, j]
            r = math.hypot(abs(x), abs(y))
            g = np.array([[np.conj(x), np.conj(y)], [-y, x]]) / r
            V[[j, i]] = g @ V[[j, i]]
            V[i, j] = 0.0
            eliminations.append(TwoLevelRotation(j, i, g))

    phases: list[TwoLevelRotation] = []
    for j in range(n):
        ph = V[j, j]
        if abs(ph - 1) <= tol:
            continue
        if n == 1:
            raise NotUnitary("a 1x1 phase cannot be written as a two-level rotation")
        if j < n - 1:
            phases.append(TwoLevelRotation(j, j + 1, np.diag([ph, 1.0])))
        else:
            phases.append(TwoLevelRotation(j - 1, j, np.diag([1.0, ph])))

    # G_m ... G_1 U = D  =>  U = G_1^+ ... G_m^+ D
    inverses = [TwoLevelRotation(g.p, g.q, g.matrix.conj().T) for g in reversed(eliminations)]
    return _realify(phases + inverses)


def _realify(rots: list[TwoLevelRotation]) -> list[TwoLevelRotation]:
    out = []
    for r in rots:
        m = r.matrix
        if np.max(np.abs(m.imag)) <= ZERO_TOL:
            m = m.real
        m = np.where(np.abs(m) <= ZERO_TOL, 0.0, m)
        out.append(TwoLevelRotation(r.p, r.q, m, r.k, r.kind, r.replicated_over_seq))
    return out


def reconstruct(rotations: list[TwoLevelRotation], size: int) -> np.ndarray:
    """Dense product of ``rotations`` in application order."""
    out = np.eye(size, dtype=complex)
    for r in rotations:
        r.apply_rows(out)
    return out


# --- the Schur circuit as a rotation stream -----------------------------------


def iteration_rotations(circuit: SchurCircuit, k: int) -> tuple[list[TwoLevelRotation], list[TwoLevelRotation]]:
    """(super-CG rotations, reorder rotations) for iteration ``k``, in ``R_k`` indices."""
    step = circuit.steps[k - 1]
    replicated = step.seq_above > 0
    cg_rots = []
    for i, (off, _, _) in enumerate(step.supercg.blocks):
        for r in decompose(step.supercg.placed(i)):
            cg_rots.append(r.shifted(off, k=k, kind="cg", replicated_over_seq=replicated))
    support = step.reorder.support
    reorder_rots = []
    if len(support):
        perm = step.reorder.perm
        local = {int(s): i for i, s in enumerate(support)}
        sub = np.zeros((len(support), len(support)))
        for i, s in enumerate(support):
            sub[local[int(perm[s])], i] = 1.0
        for r in decompose(sub):
            reorder_rots.append(
                TwoLevelRotation(
                    int(support[r.p]), int(support[r.q]), r.matrix, k=k, kind="reorder", replicated_over_seq=replicated
                )
            )
    return cg_rots, reorder_rots


def circuit_rotations(circuit: SchurCircuit) -> list[TwoLevelRotation]:
    """Every rotation of the circuit in application order."""
    out = []
    for k in range(1, circuit.n):
        cg_rots, reorder_rots = iteration_rotations(circuit, k)
        out.extend(cg_rots)
        out.extend(reorder_rots)
    return out


def analytic_bound_sum(n: int) -> int:
    """``6 * sum_k sum_mu2 (k - 2 mu2 + 1)`` over the qubit iterations."""
    return 6 * sum(k - 2 * m2 + 1 for k in range(1, n) for m2 in range(k // 2 + 1))


def analytic_bound(n: int) -> Fraction:
    """Closed-form cubic bound ``n^3/3 + 9n^2/4 + 13n/4 - 6`` (exact)."""
    return Fraction(n**3, 3) + Fraction(9 * n**2, 4) + Fraction(13 * n, 4) - 6


def qudit_bound(n: int, d: int) -> int:
    return d * (n + 1) ** (3 * d - 1)


@dataclass(frozen=True)
class SequenceReport:
    n: int
    d: int
    cg_counts: tuple[int, ...]
    reorder_counts: tuple[int, ...]
    bounds: dict = field(default_factory=dict)

    @property
    def per_iteration(self) -> tuple[int, ...]:
        return tuple(a + b for a, b in zip(self.cg_counts, self.reorder_counts))

    @property
    def total(self) -> int:
        return sum(self.per_iteration)


def sequence_length(n: int, d: int = 2, circuit: SchurCircuit | None = None) -> SequenceReport:
    """Two-level sequence length from decomposing every block and reorder."""
    if n < 2:
        raise ValueError("sequence length is defined for n >= 2")
    circuit = circuit or build_schur_circuit(n, d)
    cg_counts, re_counts = [], []
    for k in range(1, n):
        cg_rots, re_rots = iteration_rotations(circuit, k)
        cg_counts.append(len(cg_rots))
        re_counts.append(len(re_rots))
    if d == 2:
        bounds = {
            "analytic_sum": analytic_bound_sum(n),
            "analytic_cubic": analytic_bound(n),
            "cubic_envelope": n**3,
            "loose": 2 * n**3,
        }
    else:
        bounds = {"qudit": qudit_bound(n, d)}
    return SequenceReport(n=n, d=d, cg_counts=tuple(cg_counts), reorder_counts=tuple(re_counts), bounds=bounds)


def direct_unitary(circuit: SchurCircuit, cap: int | None = None) -> np.ndarray:
    """The transform on the full register with identity completion on ghosts.

    Computational inputs map as the circuit does; every other input index is
    sent to a leftover output index, fixing indices that are neither.
    """
    full = expand_full_matrix(circuit, cap)
    dim = full.shape[0]
    ins = input_indices(circuit)
    outs = np.array([o[0] for o in occupied_outputs(circuit)], dtype=np.int64)
    W = np.zeros((dim, dim), dtype=full.dtype)
    W[np.ix_(outs, ins)] = full[outs][:, ins].toarray()
    in_set, out_set = set(ins.tolist()), set(outs.tolist())
    free_cols = [x for x in range(dim) if x not in in_set]
    free_rows = set(x for x in range(dim) if x not in out_set)
    fixed = [x for x in free_cols if x in free_rows]
    for x in fixed:
        W[x, x] = 1.0
    fixed_set = set(fixed)
    for c, r in zip(
        [x for x in free_cols if x not in fixed_set], sorted(free_rows - fixed_set)
    ):
        W[r, c] = 1.0
    return W


def direct_decompose_baseline(n: int, d: int = 2, cap: int | None = None) -> int:
    """Rotation count from decomposing the whole transform as one matrix."""
    if n > 6:
        raise ValueError("direct baseline is exponential; n <= 6 only")
    return len(decompose(direct_unitary(build_schur_circuit(n, d), cap)))


def fault_tolerant_estimate(n: int, d: int = 2, epsilon: float = 1e-3, total: int | None = None) -> int:
    """Estimated primitive-gate count for overall error ``epsilon``.

    Each of the m two-level rotations gets error budget ``epsilon / m`` and is
    charged ``ceil(n * log2(m / epsilon))`` gates for qubits, or
    ``ceil(n * log2(m / epsilon) ** 3.97)`` for qudits.  This is a scaling
    estimate with unit constant, not a synthesis.
    """
    if not 0 < epsilon < 1:
        raise ValueError("epsilon must lie in (0, 1)")
    m = total if total is not None else sequence_length(n, d).total
    log_term = math.log2(m / epsilon)
    per = n * log_term if d == 2 else n * log_term**SOLOVAY_KITAEV_EXPONENT
    return m * math.ceil(per)
