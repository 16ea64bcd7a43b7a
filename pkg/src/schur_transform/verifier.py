"""Brute-force checks that a built circuit really is a Schur transform.

Every oracle here is assembled from single-site operators on ``(C^d)^n`` and
shares no code with the circuit builder beyond reading off which register
index carries which label.
"""
from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import reduce

import numpy as np
import scipy.sparse as sp

from .cg import spin_of
from .circuit import SchurCircuit, schur_matrix
from .combinatorics import dim_Q, multiplicity, padded, partitions

RESIDUAL_TOL = 1e-10


@dataclass
class CheckReport:
    name: str
    passed: bool
    max_residual: float = 0.0
    details: dict = field(default_factory=dict)

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"{status} {self.name} max_residual={self.max_residual:.3e}"


# --- oracles --------------------------------------------------------------------


def _site_operator(op: np.ndarray, site: int, n: int) -> sp.csr_matrix:
    d = op.shape[0]
    return sp.kron(sp.kron(sp.identity(d**site), sp.csr_matrix(op)), sp.identity(d ** (n - site - 1)), format="csr")


@dataclass
class SpinOperators:
    """Total spin squared and projection on n spin-1/2 sites (hbar = 1)."""

    n: int
    J2: sp.csr_matrix
    Jz: sp.csr_matrix

    def self_test(self, tol: float = 1e-12) -> float:
        herm = max(abs(self.J2 - self.J2.getH()).max(), abs(self.Jz - self.Jz.getH()).max())
        comm = abs(self.J2 @ self.Jz - self.Jz @ self.J2).max()
        return float(max(herm, comm))


def spin_operators(n: int) -> SpinOperators:
    # |0> is spin up
    sx = np.array([[0, 1], [1, 0]]) / 2
    sy = np.array([[0, -1j], [1j, 0]]) / 2
    sz = np.array([[1, 0], [0, -1]]) / 2
    J = [reduce(lambda a, b: a + b, (_site_operator(s, i, n) for i in range(n))) for s in (sx, sy, sz)]
    J2 = (J[0] @ J[0] + J[1] @ J[1] + J[2] @ J[2]).tocsr()
    J2.data = J2.data.real.astype(complex)
    return SpinOperators(n=n, J2=J2, Jz=J[2].tocsr())


def unitary_generators(n: int, d: int) -> np.ndarray:
    """Dense ``sum_i E_ab^(i)`` for all a, b."""
    out = np.zeros((d, d, d**n, d**n))
    for a in range(d):
        for b in range(d):
            e = np.zeros((d, d))
            e[a, b] = 1
            out[a, b] = sum(_site_operator(e, i, n) for i in range(n)).toarray()
    return out


def casimir_eigenvalue(lam, d: int) -> int:
    """Quadratic Casimir ``sum_ab E_ab E_ba`` on the irrep ``lam``."""
    return sum(l * (l + d + 1 - 2 * i) for i, l in enumerate(padded(lam, d), start=1))


def permutation_operator(perm: tuple[int, ...], d: int) -> sp.csr_matrix:
    """``P(s)`` on ``(C^d)^n``: the factor at position i moves to position ``s(i)``.

    ``perm`` is 0-based: ``perm[i] = s(i)``.
    """
    n = len(perm)
    dim = d**n
    x = np.arange(dim)
    digits = [(x // d ** (n - 1 - i)) % d for i in range(n)]
    y = np.zeros(dim, dtype=np.int64)
    for i in range(n):
        y += digits[i] * d ** (n - 1 - perm[i])
    return sp.csr_matrix((np.ones(dim), (y, x)), shape=(dim, dim))


def unitary_operator(u: np.ndarray, n: int) -> np.ndarray:
    """``Q(u) = u (x) ... (x) u``."""
    return reduce(np.kron, [u] * n, np.eye(1))


def random_unitary(d: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed unitary via QR of a complex Gaussian matrix."""
    z = (rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def adjacent_transpositions(n: int) -> list[tuple[int, ...]]:
    out = []
    for i in range(n - 1):
        p = list(range(n))
        p[i], p[i + 1] = p[i + 1], p[i]
        out.append(tuple(p))
    return out


# --- checks ---------------------------------------------------------------------


def _matrix(circuit: SchurCircuit, matrix):
    return matrix if matrix is not None else schur_matrix(circuit)


def _offdiag(M: np.ndarray) -> float:
    return float(np.max(np.abs(M - np.diag(np.diag(M))), initial=0.0))


def check_spin_diagonalization(circuit: SchurCircuit, matrix=None, tol: float = RESIDUAL_TOL) -> CheckReport:
    """Transformed J^2 and J^z are diagonal with the expected spectrum."""
    if circuit.d != 2:
        raise ValueError("spin operators are defined for qubits only")
    S, outs = _matrix(circuit, matrix)
    ops = spin_operators(circuit.n)
    J2 = S @ (ops.J2 @ S.conj().T)
    Jz = S @ (ops.Jz @ S.conj().T)
    off = max(_offdiag(J2), _offdiag(Jz))

    expected_j2 = np.array([float(spin_of(lam) * (spin_of(lam) + 1)) for _, lam, _, _ in outs])
    expected_jz = np.array([float(spin_of(lam)) - (s - 1) for _, lam, _, s in outs])
    diag_err = max(
        float(np.max(np.abs(np.diag(J2) - expected_j2), initial=0.0)),
        float(np.max(np.abs(np.diag(Jz) - expected_jz), initial=0.0)),
    )

    # multiplicity of each J^2 eigenvalue, read off the spectrum only
    eig = np.round(np.real(np.diag(J2)), 8)
    counted = {float(v): int(c) for v, c in zip(*np.unique(eig, return_counts=True))}
    wanted = {}
    for lam in partitions(circuit.n, 2):
        j = spin_of(lam)
        wanted[round(float(j * (j + 1)), 8)] = int(2 * j + 1) * multiplicity(lam)
    passed = off <= tol and diag_err <= tol and counted == wanted
    return CheckReport(
        "spin_diagonalization",
        passed,
        max(off, diag_err),
        {"offdiag": off, "eigenvalue_multiplicities": counted, "expected_multiplicities": wanted, "oracle_self_test": ops.self_test()},
    )


def check_casimir_diagonalization(circuit: SchurCircuit, matrix=None, tol: float = RESIDUAL_TOL) -> CheckReport:
    """Qudit analogue of the spin check: Casimir and Cartan generators diagonal."""
    S, outs = _matrix(circuit, matrix)
    n, d = circuit.n, circuit.d
    E = unitary_generators(n, d)
    C2 = sum(E[a, b] @ E[b, a] for a in range(d) for b in range(d))
    worst = 0.0
    T = S @ C2 @ S.conj().T
    worst = max(worst, _offdiag(T))
    expected = np.array([casimir_eigenvalue(lam, d) for _, lam, _, _ in outs], dtype=float)
    worst = max(worst, float(np.max(np.abs(np.diag(T) - expected), initial=0.0)))
    for a in range(d):
        H = S @ E[a, a] @ S.conj().T
        worst = max(worst, _offdiag(H))
        hw = [padded(lam, d)[a] for _, lam, _, s in outs if s == 1]
        tops = np.real(np.diag(H))[[i for i, o in enumerate(outs) if o[3] == 1]]
        worst = max(worst, float(np.max(np.abs(tops - np.array(hw)), initial=0.0)))
    return CheckReport("casimir_diagonalization", worst <= tol, worst)


def _blocks(outs) -> dict:
    groups: dict = {}
    for pos, (_, lam, col, s) in enumerate(outs):
        groups.setdefault((lam, col), []).append(pos)
    return groups


def check_unitary_rep_blocks(
    circuit: SchurCircuit, samples: int = 20, seed: int = 1234, matrix=None, tol: float = RESIDUAL_TOL, unitaries=None
) -> CheckReport:
    """``S Q(u) S^+`` is block diagonal over (column, slot), same block per copy."""
    S, outs = _matrix(circuit, matrix)
    n, d = circuit.n, circuit.d
    rng = np.random.default_rng(seed)
    us = list(unitaries) if unitaries is not None else [random_unitary(d, rng) for _ in range(samples)]
    groups = _blocks(outs)
    mask = np.zeros((len(outs), len(outs)), dtype=bool)
    for idx in groups.values():
        mask[np.ix_(idx, idx)] = True
    leak = spread = 0.0
    for u in us:
        M = S @ unitary_operator(u, n) @ S.conj().T
        leak = max(leak, float(np.max(np.abs(M[~mask]), initial=0.0)))
        first: dict = {}
        for (lam, col), idx in groups.items():
            blk = M[np.ix_(idx, idx)]
            if lam in first:
                spread = max(spread, float(np.max(np.abs(blk - first[lam]))))
            else:
                first[lam] = blk
    worst = max(leak, spread)
    sizes = {lam: (len(idx), sum(1 for (l2, _) in groups if l2 == lam)) for (lam, _), idx in groups.items()}
    return CheckReport(
        "unitary_rep_blocks",
        worst <= tol,
        worst,
        {"samples": len(us), "offblock": leak, "copy_spread": spread, "block_dim_and_copies": sizes},
    )


def check_symmetric_rep_blocks(circuit: SchurCircuit, matrix=None, tol: float = RESIDUAL_TOL) -> CheckReport:
    """``S P(s) S^+`` keeps each par sector, is trivial on stat, mixes only seq."""
    S, outs = _matrix(circuit, matrix)
    n, d = circuit.n, circuit.d
    lam_of = [o[1] for o in outs]
    stat_of = [o[3] for o in outs]
    col_of = [o[2] for o in outs]
    same = np.array([[lam_of[i] == lam_of[j] and stat_of[i] == stat_of[j] for j in range(len(outs))] for i in range(len(outs))])
    index = {(lam_of[i], col_of[i], stat_of[i]): i for i in range(len(outs))}
    leak = spread = 0.0
    for perm in adjacent_transpositions(n):
        M = S @ (permutation_operator(perm, d) @ S.conj().T)
        leak = max(leak, float(np.max(np.abs(M[~same]), initial=0.0)))
        for lam in partitions(n, d):
            cols = sorted({c for l2, c in zip(lam_of, col_of) if l2 == lam})
            ref = None
            for s in range(1, dim_Q(lam, d) + 1):
                rows = [index[(lam, c, s)] for c in cols]
                blk = M[np.ix_(rows, rows)]
                if ref is None:
                    ref = blk
                else:
                    spread = max(spread, float(np.max(np.abs(blk - ref))))
    worst = max(leak, spread)
    return CheckReport(
        "symmetric_rep_blocks", worst <= tol, worst, {"offsector": leak, "stat_spread": spread, "generators": n - 1}
    )


def check_completeness(n: int, d: int) -> CheckReport:
    """``sum_lam multiplicity * dim = d^n`` in exact integers."""
    terms = [(lam, multiplicity(lam), dim_Q(lam, d)) for lam in partitions(n, d)]
    total = sum(m * q for _, m, q in terms)
    return CheckReport(
        "completeness",
        total == d**n,
        float(abs(total - d**n)),
        {"terms": [(lam, m, q) for lam, m, q in terms], "total": total, "expected": d**n},
    )


def verify_all(circuit: SchurCircuit, samples: int = 20, seed: int = 1234) -> list[CheckReport]:
    """Run every check; independent checks run on ``THREADS`` worker threads."""
    matrix = schur_matrix(circuit)
    if circuit.d == 2:
        first = lambda: check_spin_diagonalization(circuit, matrix)  # noqa: E731
    else:
        first = lambda: check_casimir_diagonalization(circuit, matrix)  # noqa: E731
    jobs = [
        first,
        lambda: check_unitary_rep_blocks(circuit, samples, seed, matrix),
        lambda: check_symmetric_rep_blocks(circuit, matrix),
        lambda: check_completeness(circuit.n, circuit.d),
    ]
    workers = max(1, int(os.environ.get("THREADS", "1")))
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda job: job(), jobs))
