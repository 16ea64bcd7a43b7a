"""Clebsch-Gordan blocks that add one qudit to an irrep.

Two constructions are provided:

* :func:`cg_qubit` couples a spin-j system with a spin-1/2 using the total
  lowering operator (Condon-Shortley phases).
* :func:`cg_qudit` works for any d.  It takes a realization of the input irrep
  (its u(d) generator matrices), finds the highest-weight vector of each output
  irrep in the product with C^d, and fills out the irrep by lowering and
  Gram-Schmidt.

Both return a :class:`CGBlock` whose rows are output basis vectors expressed in
the product basis ``|s> (x) |t>``, flattened as ``s * d + t``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .combinatorics import Partition, add_box, as_partition, dim_Q, padded
from .errors import RealizationNotInvariant

ZERO_TOL = 1e-12
WEIGHT_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class CGBlock:
    """Unitary change of basis ``Q_mu (x) C^d -> (+)_lam Q_lam``.

    ``output_irreps`` lists ``(lam, start, stop)`` row ranges in canonical
    partition order.
    """

    mu: Partition
    d: int
    matrix: np.ndarray
    output_irreps: tuple[tuple[Partition, int, int], ...]

    @property
    def side(self) -> int:
        return self.matrix.shape[0]

    def rows_of(self, lam: Partition) -> slice:
        for part, start, stop in self.output_irreps:
            if part == lam:
                return slice(start, stop)
        raise KeyError(lam)


def spin_of(lam: Partition) -> Fraction:
    """Total spin ``(lam_1 - lam_2) / 2`` of a two-row partition."""
    lam = as_partition(lam)
    if len(lam) > 2:
        raise ValueError(f"{lam} is not a qubit irrep label")
    l1, l2 = padded(lam, 2)
    return Fraction(l1 - l2, 2)


def _spin_lowering(two_j: int) -> np.ndarray:
    # basis m = j, j-1, ..., -j;  J- |j,m> = sqrt(j(j+1) - m(m-1)) |j,m-1>
    j = two_j / 2
    dim = two_j + 1
    low = np.zeros((dim, dim))
    for i in range(dim - 1):
        m = j - i
        low[i + 1, i] = np.sqrt(j * (j + 1) - m * (m - 1))
    return low


@lru_cache(maxsize=None)
def _cg_qubit_matrix(two_j: int) -> np.ndarray:
    dim = two_j + 1
    if dim == 1:
        return np.eye(2)
    low = np.kron(_spin_lowering(two_j), np.eye(2)) + np.kron(np.eye(dim), _spin_lowering(1))
    side = 2 * dim
    out = np.zeros((side, side))

    # spin j + 1/2: start from |j,j>|up> and lower
    vec = np.zeros(side)
    vec[0] = 1.0
    for r in range(dim + 1):
        out[r] = vec
        if r < dim:
            vec = low @ vec
            vec /= np.linalg.norm(vec)

    # spin j - 1/2: the m = j - 1/2 state orthogonal to the one above.
    # Columns 1 = |j,j>|down>, 2 = |j,j-1>|up>.  Condon-Shortley: the
    # coefficient on |j,j>|down> is positive.
    upper = out[1]
    vec = np.zeros(side)
    vec[1], vec[2] = upper[2], -upper[1]
    vec /= np.linalg.norm(vec)
    for r in range(dim - 1):
        out[dim + 1 + r] = vec
        if r < dim - 2:
            vec = low @ vec
            vec /= np.linalg.norm(vec)
    out[np.abs(out) <= ZERO_TOL] = 0.0
    out.setflags(write=False)
    return out


def cg_qubit(j) -> CGBlock:
    """CG block adding a spin-1/2 to spin ``j`` (``2j`` a non-negative integer).

    Input columns are ``|j, m> (x) |+-1/2>`` with m descending and spin-up
    first; output rows are ``|j+1/2, m'>`` then ``|j-1/2, m'>``, m' descending.
    """
    two_j = Fraction(j) * 2
    if two_j.denominator != 1 or two_j < 0:
        raise ValueError(f"2j must be a non-negative integer, got j={j}")
    two_j = int(two_j)
    mat = _cg_qubit_matrix(two_j)
    # irrep labels for a qubit register of the smallest consistent size
    mu = as_partition((two_j,)) if two_j else ()
    hi, lo = (two_j + 1,), (two_j, 1)
    if two_j == 0:
        outputs = (((1,), 0, 2),)
    else:
        outputs = ((hi, 0, two_j + 2), (lo, two_j + 2, 2 * two_j + 2))
    return CGBlock(mu=mu, d=2, matrix=mat, output_irreps=outputs)


def cg_qubit_for(mu: Partition) -> CGBlock:
    """:func:`cg_qubit` with the partition labels of ``mu`` attached."""
    mu = as_partition(mu)
    base = cg_qubit(spin_of(mu))
    outs = add_box(mu, 2)
    ranges = []
    start = 0
    for lam in outs:
        stop = start + dim_Q(lam, 2)
        ranges.append((lam, start, stop))
        start = stop
    return CGBlock(mu=mu, d=2, matrix=base.matrix, output_irreps=tuple(ranges))


# --- general d ---------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class Realization:
    """Matrices of the u(d) generators ``E_ab`` acting on a ``Q_mu`` basis.

    ``generators[a, b]`` is the ``dim x dim`` matrix of ``E_ab``.  Basis
    vectors are weight vectors, ordered by weight lexicographically descending.
    """

    mu: Partition
    d: int
    generators: np.ndarray = field(repr=False)

    @property
    def dim(self) -> int:
        return self.generators.shape[-1]

    def weights(self) -> np.ndarray:
        """Integer weight of each basis vector, shape ``(dim, d)``."""
        diag = np.stack([np.real(np.diag(self.generators[a, a])) for a in range(self.d)], axis=1)
        return np.rint(diag).astype(int)

    def check(self, tol: float = WEIGHT_TOL) -> None:
        """Raise :class:`RealizationNotInvariant` unless this is a u(d) rep of ``mu``."""
        E = self.generators
        d, dim = self.d, self.dim
        if E.shape != (d, d, dim, dim):
            raise RealizationNotInvariant(f"generator array has shape {E.shape}")
        if dim != dim_Q(self.mu, d):
            raise RealizationNotInvariant(f"dimension {dim} != dim Q_{self.mu} = {dim_Q(self.mu, d)}")
        for a in range(d):
            for b in range(d):
                if np.max(np.abs(E[a, b] - E[b, a].conj().T)) > tol:
                    raise RealizationNotInvariant(f"E_{a}{b} is not the adjoint of E_{b}{a}")
                for c in range(d):
                    for e in range(d):
                        comm = E[a, b] @ E[c, e] - E[c, e] @ E[a, b]
                        want = (b == c) * E[a, e] - (e == a) * E[c, b]
                        if np.max(np.abs(comm - want)) > tol:
                            raise RealizationNotInvariant(f"[E_{a}{b}, E_{c}{e}] fails the u(d) relations")
        for a in range(d):
            diag = E[a, a]
            if np.max(np.abs(diag - np.diag(np.diag(diag)))) > tol:
                raise RealizationNotInvariant("basis vectors are not weight vectors")

    @classmethod
    def defining(cls, d: int) -> "Realization":
        """``C^d`` itself, the irrep labelled ``(1)``."""
        E = np.zeros((d, d, d, d))
        for a in range(d):
            for b in range(d):
                E[a, b, a, b] = 1.0
        return cls(mu=(1,), d=d, generators=E)

    @classmethod
    def from_basis(cls, mu: Partition, d: int, basis: np.ndarray, tol: float = WEIGHT_TOL) -> "Realization":
        """Realization from orthonormal rows ``basis`` spanning a copy of ``Q_mu`` in ``(C^d)^n``.

        Raises :class:`RealizationNotInvariant` when the span is not closed
        under the global generators.
        """
        basis = np.atleast_2d(np.asarray(basis))
        n = sum(mu)
        if basis.shape[1] != d**n:
            raise ValueError(f"basis vectors must live in (C^{d})^{n}")
        gram = basis.conj() @ basis.T
        if np.max(np.abs(gram - np.eye(basis.shape[0]))) > tol:
            raise RealizationNotInvariant("basis rows are not orthonormal")
        E = np.zeros((d, d, basis.shape[0], basis.shape[0]), dtype=complex)
        for a in range(d):
            for b in range(d):
                G = global_generator(a, b, d, n)
                image = (G @ basis.T).T
                coeffs = image @ basis.conj().T
                if np.max(np.abs(image - coeffs @ basis)) > tol:
                    raise RealizationNotInvariant(f"span is not invariant under E_{a}{b}")
                E[a, b] = coeffs.T
        if np.max(np.abs(E.imag)) <= tol:
            E = E.real
        real = cls(mu=as_partition(mu), d=d, generators=E)
        real.check(tol)
        return real


def global_generator(a: int, b: int, d: int, n: int) -> np.ndarray:
    """Dense ``sum_i E_ab^(i)`` on ``(C^d)^n`` (small n only)."""
    e = np.zeros((d, d))
    e[a, b] = 1.0
    total = np.zeros((d**n, d**n))
    for i in range(n):
        total += np.kron(np.kron(np.eye(d**i), e), np.eye(d ** (n - i - 1)))
    return total


def _lead_positive(vec: np.ndarray) -> np.ndarray:
    mags = np.abs(vec)
    lead = int(np.argmax(mags >= mags.max() - 1e-9))
    phase = vec[lead] / mags[lead]
    return vec / phase


def cg_qudit(mu: Partition, d: int, realization: Realization | None = None) -> CGBlock:
    """CG block for ``Q_mu (x) C^d`` built from highest-weight vectors.

    For each output ``lam = mu + e_j`` the highest-weight vector is the unique
    (up to phase) vector of weight ``lam`` killed by every raising generator.
    Its leading coordinate is made real positive.  The rest of the irrep comes
    from applying ``E_{a+1,a}`` for ``a = 0..d-2`` to each produced vector,
    orthonormalizing against what is already there.  Output vectors are sorted
    by weight, lexicographically descending.
    """
    mu = as_partition(mu)
    if realization is None:
        realization = canonical_realization(mu, d)
    if realization.mu != mu or realization.d != d:
        raise ValueError("realization does not match mu, d")
    realization.check()
    block, _ = _cg_qudit(realization)
    return block


def _cg_qudit(real: Realization) -> tuple[CGBlock, dict[Partition, Realization]]:
    mu, d = real.mu, real.d
    dim_mu = real.dim
    side = dim_mu * d
    eye_mu = np.eye(dim_mu)
    eye_d = np.eye(d)
    G = np.empty((d, d, side, side), dtype=real.generators.dtype)
    for a in range(d):
        for b in range(d):
            e = np.zeros((d, d))
            e[a, b] = 1.0
            G[a, b] = np.kron(real.generators[a, b], eye_d) + np.kron(eye_mu, e)

    w_in = real.weights()
    weights = np.array([w_in[s] + np.eye(d, dtype=int)[t] for s in range(dim_mu) for t in range(d)])
    raising = np.vstack([G[a, a + 1] for a in range(d - 1)]) if d > 1 else np.zeros((0, side))

    rows: list[np.ndarray] = []
    outputs: list[tuple[Partition, int, int]] = []
    realizations: dict[Partition, Realization] = {}
    for lam in add_box(mu, d):
        target = np.array(padded(lam, d))
        support = np.flatnonzero(np.all(weights == target, axis=1))
        sub = raising[:, support]
        _, sv, vh = np.linalg.svd(sub) if sub.size else (None, np.zeros(0), np.eye(len(support)))
        rank = int(np.sum(sv > WEIGHT_TOL))
        null = vh[rank:].conj()
        if null.shape[0] != 1:
            raise AssertionError(f"highest-weight space of {lam} in {mu} (x) (1) has dim {null.shape[0]}")
        hw = np.zeros(side, dtype=G.dtype)
        hw[support] = null[0]
        hw = _lead_positive(hw)
        if np.isrealobj(G):
            hw = hw.real

        target_dim = dim_Q(lam, d)
        produced = [hw]
        queue = [hw]
        while queue and len(produced) < target_dim:
            v = queue.pop(0)
            for a in range(d - 1):
                w = G[a + 1, a] @ v
                scale = np.linalg.norm(w)
                if scale <= WEIGHT_TOL:
                    continue
                for _ in range(2):
                    for p in produced:
                        w = w - (p.conj() @ w) * p
                if np.linalg.norm(w) <= WEIGHT_TOL * max(1.0, scale):
                    continue
                w = w / np.linalg.norm(w)
                produced.append(w)
                queue.append(w)
                if len(produced) == target_dim:
                    break
        if len(produced) != target_dim:
            raise AssertionError(f"lowering produced {len(produced)} vectors for {lam}, expected {target_dim}")

        vecs = np.array(produced)
        vec_w = np.rint(np.stack([np.real(np.einsum("ij,jk,ik->i", vecs.conj(), G[a, a], vecs)) for a in range(d)], 1))
        order = sorted(range(len(produced)), key=lambda i: tuple(-vec_w[i]))
        vecs = vecs[order]
        start = len(rows)
        rows.extend(vecs.conj())
        outputs.append((lam, start, len(rows)))

        block_rows = vecs.conj()
        E_lam = np.einsum("ij,abjk,lk->abil", block_rows, G, block_rows.conj())
        E_lam[np.abs(E_lam) <= ZERO_TOL] = 0
        if np.isrealobj(E_lam) or np.max(np.abs(E_lam.imag)) <= ZERO_TOL:
            E_lam = np.real(E_lam)
        realizations[lam] = Realization(mu=lam, d=d, generators=E_lam)

    matrix = np.array(rows)
    matrix[np.abs(matrix) <= ZERO_TOL] = 0
    matrix.setflags(write=False)
    return CGBlock(mu=mu, d=d, matrix=matrix, output_irreps=tuple(outputs)), realizations


@lru_cache(maxsize=None)
def _canonical(mu: Partition, d: int) -> tuple[Realization, CGBlock, dict[Partition, Realization]]:
    if mu == (1,):
        real = Realization.defining(d)
    else:
        # any parent works: the produced basis depends only on the irrep
        parent = min(_parents(mu))
        _, _, children = _canonical(parent, d)
        real = children[mu]
    block, children = _cg_qudit(real)
    return real, block, children


def _parents(lam: Partition) -> list[Partition]:
    from .combinatorics import remove_box

    return [p for p in remove_box(lam) if p]


def canonical_realization(mu: Partition, d: int) -> Realization:
    """The realization of ``Q_mu`` the recursive construction carries."""
    mu = as_partition(mu)
    if not mu or len(mu) > d:
        raise ValueError(f"no U({d}) irrep realization for {mu}")
    return _canonical(mu, d)[0]


def cg_block(mu: Partition, d: int) -> CGBlock:
    """Cached CG block used by the circuit builder (qubit path for d = 2)."""
    mu = as_partition(mu)
    if d == 2:
        return cg_qubit_for(mu)
    return _canonical(mu, d)[1]
