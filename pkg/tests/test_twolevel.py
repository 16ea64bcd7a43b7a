import math
from fractions import Fraction

import numpy as np
import pytest
from scipy.stats import unitary_group

from schur_transform.cg import cg_block, cg_qubit
from schur_transform.circuit import build_schur_circuit
from schur_transform.combinatorics import partitions
from schur_transform.errors import NotUnitary
from schur_transform.twolevel import (
    TwoLevelRotation,
    analytic_bound,
    analytic_bound_sum,
    circuit_rotations,
    decompose,
    direct_decompose_baseline,
    fault_tolerant_estimate,
    qudit_bound,
    reconstruct,
    sequence_length,
)


def test_identity_needs_nothing():
    assert decompose(np.eye(6)) == []


def test_two_qubit_block_count():
    rots = decompose(cg_qubit(Fraction(1, 2)).matrix)
    assert len(rots) <= 8
    np.testing.assert_allclose(reconstruct(rots, 4), cg_qubit(Fraction(1, 2)).matrix, atol=1e-10)


def test_random_8x8_count_and_reconstruction():
    U = unitary_group.rvs(8, random_state=7)
    rots = decompose(U)
    phases = [r for r in rots if np.allclose(r.matrix, np.diag(np.diag(r.matrix)))]
    below = sum(np.count_nonzero(np.abs(np.tril(U, -1)[:, j]) > 1e-12) for j in range(8))
    assert below == 28
    assert len(rots) == below + len(phases)
    np.testing.assert_allclose(reconstruct(rots, 8), U, atol=1e-10)


@pytest.mark.parametrize("i", range(50))
def test_random_unitaries_reconstruct(i):
    side = 2 + i % 15
    U = unitary_group.rvs(side, random_state=1000 + i)
    rots = decompose(U)
    for r in rots:
        assert r.p < r.q
        np.testing.assert_allclose(r.matrix.conj().T @ r.matrix, np.eye(2), atol=1e-12)
    np.testing.assert_allclose(reconstruct(rots, side), U, atol=1e-10)


@pytest.mark.parametrize("seed", range(10))
def test_permutations_give_swap_rotations(seed):
    rng = np.random.default_rng(seed)
    side = 12
    P = np.eye(side)[rng.permutation(side)]
    rots = decompose(P)
    for r in rots:
        vals = np.unique(np.asarray(r.matrix).ravel())
        assert set(vals.tolist()) <= {0.0, 1.0, -1.0}
    np.testing.assert_allclose(reconstruct(rots, side), P, atol=1e-12)


def test_decompose_rejects_non_unitary():
    with pytest.raises(NotUnitary):
        decompose(np.array([[1.0, 1.0], [0.0, 1.0]]))
    with pytest.raises(NotUnitary):
        decompose(np.ones((2, 3)))
    with pytest.raises(NotUnitary):
        decompose(np.array([[1j]]))


def test_rotation_index_order():
    with pytest.raises(ValueError):
        TwoLevelRotation(3, 1, np.eye(2))


@pytest.mark.parametrize("n", range(1, 12))
def test_qubit_blocks_within_twice_side(n):
    for mu in partitions(n, 2):
        blk = cg_block(mu, 2)
        assert len(decompose(blk.matrix)) <= 2 * blk.side


def test_circuit_rotations_reconstruct_every_block():
    c = build_schur_circuit(6, 2)
    for step in c.steps:
        for i, (_, blk, _) in enumerate(step.supercg.blocks):
            mat = step.supercg.placed(i)
            np.testing.assert_allclose(reconstruct(decompose(mat), blk.side), mat, atol=1e-10)
        P = step.reorder.matrix().toarray()
        np.testing.assert_allclose(reconstruct(decompose(P), P.shape[0]), P, atol=1e-12)


def test_sequence_length_examples():
    rep = sequence_length(2, 2)
    assert rep.total <= 12 == analytic_bound_sum(2)
    assert rep.total == sum(rep.per_iteration)
    assert sequence_length(20, 2).total <= 8000
    assert sequence_length(4, 3).total <= 3 * 5**8 == qudit_bound(4, 3)
    with pytest.raises(ValueError):
        sequence_length(1)


# Frozen from the decomposition pipeline (structured counts, d = 2).
QUBIT_TOTALS = {
    2: 5, 3: 15, 4: 33, 5: 63, 6: 104, 7: 150, 8: 216, 9: 308, 10: 419, 11: 553,
    12: 701, 13: 863, 14: 1040, 15: 1244, 16: 1492, 17: 1814, 18: 2171, 19: 2559, 20: 2989,
}


@pytest.mark.parametrize("n", range(2, 21))
def test_qubit_sequence_lengths(n):
    rep = sequence_length(n, 2)
    assert rep.total == QUBIT_TOTALS[n]
    assert rep.total <= analytic_bound(n)
    assert rep.total <= n**3 <= 2 * n**3
    assert len(rep.per_iteration) == n - 1


def test_circuit_rotation_count_matches_report():
    c = build_schur_circuit(7, 2)
    assert len(circuit_rotations(c)) == sequence_length(7, 2, c).total


@pytest.mark.parametrize("n", range(2, 6))
def test_qudit_bound(n):
    assert sequence_length(n, 3).total <= qudit_bound(n, 3)


def test_analytic_bound_values():
    assert analytic_bound(2) == Fraction(73, 6)
    assert analytic_bound(20) == Fraction(8000, 3) + 900 + 65 - 6 == Fraction(10877, 3)
    assert analytic_bound_sum(2) == 12


def test_direct_baseline():
    direct = {n: direct_decompose_baseline(n) for n in range(2, 7)}
    structured = {n: sequence_length(n).total for n in range(2, 7)}
    assert direct[5] > structured[5]
    ratios = [direct[n] / structured[n] for n in range(4, 7)]
    assert ratios == sorted(ratios)
    with pytest.raises(ValueError):
        direct_decompose_baseline(7)


def test_fault_tolerant_estimate():
    m = sequence_length(4).total
    assert fault_tolerant_estimate(4, 2, 1e-3) == m * math.ceil(4 * math.log2(m / 1e-3))
    m3 = sequence_length(3, 3).total
    assert fault_tolerant_estimate(3, 3, 1e-2) == m3 * math.ceil(3 * math.log2(m3 / 1e-2) ** 3.97)
    # epsilon near 1: budget per rotation is 1/m
    assert fault_tolerant_estimate(4, 2, 1 - 1e-12, total=m) == m * math.ceil(4 * math.log2(m / (1 - 1e-12)))
    with pytest.raises(ValueError):
        fault_tolerant_estimate(4, 2, 1.5)
