import itertools
from fractions import Fraction

import numpy as np
import pytest

from schur_transform.circuit import build_schur_circuit, schur_matrix
from schur_transform.combinatorics import partitions
from schur_transform.verifier import (
    adjacent_transpositions,
    casimir_eigenvalue,
    check_casimir_diagonalization,
    check_completeness,
    check_spin_diagonalization,
    check_symmetric_rep_blocks,
    check_unitary_rep_blocks,
    permutation_operator,
    random_unitary,
    spin_operators,
    unitary_operator,
    verify_all,
)


def content_of(tableau, entry):
    for r, row in enumerate(tableau.rows):
        if entry in row:
            return row.index(entry) - r
    raise KeyError(entry)


def test_spin_oracle_self_test():
    for n in range(1, 7):
        ops = spin_operators(n)
        assert ops.self_test() <= 1e-12


def test_permutation_operator_is_homomorphism():
    rng = np.random.default_rng(3)
    for n, d in [(3, 2), (4, 2), (3, 3)]:
        perms = list(itertools.permutations(range(n)))
        for _ in range(10):
            a = perms[rng.integers(len(perms))]
            b = perms[rng.integers(len(perms))]
            ab = tuple(a[b[i]] for i in range(n))
            lhs = permutation_operator(ab, d).toarray()
            rhs = (permutation_operator(a, d) @ permutation_operator(b, d)).toarray()
            assert np.max(np.abs(lhs - rhs)) <= 1e-12


def test_permutation_operator_moves_factors():
    # |0 1 1> with the first factor sent to the last position gives |1 1 0>
    P = permutation_operator((2, 0, 1), 2).toarray()
    assert P[0b110, 0b011] == 1


def test_random_unitary_is_unitary_and_seeded():
    a = random_unitary(3, np.random.default_rng(5))
    b = random_unitary(3, np.random.default_rng(5))
    np.testing.assert_array_equal(a, b)
    np.testing.assert_allclose(a.conj().T @ a, np.eye(3), atol=1e-12)
    Q = unitary_operator(a, 3)
    np.testing.assert_allclose(Q.conj().T @ Q, np.eye(27), atol=1e-12)


def test_two_qubit_spin_spectrum():
    c = build_schur_circuit(2, 2)
    S, _ = schur_matrix(c)
    J2 = S @ spin_operators(2).J2 @ S.conj().T
    np.testing.assert_allclose(J2, np.diag([2, 2, 2, 0]), atol=1e-12)
    assert check_spin_diagonalization(c).passed


def test_three_qubit_multiplicities():
    rep = check_spin_diagonalization(build_schur_circuit(3, 2))
    assert rep.passed
    assert rep.details["eigenvalue_multiplicities"] == {0.75: 4, 3.75: 4}


def test_single_qubit_trivial():
    c = build_schur_circuit(1, 2)
    assert all(r.passed for r in verify_all(c))


def test_phase_unitary_on_two_qubits():
    theta = 0.37
    u = np.diag([np.exp(1j * theta), 1])
    c = build_schur_circuit(2, 2)
    S, _ = schur_matrix(c)
    M = S @ unitary_operator(u, 2) @ S.conj().T
    expected = np.diag([np.exp(2j * theta), np.exp(1j * theta), 1, np.exp(1j * theta)])
    np.testing.assert_allclose(M, expected, atol=1e-12)
    assert check_unitary_rep_blocks(c, unitaries=[u, np.eye(2)]).passed


def test_swap_on_two_qubits():
    c = build_schur_circuit(2, 2)
    S, _ = schur_matrix(c)
    M = S @ permutation_operator((1, 0), 2) @ S.conj().T
    np.testing.assert_allclose(M, np.diag([1, 1, 1, -1]), atol=1e-12)


def test_identity_actions_are_identity():
    c = build_schur_circuit(4, 2)
    S, _ = schur_matrix(c)
    np.testing.assert_allclose(S @ unitary_operator(np.eye(2), 4) @ S.conj().T, np.eye(16), atol=1e-12)
    np.testing.assert_allclose(S @ permutation_operator(tuple(range(4)), 2) @ S.conj().T, np.eye(16), atol=1e-12)


def test_four_qubit_block_sizes():
    rep = check_unitary_rep_blocks(build_schur_circuit(4, 2), samples=20, seed=11)
    assert rep.passed
    sizes = rep.details["block_dim_and_copies"]
    assert sizes == {(4,): (5, 1), (3, 1): (3, 3), (2, 2): (1, 2)}


def test_four_qubit_symmetric_blocks():
    assert check_symmetric_rep_blocks(build_schur_circuit(4, 2)).passed


@pytest.mark.parametrize("n,d", [(1, 2), (4, 2), (6, 3), (10, 2), (10, 3)])
def test_completeness(n, d):
    rep = check_completeness(n, d)
    assert rep.passed and rep.details["total"] == d**n
    if (n, d) == (4, 2):
        assert [(m, q) for _, m, q in rep.details["terms"]] == [(1, 5), (3, 3), (2, 1)]


@pytest.mark.parametrize("n", range(2, 7))
def test_labeling_matches_young_orthogonal_form(n):
    """Diagonal of each adjacent transposition is 1/(content(i+1) - content(i))."""
    c = build_schur_circuit(n, 2)
    S, outs = schur_matrix(c)
    pos = {(lam, col, st): i for i, (_, lam, col, st) in enumerate(outs)}
    for i, perm in enumerate(adjacent_transpositions(n), start=1):
        M = S @ (permutation_operator(perm, 2) @ S.conj().T)
        for lam in partitions(n, 2):
            for col, tab in c.labeling.columns[lam].items():
                expected = 1 / (content_of(tab, i + 1) - content_of(tab, i))
                assert M[pos[(lam, col, 1)], pos[(lam, col, 1)]] == pytest.approx(expected, abs=1e-10)


def test_casimir_eigenvalue():
    assert casimir_eigenvalue((1,), 2) == 2
    assert casimir_eigenvalue((1, 1), 2) == 2
    # J^2 = C2/2 - N^2/4 for qubits
    for lam in partitions(6, 2):
        l1, l2 = (lam + (0,))[:2]
        j = Fraction(l1 - l2, 2)
        assert Fraction(casimir_eigenvalue(lam, 2), 2) - Fraction(36, 4) == j * (j + 1)


@pytest.mark.parametrize("n", range(1, 5))
def test_qudit_checks(n):
    c = build_schur_circuit(n, 3)
    reports = verify_all(c, samples=10)
    assert [r.name for r in reports][0] == "casimir_diagonalization"
    assert all(r.passed for r in reports), [r.line() for r in reports]


def test_casimir_also_works_for_qubits():
    assert check_casimir_diagonalization(build_schur_circuit(4, 2)).passed


@pytest.mark.parametrize("n", range(2, 9))
def test_qubit_checks(n):
    assert all(r.passed for r in verify_all(build_schur_circuit(n, 2), samples=5))


def test_threads_override(monkeypatch):
    monkeypatch.setenv("THREADS", "4")
    assert all(r.passed for r in verify_all(build_schur_circuit(4, 2), samples=5))


def test_checks_catch_a_broken_transform():
    c = build_schur_circuit(3, 2)
    S, outs = schur_matrix(c)
    broken = S.copy()
    broken[[0, 4]] = broken[[4, 0]]  # swap rows of different irreps
    assert not check_spin_diagonalization(c, (broken, outs)).passed
    assert not check_unitary_rep_blocks(c, samples=3, matrix=(broken, outs)).passed
    assert not check_symmetric_rep_blocks(c, (broken, outs)).passed


def test_spin_check_needs_qubits():
    with pytest.raises(ValueError):
        check_spin_diagonalization(build_schur_circuit(2, 3))
