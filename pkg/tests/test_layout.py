import math

import pytest
from hypothesis import given, strategies as st

from schur_transform.combinatorics import dim_Q, enumerate_tableaux, multiplicity, partitions
from schur_transform.errors import LabelOutOfRange
from schur_transform.layout import (
    SchurLabel,
    ancilla_schedule,
    ancillas_added,
    branch_digit,
    decode,
    encode,
    layout_for,
    multiplicity_labeling,
    total_register,
    wire_map,
)


def test_layout_n4():
    lay = layout_for(4, 2)
    assert (lay.seq_size, lay.par_size, lay.stat_size) == (2, 2, 3)
    assert [(s.partition, s.dimension) for s in lay.slots] == [((4,), 5), ((3, 1), 3), ((2, 2), 1)]
    assert all(s.capacity == 8 for s in lay.slots)


def test_layout_n5_keeps_par_and_stat():
    lay = layout_for(5, 2)
    assert (lay.par_size, lay.stat_size) == (2, 3)


def test_layout_n1_is_computational_basis():
    lay = layout_for(1, 2)
    assert (lay.seq_size, lay.par_size, lay.stat_size) == (0, 0, 1)
    assert lay.total_index_space == 2


@pytest.mark.parametrize("n", range(1, 21))
def test_qubit_sizes_closed_forms(n):
    lay = layout_for(n, 2)
    assert lay.par_size == math.ceil(math.log2(n // 2 + 1))
    assert lay.stat_size == math.ceil(math.log2(n + 1))
    assert lay.seq_size == max(n - 2, 0)
    if n >= 2:
        assert total_register(n, 2) == n + 2 * int(math.log2(n)) - 1
    assert all(s.capacity >= s.dimension for s in lay.slots)


@pytest.mark.parametrize("k", range(1, 20))
def test_sizes_step_together(k):
    a, b = layout_for(k, 2), layout_for(k + 1, 2)
    step = int(int(math.log2(k + 1)) != int(math.log2(k)))
    assert (b.par_size - a.par_size, b.stat_size - a.stat_size) == (step, step)


def test_encode_examples():
    lay4 = layout_for(4, 2)
    assert encode(SchurLabel(2, 2, 2), lay4) == 41  # column 2, offset 9 within the column
    assert encode(SchurLabel(1, 1, 1), lay4) == 0
    lay3 = layout_for(3, 2)
    idx = encode(SchurLabel(1, 2, 2), lay3)
    assert idx == 1 * 4 + 1
    assert decode(idx, lay3) == SchurLabel(1, 2, 2)


def test_encode_errors():
    lay = layout_for(4, 2)
    lab = multiplicity_labeling(4, 2)
    for bad in (SchurLabel(1, 4, 1), SchurLabel(1, 3, 2), SchurLabel(5, 1, 1), SchurLabel(0, 1, 1), SchurLabel(1, 1, 6)):
        with pytest.raises(LabelOutOfRange):
            encode(bad, lay)
    # (4,0) lives only in column 1
    with pytest.raises(LabelOutOfRange):
        encode(SchurLabel(2, 1, 1), lay, lab)
    with pytest.raises(LabelOutOfRange):
        decode(lay.total_index_space, lay)


@given(st.integers(1, 9), st.integers(2, 3), st.data())
def test_encode_decode_roundtrip(n, d, data):
    lay = layout_for(n, d)
    j = data.draw(st.integers(1, len(lay.slots)))
    k = data.draw(st.integers(1, lay.slots[j - 1].dimension))
    i = data.draw(st.integers(1, lay.num_columns))
    lab = SchurLabel(i, j, k)
    assert decode(encode(lab, lay), lay) == lab


def test_decode_ghosts():
    lay = layout_for(4, 2)
    assert decode(5, lay) is None  # past the 5 states of (4,0)
    assert decode(3 * 8, lay) is None  # unused fourth slot


def test_ancilla_schedule():
    assert ancilla_schedule(5) == [(1, 1), (3, 2)]
    assert ancillas_added(4) == 0
    assert sum(a for _, a in ancilla_schedule(2)) == 1
    for n in range(2, 21):
        assert sum(a for _, a in ancilla_schedule(n)) == 2 * int(math.log2(n)) - 1
        for k, a in ancilla_schedule(n):
            assert k == 1 or (a == 2 and int(math.log2(k + 1)) != int(math.log2(k)))


def test_wire_map_register():
    wm = wire_map(5, 2)
    assert len(wm.wires) == 8
    assert sorted(w for w in wm.wires if w.startswith("q")) == [f"q{i}" for i in range(1, 6)]
    assert wm.steps[-1][-1] == "q5"
    assert wm.seq_above == (0, 0, 1, 2)


def test_branch_digit():
    assert branch_digit((4,), (4, 1)) == 0
    assert branch_digit((3, 1), (4, 1)) == 1
    assert branch_digit((3, 1), (3, 2)) == 0


def test_labeling_examples():
    assert [t.rows for t in multiplicity_labeling(2, 2).columns[(1, 1)].values()] == [((1,), (2,))]
    assert len(multiplicity_labeling(4, 2).occupied((3, 1))) == 3
    assert len(multiplicity_labeling(3, 2).occupied((2, 1))) == 2


@pytest.mark.parametrize("n,d", [(n, 2) for n in range(1, 9)] + [(n, 3) for n in range(1, 7)])
def test_labeling_is_bijection_onto_tableaux(n, d):
    lab = multiplicity_labeling(n, d)
    assert lab.is_bijective()
    for lam in partitions(n, d):
        got = sorted(t.rows for t in lab.columns[lam].values())
        assert got == sorted(t.rows for t in enumerate_tableaux(lam, "standard"))
        assert all(1 <= c <= layout_for(n, d).num_columns for c in lab.occupied(lam))
    assert lab.occupied_count() == d**n == sum(multiplicity(l) * dim_Q(l, d) for l in partitions(n, d))


def test_column_of():
    lab = multiplicity_labeling(4, 2)
    cols = lab.occupied((2, 2))
    assert lab.column_of((2, 2), 1) == cols[0]
    with pytest.raises(LabelOutOfRange):
        lab.column_of((2, 2), 3)
