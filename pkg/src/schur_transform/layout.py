"""Register layout: the seq / par / stat split of the Schur basis.

A basis state ``|i> (x) |j> (x) |k>`` means the k-th state of the irrep in slot
j of column i.  Sizes are counted in digits of radix ``d`` (qubits for d = 2).

The iteration that adds qudit ``k + 1`` works on the *reorder space*
``R_k = ancillas (x) column_k (x) new qudit``.  After reordering, the top digit
of ``R_k`` (for k >= 2) becomes the least significant seq digit and the
remaining digits are the new column.  :func:`wire_map` tracks where each of
these digits ends up in the final register.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

from .combinatorics import Partition, Tableau, add_box, as_partition, dim_Q, multiplicity, partitions, remove_box, tableau_from_path
from .errors import LabelOutOfRange


def _ceil_log(x: int, base: int) -> int:
    """Smallest e >= 0 with base**e >= x."""
    e, p = 0, 1
    while p < x:
        p *= base
        e += 1
    return e


def _floor_log2(x: int) -> int:
    return x.bit_length() - 1


def par_size(n: int, d: int) -> int:
    return _ceil_log(len(partitions(n, d)), d)


def stat_size(n: int, d: int) -> int:
    return _ceil_log(max(dim_Q(lam, d) for lam in partitions(n, d)), d)


def seq_size(n: int) -> int:
    return max(n - 2, 0)


def total_register(n: int, d: int = 2) -> int:
    """Digits in the full register after n qudits have been added."""
    return seq_size(n) + par_size(n, d) + stat_size(n, d)


@dataclass(frozen=True)
class Slot:
    partition: Partition
    index: int  # 1-based, canonical partition order
    dimension: int
    capacity: int


@dataclass(frozen=True)
class BasisLayout:
    n: int
    d: int
    seq_size: int
    par_size: int
    stat_size: int
    slots: tuple[Slot, ...]

    @property
    def slot_capacity(self) -> int:
        return self.d**self.stat_size

    @property
    def column_size(self) -> int:
        return self.d ** (self.par_size + self.stat_size)

    @property
    def num_columns(self) -> int:
        return self.d**self.seq_size

    @property
    def total_index_space(self) -> int:
        return self.num_columns * self.column_size

    @property
    def total_digits(self) -> int:
        return self.seq_size + self.par_size + self.stat_size

    def slot(self, lam: Partition) -> Slot:
        lam = as_partition(lam)
        for s in self.slots:
            if s.partition == lam:
                return s
        raise KeyError(lam)

    def slot_offset(self, lam: Partition) -> int:
        """0-based column index of the first state of ``lam``'s slot."""
        return (self.slot(lam).index - 1) * self.slot_capacity


def layout_for(n: int, d: int = 2) -> BasisLayout:
    if n < 1 or d < 1:
        raise ValueError("n and d must be positive")
    par, stat = par_size(n, d), stat_size(n, d)
    slots = tuple(
        Slot(lam, i, dim_Q(lam, d), d**stat) for i, lam in enumerate(partitions(n, d), start=1)
    )
    return BasisLayout(n=n, d=d, seq_size=seq_size(n), par_size=par, stat_size=stat, slots=slots)


@dataclass(frozen=True)
class SchurLabel:
    """1-based (seq, par, stat) label; ``seq`` is the column (seq register value)."""

    seq: int
    par: int
    stat: int


def encode(label: SchurLabel, layout: BasisLayout, labeling: "MultiplicityLabeling | None" = None) -> int:
    """0-based register index of ``label`` in ``seq (x) par (x) stat`` order.

    With a ``labeling`` the column must actually hold a copy of the slot's
    irrep; without one only the register ranges are checked.
    """
    i, j, k = label.seq, label.par, label.stat
    if not 1 <= j <= len(layout.slots):
        raise LabelOutOfRange(f"par {j} outside 1..{len(layout.slots)}")
    slot = layout.slots[j - 1]
    if not 1 <= k <= slot.dimension:
        raise LabelOutOfRange(f"stat {k} outside 1..{slot.dimension} for slot {slot.partition}")
    if not 1 <= i <= layout.num_columns:
        raise LabelOutOfRange(f"seq {i} outside 1..{layout.num_columns}")
    if labeling is not None and i not in labeling.columns[slot.partition]:
        raise LabelOutOfRange(f"column {i} holds no copy of {slot.partition}")
    return (i - 1) * layout.column_size + (j - 1) * layout.slot_capacity + (k - 1)


def decode(index: int, layout: BasisLayout) -> SchurLabel | None:
    """Inverse of :func:`encode`; ``None`` for indices outside every slot."""
    if not 0 <= index < layout.total_index_space:
        raise LabelOutOfRange(f"index {index} outside the register")
    col, rest = divmod(index, layout.column_size)
    j, k = divmod(rest, layout.slot_capacity)
    if j >= len(layout.slots) or k >= layout.slots[j].dimension:
        return None
    return SchurLabel(col + 1, j + 1, k + 1)


def ancillas_added(k: int, d: int = 2) -> int:
    """Ancilla digits introduced by the iteration that adds qudit ``k + 1``."""
    if k < 1:
        raise ValueError("k must be >= 1")
    new_seq = 1 if k >= 2 else 0
    before = par_size(k, d) + stat_size(k, d) + 1
    after = par_size(k + 1, d) + stat_size(k + 1, d) + new_seq
    return after - before


def ancilla_schedule(n: int, d: int = 2) -> list[tuple[int, int]]:
    """``(k, ancillas)`` for every iteration k -> k+1 (k < n) that adds ancillas."""
    return [(k, a) for k in range(1, n) if (a := ancillas_added(k, d))]


def branch_digit(mu: Partition, lam: Partition) -> int:
    """New seq digit given to the copy of ``lam`` produced from slot ``mu``.

    Copies of ``lam`` from different source slots take consecutive digits in
    canonical source order.
    """
    return remove_box(lam).index(as_partition(mu))


@dataclass(frozen=True)
class WireMap:
    """Digit positions of the final register, most significant first.

    ``wires`` names each digit: ``q<i>`` is input qudit i and ``a<i>`` an
    ancilla.  ``steps[k - 1]`` lists the wires of the reorder space ``R_k`` in
    significance order, and ``seq_above[k - 1]`` the number of seq wires above
    it at that time.
    """

    n: int
    d: int
    wires: tuple[str, ...]
    steps: tuple[tuple[str, ...], ...]
    seq_above: tuple[int, ...]

    def position(self, wire: str) -> int:
        return self.wires.index(wire)

    @cached_property
    def input_wires(self) -> tuple[int, ...]:
        return tuple(self.position(f"q{i}") for i in range(1, self.n + 1))


def wire_map(n: int, d: int = 2) -> WireMap:
    wires = ["q1"]
    seq = 0
    steps, seq_above = [], []
    anc = 0
    for k in range(1, n):
        a = ancillas_added(k, d)
        new_anc = [f"a{anc + i + 1}" for i in range(a)]
        anc += a
        wires = wires[:seq] + new_anc + wires[seq:] + [f"q{k + 1}"]
        steps.append(tuple(wires[seq:]))
        seq_above.append(seq)
        seq = seq_size(k + 1)
    return WireMap(n=n, d=d, wires=tuple(wires), steps=tuple(steps), seq_above=tuple(seq_above))


class MultiplicityLabeling:
    """Which standard tableau each occupied column carries, per partition.

    ``columns[lam][i]`` is the tableau (the chain of box additions) of the copy
    of ``lam`` in column ``i`` (1-based).  Obtained by replaying the routing
    rule :func:`branch_digit` iteration by iteration.
    """

    def __init__(self, n: int, d: int):
        self.n, self.d = n, d
        occ: dict[tuple[int, Partition], tuple[Partition, ...]] = {(0, (1,)): ((1,),)}
        for k in range(1, n):
            nxt = {}
            for (col, mu), path in occ.items():
                for lam in add_box(mu, d):
                    new_col = col * d + branch_digit(mu, lam) if k >= 2 else col
                    key = (new_col, lam)
                    assert key not in nxt, f"routing collision at {key}"
                    nxt[key] = path + (lam,)
            occ = nxt
        cols: dict[Partition, dict[int, Tableau]] = {lam: {} for lam in partitions(n, d)}
        for (col, lam), path in sorted(occ.items()):
            cols[lam][col + 1] = tableau_from_path(path)
        self.columns = cols

    def occupied(self, lam: Partition) -> list[int]:
        return sorted(self.columns[as_partition(lam)])

    def tableau(self, lam: Partition, seq: int) -> Tableau:
        return self.columns[as_partition(lam)][seq]

    def column_of(self, lam: Partition, copy: int) -> int:
        """Column of the ``copy``-th (1-based) occupied copy of ``lam``."""
        occ = self.occupied(lam)
        if not 1 <= copy <= len(occ):
            raise LabelOutOfRange(f"{lam} has {len(occ)} copies, asked for {copy}")
        return occ[copy - 1]

    def occupied_count(self) -> int:
        return sum(len(c) * dim_Q(lam, self.d) for lam, c in self.columns.items())

    def is_bijective(self) -> bool:
        return all(
            len(set(c.values())) == len(c) == multiplicity(lam) for lam, c in self.columns.items()
        )


def multiplicity_labeling(n: int, d: int = 2) -> MultiplicityLabeling:
    if n < 1:
        raise ValueError("n must be positive")
    return MultiplicityLabeling(n, d)
