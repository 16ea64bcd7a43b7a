"""Partitions and Young tableaux.

Partitions are plain tuples of positive integers with trailing zeros stripped,
so ``(4, 0)`` and ``(4,)`` are the same partition.  Everything here is exact
integer arithmetic.

The canonical partition order used throughout the package is descending
lexicographic: ``(5,), (4, 1), (3, 2), (3, 1, 1), (2, 2, 1)``.  The most
symmetric partition comes first, and for two-row partitions this is the same
as ordering by ascending second row.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import factorial, prod
from typing import Iterator, Literal, Sequence

Partition = tuple[int, ...]


def as_partition(parts: Sequence[int]) -> Partition:
    """Normalize ``parts`` to a partition tuple, dropping trailing zeros.

    Raises ``ValueError`` if the parts are negative or not weakly decreasing.
    """
    parts = tuple(int(p) for p in parts)
    while parts and parts[-1] == 0:
        parts = parts[:-1]
    if any(p <= 0 for p in parts):
        raise ValueError(f"partition parts must be positive: {parts}")
    if any(a < b for a, b in zip(parts, parts[1:])):
        raise ValueError(f"partition parts must be weakly decreasing: {parts}")
    return parts


def padded(lam: Partition, length: int) -> tuple[int, ...]:
    """Pad ``lam`` with zeros to ``length`` entries (presentation only)."""
    if len(lam) > length:
        raise ValueError(f"{lam} has more than {length} rows")
    return tuple(lam) + (0,) * (length - len(lam))


def format_partition(lam: Partition, length: int | None = None) -> str:
    parts = padded(lam, length) if length else tuple(lam)
    return "(" + ",".join(str(p) for p in parts) + ")"


def _partitions_bounded(n: int, max_part: int, max_rows: int) -> Iterator[Partition]:
    if n == 0:
        yield ()
        return
    if max_rows == 0:
        return
    for first in range(min(n, max_part), 0, -1):
        for rest in _partitions_bounded(n - first, first, max_rows - 1):
            yield (first,) + rest


def partitions(n: int, max_degree: int) -> list[Partition]:
    """All partitions of ``n`` with at most ``max_degree`` rows, canonical order."""
    if n < 0 or max_degree < 0:
        raise ValueError("n and max_degree must be non-negative")
    return list(_partitions_bounded(n, n, max_degree))


def conjugate(lam: Partition) -> Partition:
    if not lam:
        return ()
    return tuple(sum(1 for p in lam if p > i) for i in range(lam[0]))


def hook_lengths(lam: Partition) -> list[list[int]]:
    cols = conjugate(lam)
    return [[(row - c - 1) + (cols[c] - r - 1) + 1 for c in range(row)] for r, row in enumerate(lam)]


def multiplicity(lam: Partition) -> int:
    """Number of standard ``lam``-tableaux, by the hook-length formula."""
    lam = as_partition(lam)
    n = sum(lam)
    return factorial(n) // prod(h for row in hook_lengths(lam) for h in row)


def dim_Q(lam: Partition, d: int) -> int:
    """Dimension of the U(d) irrep labelled by ``lam``.

    Uses the hook-content formula, which is an independent route from the
    tableau enumeration below.  Zero when ``lam`` has more than ``d`` rows.
    """
    lam = as_partition(lam)
    if d < 1:
        raise ValueError("d must be positive")
    if len(lam) > d:
        return 0
    num = prod(d + c - r for r, row in enumerate(lam) for c in range(row))
    den = prod(h for row in hook_lengths(lam) for h in row)
    assert num % den == 0
    return num // den


def dim_Q_qubit(lam: Partition) -> int:
    """Closed form ``lam_1 - lam_2 + 1`` for d = 2 (zero beyond two rows)."""
    lam = as_partition(lam)
    if len(lam) > 2:
        return 0
    l1, l2 = padded(lam, 2)
    return l1 - l2 + 1


def add_box(mu: Partition, d: int) -> list[Partition]:
    """Partitions ``mu + e_j`` with at most ``d`` rows, in canonical order."""
    mu = as_partition(mu)
    out = []
    for j in range(min(len(mu) + 1, d)):
        parts = list(mu) + [0]
        parts[j] += 1
        if j == 0 or parts[j] <= parts[j - 1]:
            out.append(as_partition(parts))
    return sorted(set(out), reverse=True)


def remove_box(lam: Partition) -> list[Partition]:
    """Partitions ``lam - e_j``, in canonical order."""
    lam = as_partition(lam)
    out = []
    for j in range(len(lam)):
        parts = list(lam)
        parts[j] -= 1
        if j == len(lam) - 1 or parts[j] >= parts[j + 1]:
            out.append(as_partition(parts))
    return sorted(out, reverse=True)


@dataclass(frozen=True)
class Tableau:
    shape: Partition
    rows: tuple[tuple[int, ...], ...]

    @property
    def entries(self) -> tuple[int, ...]:
        """Entries in row-major order."""
        return tuple(e for row in self.rows for e in row)

    def is_semistandard(self) -> bool:
        rows_ok = all(a <= b for row in self.rows for a, b in zip(row, row[1:]))
        cols_ok = all(
            self.rows[r][c] < self.rows[r + 1][c]
            for r in range(len(self.rows) - 1)
            for c in range(len(self.rows[r + 1]))
        )
        return rows_ok and cols_ok

    def is_standard(self) -> bool:
        n = sum(self.shape)
        strict_rows = all(a < b for row in self.rows for a, b in zip(row, row[1:]))
        return strict_rows and self.is_semistandard() and sorted(self.entries) == list(range(1, n + 1))

    def __str__(self) -> str:
        return "/".join(" ".join(str(e) for e in row) for row in self.rows)


def tableau_from_path(path: Sequence[Partition]) -> Tableau:
    """Standard tableau recording a chain of box additions.

    ``path[t]`` is the shape after inserting ``t + 1``; entry ``t + 1`` goes in
    the row where ``path[t]`` grew.
    """
    rows: list[list[int]] = []
    prev: Partition = ()
    for t, lam in enumerate(path, start=1):
        grown = [r for r in range(len(lam)) if lam[r] != (prev[r] if r < len(prev) else 0)]
        if len(grown) != 1 or sum(lam) != sum(prev) + 1:
            raise ValueError(f"not a box-addition chain at step {t}: {prev} -> {lam}")
        r = grown[0]
        if r == len(rows):
            rows.append([])
        rows[r].append(t)
        prev = lam
    return Tableau(prev, tuple(tuple(row) for row in rows))


def _standard(lam: Partition) -> Iterator[Tableau]:
    # insert 1..n one at a time, each into the leftmost free box of some row
    n = sum(lam)

    def grow(shape: Partition, path: list[Partition]) -> Iterator[list[Partition]]:
        if len(path) == n:
            yield list(path)
            return
        for nxt in add_box(shape, len(lam)):
            if all(nxt[i] <= (lam[i] if i < len(lam) else 0) for i in range(len(nxt))):
                path.append(nxt)
                yield from grow(nxt, path)
                path.pop()

    for path in grow((), []):
        yield tableau_from_path(path)


def _semistandard(lam: Partition, d: int) -> Iterator[Tableau]:
    boxes = [(r, c) for r, row in enumerate(lam) for c in range(row)]
    grid: list[list[int]] = [[0] * row for row in lam]

    def fill(i: int) -> Iterator[Tableau]:
        if i == len(boxes):
            yield Tableau(lam, tuple(tuple(row) for row in grid))
            return
        r, c = boxes[i]
        lo = 1
        if c > 0:
            lo = max(lo, grid[r][c - 1])
        if r > 0:
            lo = max(lo, grid[r - 1][c] + 1)
        for v in range(lo, d + 1):
            grid[r][c] = v
            yield from fill(i + 1)
        grid[r][c] = 0

    yield from fill(0)


def enumerate_tableaux(
    lam: Partition, mode: Literal["standard", "semistandard"] = "standard", d: int | None = None
) -> list[Tableau]:
    """Brute-force enumeration of standard or semistandard ``lam``-tableaux.

    Semistandard tableaux have entries in ``1..d``.
    """
    lam = as_partition(lam)
    if mode == "standard":
        return list(_standard(lam))
    if mode == "semistandard":
        if d is None:
            raise ValueError("semistandard enumeration needs d")
        return list(_semistandard(lam, d))
    raise ValueError(f"unknown mode {mode!r}")
