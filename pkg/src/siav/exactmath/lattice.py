"""Integer matrices with Hermite and Smith normal forms.

Lattices are spanned by matrix rows throughout.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import prod
from typing import Sequence

from ..errors import DomainError


@dataclass(frozen=True)
class IntegerMatrix:
    entries: tuple[tuple[int, ...], ...]

    def __init__(self, rows: Sequence[Sequence[int]]):
        rows = tuple(tuple(int(v) for v in r) for r in rows)
        if rows and any(len(r) != len(rows[0]) for r in rows):
            raise DomainError("ragged matrix")
        object.__setattr__(self, "entries", rows)

    @classmethod
    def identity(cls, n: int) -> IntegerMatrix:
        return cls([[int(i == j) for j in range(n)] for i in range(n)])

    @classmethod
    def diagonal(cls, ds: Sequence[int]) -> IntegerMatrix:
        n = len(ds)
        return cls([[ds[i] if i == j else 0 for j in range(n)] for i in range(n)])

    @property
    def rows(self) -> int:
        return len(self.entries)

    @property
    def cols(self) -> int:
        return len(self.entries[0]) if self.entries else 0

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def tolist(self) -> list[list[int]]:
        return [list(r) for r in self.entries]

    def __matmul__(self, other: IntegerMatrix) -> IntegerMatrix:
        if self.cols != other.rows:
            raise DomainError("shape mismatch")
        cols = list(zip(*other.entries))
        return IntegerMatrix([[sum(a * b for a, b in zip(r, c)) for c in cols] for r in self.entries])

    def is_zero(self) -> bool:
        return all(v == 0 for r in self.entries for v in r)

    def determinant(self) -> int:
        from .polynomial import _bareiss_det

        if self.rows != self.cols:
            raise DomainError("determinant of a non-square matrix")
        return _bareiss_det(self.tolist())


def hermite_normal_form(M: IntegerMatrix) -> IntegerMatrix:
    """Row-style HNF of the lattice spanned by the rows of M.

    Upper echelon, positive pivots, entries above each pivot reduced into
    [0, pivot). Zero rows are dropped.
    """
    if M.is_zero():
        raise DomainError("HNF of the zero matrix")
    a = M.tolist()
    m, n = len(a), len(a[0])
    r = 0
    for col in range(n):
        if r == m:
            break
        # Euclid on column col among rows r..m-1
        while True:
            nz = [i for i in range(r, m) if a[i][col] != 0]
            if not nz:
                break
            piv = min(nz, key=lambda i: abs(a[i][col]))
            a[r], a[piv] = a[piv], a[r]
            done = True
            for i in range(r + 1, m):
                if a[i][col]:
                    f = a[i][col] // a[r][col]
                    a[i] = [x - f * y for x, y in zip(a[i], a[r])]
                    if a[i][col]:
                        done = False
            if done:
                break
        if a[r][col] == 0:
            continue
        if a[r][col] < 0:
            a[r] = [-x for x in a[r]]
        for i in range(r):
            f = a[i][col] // a[r][col]
            if f:
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        r += 1
    return IntegerMatrix(a[:r])


def smith_normal_form(M: IntegerMatrix) -> tuple[IntegerMatrix, tuple[int, ...]]:
    """Diagonal SNF and its nonzero elementary divisors d1 | d2 | ..."""
    if M.is_zero():
        raise DomainError("SNF of the zero matrix")
    a = M.tolist()
    m, n = len(a), len(a[0])
    t = 0
    while t < min(m, n):
        nz = [(abs(a[i][j]), i, j) for i in range(t, m) for j in range(t, n) if a[i][j]]
        if not nz:
            break
        _, i, j = min(nz)
        a[t], a[i] = a[i], a[t]
        for row in a:
            row[t], row[j] = row[j], row[t]
        while True:
            changed = False
            for i in range(t + 1, m):
                if a[i][t]:
                    f = a[i][t] // a[t][t]
                    a[i] = [x - f * y for x, y in zip(a[i], a[t])]
                    if a[i][t]:
                        a[t], a[i] = a[i], a[t]
                        changed = True
            for j in range(t + 1, n):
                if a[t][j]:
                    f = a[t][j] // a[t][t]
                    for row in a:
                        row[j] -= f * row[t]
                    if a[t][j]:
                        for row in a:
                            row[t], row[j] = row[j], row[t]
                        changed = True
            if changed:
                continue
            # divisibility condition d_t | every remaining entry
            bad = next(
                ((i, j) for i in range(t + 1, m) for j in range(t + 1, n) if a[i][j] % a[t][t]),
                None,
            )
            if bad is None:
                break
            a[t] = [x + y for x, y in zip(a[t], a[bad[0]])]
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
        t += 1
    divisors = tuple(a[i][i] for i in range(min(m, n)) if a[i][i] != 0)
    return IntegerMatrix(a), divisors


def lattice_index(generators: IntegerMatrix) -> int:
    """Index of the full-rank lattice spanned by the rows inside Z^n.

    Returns 0 if the rows do not span a full-rank lattice.
    """
    _, ds = smith_normal_form(generators)
    if len(ds) < generators.cols:
        return 0
    return prod(ds)


def in_lattice(v: Sequence[int], hnf: IntegerMatrix) -> bool:
    """Membership test of an integer vector in the lattice of an HNF basis."""
    v = list(v)
    for row in hnf.entries:
        col = next(j for j, x in enumerate(row) if x)
        q, r = divmod(v[col], row[col])
        if r:
            return False
        v = [x - q * y for x, y in zip(v, row)]
    return all(x == 0 for x in v)
