"""Dense exact linear algebra over the prime field F_p.

Matrices are small (a few hundred rows at most), so everything is plain
Python integers with deterministic first-nonzero pivoting.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

FpVector = tuple[int, ...]


def _is_prime_small(n: int) -> bool:
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


@dataclass(frozen=True)
class FpMatrix:
    """Immutable ``nrows x ncols`` matrix with entries reduced mod ``modulus``."""

    nrows: int
    ncols: int
    entries: tuple[tuple[int, ...], ...]
    modulus: int

    def __post_init__(self):
        if not _is_prime_small(self.modulus):
            raise ValueError(f"modulus {self.modulus} is not prime")
        if len(self.entries) != self.nrows:
            raise ValueError("row count does not match entries")
        for row in self.entries:
            if len(row) != self.ncols:
                raise ValueError("ragged matrix")
            if any(not 0 <= x < self.modulus for x in row):
                raise ValueError("entry outside [0, modulus)")

    @classmethod
    def from_rows(cls, rows: Iterable[Sequence[int]], modulus: int,
                  ncols: int | None = None) -> FpMatrix:
        rows = [tuple(int(x) % modulus for x in r) for r in rows]
        if ncols is None:
            if not rows:
                raise ValueError("ncols required for a matrix without rows")
            ncols = len(rows[0])
        return cls(len(rows), ncols, tuple(rows), modulus)

    @classmethod
    def zeros(cls, nrows: int, ncols: int, modulus: int) -> FpMatrix:
        return cls(nrows, ncols, tuple((0,) * ncols for _ in range(nrows)), modulus)

    @classmethod
    def identity(cls, n: int, modulus: int) -> FpMatrix:
        return cls(n, n, tuple(tuple(int(i == j) for j in range(n)) for i in range(n)),
                   modulus)

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return self.entries[i][j]

    def transpose(self) -> FpMatrix:
        cols = tuple(tuple(self.entries[i][j] for i in range(self.nrows))
                     for j in range(self.ncols))
        return FpMatrix(self.ncols, self.nrows, cols, self.modulus)

    def column(self, j: int) -> FpVector:
        return tuple(row[j] for row in self.entries)

    def delete_column(self, j: int) -> FpMatrix:
        rows = tuple(row[:j] + row[j + 1:] for row in self.entries)
        return FpMatrix(self.nrows, self.ncols - 1, rows, self.modulus)

    def append_rows(self, rows: Iterable[Sequence[int]]) -> FpMatrix:
        extra = [tuple(int(x) % self.modulus for x in r) for r in rows]
        return FpMatrix(self.nrows + len(extra), self.ncols,
                        self.entries + tuple(extra), self.modulus)

    def with_entry(self, i: int, j: int, value: int) -> FpMatrix:
        rows = [list(r) for r in self.entries]
        rows[i][j] = value % self.modulus
        return FpMatrix(self.nrows, self.ncols, tuple(tuple(r) for r in rows),
                        self.modulus)

    def apply(self, v: Sequence[int]) -> FpVector:
        """Matrix-vector product ``self @ v``."""
        if len(v) != self.ncols:
            raise ValueError("dimension mismatch")
        p = self.modulus
        return tuple(sum(a * b for a, b in zip(row, v)) % p for row in self.entries)

    def is_zero(self) -> bool:
        return all(x == 0 for row in self.entries for x in row)

    def to_lists(self) -> list[list[int]]:
        return [list(r) for r in self.entries]


def rref(m: FpMatrix) -> tuple[list[list[int]], list[int]]:
    """Reduced row echelon form and the pivot columns."""
    p = m.modulus
    work = [list(r) for r in m.entries]
    pivots: list[int] = []
    r = 0
    for c in range(m.ncols):
        if r == len(work):
            break
        piv = next((i for i in range(r, len(work)) if work[i][c]), None)
        if piv is None:
            continue
        work[r], work[piv] = work[piv], work[r]
        inv = pow(work[r][c], p - 2, p)
        work[r] = [x * inv % p for x in work[r]]
        for i in range(len(work)):
            if i != r and work[i][c]:
                f = work[i][c]
                work[i] = [(x - f * y) % p for x, y in zip(work[i], work[r])]
        pivots.append(c)
        r += 1
    return work, pivots


def rank(m: FpMatrix) -> int:
    """Rank over F_p; 0 for an empty matrix."""
    if m.nrows == 0 or m.ncols == 0:
        return 0
    return len(rref(m)[1])


def kernel_basis(m: FpMatrix) -> list[FpVector]:
    """Basis of the right null space, one vector per free column.

    Each vector has a 1 in its free column and is zero in the other free
    columns, so the basis is canonical for the matrix.
    """
    p = m.modulus
    if m.nrows == 0:
        return [tuple(int(i == j) for i in range(m.ncols)) for j in range(m.ncols)]
    reduced, pivots = rref(m)
    free = [c for c in range(m.ncols) if c not in set(pivots)]
    basis = []
    for f in free:
        v = [0] * m.ncols
        v[f] = 1
        for row, pc in zip(reduced, pivots):
            v[pc] = -row[f] % p
        basis.append(tuple(v))
    return basis


def is_surjective_onto_full_space(m: FpMatrix) -> bool:
    """True iff the columns span F_p^nrows.

    Rows index coordinates of the target space, columns are images of
    generators. For square matrices this is plain invertibility.
    """
    return rank(m) == m.nrows


def in_span(v: Sequence[int], vectors: Sequence[Sequence[int]], modulus: int) -> bool:
    """Whether ``v`` lies in the F_p-span of ``vectors`` (the zero vector always does)."""
    v = tuple(x % modulus for x in v)
    if not any(v):
        return True
    if not vectors:
        return False
    base = FpMatrix.from_rows(vectors, modulus, ncols=len(v))
    return rank(base.append_rows([v])) == rank(base)


def dot(u: Sequence[int], v: Sequence[int], modulus: int) -> int:
    return sum(a * b for a, b in zip(u, v)) % modulus
