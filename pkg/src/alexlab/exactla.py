"""
Exact integer linear algebra.

Smith normal form with transforms, Hermite normal form, integer kernels and
saturated lattices. All values are Python ints, so nothing overflows however
large the minors of a Fox matrix get.

The Smith reduction is the textbook elementary row/column procedure (the one
phonopy's SNF3x3 runs for 3x3 cells), generalised to m x n and with the
smallest nonzero entry as pivot so the transforms are reproducible.
"""

import logging
from dataclasses import dataclass
from math import gcd
from typing import Iterable, Sequence

from sympy import QQ, ZZ
from sympy.polys.matrices import DomainMatrix

from .errors import AmbientMismatchError, InvalidInputError

logger = logging.getLogger(__name__)

Vector = tuple[int, ...]


@dataclass(frozen=True)
class IntMatrix:
    """Integer matrix stored row-major."""

    rows: int
    cols: int
    entries: tuple[int, ...]

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0:
            raise InvalidInputError("Matrix dimensions must be nonnegative.")
        if len(self.entries) != self.rows * self.cols:
            raise InvalidInputError(
                f"Expected {self.rows * self.cols} entries for a {self.rows}x{self.cols} matrix, "
                f"got {len(self.entries)}."
            )

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], cols: int | None = None) -> "IntMatrix":
        rows = [tuple(int(x) for x in row) for row in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        for row in rows:
            if len(row) != cols:
                raise InvalidInputError(f"Ragged matrix: row of length {len(row)} in a {cols}-column matrix.")
        return cls(len(rows), cols, tuple(x for row in rows for x in row))

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls(n, n, tuple(int(i == j) for i in range(n) for j in range(n)))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "IntMatrix":
        return cls(rows, cols, (0,) * (rows * cols))

    def __getitem__(self, index: tuple[int, int]) -> int:
        i, j = index
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> Vector:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def column(self, j: int) -> Vector:
        return tuple(self.entries[i * self.cols + j] for i in range(self.rows))

    def to_rows(self) -> list[list[int]]:
        return [list(self.row(i)) for i in range(self.rows)]

    def transpose(self) -> "IntMatrix":
        return IntMatrix.from_rows([self.column(j) for j in range(self.cols)], cols=self.rows)

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise AmbientMismatchError(
                f"Cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}."
            )
        cols = [other.column(j) for j in range(other.cols)]
        return IntMatrix.from_rows(
            [[sum(a * b for a, b in zip(self.row(i), col)) for col in cols] for i in range(self.rows)],
            cols=other.cols,
        )

    def diagonal(self) -> tuple[int, ...]:
        return tuple(self[i, i] for i in range(min(self.rows, self.cols)))

    def determinant(self) -> int:
        """Exact determinant by fraction-free (Bareiss) elimination."""
        if self.rows != self.cols:
            raise InvalidInputError("Determinant of a non-square matrix.")
        n = self.rows
        if n == 0:
            return 1
        a = self.to_rows()
        sign, prev = 1, 1
        for k in range(n - 1):
            if a[k][k] == 0:
                swap = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
                if swap is None:
                    return 0
                a[k], a[swap] = a[swap], a[k]
                sign = -sign
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            prev = a[k][k]
        return sign * a[n - 1][n - 1]


@dataclass(frozen=True)
class SnfResult:
    """U·A·V = D with U, V unimodular and d1 | d2 | ... on the diagonal of D."""

    U: IntMatrix
    D: IntMatrix
    V: IntMatrix
    V_inverse: IntMatrix

    @property
    def invariant_factors(self) -> tuple[int, ...]:
        return self.D.diagonal()

    @property
    def rank(self) -> int:
        return sum(1 for d in self.invariant_factors if d != 0)


def smith_normal_form(A: IntMatrix) -> SnfResult:
    m, n = A.rows, A.cols
    D = A.to_rows()
    U = IntMatrix.identity(m).to_rows()
    V = IntMatrix.identity(n).to_rows()
    Vinv = IntMatrix.identity(n).to_rows()

    def swap_rows(i, k):
        D[i], D[k] = D[k], D[i]
        U[i], U[k] = U[k], U[i]

    def swap_cols(j, k):
        for row in D:
            row[j], row[k] = row[k], row[j]
        for row in V:
            row[j], row[k] = row[k], row[j]
        Vinv[j], Vinv[k] = Vinv[k], Vinv[j]

    def add_row(target, source, q):
        # row_target += q * row_source
        D[target] = [a + q * b for a, b in zip(D[target], D[source])]
        U[target] = [a + q * b for a, b in zip(U[target], U[source])]

    def add_col(target, source, q):
        # col_target += q * col_source; the inverse gets row_source -= q * row_target
        for row in D:
            row[target] += q * row[source]
        for row in V:
            row[target] += q * row[source]
        Vinv[source] = [a - q * b for a, b in zip(Vinv[source], Vinv[target])]

    for t in range(min(m, n)):
        while True:
            pivot = None
            for i in range(t, m):
                for j in range(t, n):
                    if D[i][j] != 0 and (pivot is None or abs(D[i][j]) < abs(D[pivot[0]][pivot[1]])):
                        pivot = (i, j)
            if pivot is None:
                break
            if pivot[0] != t:
                swap_rows(t, pivot[0])
            if pivot[1] != t:
                swap_cols(t, pivot[1])
            p = D[t][t]
            clean = True
            for i in range(t + 1, m):
                if D[i][t]:
                    add_row(i, t, -(D[i][t] // p))
                    clean = clean and D[i][t] == 0
            for j in range(t + 1, n):
                if D[t][j]:
                    add_col(j, t, -(D[t][j] // p))
                    clean = clean and D[t][j] == 0
            if not clean:
                continue
            offender = next(
                (i for i in range(t + 1, m) for j in range(t + 1, n) if D[i][j] % p != 0),
                None,
            )
            if offender is None:
                break
            add_row(t, offender, 1)
        if D[t][t] < 0:
            D[t] = [-x for x in D[t]]
            U[t] = [-x for x in U[t]]

    return SnfResult(
        U=IntMatrix.from_rows(U, cols=m),
        D=IntMatrix.from_rows(D, cols=n),
        V=IntMatrix.from_rows(V, cols=n),
        V_inverse=IntMatrix.from_rows(Vinv, cols=n),
    )


def hermite_normal_form(A: IntMatrix) -> IntMatrix:
    """
    Row-style Hermite normal form with the zero rows dropped.

    Rows are in echelon form, pivots are positive and every entry above a
    pivot lies in [0, pivot). The result depends only on the row lattice of A.
    """
    rows = A.to_rows()
    m, n = A.rows, A.cols
    r = 0
    for c in range(n):
        if r == m:
            break
        while True:
            live = [i for i in range(r, m) if rows[i][c] != 0]
            if not live:
                break
            i = min(live, key=lambda k: (abs(rows[k][c]), k))
            rows[r], rows[i] = rows[i], rows[r]
            for k in range(r + 1, m):
                if rows[k][c]:
                    q = rows[k][c] // rows[r][c]
                    rows[k] = [a - q * b for a, b in zip(rows[k], rows[r])]
            if all(rows[k][c] == 0 for k in range(r + 1, m)):
                break
        if rows[r][c] == 0:
            continue
        if rows[r][c] < 0:
            rows[r] = [-x for x in rows[r]]
        for k in range(r):
            q = rows[k][c] // rows[r][c]
            if q:
                rows[k] = [a - q * b for a, b in zip(rows[k], rows[r])]
        r += 1
    return IntMatrix.from_rows(rows[:r], cols=n)


def integer_rank(A: IntMatrix) -> int:
    """Rank over the rationals."""
    if A.rows == 0 or A.cols == 0:
        return 0
    M = DomainMatrix([[ZZ(x) for x in A.row(i)] for i in range(A.rows)], (A.rows, A.cols), ZZ)
    return M.convert_to(QQ).rank()


def left_kernel(A: IntMatrix) -> list[Vector]:
    """A basis of the integer vectors x with x·A = 0."""
    snf = smith_normal_form(A)
    return [snf.U.row(i) for i in range(snf.rank, A.rows)]


def primitive(v: Sequence[int]) -> Vector:
    g = 0
    for x in v:
        g = gcd(g, x)
    return tuple(v) if g in (0, 1) else tuple(x // g for x in v)


def dot(u: Sequence, v: Sequence):
    return sum(a * b for a, b in zip(u, v))


@dataclass(frozen=True)
class Lattice:
    """A sublattice of Z^n given by a basis (rows), kept in Hermite normal form."""

    ambient: int
    basis: tuple[Vector, ...]

    def __post_init__(self):
        for v in self.basis:
            if len(v) != self.ambient:
                raise AmbientMismatchError(f"Basis vector {v} does not live in Z^{self.ambient}.")
        if self.basis and integer_rank(IntMatrix.from_rows(self.basis, cols=self.ambient)) != len(self.basis):
            raise InvalidInputError("Lattice basis vectors must be linearly independent.")

    @classmethod
    def spanned_by(cls, ambient: int, vectors: Iterable[Sequence[int]]) -> "Lattice":
        """The lattice generated by arbitrary (possibly dependent) vectors."""
        vectors = [tuple(int(x) for x in v) for v in vectors]
        for v in vectors:
            if len(v) != ambient:
                raise AmbientMismatchError(f"Vector {v} does not live in Z^{ambient}.")
        if not vectors:
            return cls(ambient, ())
        H = hermite_normal_form(IntMatrix.from_rows(vectors, cols=ambient))
        return cls(ambient, tuple(H.row(i) for i in range(H.rows)))

    @property
    def rank(self) -> int:
        return len(self.basis)

    def matrix(self) -> IntMatrix:
        return IntMatrix.from_rows(self.basis, cols=self.ambient)

    def contains(self, v: Sequence[int]) -> bool:
        return Lattice.spanned_by(self.ambient, self.basis + (tuple(v),)).basis == self.basis

    def sum(self, other: "Lattice") -> "Lattice":
        _check_ambient(self, other)
        return Lattice.spanned_by(self.ambient, self.basis + other.basis)

    def intersection(self, other: "Lattice") -> "Lattice":
        _check_ambient(self, other)
        if not self.basis or not other.basis:
            return Lattice(self.ambient, ())
        stacked = IntMatrix.from_rows(self.basis + other.basis, cols=self.ambient)
        vectors = []
        for x in left_kernel(stacked):
            a = x[:self.rank]
            vectors.append(tuple(dot(a, [b[j] for b in self.basis]) for j in range(self.ambient)))
        return Lattice.spanned_by(self.ambient, vectors)

    def same_span(self, other: "Lattice") -> bool:
        """Equal rational spans."""
        _check_ambient(self, other)
        return self.rank == other.rank == self.sum(other).rank


def _check_ambient(a: Lattice, b: Lattice) -> None:
    if a.ambient != b.ambient:
        raise AmbientMismatchError(f"Lattices in Z^{a.ambient} and Z^{b.ambient}.")


def saturate(L: Lattice) -> Lattice:
    """The smallest lattice with torsion-free quotient containing L."""
    if not L.basis:
        return L
    snf = smith_normal_form(L.matrix())
    return Lattice.spanned_by(L.ambient, [snf.V_inverse.row(i) for i in range(snf.rank)])


def unimodular_completion(h: Sequence[int]) -> Vector:
    """An integer vector w with <h, w> = 1 for primitive h."""
    snf = smith_normal_form(IntMatrix.from_rows([h]))
    if snf.invariant_factors != (1,):
        raise InvalidInputError(f"Vector {tuple(h)} is not primitive.")
    u = snf.U[0, 0]
    return tuple(u * snf.V[j, 0] for j in range(len(h)))
