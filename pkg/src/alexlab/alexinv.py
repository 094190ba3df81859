"""
Alexander invariants read off a Fox matrix.

Delta^k is the gcd of the (s-k) x (s-k) minors of the Fox matrix (s = number of
generators), i.e. the k-th order of the module the Fox matrix presents. The
first nonvanishing one, at k0 = s - rank, carries the thickness.

Twisted homology at a torsion character is computed exactly: the Fox matrix is
evaluated in Q(zeta_m) and its rank is read from the rational realification.
"""

import logging
import time
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, product
from typing import Iterator, Sequence

from .errors import AmbientMismatchError, InvalidInputError, PresentationParseError
from .exactla import IntMatrix, integer_rank
from .fpgroup import FoxMatrix
from .laurent import (
    LaurentPoly,
    character_order,
    check_var_limit,
    determinant,
    evaluate_at_character,
    gcd_all,
    matrix_rank,
    newton_dim,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class OrderSequence:
    kmax: int
    orders: tuple[LaurentPoly, ...]
    k0: int


def _nonzero_rows(F: FoxMatrix) -> list[tuple[LaurentPoly, ...]]:
    return [row for row in F.entries if any(row)]


def _minors(F: FoxMatrix, size: int) -> Iterator[LaurentPoly]:
    """All size x size minors, rows and columns in lexicographic order."""
    rows = _nonzero_rows(F)
    for rsel in combinations(range(len(rows)), size):
        for csel in combinations(range(F.ncols), size):
            sub = [[rows[i][j] for j in csel] for i in rsel]
            yield determinant(sub, F.nvars)


def order_k(F: FoxMatrix, k: int) -> LaurentPoly:
    """gcd of the (s-k)-minors: 1 when s-k <= 0, 0 when every minor vanishes."""
    if k < 0:
        raise InvalidInputError(f"k must be nonnegative, got {k}.")
    n = F.nvars
    size = F.ncols - k
    if size <= 0:
        return LaurentPoly.constant(n, 1)
    if len(_nonzero_rows(F)) < size:
        return LaurentPoly.zero(n)
    check_var_limit(n)
    started = time.perf_counter()
    g = gcd_all(_minors(F, size), n)
    logger.debug("order_k k=%d: minors of size %d in %.3fs", k, size, time.perf_counter() - started)
    return g


def elementary_generators(F: FoxMatrix, k: int) -> list[LaurentPoly]:
    """The nonzero (s-k)-minors; [1] when s-k <= 0."""
    size = F.ncols - k
    if size <= 0:
        return [LaurentPoly.constant(F.nvars, 1)]
    if len(_nonzero_rows(F)) < size:
        return []
    return [m for m in _minors(F, size) if m]


def fraction_rank(F: FoxMatrix) -> int:
    started = time.perf_counter()
    rank = matrix_rank(F.entries, F.nvars)
    logger.debug("fraction-field rank %d of a %dx%d matrix in %.3fs", rank, F.nrows, F.ncols, time.perf_counter() - started)
    return rank


def first_order(F: FoxMatrix) -> tuple[int, LaurentPoly]:
    k0 = F.ncols - fraction_rank(F)
    return k0, order_k(F, k0)


def order_sequence(F: FoxMatrix, kmax: int) -> OrderSequence:
    """Delta^0 .. Delta^max(kmax, k0)."""
    k0, delta = first_order(F)
    orders = tuple(
        LaurentPoly.zero(F.nvars) if k < k0 else delta if k == k0 else order_k(F, k)
        for k in range(max(kmax, k0) + 1)
    )
    return OrderSequence(kmax, orders, k0)


def thickness(F: FoxMatrix) -> int:
    _, delta = first_order(F)
    return newton_dim(delta)


# -- torsion characters ----------------------------------------------------------

@dataclass(frozen=True)
class CharacterPoint:
    """A torsion point exp(2 pi i rho) of the character torus, rho in [0, 1)^n."""

    rho: tuple[Fraction, ...]

    def __post_init__(self):
        for x in self.rho:
            if not isinstance(x, Fraction) or not 0 <= x < 1:
                raise InvalidInputError(f"Character coordinates must be Fractions in [0, 1), got {x!r}.")

    @classmethod
    def of(cls, values: Sequence) -> "CharacterPoint":
        if any(isinstance(x, float) for x in values):
            raise InvalidInputError("Character coordinates must be exact rationals, not floats.")
        return cls(tuple(Fraction(x) % 1 for x in values))

    @classmethod
    def parse_csv(cls, text: str) -> "CharacterPoint":
        """``1/6,0`` style input; an empty string is the point of the rank-0 torus."""
        parts = [p.strip() for p in text.split(",")] if text.strip() else []
        try:
            return cls.of([Fraction(p) for p in parts])
        except (ValueError, ZeroDivisionError):
            raise PresentationParseError(f"Malformed character {text!r}; expected rationals like 1/6,0.")

    @property
    def order(self) -> int:
        return character_order(self.rho)

    def is_trivial(self) -> bool:
        return all(x == 0 for x in self.rho)

    def __str__(self) -> str:
        return ",".join(str(x) for x in self.rho)


@dataclass(frozen=True)
class CvReport:
    dim: int
    memberships: tuple[bool, ...]


def evaluated_rank(F: FoxMatrix, rho: CharacterPoint) -> int:
    """Rank of F(rho) over Q(zeta_m), m the order of rho."""
    if len(rho.rho) != F.nvars:
        raise AmbientMismatchError(f"Character of length {len(rho.rho)} for b1 = {F.nvars}.")
    rows = _nonzero_rows(F)
    if not rows:
        return 0
    values = [[evaluate_at_character(e, rho.rho) for e in row] for row in rows]
    width = len(values[0][0].coeffs)
    # Q-linear realification: every entry becomes its phi(m) x phi(m) multiplication matrix
    big = []
    for row in values:
        blocks = [v.multiplication_matrix() for v in row]
        for i in range(width):
            big.append([x for block in blocks for x in block[i]])
    return integer_rank(IntMatrix.from_rows(big, cols=F.ncols * width)) // width


def cv_dim(F: FoxMatrix, rho: CharacterPoint, kmax: int | None = None) -> CvReport:
    """dim H1(X; C_rho); memberships[k-1] says whether rho lies in V_k."""
    if len(rho.rho) != F.nvars:
        raise AmbientMismatchError(f"Character of length {len(rho.rho)} for b1 = {F.nvars}.")
    if rho.is_trivial():
        dim = F.nvars
    else:
        dim = F.ncols - 1 - evaluated_rank(F, rho)
    top = max(kmax or 0, dim)
    return CvReport(dim, tuple(dim >= k for k in range(1, top + 1)))


def torsion_characters(n: int, max_order: int) -> list[CharacterPoint]:
    """Every nontrivial torsion character of order <= max_order, grouped by order."""
    out = []
    for m in range(2, max_order + 1):
        for steps in product(range(m), repeat=n):
            rho = tuple(Fraction(j, m) for j in steps)
            if character_order(rho) == m:
                out.append(CharacterPoint(rho))
    return out


def hironaka_mismatches(F: FoxMatrix, k: int, max_order: int) -> list[CharacterPoint]:
    """
    Characters where dim H1(X; C_rho) >= k disagrees with the vanishing of the
    (s-k)-minors, or, for b1 = 1, with the vanishing of Delta^k.
    """
    if k < 1:
        raise InvalidInputError(f"k must be at least 1, got {k}.")
    minors = elementary_generators(F, k)
    delta = order_k(F, k) if F.nvars == 1 else None
    bad = []
    for rho in torsion_characters(F.nvars, max_order):
        in_variety = cv_dim(F, rho).dim >= k
        minors_vanish = all(evaluate_at_character(m, rho.rho).is_zero() for m in minors)
        agree = in_variety == minors_vanish
        if delta is not None:
            agree = agree and in_variety == evaluate_at_character(delta, rho.rho).is_zero()
        if not agree:
            bad.append(rho)
    if bad:
        logger.warning("%d characters disagree with the minor ideal at k=%d", len(bad), k)
    return bad
