"""
The Alexander norm on H^1 and its balls.

||phi||_A is the width of the Newton polytope of Delta in the direction phi. The
difference hull C = hull{h - g : h, g in supp Delta} is the dual ball of the
norm; its polar is the unit ball. Hulls are computed exactly by brute-force
facet enumeration, which is fine for the tiny supports met in practice.
"""

import logging
import re
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import lcm
from typing import Sequence

from .config import settings
from .errors import AmbientMismatchError, ComputationLimitError, InvalidInputError, PresentationParseError
from .exactla import IntMatrix, dot, integer_rank, primitive
from .laurent import LaurentPoly, newton_dim

logger = logging.getLogger(__name__)

Point = tuple[Fraction, ...]


@dataclass(frozen=True)
class CohomologyClass:
    phi: tuple[int, ...]

    @classmethod
    def parse_csv(cls, text: str) -> "CohomologyClass":
        try:
            return cls(tuple(int(x) for x in text.split(",")))
        except ValueError:
            raise PresentationParseError(f"Malformed cohomology class {text!r}; expected integers like 1,0.")

    def __len__(self) -> int:
        return len(self.phi)


@dataclass(frozen=True)
class NormBall:
    """Vertices of the dual ball ("dual", the hull C) or of the unit ball ("unit")."""

    ambient: int
    vertices: tuple[Point, ...]
    role: str = "dual"


@dataclass(frozen=True)
class FiberedDatum:
    phi: CohomologyClass
    thurston: int
    fibered: bool


def _as_vector(phi) -> tuple[int, ...]:
    return phi.phi if isinstance(phi, CohomologyClass) else tuple(phi)


def alexander_norm(delta: LaurentPoly, phi) -> int:
    phi = _as_vector(phi)
    if len(phi) != delta.nvars:
        raise AmbientMismatchError(f"Class of length {len(phi)} for a polynomial in {delta.nvars} variables.")
    if delta.is_zero():
        return 0
    values = [dot(phi, e) for e in delta.support()]
    return max(values) - min(values)


# -- exact hulls ----------------------------------------------------------------

def _integral(vectors: Sequence[Sequence[Fraction]]) -> list[list[int]]:
    """Rows scaled by a common positive integer to integer vectors."""
    scale = 1
    for v in vectors:
        for x in v:
            scale = lcm(scale, Fraction(x).denominator)
    return [[int(Fraction(x) * scale) for x in v] for v in vectors]


def _independent_coordinates(diffs: list[Point], n: int, d: int) -> tuple[int, ...]:
    """d coordinates on which the projection of span(diffs) is injective."""
    ints = _integral(diffs)
    for cols in combinations(range(n), d):
        sub = IntMatrix.from_rows([[row[j] for j in cols] for row in ints], cols=d)
        if integer_rank(sub) == d:
            return cols
    raise InvalidInputError("No coordinate projection preserves the dimension.")


def _normal(points: Sequence[Point]) -> tuple[Fraction, ...]:
    """Cofactor normal of the hyperplane through d affinely independent points in Q^d."""
    d = len(points[0])
    base = points[0]
    rows = _integral([[p[j] - base[j] for j in range(d)] for p in points[1:]])
    normal = []
    for j in range(d):
        minor = IntMatrix.from_rows([row[:j] + row[j + 1:] for row in rows], cols=d - 1)
        normal.append((-1) ** j * minor.determinant())
    return tuple(Fraction(x) for x in primitive(normal))


def _facets(points: list[Point]) -> list[tuple[tuple[Fraction, ...], Fraction]]:
    """Facets a.x <= b of a full-dimensional hull in Q^d."""
    d = len(points[0])
    found = {}
    for subset in combinations(points, d):
        a = _normal(subset)
        if not any(a):
            continue
        b = dot(a, subset[0])
        values = [dot(a, p) for p in points]
        if all(v <= b for v in values):
            found[(a, b)] = None
        elif all(v >= b for v in values):
            found[(tuple(-x for x in a), -b)] = None
    return list(found)


def hull_vertices(points: Sequence[Sequence], n: int) -> tuple[list[Point], int]:
    """
    The vertices of the convex hull of rational points in Q^n, sorted, and the
    dimension of the hull.
    """
    pts = sorted({tuple(Fraction(x) for x in p) for p in points})
    if not pts:
        raise InvalidInputError("Convex hull of the empty set.")
    base = pts[0]
    diffs = [tuple(a - b for a, b in zip(p, base)) for p in pts[1:]]
    d = _affine_dim(diffs, n)
    limit = settings().max_hull_dim
    if d > limit:
        raise ComputationLimitError(f"Hull of dimension {d} exceeds the limit of {limit} (set ALEXLAB_MAX_HULL_DIM).")
    if d == 0:
        return [base], 0
    cols = _independent_coordinates(diffs, n, d)
    projected = {p: tuple(p[j] for j in cols) for p in pts}
    if d == 1:
        key = lambda p: projected[p][0]
        return sorted({min(pts, key=key), max(pts, key=key)}), 1
    facets = _facets(list(dict.fromkeys(projected.values())))
    vertices = []
    for p in pts:
        q = projected[p]
        tight = [a for a, b in facets if dot(a, q) == b]
        if tight and _affine_dim(tight, d) == d:
            vertices.append(p)
    logger.debug("hull of %d points in dimension %d: %d facets, %d vertices", len(pts), d, len(facets), len(vertices))
    return vertices, d


def _affine_dim(diffs: list[Point], n: int) -> int:
    if not diffs or n == 0:
        return 0
    return integer_rank(IntMatrix.from_rows(_integral(diffs), cols=n))


def support_polytope(delta: LaurentPoly) -> NormBall:
    """Vertices of C = hull{h - g : h, g in supp(delta)}."""
    if delta.is_zero():
        raise InvalidInputError("The zero polynomial has no support polytope.")
    n = delta.nvars
    corners, _ = hull_vertices(delta.support(), n)
    diffs = {tuple(a - b for a, b in zip(p, q)) for p in corners for q in corners}
    vertices, _ = hull_vertices(diffs, n)
    return NormBall(n, tuple(vertices), "dual")


def unit_ball(delta: LaurentPoly) -> NormBall:
    """The polar of C; defined when C is full-dimensional (the norm is a norm)."""
    if delta.is_zero():
        raise InvalidInputError("The Alexander norm of the zero polynomial is identically zero.")
    n = delta.nvars
    if n == 0 or newton_dim(delta) < n:
        raise InvalidInputError(
            f"The Alexander norm is degenerate (Newton polytope of dimension {newton_dim(delta)} in rank {n})."
        )
    C = support_polytope(delta)
    vertices = sorted({tuple(x / b for x in a) for a, b in _facets(list(C.vertices))})
    return NormBall(n, tuple(vertices), "unit")


# -- McMullen's inequality --------------------------------------------------------

@dataclass(frozen=True)
class McMullenResult:
    phi: tuple[int, ...]
    alexander: int
    thurston: int
    fibered: bool
    status: str
    reason: str = ""


@dataclass(frozen=True)
class McMullenReport:
    b1: int
    results: tuple[McMullenResult, ...]

    @property
    def passed(self) -> bool:
        return all(r.status == "PASS" for r in self.results)


def mcmullen_check(delta: LaurentPoly, data: Sequence[FiberedDatum]) -> McMullenReport:
    """||phi||_A <= ||phi||_T for every class, with equality on fibered classes."""
    b1 = delta.nvars
    if b1 < 2:
        raise InvalidInputError(f"The norm inequality is checked for b1 >= 2 only, got b1 = {b1}.")
    results = []
    for datum in data:
        norm = alexander_norm(delta, datum.phi)
        if norm > datum.thurston:
            status, reason = "FAIL", f"alexander {norm} > thurston {datum.thurston}"
        elif datum.fibered and norm != datum.thurston:
            status, reason = "FAIL", f"fibered class with alexander {norm} != thurston {datum.thurston}"
        else:
            status, reason = "PASS", ""
        results.append(McMullenResult(datum.phi.phi, norm, datum.thurston, datum.fibered, status, reason))
    return McMullenReport(b1, tuple(results))


_DATUM = re.compile(r"phi((?:\s+-?\d+)+)\s+thurston\s+(\d+)\s+fibered\s+([01])")


def parse_thurston_data(text: str) -> list[FiberedDatum]:
    """Lines ``phi 1 0 thurston 1 fibered 1``; ``#`` starts a comment."""
    data = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        match = _DATUM.fullmatch(line)
        if not match:
            raise PresentationParseError(f"Expected 'phi <int>... thurston <int> fibered <0|1>', got {line!r}.", lineno)
        phi = CohomologyClass(tuple(int(x) for x in match.group(1).split()))
        data.append(FiberedDatum(phi, int(match.group(2)), match.group(3) == "1"))
    return data


def fibered_thickness_check(delta: LaurentPoly, negative_fiber: bool, fibered_faces: int = 1) -> list[str]:
    """
    Claims a fibration forces on the thickness of delta (the first order):
    a fiber of negative Euler characteristic gives thickness >= 1, two
    non-equivalent fibered faces give thickness >= 2. Returns the violated ones.
    """
    th = 0 if delta.is_zero() else newton_dim(delta)
    violated = []
    if negative_fiber and th < 1:
        violated.append(f"fiber with negative Euler characteristic but thickness {th}")
    if fibered_faces >= 2 and th < 2:
        violated.append(f"{fibered_faces} fibered faces but thickness {th}")
    return violated
