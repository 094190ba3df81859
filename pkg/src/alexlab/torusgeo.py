"""
Torsion-translated subtori of the character torus (C*)^n.

A subtorus T is stored by its saturated equation lattice L (T = {z : z^u = 1 for
u in L}); a translated torus rho*T adds a rational translate q, so that in
exponential coordinates z = exp(2 pi i theta) it is the set

    <u, theta> = <u, q>  (mod 1)  for every u in L.

Products and intersections of subtori become intersections and sums of lattices.
"""

import logging
import re
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import gcd as igcd
from typing import Sequence

from .errors import AmbientMismatchError, InvalidInputError, PresentationParseError
from .exactla import Lattice, dot, saturate, unimodular_completion
from .laurent import LaurentPoly, cyclotomic_decompose, line_support, newton_dim

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class TranslatedTorus:
    ambient: int
    equations: Lattice
    translate: tuple[Fraction, ...]

    @property
    def dim(self) -> int:
        return self.ambient - self.equations.rank

    def __str__(self) -> str:
        rows = "".join("(" + ",".join(str(x) for x in u) + ")" for u in self.equations.basis)
        q = ",".join(str(x) for x in self.translate)
        return f"n={self.ambient};rows={rows};q=({q})"


def _rational(x) -> Fraction:
    if isinstance(x, float):
        raise InvalidInputError(f"Translates must be rational (torsion), got the float {x!r}.")
    try:
        return Fraction(x)
    except (TypeError, ValueError):
        raise InvalidInputError(f"Translates must be rational (torsion), got {x!r}.")


def make_torus(n: int, rows: Sequence[Sequence[int]], translate: Sequence | None = None) -> TranslatedTorus:
    """Saturate the equations, reduce the translate mod 1."""
    if n < 0:
        raise InvalidInputError(f"Ambient rank must be nonnegative, got {n}.")
    translate = tuple(translate) if translate is not None else (0,) * n
    if len(translate) != n:
        raise AmbientMismatchError(f"Translate of length {len(translate)} in a torus of rank {n}.")
    equations = saturate(Lattice.spanned_by(n, rows))
    q = tuple(_rational(x) % 1 for x in translate)
    return TranslatedTorus(n, equations, q)


@dataclass(frozen=True)
class IntersectionReport:
    meets: bool
    dim: int
    parallel: bool


def _check_ambient(T1: TranslatedTorus, T2: TranslatedTorus) -> None:
    if T1.ambient != T2.ambient:
        raise AmbientMismatchError(f"Tori in (C*)^{T1.ambient} and (C*)^{T2.ambient}.")


def intersect(T1: TranslatedTorus, T2: TranslatedTorus) -> IntersectionReport:
    """
    rho1*T1 meets rho2*T2 iff rho1/rho2 lies in T1*T2, the annihilator of
    L1 & L2; the intersection then has dimension n - rank(L1 + L2).
    """
    _check_ambient(T1, T2)
    common = T1.equations.intersection(T2.equations)
    shift = [a - b for a, b in zip(T1.translate, T2.translate)]
    meets = all(dot(u, shift).denominator == 1 for u in common.basis)
    dim = T1.ambient - T1.equations.sum(T2.equations).rank
    parallel = T1.equations.same_span(T2.equations)
    return IntersectionReport(meets, dim if meets else 0, parallel)


def contains(T: TranslatedTorus, rho: Sequence) -> bool:
    if len(rho) != T.ambient:
        raise AmbientMismatchError(f"Point of length {len(rho)} in (C*)^{T.ambient}.")
    shift = [_rational(a) - b for a, b in zip(rho, T.translate)]
    return all(dot(u, shift).denominator == 1 for u in T.equations.basis)


@dataclass(frozen=True)
class CodimOneComponents:
    """
    Torsion-translated components {z^h = zeta_d^j} of V(Delta) for a polynomial
    whose Newton polytope is a segment in direction h.
    """

    direction: tuple[int, ...]
    tori: tuple[TranslatedTorus, ...]
    labels: tuple[tuple[int, int], ...]
    remainder: LaurentPoly


def codim_one_components(delta: LaurentPoly) -> CodimOneComponents:
    if delta.is_zero():
        raise InvalidInputError("V(0) is the whole torus, not a union of codimension-one components.")
    n = delta.nvars
    if newton_dim(delta) > 1:
        raise InvalidInputError("Newton polytope is not a point or a segment.")
    form = line_support(delta)
    h = form.direction
    if newton_dim(delta) == 0:
        return CodimOneComponents(h, (), (), form.poly)
    split = cyclotomic_decompose(form.poly)
    w = unimodular_completion(h)
    tori, labels = [], []
    for d, _ in split.factors:
        for j in range(d):
            if igcd(j, d) != 1:
                continue
            q = [Fraction(j, d) * x for x in w]
            tori.append(make_torus(n, [h], q))
            labels.append((d, j))
    logger.debug("direction %s: %d torsion components, remainder degree %d", h, len(tori), split.remainder.degree())
    return CodimOneComponents(h, tuple(tori), tuple(labels), split.remainder)


def arrangement_violations(tori: Sequence[TranslatedTorus]) -> list[tuple[int, int]]:
    """Index pairs of non-parallel tori that meet in a positive-dimensional set."""
    bad = []
    for (i, T1), (j, T2) in combinations(enumerate(tori), 2):
        report = intersect(T1, T2)
        if not report.parallel and report.meets and report.dim > 0:
            bad.append((i, j))
    return bad


_FIELD = re.compile(r"\s*(n|rows|q)\s*=\s*([^;]*)")
_GROUP = re.compile(r"\(([^()]*)\)")


def parse_torus_spec(text: str) -> TranslatedTorus:
    """``n=2;rows=(1,0);q=(1/2,0)``. Several rows are written back to back: ``rows=(1,0)(0,1)``."""
    fields = {}
    for part in text.split(";"):
        if not part.strip():
            continue
        match = _FIELD.fullmatch(part)
        if not match:
            raise PresentationParseError(f"Malformed torus spec field {part.strip()!r} in {text!r}.")
        fields[match.group(1)] = match.group(2).strip()
    if "n" not in fields:
        raise PresentationParseError(f"Torus spec {text!r} lacks n=.")
    try:
        n = int(fields["n"])
        rows = [_numbers(g, int) for g in _GROUP.findall(fields.get("rows", ""))]
        q = None
        if "q" in fields:
            groups = _GROUP.findall(fields["q"])
            if len(groups) != 1:
                raise ValueError(fields["q"])
            q = _numbers(groups[0], Fraction)
    except (ValueError, ZeroDivisionError):
        raise PresentationParseError(f"Malformed torus spec {text!r}.")
    return make_torus(n, rows, q)


def _numbers(body: str, kind) -> tuple:
    body = body.strip()
    return tuple(kind(x.strip()) for x in body.split(",")) if body else ()
