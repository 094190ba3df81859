"""
Finitely presented groups: words, the ``.fp`` file format, abelianization,
Fox calculus and free products.

A word is stored as syllables (generator index, nonzero exponent) in freely
reduced form, e.g. a b a^-1 b^-1 is ((0, 1), (1, 1), (0, -1), (1, -1)).

The ``.fp`` format::

    # comment
    gens a b
    rel a^2 b^-3
"""

import logging
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

from .errors import InvalidInputError, PresentationParseError
from .exactla import IntMatrix, hermite_normal_form, smith_normal_form
from .laurent import LaurentPoly

logger = logging.getLogger(__name__)

_NAME = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
_TOKEN = re.compile(r"([A-Za-z_][A-Za-z0-9_]*)(?:\^([+-]?\d+))?")


@dataclass(frozen=True)
class Word:
    syllables: tuple[tuple[int, int], ...] = ()

    @classmethod
    def reduced(cls, pairs: Iterable[tuple[int, int]]) -> "Word":
        stack: list[list[int]] = []
        for g, e in pairs:
            if e == 0:
                continue
            if stack and stack[-1][0] == g:
                stack[-1][1] += e
                if stack[-1][1] == 0:
                    stack.pop()
            else:
                stack.append([g, e])
        return cls(tuple((g, e) for g, e in stack))

    @classmethod
    def letter(cls, g: int, e: int = 1) -> "Word":
        return cls.reduced([(g, e)])

    def __mul__(self, other: "Word") -> "Word":
        return Word.reduced(self.syllables + other.syllables)

    def inverse(self) -> "Word":
        return Word(tuple((g, -e) for g, e in reversed(self.syllables)))

    def __len__(self) -> int:
        return sum(abs(e) for _, e in self.syllables)

    def is_empty(self) -> bool:
        return not self.syllables

    def generators(self) -> set[int]:
        return {g for g, _ in self.syllables}

    def exponent_sums(self, ngens: int) -> list[int]:
        sums = [0] * ngens
        for g, e in self.syllables:
            sums[g] += e
        return sums

    def rename(self, offset: int) -> "Word":
        return Word(tuple((g + offset, e) for g, e in self.syllables))

    def to_text(self, names: Sequence[str]) -> str:
        return " ".join(names[g] if e == 1 else f"{names[g]}^{e}" for g, e in self.syllables)


@dataclass(frozen=True)
class GroupPresentation:
    generators: tuple[str, ...]
    relators: tuple[Word, ...] = ()
    warnings: tuple[str, ...] = field(default=(), compare=False)

    def __post_init__(self):
        if len(set(self.generators)) != len(self.generators):
            raise InvalidInputError(f"Duplicate generator names in {self.generators}.")
        for name in self.generators:
            if not _NAME.fullmatch(name):
                raise InvalidInputError(f"Invalid generator name {name!r}.")
        for r in self.relators:
            for g, _ in r.syllables:
                if not 0 <= g < len(self.generators):
                    raise InvalidInputError(f"Relator uses generator index {g} out of range.")

    @property
    def ngens(self) -> int:
        return len(self.generators)


def parse_word(text: str, names: Sequence[str], line: int | None = None) -> Word:
    """Parse whitespace-separated tokens ``x``, ``x^-1``, ``x^k``."""
    index = {name: i for i, name in enumerate(names)}
    pairs = []
    for token in text.split():
        match = _TOKEN.fullmatch(token)
        if not match:
            raise PresentationParseError(f"Malformed token {token!r}.", line)
        name, exponent = match.groups()
        if name not in index:
            raise PresentationParseError(f"Unknown generator {name!r}.", line)
        e = int(exponent) if exponent is not None else 1
        if e == 0:
            raise PresentationParseError(f"Zero exponent in token {token!r}.", line)
        pairs.append((index[name], e))
    return Word.reduced(pairs)


def parse_presentation(text: str) -> GroupPresentation:
    generators: list[str] | None = None
    relators: list[Word] = []
    warnings: list[str] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        keyword, *tail = line.split(None, 1)
        rest = tail[0] if tail else ""
        if keyword == "gens":
            if generators is not None:
                raise PresentationParseError("Second 'gens' line.", lineno)
            generators = rest.split()
            seen = set()
            for name in generators:
                if not _NAME.fullmatch(name):
                    raise PresentationParseError(f"Invalid generator name {name!r}.", lineno)
                if name in seen:
                    raise PresentationParseError(f"Duplicate generator {name!r}.", lineno)
                seen.add(name)
        elif keyword == "rel":
            if generators is None:
                raise PresentationParseError("'rel' before the 'gens' line.", lineno)
            word = parse_word(rest, generators, lineno)
            if word.is_empty():
                warnings.append(f"line {lineno}: relator reduces to the empty word")
            relators.append(word)
        else:
            raise PresentationParseError(f"Unknown keyword {keyword!r}.", lineno)
    if generators is None:
        raise PresentationParseError("Missing 'gens' line.")
    for w in warnings:
        logger.warning(w)
    return GroupPresentation(tuple(generators), tuple(relators), tuple(warnings))


def serialize_presentation(p: GroupPresentation) -> str:
    """Canonical ``.fp`` text: single spaces, reduced relators, collapsed exponents."""
    lines = [" ".join(["gens", *p.generators])]
    for r in p.relators:
        body = r.to_text(p.generators)
        lines.append(f"rel {body}" if body else "rel")
    return "\n".join(lines) + "\n"


def load_presentation(path: str | Path) -> GroupPresentation:
    return parse_presentation(Path(path).read_text(encoding="utf-8"))


@dataclass(frozen=True)
class AbelianizationData:
    b1: int
    torsion: tuple[int, ...]
    images: tuple[tuple[int, ...], ...]


def relation_matrix(p: GroupPresentation) -> IntMatrix:
    return IntMatrix.from_rows([r.exponent_sums(p.ngens) for r in p.relators], cols=p.ngens)


def abelianize(p: GroupPresentation) -> AbelianizationData:
    """
    H1 = Z^s / (relation rows). With U R V = D, generator j maps to row j of V;
    the coordinates with zero invariant factor form the free part. The image
    basis is then put in Hermite form so it does not depend on the SNF path.
    """
    s = p.ngens
    R = relation_matrix(p)
    snf = smith_normal_form(R)
    rank = snf.rank
    torsion = tuple(d for d in snf.invariant_factors if d > 1)
    free = range(rank, s)
    images = [[snf.V[j, c] for c in free] for j in range(s)]
    b1 = s - rank
    if b1:
        H = hermite_normal_form(IntMatrix.from_rows(images, cols=b1).transpose())
        images = H.transpose().to_rows()
    logger.debug("abelianized %d generators: b1=%d torsion=%s", s, b1, torsion)
    return AbelianizationData(b1, torsion, tuple(tuple(v) for v in images))


@dataclass(frozen=True)
class FoxMatrix:
    """Fox derivatives d r_i / d x_j pushed into Z[H], H = H1 / torsion."""

    entries: tuple[tuple[LaurentPoly, ...], ...]
    ncols: int
    abelianization: AbelianizationData

    @property
    def nrows(self) -> int:
        return len(self.entries)

    @property
    def nvars(self) -> int:
        return self.abelianization.b1

    def __getitem__(self, index: tuple[int, int]) -> LaurentPoly:
        i, j = index
        return self.entries[i][j]

    def generator_monomial(self, j: int) -> LaurentPoly:
        return LaurentPoly.monomial(self.abelianization.images[j])


def _power_derivative(image: Sequence[int], e: int) -> dict[tuple[int, ...], int]:
    """d(x^e)/dx with x -> t^image: 1 + x + ... + x^(e-1), or -(x^-1 + ... + x^e)."""
    if e > 0:
        ks, sign = range(e), 1
    else:
        ks, sign = range(e, 0), -1
    out: dict[tuple[int, ...], int] = {}
    for k in ks:
        key = tuple(k * a for a in image)
        out[key] = out.get(key, 0) + sign
    return out


def fox_matrix(p: GroupPresentation) -> FoxMatrix:
    ab = abelianize(p)
    n = ab.b1
    if n == 0:
        logger.info("b1 = 0: the Fox matrix has integer entries")
    rows = []
    for r in p.relators:
        acc: list[dict[tuple[int, ...], int]] = [{} for _ in range(p.ngens)]
        prefix = [0] * n
        for g, e in r.syllables:
            for key, c in _power_derivative(ab.images[g], e).items():
                shifted = tuple(a + b for a, b in zip(prefix, key))
                acc[g][shifted] = acc[g].get(shifted, 0) + c
            prefix = [a + e * b for a, b in zip(prefix, ab.images[g])]
        rows.append(tuple(LaurentPoly.from_dict(n, col) for col in acc))
    return FoxMatrix(tuple(rows), p.ngens, ab)


def fox_identity_defect(F: FoxMatrix) -> list[int]:
    """Rows violating sum_j (dr/dx_j)(x_j - 1) = 0 in Z[H]."""
    bad = []
    for i, row in enumerate(F.entries):
        total = LaurentPoly.zero(F.nvars)
        for j, entry in enumerate(row):
            total = total + entry * (F.generator_monomial(j) - 1)
        if not total.is_zero():
            bad.append(i)
    return bad


def free_product(p1: GroupPresentation, p2: GroupPresentation) -> GroupPresentation:
    """Disjoint union of generators and relators; clashing names of p2 get ``_2`` appended."""
    used = set(p1.generators)
    renamed = []
    for name in p2.generators:
        new = name
        while new in used:
            new += "_2"
        used.add(new)
        renamed.append(new)
    offset = p1.ngens
    return GroupPresentation(
        p1.generators + tuple(renamed),
        p1.relators + tuple(r.rename(offset) for r in p2.relators),
        p1.warnings + p2.warnings,
    )
