"""
Multivariate integer Laurent polynomials.

A LaurentPoly is a sorted tuple of (exponent vector, coefficient) pairs with no
zero coefficients. Arithmetic operators are exact; ``normalized()`` picks the
canonical representative of the unit class (minimal exponent 0 in every
variable, positive coefficient on the lexicographically largest exponent), so
"equal up to a unit" becomes plain equality of normalized values.

Polynomial gcd, exact division and the cyclotomic machinery go through sympy's
sparse polynomial rings.
"""

import logging
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd as igcd, lcm
from typing import Iterable, Mapping, Sequence

from sympy import ZZ, cyclotomic_poly, totient
from sympy.polys.matrices import DomainMatrix
from sympy.polys.polyerrors import ExactQuotientFailed
from sympy.polys.rings import ring

from .config import settings
from .errors import AmbientMismatchError, ComputationLimitError, InvalidInputError, PresentationParseError
from .exactla import IntMatrix, integer_rank, primitive

logger = logging.getLogger(__name__)

Exponent = tuple[int, ...]


@dataclass(frozen=True)
class LaurentPoly:
    """
    Terms are stored exactly as built; construction does not normalize. ``==``
    compares exact polynomials, so compare ``normalized()`` values to test
    equality up to a unit.
    """

    nvars: int
    terms: tuple[tuple[Exponent, int], ...] = ()

    @classmethod
    def from_dict(cls, nvars: int, mapping: Mapping[Sequence[int], int]) -> "LaurentPoly":
        clean = {}
        for e, c in mapping.items():
            e = tuple(int(x) for x in e)
            if len(e) != nvars:
                raise AmbientMismatchError(f"Exponent {e} has length {len(e)}, expected {nvars}.")
            if c:
                clean[e] = clean.get(e, 0) + int(c)
        return cls(nvars, tuple(sorted((e, c) for e, c in clean.items() if c)))

    @classmethod
    def zero(cls, nvars: int) -> "LaurentPoly":
        return cls(nvars, ())

    @classmethod
    def constant(cls, nvars: int, c: int) -> "LaurentPoly":
        return cls.from_dict(nvars, {(0,) * nvars: c})

    @classmethod
    def monomial(cls, exponent: Sequence[int], c: int = 1) -> "LaurentPoly":
        return cls.from_dict(len(exponent), {tuple(exponent): c})

    @classmethod
    def variable(cls, nvars: int, i: int) -> "LaurentPoly":
        return cls.monomial(tuple(int(j == i) for j in range(nvars)))

    def as_dict(self) -> dict[Exponent, int]:
        return dict(self.terms)

    def support(self) -> list[Exponent]:
        return [e for e, _ in self.terms]

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def is_constant(self) -> bool:
        """Constant up to a unit (the support is a single point)."""
        return len(self.terms) <= 1

    def is_unit(self) -> bool:
        return len(self.terms) == 1 and abs(self.terms[0][1]) == 1

    def _coerce(self, other) -> "LaurentPoly":
        if isinstance(other, int):
            return LaurentPoly.constant(self.nvars, other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        if other.nvars != self.nvars:
            raise AmbientMismatchError(f"Polynomials in {self.nvars} and {other.nvars} variables.")
        return other

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        acc = self.as_dict()
        for e, c in other.terms:
            acc[e] = acc.get(e, 0) + c
        return LaurentPoly.from_dict(self.nvars, acc)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly(self.nvars, tuple((e, -c) for e, c in self.terms))

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        acc: dict[Exponent, int] = {}
        for e, c in self.terms:
            for f, d in other.terms:
                key = tuple(a + b for a, b in zip(e, f))
                acc[key] = acc.get(key, 0) + c * d
        return LaurentPoly.from_dict(self.nvars, acc)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise InvalidInputError("Negative powers of a Laurent polynomial are only defined for monomials.")
        result = LaurentPoly.constant(self.nvars, 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def shift(self, exponent: Sequence[int]) -> "LaurentPoly":
        """Multiply by the monomial t^exponent."""
        return LaurentPoly(self.nvars, tuple((tuple(a + b for a, b in zip(e, exponent)), c) for e, c in self.terms))

    def min_exponent(self) -> Exponent:
        if not self.terms:
            return (0,) * self.nvars
        return tuple(min(e[i] for e, _ in self.terms) for i in range(self.nvars))

    def normalized(self) -> "LaurentPoly":
        if not self.terms:
            return self
        low = self.min_exponent()
        shifted = self.shift(tuple(-x for x in low))
        return -shifted if shifted.terms[-1][1] < 0 else shifted

    def content(self) -> int:
        g = 0
        for _, c in self.terms:
            g = igcd(g, c)
        return g

    def degree(self) -> int:
        """Degree of a one-variable polynomial after normalization."""
        if self.nvars != 1:
            raise InvalidInputError("degree() is defined for one-variable polynomials only.")
        if not self.terms:
            return -1
        return self.terms[-1][0][0] - self.terms[0][0][0]

    def __str__(self) -> str:
        return to_text(self)


# -- sympy bridge -------------------------------------------------------------

@lru_cache(maxsize=None)
def _poly_ring(nvars: int):
    names = ",".join(variable_names(max(nvars, 1)))
    R, *_ = ring(names, ZZ)
    return R


def _to_ring(p: LaurentPoly):
    """Polynomial-ring image of the normalized (nonnegative-exponent) representative."""
    R = _poly_ring(p.nvars)
    q = p.normalized()
    if p.nvars == 0:
        return R.from_dict({(0,): c for _, c in q.terms})
    return R.from_dict(dict(q.terms))


def _from_ring(nvars: int, f) -> LaurentPoly:
    mapping = {}
    for monom, coeff in f.terms():
        mapping[tuple(monom[:nvars])] = int(coeff)
    return LaurentPoly.from_dict(nvars, mapping)


def _check_same(p: LaurentPoly, q: LaurentPoly) -> None:
    if p.nvars != q.nvars:
        raise AmbientMismatchError(f"Polynomials in {p.nvars} and {q.nvars} variables.")


def check_var_limit(nvars: int) -> None:
    limit = settings().max_vars
    if nvars > limit:
        raise ComputationLimitError(
            f"Polynomial gcd in {nvars} variables exceeds the limit of {limit} (set ALEXLAB_MAX_VARS)."
        )


# -- operations ---------------------------------------------------------------

def multiply(p: LaurentPoly, q: LaurentPoly) -> LaurentPoly:
    """Exact product in canonical form."""
    _check_same(p, q)
    return (p * q).normalized()


def gcd(p: LaurentPoly, q: LaurentPoly) -> LaurentPoly:
    """
    Greatest common divisor, canonical. gcd(p, 0) = p and gcd(0, 0) = 0.
    """
    _check_same(p, q)
    if p.is_zero():
        return q.normalized()
    if q.is_zero():
        return p.normalized()
    check_var_limit(p.nvars)
    if p.is_constant() and q.is_constant():
        return LaurentPoly.constant(p.nvars, igcd(p.terms[0][1], q.terms[0][1]))
    g = _to_ring(p).gcd(_to_ring(q))
    return _from_ring(p.nvars, g).normalized()


def gcd_all(polys: Iterable[LaurentPoly], nvars: int) -> LaurentPoly:
    """gcd of a family; the empty family and all-zero families give 0."""
    g = LaurentPoly.zero(nvars)
    for f in polys:
        g = gcd(g, f)
        if g.is_unit():
            break
    return g


def exact_divide(p: LaurentPoly, q: LaurentPoly) -> LaurentPoly:
    """The normalized quotient p / q; raises if q does not divide p up to a unit."""
    _check_same(p, q)
    if q.is_zero():
        raise InvalidInputError("Division by the zero polynomial.")
    if p.is_zero():
        return p
    try:
        quotient = _to_ring(p).exquo(_to_ring(q))
    except ExactQuotientFailed:
        raise InvalidInputError(f"{to_text(q)} does not divide {to_text(p)}.")
    return _from_ring(p.nvars, quotient).normalized()


def divides(q: LaurentPoly, p: LaurentPoly) -> bool:
    try:
        exact_divide(p, q)
    except InvalidInputError:
        return False
    return True


def embed(p: LaurentPoly, nvars: int, offset: int) -> LaurentPoly:
    """Place p into nvars variables, its own variables starting at index offset."""
    if offset < 0 or offset + p.nvars > nvars:
        raise AmbientMismatchError(f"Cannot place {p.nvars} variables at offset {offset} of {nvars}.")
    pad_left, pad_right = (0,) * offset, (0,) * (nvars - offset - p.nvars)
    return LaurentPoly.from_dict(nvars, {pad_left + e + pad_right: c for e, c in p.terms})


def newton_dim(p: LaurentPoly) -> int:
    """Dimension of the Newton polytope (affine hull of the support)."""
    if p.is_zero():
        raise InvalidInputError("The zero polynomial has no Newton polytope.")
    base = p.terms[0][0]
    diffs = [tuple(a - b for a, b in zip(e, base)) for e in p.support()[1:]]
    if not diffs or p.nvars == 0:
        return 0
    return integer_rank(IntMatrix.from_rows(diffs, cols=p.nvars))


@dataclass(frozen=True)
class UnivariateForm:
    """p(h): the source polynomial equals p(t) with t replaced by the monomial z^h, up to a unit."""

    direction: Exponent
    poly: LaurentPoly


def line_support(p: LaurentPoly) -> UnivariateForm | None:
    """Write a polynomial with point or segment Newton polytope as p(h)."""
    dim = newton_dim(p)
    if dim == 0:
        direction = tuple(int(i == 0) for i in range(p.nvars))
        return UnivariateForm(direction, LaurentPoly.constant(1, abs(p.terms[0][1])))
    if dim > 1:
        return None
    base = p.terms[0][0]
    h = primitive(tuple(a - b for a, b in zip(p.terms[1][0], base)))
    if next(x for x in h if x) < 0:
        h = tuple(-x for x in h)
    pivot = next(i for i, x in enumerate(h) if x)
    mapping = {}
    for e, c in p.terms:
        mapping[((e[pivot] - base[pivot]) // h[pivot],)] = c
    return UnivariateForm(h, LaurentPoly.from_dict(1, mapping).normalized())


def substitute_monomial(u: LaurentPoly, h: Sequence[int]) -> LaurentPoly:
    """u(z^h) for a one-variable polynomial u."""
    if u.nvars != 1:
        raise InvalidInputError("substitute_monomial expects a one-variable polynomial.")
    return LaurentPoly.from_dict(len(h), {tuple(e[0] * x for x in h): c for e, c in u.terms})


# -- matrices over Z[H] ---------------------------------------------------------

def _domain_matrix(rows: Sequence[Sequence[LaurentPoly]], nvars: int) -> DomainMatrix:
    """
    The matrix as a DomainMatrix over the polynomial ring. Every entry is moved by
    the same monomial, so determinants change by a unit and ranks not at all.
    """
    R = _poly_ring(nvars)
    live = [e for row in rows for e in row if e]
    low = tuple(min(e.min_exponent()[i] for e in live) for i in range(nvars)) if live else (0,) * nvars
    back = tuple(-x for x in low)

    def lift(e: LaurentPoly):
        if not e:
            return R.zero
        shifted = e.shift(back)
        if nvars == 0:
            return R.from_dict({(0,): c for _, c in shifted.terms})
        return R.from_dict(dict(shifted.terms))

    ncols = len(rows[0]) if rows else 0
    return DomainMatrix([[lift(e) for e in row] for row in rows], (len(rows), ncols), R.to_domain())


def determinant(rows: Sequence[Sequence[LaurentPoly]], nvars: int) -> LaurentPoly:
    """Determinant of a square matrix of Laurent polynomials, canonical."""
    n = len(rows)
    if n == 0:
        return LaurentPoly.constant(nvars, 1)
    if any(len(row) != n for row in rows):
        raise InvalidInputError("Determinant of a non-square matrix.")
    if any(not any(row) for row in rows):
        return LaurentPoly.zero(nvars)
    return _from_ring(nvars, _domain_matrix(rows, nvars).det()).normalized()


def matrix_rank(rows: Sequence[Sequence[LaurentPoly]], nvars: int) -> int:
    """Rank over the fraction field Q(t1, ..., tn)."""
    live = [row for row in rows if any(row)]
    if not live or not live[0]:
        return 0
    M = _domain_matrix(live, nvars)
    return M.convert_to(M.domain.get_field()).rank()


# -- cyclotomic decomposition --------------------------------------------------

@lru_cache(maxsize=256)
def cyclotomic(d: int) -> LaurentPoly:
    """The d-th cyclotomic polynomial."""
    coeffs = cyclotomic_poly(d, polys=True).all_coeffs()
    top = len(coeffs) - 1
    return LaurentPoly.from_dict(1, {(top - i,): int(c) for i, c in enumerate(coeffs)})


@dataclass(frozen=True)
class CyclotomicDecomposition:
    content: int
    factors: tuple[tuple[int, int], ...]
    remainder: LaurentPoly

    @property
    def is_cyclotomic(self) -> bool:
        """True when the input is a unit times a constant times cyclotomic factors."""
        return self.remainder.is_constant()

    def reassemble(self) -> LaurentPoly:
        result = self.remainder * self.content
        for d, mult in self.factors:
            result = result * cyclotomic(d) ** mult
        return result.normalized()


def cyclotomic_decompose(p: LaurentPoly) -> CyclotomicDecomposition:
    """
    Split off content and every cyclotomic factor by trial division.

    Candidates are all Phi_d with phi(d) <= deg; since phi(d) >= sqrt(d/2) this
    means d <= 2*deg^2.
    """
    if p.nvars != 1:
        raise InvalidInputError(f"Cyclotomic decomposition needs one variable, got {p.nvars}.")
    if p.is_zero():
        raise InvalidInputError("The zero polynomial has no cyclotomic decomposition.")
    p = p.normalized()
    c = p.content()
    R = _poly_ring(1)
    rest = _to_ring(p).quo_ground(c)
    deg = p.degree()
    factors = []
    for d in range(1, 2 * deg * deg + 1):
        if int(totient(d)) > rest.degree():
            continue
        phi = _to_ring(cyclotomic(d))
        mult = 0
        while rest.degree() >= phi.degree():
            q, r = rest.div(phi)
            if r:
                break
            rest, mult = q, mult + 1
        if mult:
            factors.append((d, mult))
    remainder = _from_ring(1, rest if rest else R.one).normalized()
    return CyclotomicDecomposition(c, tuple(factors), remainder)


# -- evaluation at torsion characters -----------------------------------------

def _as_fraction(x) -> Fraction:
    if isinstance(x, float):
        raise InvalidInputError(f"Character coordinates must be exact rationals, got the float {x!r}.")
    return Fraction(x)


def character_order(rho: Sequence) -> int:
    m = 1
    for x in rho:
        m = lcm(m, _as_fraction(x).denominator)
    return m


@dataclass(frozen=True)
class CyclotomicElement:
    """An element of Q(zeta_m) with integer coordinates in the basis 1, zeta, ..., zeta^(phi(m)-1)."""

    order: int
    coeffs: tuple[int, ...]

    @classmethod
    def from_powers(cls, order: int, powers: Mapping[int, int]) -> "CyclotomicElement":
        R = _poly_ring(1)
        folded: dict[tuple[int], int] = {}
        for k, c in powers.items():
            folded[(k % order,)] = folded.get((k % order,), 0) + c
        f = R.from_dict({k: c for k, c in folded.items() if c}) if any(folded.values()) else R.zero
        return cls._reduce(order, f)

    @classmethod
    def _reduce(cls, order: int, f) -> "CyclotomicElement":
        modulus = _to_ring(cyclotomic(order))
        r = f.rem(modulus)
        width = int(totient(order))
        coeffs = [0] * width
        for (k,), c in r.terms():
            coeffs[k] = int(c)
        return cls(order, tuple(coeffs))

    def _as_ring(self):
        R = _poly_ring(1)
        return R.from_dict({(k,): c for k, c in enumerate(self.coeffs) if c}) if any(self.coeffs) else R.zero

    def lift(self, order: int) -> "CyclotomicElement":
        """The same element seen in Q(zeta_order), order a multiple of self.order."""
        if order % self.order:
            raise InvalidInputError(f"Q(zeta_{self.order}) does not embed in Q(zeta_{order}).")
        step = order // self.order
        return CyclotomicElement.from_powers(order, {k * step: c for k, c in enumerate(self.coeffs) if c})

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __mul__(self, other: "CyclotomicElement") -> "CyclotomicElement":
        m = lcm(self.order, other.order)
        a, b = self.lift(m), other.lift(m)
        return CyclotomicElement._reduce(m, a._as_ring() * b._as_ring())

    def __eq__(self, other) -> bool:
        if not isinstance(other, CyclotomicElement):
            return NotImplemented
        m = lcm(self.order, other.order)
        return self.lift(m).coeffs == other.lift(m).coeffs

    def __hash__(self):
        # equal elements may carry different orders; only the rational part is order-free
        return hash(self.as_int())

    def multiplication_matrix(self) -> list[list[int]]:
        """Rational matrix of x -> self * x on the power basis (column j = self * zeta^j)."""
        width = len(self.coeffs)
        base = self._as_ring()
        R = _poly_ring(1)
        columns = []
        for j in range(width):
            zeta_j = R.from_dict({(j,): 1})
            columns.append(CyclotomicElement._reduce(self.order, base * zeta_j).coeffs)
        return [[columns[j][i] for j in range(width)] for i in range(width)]

    def as_int(self) -> int | None:
        if all(c == 0 for c in self.coeffs[1:]):
            return self.coeffs[0]
        return None


def evaluate_at_character(p: LaurentPoly, rho: Sequence) -> CyclotomicElement:
    """Exact value of p at the torsion character exp(2 pi i rho)."""
    if len(rho) != p.nvars:
        raise AmbientMismatchError(f"Character of length {len(rho)} for a polynomial in {p.nvars} variables.")
    rho = [_as_fraction(x) % 1 for x in rho]
    m = character_order(rho)
    steps = [int(x * m) for x in rho]
    powers: dict[int, int] = {}
    for e, c in p.terms:
        k = sum(a * b for a, b in zip(e, steps)) % m
        powers[k] = powers.get(k, 0) + c
    return CyclotomicElement.from_powers(m, powers)


# -- text form ----------------------------------------------------------------

def variable_names(nvars: int) -> list[str]:
    return ["t"] if nvars == 1 else [f"t{i + 1}" for i in range(nvars)]


def _monomial_text(e: Exponent, names: list[str]) -> str:
    parts = []
    for name, k in zip(names, e):
        if k == 1:
            parts.append(name)
        elif k != 0:
            parts.append(f"{name}^{k}")
    return "*".join(parts)


def to_text(p: LaurentPoly) -> str:
    """Terms in descending lexicographic exponent order, e.g. ``t^2 - 3*t + 1``."""
    if p.is_zero():
        return "0"
    names = variable_names(p.nvars)
    out = []
    for e, c in reversed(p.terms):
        mono = _monomial_text(e, names)
        mag = abs(c)
        body = str(mag) if not mono else mono if mag == 1 else f"{mag}*{mono}"
        if not out:
            out.append(body if c > 0 else f"-{body}")
        else:
            out.append(f"+ {body}" if c > 0 else f"- {body}")
    return " ".join(out)


_TERM = re.compile(r"\s*([+-])?\s*([^+-]+)")


def from_text(text: str, nvars: int) -> LaurentPoly:
    """Parse the text form produced by ``to_text`` (negative exponents allowed as ``t^-2``)."""
    names = variable_names(nvars)
    index = {name: i for i, name in enumerate(names)}
    source = re.sub(r"\^\s*-", "^~", text.strip())
    if not source:
        raise PresentationParseError("Empty polynomial text.")
    acc: dict[Exponent, int] = {}
    pos = 0
    while pos < len(source):
        match = _TERM.match(source, pos)
        if not match or not match.group(2).strip():
            raise PresentationParseError(f"Cannot parse polynomial {text!r}.")
        pos = match.end()
        sign = -1 if match.group(1) == "-" else 1
        coeff, exps = 1, [0] * nvars
        for factor in match.group(2).strip().split("*"):
            factor = factor.strip().replace("^~", "^-")
            if re.fullmatch(r"\d+", factor):
                coeff *= int(factor)
                continue
            name, _, power = factor.partition("^")
            if name not in index:
                raise PresentationParseError(f"Unknown variable {name!r} in {text!r}.")
            try:
                exps[index[name]] += int(power) if power else 1
            except ValueError:
                raise PresentationParseError(f"Malformed exponent in {factor!r}.")
        key = tuple(exps)
        acc[key] = acc.get(key, 0) + sign * coeff
    return LaurentPoly.from_dict(nvars, acc)
