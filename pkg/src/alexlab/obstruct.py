"""
Necessary conditions for Kähler and quasi-projective groups, read off the
Alexander polynomials.

A Kähler group has even b1 and constant Delta^k for every k. A quasi-projective
group with b1 != 2 has every nonzero Delta^k supported on a point or a segment,
of the form p(t^h) with p a product of cyclotomic polynomials up to a constant.

The verdicts are one-sided: OBSTRUCTED comes with witnesses, CONSISTENT only
says that every checked condition holds.
"""

import logging
from dataclasses import dataclass
from enum import Enum
from typing import Sequence

from .alexinv import order_sequence
from .config import settings
from .errors import InvalidInputError
from .fpgroup import FoxMatrix, GroupPresentation, fox_matrix, free_product
from .laurent import (
    LaurentPoly,
    cyclotomic_decompose,
    divides,
    embed,
    line_support,
    newton_dim,
    substitute_monomial,
    to_text,
)
from .torusgeo import arrangement_violations, codim_one_components

logger = logging.getLogger(__name__)

ONE_SIDED_NOTE = "necessary conditions only: CONSISTENT is not a proof of the property"


class Verdict(str, Enum):
    OBSTRUCTED = "OBSTRUCTED"
    CONSISTENT = "CONSISTENT"
    INCONCLUSIVE = "INCONCLUSIVE"


@dataclass(frozen=True)
class KFinding:
    k: int
    delta: LaurentPoly
    newton_dim: int | None
    cyclotomic: bool | None


@dataclass(frozen=True)
class ObstructionReport:
    test: str
    b1: int
    k0: int
    kmax: int
    per_k: tuple[KFinding, ...]
    thickness: int
    verdict: Verdict
    witnesses: tuple[str, ...] = ()
    notes: tuple[str, ...] = ()


def _findings(F: FoxMatrix, kmax: int) -> tuple[int, list[KFinding]]:
    seq = order_sequence(F, kmax)
    k0 = seq.k0
    findings = []
    for k in range(k0, len(seq.orders)):
        delta = seq.orders[k]
        if delta.is_zero():
            findings.append(KFinding(k, delta, None, None))
            continue
        form = line_support(delta)
        cyclo = None if form is None else cyclotomic_decompose(form.poly).is_cyclotomic
        findings.append(KFinding(k, delta, newton_dim(delta), cyclo))
    return k0, findings


def _resolve_kmax(kmax) -> int:
    if kmax is None:
        kmax = settings().kmax
    elif isinstance(kmax, bool) or not isinstance(kmax, (int, float)) or not float(kmax).is_integer():
        raise InvalidInputError(f"kmax must be an integer, got {kmax!r}.")
    kmax = int(kmax)
    if kmax < 0:
        raise InvalidInputError(f"kmax must be nonnegative, got {kmax}.")
    return kmax


def kahler_test(p: GroupPresentation, kmax: int | None = None) -> ObstructionReport:
    kmax = _resolve_kmax(kmax)
    F = fox_matrix(p)
    b1 = F.nvars
    k0, findings = _findings(F, kmax)
    th = findings[0].newton_dim or 0
    witnesses = []
    if b1 % 2:
        witnesses.append(f"b1 = {b1} is odd")
    for f in findings:
        if f.newton_dim:
            witnesses.append(f"Delta^{f.k} = {to_text(f.delta)} is not constant")
    if th > 0:
        witnesses.append(f"thickness {th} > 0")
    verdict = Verdict.OBSTRUCTED if witnesses else Verdict.CONSISTENT
    notes = () if witnesses else (ONE_SIDED_NOTE,)
    logger.info("kahler test: b1=%d k0=%d verdict=%s", b1, k0, verdict.value)
    return ObstructionReport("kahler", b1, k0, kmax, tuple(findings), th, verdict, tuple(witnesses), notes)


def qp_test(p: GroupPresentation, kmax: int | None = None) -> ObstructionReport:
    kmax = _resolve_kmax(kmax)
    F = fox_matrix(p)
    b1 = F.nvars
    k0, findings = _findings(F, kmax)
    th = findings[0].newton_dim or 0
    if b1 == 2:
        note = "b1 = 2 lies outside the hypothesis of the quasi-projective criterion"
        return ObstructionReport("qp", b1, k0, kmax, tuple(findings), th, Verdict.INCONCLUSIVE, (), (note,))

    witnesses = []
    tori = []
    for f in findings:
        if f.newton_dim is None:
            continue
        if f.newton_dim >= 2:
            witnesses.append(f"Delta^{f.k} has a Newton polytope of dimension {f.newton_dim}")
            continue
        components = codim_one_components(f.delta)
        if not f.cyclotomic:
            rest = substitute_monomial(components.remainder, components.direction).normalized()
            witnesses.append(f"non-cyclotomic factor {to_text(rest)}")
        tori.extend(T for T in components.tori if T not in tori)
    if b1 >= 3:
        for i, j in arrangement_violations(tori):
            witnesses.append(f"components {tori[i]} and {tori[j]} meet in positive dimension without being parallel")

    verdict = Verdict.OBSTRUCTED if witnesses else Verdict.CONSISTENT
    notes = () if witnesses else (ONE_SIDED_NOTE,)
    logger.info("qp test: b1=%d k0=%d verdict=%s", b1, k0, verdict.value)
    return ObstructionReport("qp", b1, k0, kmax, tuple(findings), th, verdict, tuple(witnesses), notes)


@dataclass(frozen=True)
class ConnectedSumReport:
    factor_b1: tuple[int, ...]
    factor_thickness: tuple[int, ...]
    factor_orders: tuple[LaurentPoly, ...]
    product_thickness: int
    product_order: LaurentPoly
    additive: bool
    divisible: bool
    qp: ObstructionReport


def connected_sum_report(ps: Sequence[GroupPresentation], kmax: int | None = None) -> ConnectedSumReport:
    """Free product of the factors: thickness additivity, divisibility, and the qp test."""
    if len(ps) < 2:
        raise InvalidInputError(f"A connected sum needs at least two factors, got {len(ps)}.")
    product = ps[0]
    for p in ps[1:]:
        product = free_product(product, p)

    factor_b1, factor_th, factor_orders = [], [], []
    for p in ps:
        Fp = fox_matrix(p)
        _, findings = _findings(Fp, 0)
        factor_b1.append(Fp.nvars)
        factor_orders.append(findings[0].delta)
        factor_th.append(findings[0].newton_dim or 0)

    F = fox_matrix(product)
    _, findings = _findings(F, 0)
    product_order = findings[0].delta
    product_th = findings[0].newton_dim or 0

    expected = LaurentPoly.constant(F.nvars, 1)
    offset = 0
    for b, order in zip(factor_b1, factor_orders):
        expected = expected * embed(order, F.nvars, offset)
        offset += b
    divisible = not product_order.is_zero() and not expected.is_zero() and divides(expected, product_order)

    additive = product_th == sum(factor_th)
    if not additive:
        logger.warning("thickness %d of the free product differs from the sum %s", product_th, factor_th)
    return ConnectedSumReport(
        tuple(factor_b1),
        tuple(factor_th),
        tuple(factor_orders),
        product_th,
        product_order,
        additive,
        divisible,
        qp_test(product, kmax),
    )
