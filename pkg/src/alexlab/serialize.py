"""
Machine-readable documents.

Every result becomes a JSON object with a fixed key order. Polynomials are
written canonically normalized, terms ascending by exponent vector, with the
text form alongside. Rationals are strings (``"1/2"``) so nothing is rounded.
"""

import json
from fractions import Fraction
from typing import Any

from .alexinv import CvReport
from .fpgroup import AbelianizationData, GroupPresentation, serialize_presentation
from .laurent import LaurentPoly, to_text
from .norms import McMullenReport, NormBall
from .obstruct import ConnectedSumReport, KFinding, ObstructionReport
from .torusgeo import IntersectionReport, TranslatedTorus


def dump(doc: dict[str, Any]) -> str:
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"


def rational(x) -> str:
    return str(Fraction(x))


def poly_document(p: LaurentPoly) -> dict[str, Any]:
    p = p.normalized()
    return {
        "nvars": p.nvars,
        "terms": [{"e": list(e), "c": c} for e, c in p.terms],
        "text": to_text(p),
    }


def abelianization_document(ab: AbelianizationData) -> dict[str, Any]:
    return {"b1": ab.b1, "torsion": list(ab.torsion), "images": [list(v) for v in ab.images]}


def presentation_document(p: GroupPresentation) -> dict[str, Any]:
    return {
        "generators": list(p.generators),
        "relators": len(p.relators),
        "fp": serialize_presentation(p),
    }


def finding_document(f: KFinding) -> dict[str, Any]:
    return {"k": f.k, "delta": poly_document(f.delta), "newton_dim": f.newton_dim, "cyclotomic": f.cyclotomic}


def report_document(r: ObstructionReport) -> dict[str, Any]:
    return {
        "test": r.test,
        "b1": r.b1,
        "k0": r.k0,
        "kmax": r.kmax,
        "per_k": [finding_document(f) for f in r.per_k],
        "thickness": r.thickness,
        "verdict": r.verdict.value,
        "witnesses": list(r.witnesses),
        "notes": list(r.notes),
    }


def connected_sum_document(r: ConnectedSumReport) -> dict[str, Any]:
    return {
        "factors": [
            {"b1": b, "thickness": th, "first_order": poly_document(d)}
            for b, th, d in zip(r.factor_b1, r.factor_thickness, r.factor_orders)
        ],
        "product_thickness": r.product_thickness,
        "product_order": poly_document(r.product_order),
        "additive": r.additive,
        "divisible": r.divisible,
        "qp": report_document(r.qp),
    }


def cv_document(rho, r: CvReport) -> dict[str, Any]:
    return {"rho": [rational(x) for x in rho.rho], "dim": r.dim, "memberships": list(r.memberships)}


def ball_document(ball: NormBall) -> dict[str, Any]:
    return {
        "role": ball.role,
        "ambient": ball.ambient,
        "vertices": [[rational(x) for x in v] for v in ball.vertices],
    }


def torus_document(T: TranslatedTorus) -> dict[str, Any]:
    return {
        "ambient": T.ambient,
        "equations": [list(u) for u in T.equations.basis],
        "translate": [rational(x) for x in T.translate],
        "dim": T.dim,
    }


def intersection_document(T1: TranslatedTorus, T2: TranslatedTorus, r: IntersectionReport) -> dict[str, Any]:
    return {
        "t1": torus_document(T1),
        "t2": torus_document(T2),
        "meets": r.meets,
        "dim": r.dim if r.meets else None,
        "parallel": r.parallel,
    }


def mcmullen_document(r: McMullenReport) -> dict[str, Any]:
    return {
        "b1": r.b1,
        "passed": r.passed,
        "results": [
            {
                "phi": list(x.phi),
                "alexander": x.alexander,
                "thurston": x.thurston,
                "fibered": x.fibered,
                "status": x.status,
                "reason": x.reason,
            }
            for x in r.results
        ],
    }
