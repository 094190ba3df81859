"""
Command-line entry point.

    alexlab delta corpus/trefoil.fp --k 1
    alexlab test qp corpus/solbundle.fp --machine
    alexlab tori intersect --t1 "n=2;rows=(1,0);q=(1/2,0)" --t2 "n=2;rows=(0,1)"

Exit codes: 0 success, 1 unreadable or malformed input, 2 computation limit,
3 mathematically invalid input. With --machine every sub-command prints one
JSON document on stdout; diagnostics always go to stderr.
"""

import argparse
import logging
import sys
from concurrent.futures import ThreadPoolExecutor
from typing import Any, Callable

from . import __version__
from .alexinv import (
    CharacterPoint,
    cv_dim,
    first_order,
    hironaka_mismatches,
    order_k,
    torsion_characters,
)
from .builders import free_by_cyclic, torus_bundle, torus_knot
from .config import configure_logging
from .errors import AlexlabError, ComputationLimitError, InvalidInputError, PresentationParseError
from .fpgroup import abelianize, fox_identity_defect, fox_matrix, load_presentation, serialize_presentation
from .laurent import newton_dim, to_text
from .norms import CohomologyClass, alexander_norm, mcmullen_check, parse_thurston_data, support_polytope, unit_ball
from .obstruct import connected_sum_report, kahler_test, qp_test
from .serialize import (
    abelianization_document,
    ball_document,
    connected_sum_document,
    cv_document,
    dump,
    intersection_document,
    mcmullen_document,
    poly_document,
    presentation_document,
    rational,
    report_document,
)
from .torusgeo import intersect, parse_torus_spec

logger = logging.getLogger(__name__)

Result = tuple[dict[str, Any], str]


class UsageError(AlexlabError):
    """Bad command line."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


# -- handlers -------------------------------------------------------------------

def _abelianize(args) -> Result:
    p = load_presentation(args.file)
    ab = abelianize(p)
    doc = abelianization_document(ab)
    lines = [f"b1: {ab.b1}", f"torsion: {' '.join(map(str, ab.torsion)) or 'none'}"]
    for name, image in zip(p.generators, ab.images):
        lines.append(f"{name} -> ({','.join(map(str, image))})")
    if args.check:
        defects = fox_identity_defect(fox_matrix(p))
        doc["fox_identity_defects"] = defects
        lines.append("fox identity: " + ("ok" if not defects else f"fails for relators {defects}"))
    return doc, "\n".join(lines) + "\n"


def _delta(args) -> Result:
    F = fox_matrix(load_presentation(args.file))
    if args.k is None:
        k, delta = first_order(F)
    else:
        k, delta = args.k, order_k(F, args.k)
    return {"k": k, "delta": poly_document(delta)}, to_text(delta) + "\n"


def _thickness(args) -> Result:
    k0, delta = first_order(fox_matrix(load_presentation(args.file)))
    th = newton_dim(delta)
    return {"k0": k0, "delta": poly_document(delta), "thickness": th}, f"{th}\n"


def _norm(args) -> Result:
    _, delta = first_order(fox_matrix(load_presentation(args.file)))
    phi = CohomologyClass.parse_csv(args.phi)
    value = alexander_norm(delta, phi)
    return {"phi": list(phi.phi), "delta": poly_document(delta), "norm": value}, f"{value}\n"


def _ball(args) -> Result:
    _, delta = first_order(fox_matrix(load_presentation(args.file)))
    ball = unit_ball(delta) if args.unit else support_polytope(delta)
    text = "\n".join("(" + ",".join(rational(x) for x in v) + ")" for v in ball.vertices)
    return ball_document(ball), text + "\n"


def _cv(args) -> Result:
    F = fox_matrix(load_presentation(args.file))
    if args.sweep is not None:
        k = args.k or 1
        rows = [(rho, cv_dim(F, rho).dim) for rho in torsion_characters(F.nvars, args.sweep)]
        bad = hironaka_mismatches(F, k, args.sweep)
        doc = {
            "max_order": args.sweep,
            "k": k,
            "characters": [{"rho": [rational(x) for x in rho.rho], "dim": d} for rho, d in rows],
            "mismatches": [[rational(x) for x in rho.rho] for rho in bad],
        }
        text = "".join(f"({rho}) {d}\n" for rho, d in rows)
        text += f"mismatches at k={k}: {len(bad)}\n"
        return doc, text
    if args.rho is None:
        raise UsageError("cv: one of --rho or --sweep is required")
    rho = CharacterPoint.parse_csv(args.rho)
    report = cv_dim(F, rho, args.k)
    doc = cv_document(rho, report)
    text = f"dim: {report.dim}\n"
    if args.k is not None:
        member = report.dim >= args.k
        doc["k"], doc["member"] = args.k, member
        text += f"in V_{args.k}: {'yes' if member else 'no'}\n"
    return doc, text


def _report_text(r) -> str:
    last = r.per_k[-1].k if r.per_k else r.k0
    lines = [f"test: {r.test}", f"b1: {r.b1}", f"k0: {r.k0} (checked k = {r.k0}..{last})"]
    for f in r.per_k:
        cyclo = "-" if f.cyclotomic is None else "yes" if f.cyclotomic else "no"
        dim = "-" if f.newton_dim is None else f.newton_dim
        lines.append(f"Delta^{f.k} = {to_text(f.delta)}  newton_dim={dim} cyclotomic={cyclo}")
    lines.append(f"thickness: {r.thickness}")
    lines.append(f"verdict: {r.verdict.value}")
    lines.extend(f"witness: {w}" for w in r.witnesses)
    lines.extend(f"note: {n}" for n in r.notes)
    return "\n".join(lines) + "\n"


def _test(args) -> Result:
    run_test = kahler_test if args.which == "kahler" else qp_test
    report = run_test(load_presentation(args.file), args.kmax)
    return report_document(report), _report_text(report)


def _sum(args) -> Result:
    report = connected_sum_report([load_presentation(f) for f in args.files], args.kmax)
    lines = [
        f"factor thickness: {' + '.join(map(str, report.factor_thickness))} = {sum(report.factor_thickness)}",
        f"product thickness: {report.product_thickness}",
        f"product first order: {to_text(report.product_order)}",
        f"additive: {'yes' if report.additive else 'no'}",
        f"divisible by the factor orders: {'yes' if report.divisible else 'no'}",
    ]
    return connected_sum_document(report), "\n".join(lines) + "\n" + _report_text(report.qp)


def _tori(args) -> Result:
    T1, T2 = parse_torus_spec(args.t1), parse_torus_spec(args.t2)
    r = intersect(T1, T2)
    text = f"meets: {'yes' if r.meets else 'no'}\n"
    if r.meets:
        text += f"dim: {r.dim}\n"
    text += f"parallel: {'yes' if r.parallel else 'no'}\n"
    return intersection_document(T1, T2, r), text


def _matrix(text: str) -> list[list[int]]:
    try:
        return [[int(x) for x in row.split(",")] for row in text.split(";")]
    except ValueError:
        raise PresentationParseError(f"Malformed matrix {text!r}; expected rows like 2,1;1,1.")


def _build(args) -> Result:
    if args.family == "torusbundle":
        p = torus_bundle(_matrix(args.matrix))
    elif args.family == "torusknot":
        p = torus_knot(args.p, args.q)
    else:
        p = free_by_cyclic(args.image, names=args.names)
    return presentation_document(p), serialize_presentation(p)


def _mcmullen(args) -> Result:
    _, delta = first_order(fox_matrix(load_presentation(args.file)))
    with open(args.data, encoding="utf-8") as fh:
        data = parse_thurston_data(fh.read())
    report = mcmullen_check(delta, data)
    lines = []
    for r in report.results:
        phi = ",".join(map(str, r.phi))
        tail = f"  ({r.reason})" if r.reason else ""
        lines.append(f"phi=({phi}) alexander={r.alexander} thurston={r.thurston} {r.status}{tail}")
    return mcmullen_document(report), "\n".join(lines) + "\n"


def _batch_one(path: str, kmax: int | None) -> dict[str, Any]:
    try:
        p = load_presentation(path)
        k, q = kahler_test(p, kmax), qp_test(p, kmax)
        return {"file": path, "b1": k.b1, "thickness": k.thickness, "kahler": k.verdict.value, "qp": q.verdict.value}
    except (OSError, ValueError, AlexlabError) as e:
        logger.error("%s: %s", path, e)
        return {"file": path, "error": str(e), "exit": _exit_code(e)}


def _batch(args) -> Result:
    with ThreadPoolExecutor(max_workers=args.jobs) as pool:
        results = list(pool.map(lambda f: _batch_one(f, args.kmax), args.files))
    lines = []
    for r in results:
        if "error" in r:
            lines.append(f"{r['file']}: error: {r['error']}")
        else:
            lines.append(f"{r['file']}: b1={r['b1']} thickness={r['thickness']} kahler={r['kahler']} qp={r['qp']}")
    doc = {"results": results}
    code = max((r.get("exit", 0) for r in results), default=0)
    if code:
        doc["exit"] = code
    return doc, "\n".join(lines) + "\n"


# -- parser -----------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--machine", action="store_true", help="print one JSON document")
    common.add_argument("--log-level", default=None, help="override ALEXLAB_LOG_LEVEL")

    parser = _Parser(prog="alexlab", description="Alexander invariants and Kähler / quasi-projective obstructions")
    parser.add_argument("--version", action="version", version=f"alexlab {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def command(name: str, handler: Callable, help: str, subparsers=sub) -> argparse.ArgumentParser:
        p = subparsers.add_parser(name, parents=[common], help=help)
        p.set_defaults(handler=handler)
        return p

    p = command("abelianize", _abelianize, "b1, torsion and generator images")
    p.add_argument("file")
    p.add_argument("--check", action="store_true", help="verify the fundamental Fox identity")

    p = command("delta", _delta, "Delta^k (default: the first nonvanishing one)")
    p.add_argument("file")
    p.add_argument("--k", type=int)

    p = command("thickness", _thickness, "dimension of the Newton polytope of the first order")
    p.add_argument("file")

    p = command("norm", _norm, "Alexander norm of a class")
    p.add_argument("file")
    p.add_argument("--phi", required=True, help="comma-separated integers")

    p = command("ball", _ball, "vertices of the dual ball (or --unit for the unit ball)")
    p.add_argument("file")
    p.add_argument("--unit", action="store_true")

    p = command("cv", _cv, "dim H1 with twisted coefficients at a torsion character")
    p.add_argument("file")
    p.add_argument("--rho", help="comma-separated rationals, e.g. 1/6,0")
    p.add_argument("--k", type=int)
    p.add_argument("--sweep", type=int, metavar="MAX_ORDER", help="all characters of order <= MAX_ORDER")

    test = sub.add_parser("test", help="obstruction tests")
    test_sub = test.add_subparsers(dest="which", required=True, parser_class=_Parser)
    for which in ("kahler", "qp"):
        p = command(which, _test, f"{which} necessary conditions", subparsers=test_sub)
        p.add_argument("file")
        p.add_argument("--kmax", type=int)

    p = command("sum", _sum, "connected-sum (free product) analysis")
    p.add_argument("files", nargs="+")
    p.add_argument("--kmax", type=int)

    tori = sub.add_parser("tori", help="translated subtori")
    tori_sub = tori.add_subparsers(dest="action", required=True, parser_class=_Parser)
    p = command("intersect", _tori, "intersect two translated subtori", subparsers=tori_sub)
    p.add_argument("--t1", required=True, help='e.g. "n=2;rows=(1,0);q=(1/2,0)"')
    p.add_argument("--t2", required=True)

    build = sub.add_parser("build", help="write a presentation of a standard group")
    build_sub = build.add_subparsers(dest="family", required=True, parser_class=_Parser)
    p = command("torusbundle", _build, "torus bundle with monodromy A", subparsers=build_sub)
    p.add_argument("--matrix", required=True, help="rows separated by ';', e.g. 2,1;1,1")
    p = command("torusknot", _build, "torus knot group <a,b | a^p b^-q>", subparsers=build_sub)
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--q", type=int, required=True)
    p = command("freebycyclic", _build, "mapping torus of a free group endomorphism", subparsers=build_sub)
    p.add_argument("--image", action="append", required=True, help="image word of the next generator")
    p.add_argument("--names", nargs="+", help="fiber generator names (default x1..xm)")

    p = command("mcmullen", _mcmullen, "compare the Alexander norm with Thurston norm data")
    p.add_argument("file")
    p.add_argument("--data", required=True)

    p = command("batch", _batch, "run both tests over many files")
    p.add_argument("files", nargs="+")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--kmax", type=int)
    return parser


def _exit_code(e: BaseException) -> int:
    if isinstance(e, (OSError, PresentationParseError, UsageError)):
        return 1
    if isinstance(e, ComputationLimitError):
        return 2
    if isinstance(e, InvalidInputError):
        return 3
    return 1


def run(argv: list[str] | None = None) -> tuple[int, str]:
    """Execute one invocation; returns (exit code, stdout text)."""
    try:
        args = build_parser().parse_args(argv)
    except UsageError as e:
        print(str(e), file=sys.stderr)
        return 1, ""
    except SystemExit as e:
        # --help and --version
        return int(e.code or 0), ""
    try:
        configure_logging(args.log_level)
        doc, text = args.handler(args)
    except (OSError, AlexlabError) as e:
        print(f"alexlab: error: {e}", file=sys.stderr)
        return _exit_code(e), ""
    except ValueError as e:
        # malformed ALEXLAB_* settings
        print(f"alexlab: error: {e}", file=sys.stderr)
        return 1, ""
    code = doc.pop("exit", 0) if args.command == "batch" else 0
    return code, dump(doc) if args.machine else text


def main(argv: list[str] | None = None) -> None:
    code, output = run(argv)
    sys.stdout.write(output)
    raise SystemExit(code)


if __name__ == "__main__":
    main()
