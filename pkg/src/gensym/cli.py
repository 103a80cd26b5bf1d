"""Command-line interface.

Exit codes: 0 success, 1 verification failure, 2 usage or I/O error,
3 numerical domain error.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from .curvature import DegenerateMetricError
from .extension import projectively_flat_check, ricci_checks, riemannian_extension
from .fileio import FileFormatError, load_metric_file, load_surface_file, metric_to_dict
from .jets import DomainError, ExprSyntaxError, UnboundParameterError
from .lie import (
    BUILTIN_ALGEBRAS, BracketParams, builtin_algebra, jacobi_check, jacobi_system, koszul_connection,
    frame_curvature,
)
from .hodge import curvature_operator_frame
from .models import CATALOG, DEFAULT_POINTS, DEFAULT_TOL, PointError, build_report, get_model, report_json

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_DOMAIN = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _kv(text: str) -> tuple[str, float]:
    if "=" not in text:
        raise argparse.ArgumentTypeError(f"expected name=value, got {text!r}")
    k, v = text.split("=", 1)
    try:
        return k.strip(), float(v)
    except ValueError:
        raise argparse.ArgumentTypeError(f"parameter {k!r} needs a number, got {v!r}") from None


def _point(text: str) -> list[float]:
    try:
        vals = [float(t) for t in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad point {text!r}") from None
    if len(vals) != 4:
        raise argparse.ArgumentTypeError(f"a point needs 4 coordinates, got {len(vals)}")
    return vals


def _add_metric_flags(p):
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--model", help="catalog model name (see list-models)")
    src.add_argument("--metric-file", help="metric JSON file")
    p.add_argument("--param", action="append", type=_kv, default=[], metavar="K=V")
    p.add_argument("--points", type=int, default=DEFAULT_POINTS, help="number of sampled points")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--point", action="append", type=_point, default=[], metavar="A,B,C,D",
                   help="explicit point; repeatable; overrides sampling")
    p.add_argument("--tol", type=float, default=DEFAULT_TOL["zero"], help="zero-residual tolerance")
    p.add_argument("--witness", type=float, default=DEFAULT_TOL["witness"], help="nonzero-witness threshold")
    p.add_argument("--eigsep", type=float, default=DEFAULT_TOL["eigsep"], help="eigenvalue separation")
    p.add_argument("--json", dest="json_out", metavar="PATH|-", help="write the JSON report")


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="gensym", description="Curvature and structure analysis of four-dimensional metrics.")
    sub = ap.add_subparsers(dest="cmd", required=True, parser_class=_Parser)
    sub.add_parser("list-models", help="list catalog models")
    _add_metric_flags(sub.add_parser("analyze", help="full structure report"))
    _add_metric_flags(sub.add_parser("classify", help="classification label with evidence"))
    lp = sub.add_parser("lie", help="curvature of a built-in metric Lie algebra")
    lp.add_argument("--builtin", required=True, choices=sorted(BUILTIN_ALGEBRAS))
    lp.add_argument("--param", action="append", type=_kv, default=[], metavar="K=V")
    jp = sub.add_parser("jacobi", help="residuals of the Jacobi system for the bracket family")
    jp.add_argument("--params-file")
    for name in BracketParams.names():
        jp.add_argument(f"--{name}", type=float, default=None)
    ep = sub.add_parser("extend", help="Riemannian extension of an affine surface")
    ep.add_argument("--surface", required=True)
    ep.add_argument("--phi")
    ep.add_argument("--analyze", action="store_true")
    ep.add_argument("--points", type=int, default=DEFAULT_POINTS)
    ep.add_argument("--seed", type=int, default=0)
    vp = sub.add_parser("verify-appendix", help="run every acceptance row")
    vp.add_argument("--json", dest="json_out", metavar="PATH|-")
    vp.add_argument("--tol", type=float, default=None, help="override all upper thresholds")
    return ap


def _emit(text: str, target: str | None, out) -> None:
    if target is None or target == "-":
        out.write(text)
    else:
        with open(target, "w", encoding="utf-8") as fh:
            fh.write(text)


def _report(args) -> dict:
    tol = {"zero": args.tol, "witness": args.witness, "eigsep": args.eigsep}
    params = dict(args.param)
    kw = dict(seed=args.seed, n_points=args.points, points=args.point or None, tol=tol, params=params)
    if args.model:
        get_model(args.model)
        return build_report(model=args.model, **kw)
    return build_report(metric=load_metric_file(args.metric_file), **kw)


def cmd_list_models(args, out) -> int:
    for name, e in CATALOG.items():
        prm = ", ".join(f"{k}={v:g}" for k, v in e.defaults.items()) or "-"
        out.write(f"{name:<12} {prm:<22} {e.description}\n")
    return EXIT_OK


def cmd_analyze(args, out) -> int:
    rep = _report(args)
    _emit(report_json(rep), args.json_out if args.json_out else "-", out)
    return EXIT_OK if all(c["passed"] for c in rep["claims"]) else EXIT_FAIL


def cmd_classify(args, out) -> int:
    rep = _report(args)
    cls = rep["classification"]
    if args.json_out:
        _emit(report_json({"model": rep["model"], "params": rep["params"], "seed": rep["seed"],
                           "tolerances": rep["tolerances"], "classification": cls}), args.json_out, out)
        if args.json_out != "-":
            out.write(cls["label"] + "\n")
    else:
        out.write(cls["label"] + "\n")
        for ev in cls["evidence"]:
            out.write(f"  {'yes' if ev['passed'] else 'no ':<3} {ev['step']}\n")
    return EXIT_OK


def cmd_lie(args, out) -> int:
    alg = builtin_algebra(args.builtin, dict(args.param))
    conn = koszul_connection(alg)
    cv = frame_curvature(alg, conn)
    _, w = curvature_operator_frame(cv.R, alg.eps, cv.tau)
    brackets = {f"[e{i + 1},e{j + 1}]": alg.c[:, i, j].tolist()
                for i in range(4) for j in range(i + 1, 4) if np.abs(alg.c[:, i, j]).max() > 0}
    doc = {
        "algebra": alg.label or args.builtin,
        "eps": list(alg.eps),
        "brackets": brackets,
        "jacobi_residual": jacobi_check(alg),
        "connection": {f"nabla_e{a + 1} e{b + 1}": conn.L[:, a, b].tolist()
                       for a in range(4) for b in range(4)},
        "tau": cv.tau,
        "ricci": np.asarray(cv.ric_op).tolist(),
        "Wplus": w.Wplus.tolist(),
        "Wminus": w.Wminus.tolist(),
    }
    out.write(report_json(doc))
    return EXIT_OK


def _jacobi_params(args) -> BracketParams:
    vals = {n: 0.0 for n in BracketParams.names()}
    if args.params_file:
        with open(args.params_file, encoding="utf-8") as fh:
            try:
                data = json.load(fh)
            except json.JSONDecodeError as exc:
                raise FileFormatError(f"{args.params_file}: invalid JSON: {exc}") from exc
        if not isinstance(data, dict):
            raise FileFormatError(f"{args.params_file}: expected an object of parameters")
        unknown = set(data) - set(vals)
        if unknown:
            raise FileFormatError(f"unknown bracket parameters {sorted(unknown)}")
        vals.update({k: float(v) for k, v in data.items()})
    for n in vals:
        v = getattr(args, n)
        if v is not None:
            vals[n] = v
    return BracketParams(**vals)


def cmd_jacobi(args, out) -> int:
    res = jacobi_system(_jacobi_params(args))
    for k, r in enumerate(res, 1):
        out.write(f"J{k:<2} {float(r)!r}\n")
    worst = float(np.abs(res).max())
    out.write(f"max |residual| = {worst!r}\n")
    return EXIT_OK if worst < 1e-10 else EXIT_FAIL


def cmd_extend(args, out) -> int:
    surface, phi = load_surface_file(args.surface, args.phi)
    m = riemannian_extension(surface, phi)
    pts = [np.array([0.1 * k - 0.35, 0.27 - 0.13 * k]) for k in range(5)]
    doc = {"metric": metric_to_dict(m), "affine_ricci": ricci_checks(surface, pts),
           "projective_flatness_residual": projectively_flat_check(surface, pts)}
    if args.analyze:
        rep = build_report(metric=m, seed=args.seed, n_points=args.points)
        doc["report"] = rep
    out.write(report_json(doc))
    return EXIT_OK


def cmd_verify(args, out) -> int:
    from .appendix import format_table, verify_appendix
    res = verify_appendix(tol=args.tol)
    out.write(format_table(res) + "\n")
    if args.json_out:
        _emit(report_json(res), args.json_out, out)
    return EXIT_OK if res["passed"] else EXIT_FAIL


COMMANDS = {"list-models": cmd_list_models, "analyze": cmd_analyze, "classify": cmd_classify,
            "lie": cmd_lie, "jacobi": cmd_jacobi, "extend": cmd_extend, "verify-appendix": cmd_verify}


def main(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        return COMMANDS[args.cmd](args, out)
    except UsageError as exc:
        err.write(f"usage error: {exc}\n")
        return EXIT_USAGE
    except FileNotFoundError as exc:
        err.write(f"file not found: {exc.filename}\n")
        return EXIT_USAGE
    except KeyError as exc:
        err.write(f"error: {exc.args[0] if exc.args else exc}\n")
        return EXIT_USAGE
    except (OSError, FileFormatError, ExprSyntaxError, UnboundParameterError) as exc:
        err.write(f"error: {exc}\n")
        return EXIT_USAGE
    except (PointError, DegenerateMetricError, DomainError, ZeroDivisionError, OverflowError) as exc:
        err.write(f"numerical domain error: {exc}\n")
        return EXIT_DOMAIN
    except ValueError as exc:
        err.write(f"error: {exc}\n")
        return EXIT_USAGE


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
