"""Command-line entry point.

Exit codes: 0 success, 1 computation finished but nothing was certified
(certificate does not hold, verdict undecided, witness tolerance not reached),
2 bad input.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import dataclass, field

from . import cases, certify, moran, separation
from .errors import GenposError
from .families import family_from_dict
from .ifs import RatioVector, system_from_dict
from .report import emit_report

COMMANDS = ("moran", "certify", "separate", "sweep", "case", "wsp-witness")
SWEEP_HEADER = ("cell_lo", "cell_hi", "status", "gap_or_overlap", "depth")


class InputError(Exception):
    """Raised for any problem with the command line or input files (exit 2)."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise InputError(message)


@dataclass
class RunConfig:
    command: str
    input_path: str | None = None
    seed: int = 0
    output_format: str = "json"
    out: str | None = None
    options: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise InputError(f"command: unknown command {self.command!r}")
        if self.output_format not in ("json", "csv"):
            raise InputError(f"format: must be json or csv, got {self.output_format!r}")
        o = self.options
        if o.get("tol") is not None and not o["tol"] > 0:
            raise InputError("tol: must be positive")
        for name in ("depth", "max_depth", "cells"):
            if o.get(name) is not None and o[name] < 1:
                raise InputError(f"{name}: must be >= 1")


def _floats(text: str, name: str) -> list:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise InputError(f"{name}: expected comma-separated numbers, got {text!r}") from exc


def _word(text: str, name: str) -> tuple:
    try:
        return tuple(int(x) for x in text.split(",") if x.strip())
    except ValueError as exc:
        raise InputError(f"{name}: expected comma-separated letters, got {text!r}") from exc


def _load_json(path: str, name: str) -> dict:
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise InputError(f"{name}: cannot read {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"{name}: malformed JSON in {path}: {exc.msg} at line {exc.lineno}") from exc


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--out", help="write output here instead of stdout")
    common.add_argument("--format", dest="output_format", choices=("json", "csv"), default=None)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--verbose", action="store_true", help="log informational messages to stderr")

    parser = _Parser(prog="genpos", description="General-position certificates for parametrized IFS.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("moran", parents=[common], help="solve the Moran (or a dimension) equation")
    p.add_argument("--ratios", help="comma-separated ratios r_i")
    p.add_argument("--terms", help="comma-separated coeff:base terms of sum(coeff * base**s)")
    p.add_argument("--target", type=float, default=1.0)
    p.add_argument("--bracket", default="0,16")

    p = sub.add_parser("certify", parents=[common], help="general-position certificate")
    p.add_argument("--family", dest="input_path", help="family descriptor JSON")
    p.add_argument("--j")
    p.add_argument("--k")
    p.add_argument("--cj", type=float)
    p.add_argument("--Ck", type=float)
    p.add_argument("--rj", type=float)
    p.add_argument("--rk", type=float)
    p.add_argument("--dimD", type=float)
    p.add_argument("--samples", type=int, default=0, help="also run a seeded displacement spot-check")
    p.add_argument("--depth", type=int, default=30)
    p.add_argument("--corollary", choices=("single", "ssc"), help="translation corollary instead of a family")
    p.add_argument("--ratios")
    p.add_argument("--n", type=int)
    p.add_argument("--index-k", type=int)
    p.add_argument("--index-m", type=int)

    p = sub.add_parser("separate", parents=[common], help="disjointness of two pieces, or SSC")
    p.add_argument("--system", dest="input_path", required=True, help="system descriptor JSON")
    p.add_argument("--j")
    p.add_argument("--k")
    p.add_argument("--ssc", action="store_true")
    p.add_argument("--tol", type=float, default=1e-9)
    p.add_argument("--max-depth", type=int, default=30)

    p = sub.add_parser("sweep", parents=[common], help="classify a grid of parameter cells")
    p.add_argument("--family", dest="input_path", required=True)
    p.add_argument("--j", required=True)
    p.add_argument("--k", required=True)
    p.add_argument("--cells", type=int, default=100)
    p.add_argument("--tol", type=float, default=1e-9)
    p.add_argument("--max-depth", type=int, default=30)
    p.add_argument("--method", choices=("center", "interval"), default="center")
    p.add_argument("--summary", help="also write the JSON summary to this file")

    p = sub.add_parser("case", parents=[common], help="the exact-overlap and one-point families")
    p.add_argument("which", choices=("exact-overlap", "one-point"))
    for name in ("t", "b", "p", "q", "r"):
        p.add_argument(f"--{name}", type=float)
    p.add_argument("--max-mn", type=int, default=4)
    p.add_argument("--depth", type=int, default=30)
    p.add_argument("--tol", type=float, default=1e-12)

    p = sub.add_parser("wsp-witness", parents=[common], help="compositions converging to the identity")
    p.add_argument("--kind", choices=("exact-overlap", "one-point"), required=True)
    for name in ("t", "b", "p", "q", "r"):
        p.add_argument(f"--{name}", type=float)
    p.add_argument("--tol", type=float, default=1e-3)
    p.add_argument("--max-exp", type=int, default=200)
    return parser


def _need(args, *names):
    for name in names:
        if getattr(args, name, None) is None:
            raise InputError(f"{name}: required for this command")


def _run_moran(args):
    if args.ratios:
        ratios = _floats(args.ratios, "ratios")
        s = moran.similarity_dimension(ratios)
        residual = moran.DimensionEquation.moran(ratios).residual(s)
    elif args.terms:
        try:
            terms = [tuple(float(x) for x in t.split(":")) for t in args.terms.split(",")]
        except ValueError as exc:
            raise InputError(f"terms: expected coeff:base pairs, got {args.terms!r}") from exc
        eq = moran.DimensionEquation(tuple(terms), args.target)
        s = moran.solve_dimension_equation(eq, tuple(_floats(args.bracket, "bracket")))
        residual = eq.residual(s)
    else:
        raise InputError("ratios: give --ratios or --terms")
    return {"s": s, "residual": residual}, True


def _run_certify(args):
    if args.corollary:
        _need(args, "ratios", "n")
        r = RatioVector(tuple(_floats(args.ratios, "ratios")))
        if args.corollary == "single":
            _need(args, "index_k", "index_m")
            cert = certify.translation_corollary_single(r, args.index_k, args.index_m, args.n)
        else:
            cert = certify.translation_corollary_ssc(r, args.n)
        return cert.to_dict(), cert.holds
    _need(args, "input_path", "j", "k")
    fam = family_from_dict(_load_json(args.input_path, "family"))
    cert = certify.theorem3_certificate(fam, _word(args.j, "j"), _word(args.k, "k"), args.cj, args.Ck,
                                        args.dimD, args.rj, args.rk)
    out = cert.to_dict()
    ok = cert.holds
    if args.samples:
        rep = certify.empirical_displacement_check(fam, args.samples, args.depth, args.seed)
        out["displacement_check"] = {"passed": rep.passed, "max_ratio": rep.max_ratio, "samples": rep.samples,
                                     "seed": args.seed, "witness": rep.witness}
        ok = ok and rep.passed
    return out, ok


def _run_separate(args):
    system = system_from_dict(_load_json(args.input_path, "system"))
    if args.ssc:
        rep = separation.check_ssc(system, args.tol, args.max_depth)
        return rep.to_dict(), rep.holds
    _need(args, "j", "k")
    v = separation.check_pair_disjoint(system, _word(args.j, "j"), _word(args.k, "k"), args.tol, args.max_depth)
    return v.to_dict(), v.disjoint


def _run_case(args):
    if args.which == "exact-overlap":
        _need(args, "t", "b")
        params = cases.ExactOverlapParams(args.t, args.b)
        verdict = cases.classify_exact_overlap(params, args.max_mn, args.tol, args.depth)
    else:
        _need(args, "p", "q", "r")
        params = cases.OnePointParams(args.p, args.q, args.r)
        verdict = cases.classify_one_point(params, args.max_mn, args.tol, args.depth)
    return verdict, verdict.verified


def _run_witness(args):
    if args.kind == "exact-overlap":
        _need(args, "t", "b")
        params = cases.ExactOverlapParams(args.t, args.b)
    else:
        _need(args, "p", "q", "r")
        params = cases.OnePointParams(args.p, args.q, args.r)
    search = cases.wsp_witness_search(args.kind, params, args.tol, args.max_exp)
    return search, search.reached_tol


def _write(text: str, path: str | None) -> None:
    if path is None:
        sys.stdout.write(text)
        return
    try:
        with open(path, "w", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise InputError(f"out: cannot write {path}: {exc.strerror}") from exc


def parse_and_dispatch(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        if args.verbose:
            logging.basicConfig(level=logging.INFO, format="genpos: %(message)s", stream=sys.stderr)
        default_fmt = "csv" if args.command == "sweep" else "json"
        config = RunConfig(
            command=args.command, input_path=getattr(args, "input_path", None), seed=args.seed,
            output_format=args.output_format or default_fmt, out=args.out,
            options={k: getattr(args, k, None) for k in ("tol", "depth", "max_depth", "cells")},
        )
        if config.command == "sweep":
            fam = family_from_dict(_load_json(args.input_path, "family"))
            report = separation.exceptional_set_sweep(
                fam, _word(args.j, "j"), _word(args.k, "k"), args.cells, args.tol, args.max_depth,
                method=args.method)
            summary = emit_report(report.summary(), "json")
            if config.output_format == "csv":
                _write(emit_report(report.rows(), "csv", SWEEP_HEADER), config.out)
            else:
                _write(summary, config.out)
            if args.summary:
                _write(summary, args.summary)
            ok = report.disjoint_fraction == 1.0
        else:
            runner = {"moran": _run_moran, "certify": _run_certify, "separate": _run_separate,
                      "case": _run_case, "wsp-witness": _run_witness}[config.command]
            result, ok = runner(args)
            if config.output_format == "csv":
                if config.command != "case":
                    raise InputError(f"format: csv output is only available for sweep and case, not {config.command}")
                rows = [(*key, v.status, v.gap if v.disjoint else v.overlap_diameter, v.depth_used)
                        for key, v in sorted(result.results.items())]
                width = len(next(iter(result.results), ())) or 2
                keys = ("m", "n") if width == 2 else ("m", "n", "j", "i")
                _write(emit_report(rows, "csv", (*keys, "status", "gap_or_overlap", "depth")), config.out)
            else:
                _write(emit_report(result, "json"), config.out)
    except InputError as exc:
        print(f"genpos: error: {exc}", file=sys.stderr)
        return 2
    except GenposError as exc:
        print(f"genpos: error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    if not ok:
        print(f"genpos: {config.command}: computed, but not certified", file=sys.stderr)
        return 1
    return 0


def main() -> None:
    sys.exit(parse_and_dispatch())


if __name__ == "__main__":
    main()
