"""Command-line front end: generate, validate, verify, audit, spectrum.

Exit codes: 0 success, 1 a check failed, 2 usage error, 3 the document does
not parse, 4 the complex is invalid (including disconnected), 5 the request
cannot be satisfied (bad family parameters, size cap exceeded).
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .complex import ComplexError, ParseError, ValidationError, document_violations, dumps
from .complex import from_document, validate as validate_complex
from .completeness import (bounded_curvature_audit, bounded_trend, canonical_cutoffs,
                           chi_alpha_obstruction, chi_completeness_audit, combinatorial_distance,
                           degree_growth_check, strictly_increasing_run)
from .field import MagneticPotential
from .generators import (BookLikeSpec, SphereDecomposition, divided_degrees, gen_book_like,
                         gen_onedim, gen_random, potential_sphere_pi)
from .spectral import DEFAULT_CELL_CAP, gauge_spectrum_check, spectrum
from .verify import CHECKS, Tolerances, run_checks

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_PARSE, EXIT_INVALID, EXIT_INFEASIBLE = 0, 1, 2, 3, 4, 5
DEFAULT_SEED = 0xC0FFEE


class RunConfig(argparse.Namespace):
    """Parsed command line; defaults for the global flags are filled in by :func:`parse_args`."""


_GLOBAL_DEFAULTS = {"seed": DEFAULT_SEED, "tol_alg": 1e-13, "tol_eig": 1e-10, "tol_hol": 1e-9,
                    "trials": 64, "format": "json", "output": None}


def _positive(kind):
    def conv(text):
        v = kind(text)
        if not v > 0:
            raise argparse.ArgumentTypeError(f"must be positive, got {text}")
        return v
    return conv


def _global_flags() -> argparse.ArgumentParser:
    # SUPPRESS lets the flags appear before or after the subcommand without
    # the subparser default clobbering a value given earlier
    p = argparse.ArgumentParser(add_help=False)
    S = argparse.SUPPRESS
    p.add_argument("--seed", type=lambda s: int(s, 0), default=S,
                   help="random seed (decimal or 0x-hex), default 0xC0FFEE")
    p.add_argument("--tol-alg", type=_positive(float), default=S,
                   help="relative tolerance for algebraic identities (1e-13)")
    p.add_argument("--tol-eig", type=_positive(float), default=S,
                   help="tolerance for eigenvalue comparisons (1e-10)")
    p.add_argument("--tol-hol", type=_positive(float), default=S,
                   help="holonomy-zero tolerance (1e-9)")
    p.add_argument("--trials", type=_positive(int), default=S, help="random trials per property (64)")
    p.add_argument("--format", choices=("json", "text", "csv"), default=S)
    p.add_argument("-o", "--output", default=S, help="output file (default stdout)")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _global_flags()
    parser = argparse.ArgumentParser(prog="maghodge", parents=[common],
                                     description="Discrete magnetic Hodge calculus toolkit")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("generate", help="build an example complex as a JSON document")
    fam = gen.add_subparsers(dest="family", required=True)
    bk = fam.add_parser("book-like", parents=[common])
    bk.add_argument("--depth", type=int, required=True)
    bk.add_argument("--beta", type=float, default=1.0)
    bk.add_argument("--weights", choices=("simple", "beta"), default="simple")
    od = fam.add_parser("onedim", parents=[common])
    od.add_argument("--sizes", type=lambda s: [int(x) for x in s.split(",")],
                    help="comma-separated sphere sizes")
    od.add_argument("--depth", type=int, help="with --growth, number of spheres after the origin")
    od.add_argument("--growth", choices=("constant", "linear"), default="linear",
                    help="sphere sizes 1, k, k, ... or 1, 1, 2, 3, ...")
    od.add_argument("--intra", choices=("none", "path", "cycle", "complete"), default="path")
    od.add_argument("--cross", choices=("full", "nearest"), default="full")
    od.add_argument("--faces", choices=("none", "all", "cross"), default="all")
    od.add_argument("--potential", choices=("zero", "sphere-pi"), default="zero")
    rd = fam.add_parser("random", parents=[common])
    rd.add_argument("--vertices", type=int, required=True)
    rd.add_argument("--edge-density", type=float, default=0.3)
    rd.add_argument("--face-density", type=float, default=0.5)
    rd.add_argument("--alpha-max", type=float, default=math.pi,
                    help="potential values drawn from [-alpha_max, alpha_max]")

    va = sub.add_parser("validate", parents=[common], help="check a document")
    va.add_argument("input")

    ve = sub.add_parser("verify", parents=[common], help="run property suites on a document")
    ve.add_argument("input")
    ve.add_argument("--checks", default="all",
                    help=f"comma-separated subset of: {', '.join(CHECKS)}")
    ve.add_argument("--cap", type=int, default=DEFAULT_CELL_CAP)

    au = sub.add_parser("audit", parents=[common], help="geometric hypothesis audits")
    au.add_argument("input")
    au.add_argument("--origin", help="origin vertex (default: smallest id)")
    au.add_argument("--n-max", type=int, help="largest cut-off index (default: radius)")
    au.add_argument("--potential", choices=("stored", "sphere-pi"), default="stored",
                    help="sphere-pi uses the distance spheres around the origin")

    sp = sub.add_parser("spectrum", parents=[common], help="Laplacian eigenvalues")
    sp.add_argument("input")
    sp.add_argument("--degree", choices=("0", "1", "2", "even", "odd", "full"), default="full")
    sp.add_argument("--cap", type=int, default=DEFAULT_CELL_CAP)
    sp.add_argument("--gauge-check", action="store_true",
                    help="also compute the spectrum after a random gauge shift")
    return parser


def parse_args(argv=None) -> RunConfig:
    cfg = build_parser().parse_args(argv, namespace=RunConfig())
    for k, v in _GLOBAL_DEFAULTS.items():
        if not hasattr(cfg, k):
            setattr(cfg, k, v)
    return cfg


# -- output ----------------------------------------------------------------

def _plain(obj):
    """Convert numpy scalars/arrays and non-finite floats into JSON-safe values."""
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _plain(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if math.isnan(x):
            return "nan"
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        return x
    return obj


def _flatten(obj, prefix=""):
    if isinstance(obj, dict):
        for k, v in obj.items():
            yield from _flatten(v, f"{prefix}.{k}" if prefix else str(k))
    elif isinstance(obj, list) and any(isinstance(v, (dict, list)) for v in obj):
        for i, v in enumerate(obj):
            yield from _flatten(v, f"{prefix}[{i}]")
    else:
        yield prefix, obj


def render(report: dict, fmt: str) -> str:
    report = _plain(report)
    if fmt == "json":
        return json.dumps(report, indent=1, sort_keys=True) + "\n"
    rows = list(_flatten(report))
    if fmt == "text":
        return "".join(f"{k}: {json.dumps(v)}\n" for k, v in rows)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    if "eigenvalues" in report and isinstance(report["eigenvalues"], list):
        w.writerow(["index", "eigenvalue"] + (["eigenvalue_gauged"] if "gauged" in report else []))
        for i, x in enumerate(report["eigenvalues"]):
            w.writerow([i, repr(x)] + ([repr(report["gauged"][i])] if "gauged" in report else []))
    else:
        w.writerow(["key", "value"])
        for k, v in rows:
            w.writerow([k, json.dumps(v)])
    return buf.getvalue()


def _emit(text: str, cfg, stream=None):
    if cfg.output:
        Path(cfg.output).write_text(text, encoding="utf-8")
    else:
        (stream or sys.stdout).write(text)


def _load_doc(path):
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from exc


def _load(path):
    doc = _load_doc(path)
    problems = document_violations(doc)
    if problems:
        raise ValidationError(problems)
    return from_document(doc)


def _summary(T) -> dict:
    from .complex import degree_vertex

    degs = [degree_vertex(T, v) for v in T.vertices]
    return {"vertices": T.n_vertices, "edges": T.n_edges, "faces": T.n_faces,
            "max_vertex_degree": max(degs, default=0.0)}


# -- commands --------------------------------------------------------------

def _onedim_sizes(cfg):
    if cfg.sizes:
        return cfg.sizes
    if cfg.depth is None:
        raise ComplexError("onedim needs --sizes or --depth")
    if cfg.growth == "linear":
        return [1] + [n for n in range(1, cfg.depth + 1)]
    return [1] + [3] * cfg.depth


def cmd_generate(cfg) -> int:
    if cfg.family == "book-like":
        T, _, dec = gen_book_like(BookLikeSpec(cfg.depth, cfg.beta, cfg.weights))
    elif cfg.family == "onedim":
        T, dec = gen_onedim(_onedim_sizes(cfg), cfg.intra, cfg.cross, cfg.faces)
        if cfg.potential == "sphere-pi":
            T = T.with_alpha(potential_sphere_pi(T, dec).values)
    else:
        T, _ = gen_random(cfg.seed, cfg.vertices, cfg.edge_density, cfg.face_density,
                          alpha_range=(-cfg.alpha_max, cfg.alpha_max))
    summary = render({"generated": cfg.family, **_summary(T)}, "text")
    if cfg.output:
        Path(cfg.output).write_text(dumps(T), encoding="utf-8")
        sys.stdout.write(summary)
    else:
        sys.stdout.write(dumps(T))
        sys.stderr.write(summary)
    return EXIT_OK


def cmd_validate(cfg) -> int:
    doc = _load_doc(cfg.input)
    problems = document_violations(doc)
    if not problems:
        problems = validate_complex(from_document(doc, check=False))
    _emit(render({"valid": not problems, "violations": problems}, cfg.format), cfg)
    return EXIT_INVALID if problems else EXIT_OK


def cmd_verify(cfg) -> int:
    doc = _load_doc(cfg.input)
    problems = document_violations(doc)
    if problems:
        report = {"passed": False,
                  "checks": {"skew_symmetry": {"passed": False, "violations": problems}},
                  "skipped": list(CHECKS)}
        _emit(render(report, cfg.format), cfg)
        return EXIT_FAIL
    T = from_document(doc)
    selected = None if cfg.checks == "all" else [c.strip() for c in cfg.checks.split(",") if c.strip()]
    if selected is not None and any(c not in CHECKS for c in selected):
        bad = [c for c in selected if c not in CHECKS]
        raise _Usage(f"unknown checks: {', '.join(bad)} (choose from {', '.join(CHECKS)})")
    tol = Tolerances(alg=cfg.tol_alg, eig=cfg.tol_eig, hol=cfg.tol_hol)
    report = run_checks(T, MagneticPotential.of(T), selected, cfg.seed, cfg.trials, tol, cfg.cap)
    report["checks"] = {"skew_symmetry": {"passed": True, "violations": []}, **report["checks"]}
    _emit(render(report, cfg.format), cfg)
    return EXIT_OK if report["passed"] else EXIT_FAIL


def audit_report(T, alpha, origin=None, n_max=None) -> dict:
    """Everything ``audit`` prints, as a plain dict."""
    origin = origin or T.vertices[0]
    dist = combinatorial_distance(T, origin)
    radius = max(dist.values())
    n_max = radius if n_max is None else n_max
    family = canonical_cutoffs(T, origin, n_max)
    comp = chi_completeness_audit(T, family)
    curv = bounded_curvature_audit(T, alpha)
    obstruction = chi_alpha_obstruction(T, alpha)
    by_level = [max(obstruction[v] for v in T.vertices if dist[v] == n) for n in range(radius + 1)]
    growth = degree_growth_check(T, origin, n_max)
    return {
        "origin": origin,
        "radius": radius,
        "exhaustive_on_truncation": family.exhaustive(),
        "completeness": {
            **comp.to_dict(),
            "C1_bounded_trend": bounded_trend([r["C1"] for r in comp.per_n]),
            "C2_bounded_trend": bounded_trend([r["C2"] for r in comp.per_n]),
        },
        "bounded_curvature": {"constant": curv.constant, "argmax": curv.argmax},
        "chi_alpha_obstruction": {
            "sup": max(obstruction.values(), default=0.0),
            "sup_by_level": by_level,
            "longest_increasing_run": strictly_increasing_run(by_level),
            "bounded_trend": bounded_trend(by_level),
        },
        "degree_growth": growth,
    }


def cmd_audit(cfg) -> int:
    T = _load(cfg.input)
    origin = cfg.origin or T.vertices[0]
    alpha = MagneticPotential.of(T)
    if cfg.potential == "sphere-pi":
        dist = combinatorial_distance(T, origin)
        spheres = [[] for _ in range(max(dist.values()) + 1)]
        for v in T.vertices:
            spheres[dist[v]].append(v)
        alpha = potential_sphere_pi(T, SphereDecomposition(spheres))
    report = audit_report(T, alpha, origin, cfg.n_max)
    if cfg.potential == "sphere-pi":
        report["divided_degrees"] = divided_degrees(T, SphereDecomposition(spheres))
    _emit(render(report, cfg.format), cfg)
    return EXIT_OK


def cmd_spectrum(cfg) -> int:
    T = _load(cfg.input)
    alpha = MagneticPotential.of(T)
    report = {"degree": cfg.degree, "eigenvalues": spectrum(T, alpha, cfg.degree, cfg.cap)}
    if cfg.gauge_check:
        f = np.random.default_rng(cfg.seed).uniform(-np.pi, np.pi, T.n_vertices)
        g = gauge_spectrum_check(T, alpha, f, cfg.degree, cfg.tol_eig, cfg.cap)
        report.update(gauged=g["after"], max_abs_difference=g["max_abs_difference"],
                      passed=g["passed"])
    _emit(render(report, cfg.format), cfg)
    return EXIT_OK if report.get("passed", True) else EXIT_FAIL


class _Usage(Exception):
    pass


COMMANDS = {"generate": cmd_generate, "validate": cmd_validate, "verify": cmd_verify,
            "audit": cmd_audit, "spectrum": cmd_spectrum}


def main(argv=None) -> int:
    cfg = parse_args(argv)
    try:
        return COMMANDS[cfg.command](cfg)
    except _Usage as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except ValidationError as exc:
        print(f"invalid complex: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except ComplexError as exc:
        code = EXIT_INVALID if "not connected" in str(exc) else EXIT_INFEASIBLE
        print(f"error: {exc}", file=sys.stderr)
        return code


if __name__ == "__main__":
    sys.exit(main())
