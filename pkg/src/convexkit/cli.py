"""Command-line harness: catalog listing, classification, seeded inequality
verification and deviation bounds on CSV data.

Exit codes: 0 every check passed, 1 a check failed, 2 usage or validation
error, 3 I/O error or malformed input file.
"""
from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys
from dataclasses import asdict, dataclass, field
from typing import Optional, Sequence

import numpy as np

from . import __version__
from .bounds import (WeightedSample, cipu_bound, deviation_bound_modulus,
                     deviation_bound_power, deviation_bound_strong,
                     deviation_bound_submultiplicative)
from .classifier import (GridSpec, cert_interval, certificate_checks, check_convexity,
                         check_derivative_ratio_criterion, check_gamma,
                         check_lemma2_criterion, check_minus_gamma,
                         check_subadditive_consequences, check_subquadratic,
                         check_superquadratic, lemma1_sanity)
from .errors import (CertificateError, ConvexKitError, MalformedCSV, PreconditionError,
                     UnknownInequality, ValidationError)
from .functions import CertKind, ErrorOrModulus, ScalarFn, catalog_entries, catalog_lookup
from .hermite_hadamard import hh_family
from .inequalities import (ConvexWeights, ExternalWeights, external_jensen_n2,
                           external_jensen_phi, external_jensen_superquadratic,
                           external_jensen_uniform, jensen_phi, jensen_superquadratic,
                           jensen_uniform)
from . import sampling

SEED_ENV = "CONVEXKIT_SEED"
INEQUALITIES = ("jensen", "jensen-uniform", "jensen-phi", "ext-jensen", "ext-jensen-n2",
                "ext-jensen-phi", "ext-jensen-uniform", "hh", "hh-phi", "hh-uniform",
                "gamma", "minus-gamma", "subadditive")
BOUNDS = ("cipu", "power", "submult", "strong", "modulus")
CHECKS = ("superquadratic", "subquadratic", "convex", "minus-gamma", "lemma1", "lemma2",
          "derivative-ratio", "gamma")


@dataclass(frozen=True)
class RunConfig:
    seed: int = 0
    trials: int = 10_000
    grid_points: int = 64
    tolerance: float = 1e-9
    quad_tol: float = 1e-10

    def __post_init__(self):
        if not 0 <= self.seed < 2 ** 64:
            raise ValidationError("seed must be a 64-bit unsigned integer")
        if self.trials < 1 or self.grid_points < 2:
            raise ValidationError("trials must be >= 1 and grid points >= 2")
        if not (self.tolerance > 0 and self.quad_tol > 0):
            raise ValidationError("tolerances must be positive")

    def rng(self) -> np.random.Generator:
        return np.random.default_rng(self.seed)


@dataclass
class ReportBundle:
    config: dict
    reports: list = field(default_factory=list)
    version: str = __version__

    @property
    def passed(self) -> int:
        return sum(bool(r.passed) for r in self.reports)

    @property
    def failed(self) -> int:
        return len(self.reports) - self.passed

    def to_dict(self) -> dict:
        return {"version": self.version, "config": self.config,
                "reports": [r.to_dict() for r in self.reports],
                "summary": {"passed": self.passed, "failed": self.failed}}

    @property
    def exit_code(self) -> int:
        return 0 if self.failed == 0 else 1


# --- JSON --------------------------------------------------------------------

def _num(v: float) -> str:
    if math.isnan(v):
        return "NaN"
    if math.isinf(v):
        return "Infinity" if v > 0 else "-Infinity"
    return format(v + 0.0, ".17g")  # + 0.0 turns -0.0 into 0.0


def dumps(obj, indent: int = 2, _level: int = 0) -> str:
    """JSON text with every float written to 17 significant digits."""
    pad = " " * (indent * (_level + 1))
    end = " " * (indent * _level)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {dumps(v, indent, _level + 1)}"
                 for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        return "[\n" + ",\n".join(pad + dumps(v, indent, _level + 1) for v in obj) + "\n" + end + "]"
    if isinstance(obj, (bool, np.bool_)):
        return "true" if obj else "false"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _num(float(obj))
    if obj is None:
        return "null"
    return json.dumps(str(obj))


# --- catalog / classify ------------------------------------------------------

def cmd_catalog() -> list[dict]:
    return catalog_entries()


def _forced_check(fn: ScalarFn, name: str, grid: GridSpec):
    if name == "superquadratic":
        return check_superquadratic(fn, grid)
    if name == "subquadratic":
        return check_subquadratic(fn, grid)
    if name == "convex":
        return check_convexity(fn, grid)
    if name == "minus-gamma":
        return check_minus_gamma(fn, grid)
    if name == "lemma1":
        return lemma1_sanity(fn, grid)
    if name == "lemma2":
        return check_lemma2_criterion(fn, grid)
    if name == "derivative-ratio":
        return check_derivative_ratio_criterion(fn, grid)
    if name == "gamma":
        err = _as_error_function(fn)
        return check_gamma(err, GridSpec((0.0, err.length if math.isfinite(err.length)
                                          else grid.interval[1]), grid.point_count))
    raise ValidationError(f"unknown check {name!r}")


def cmd_classify(function_id: str, config: RunConfig, checks: Sequence[str] = ()) -> ReportBundle:
    """Certificate-driven checks plus any ``checks`` forced by name."""
    fn = catalog_lookup(function_id)
    tol = config.tolerance
    reports = certificate_checks(fn, config.grid_points, atol=tol, rtol=tol)
    grid = GridSpec(fn.test_interval, config.grid_points, atol=tol, rtol=tol)
    for name in checks:
        reports.append(_forced_check(fn, name, grid))
    cfg = {"command": "classify", "function": function_id, "checks": list(checks),
           **asdict(config)}
    return ReportBundle(cfg, reports)


# --- verify ------------------------------------------------------------------

def _cert(fn: ScalarFn, kind: CertKind):
    for cert in fn.certs(kind):
        interval = cert_interval(fn, cert)
        if interval is not None:
            return cert, interval
    raise CertificateError(f"{fn.id} carries no usable {kind.value} certificate")


def _as_error_function(fn: ScalarFn) -> ErrorOrModulus:
    """``fn`` itself viewed as a candidate error function on [0, hi]."""
    if fn.domain[0] != 0:
        raise PreconditionError(f"{fn.id} must be defined from 0 to act as an error function")
    hi = min(fn.domain[1], fn.test_interval[1])
    vals = fn(np.linspace(0.0, hi, 257))
    return ErrorOrModulus(ScalarFn(fn.id, (0.0, hi), fn.rule, derivative=fn.derivative),
                          nonnegative=bool(np.all(vals >= 0)), has_gamma=fn.has(CertKind.SUBQUADRATIC))


def _subadditive_target(fn: ScalarFn) -> ErrorOrModulus:
    for cert in fn.certs(CertKind.PHI_CONVEX):
        if cert.companion.has_gamma:
            return cert.companion
    err = _as_error_function(fn)
    if err.has_gamma and err.nonnegative:
        return err
    raise PreconditionError(f"{fn.id} has no error function with property Gamma to test")


def _verify_report(fn: ScalarFn, ineq: str, config: RunConfig, rng: np.random.Generator):
    T = config.trials
    tol = dict(atol=config.tolerance, rtol=config.tolerance)
    if ineq in ("jensen", "ext-jensen", "ext-jensen-n2", "hh"):
        _, iv = _cert(fn, CertKind.SUPERQUADRATIC)
        if ineq == "jensen":
            X, W = sampling.convex_configs(rng, iv, T)
            return jensen_superquadratic(fn, X, ConvexWeights(W), **tol)
        if ineq == "ext-jensen":
            X, V = sampling.external_configs(rng, iv, T)
            return external_jensen_superquadratic(fn, X, ExternalWeights(V), **tol)
        if ineq == "ext-jensen-n2":
            a, b, nu = sampling.n2_configs(rng, iv, T)
            return external_jensen_n2(fn, a, b, nu, **tol)
        a, b = sampling.interval_configs(rng, iv, T)
        return hh_family("superquadratic", fn, None, a, b, config.quad_tol, **tol)
    if ineq in ("jensen-phi", "ext-jensen-phi", "hh-phi"):
        cert, iv = _cert(fn, CertKind.PHI_CONVEX)
        err = cert.companion
        if ineq == "jensen-phi":
            X, W = sampling.convex_configs(rng, iv, T)
            return jensen_phi(fn, err, X, ConvexWeights(W), **tol)
        if ineq == "ext-jensen-phi":
            X, V = sampling.external_configs(rng, iv, T, reach=err.length)
            return external_jensen_phi(fn, err, X, ExternalWeights(V), **tol)
        a, b = sampling.interval_configs(rng, iv, T, max_width=err.length)
        return hh_family("phi", fn, err, a, b, config.quad_tol, **tol)
    if ineq in ("jensen-uniform", "ext-jensen-uniform", "hh-uniform"):
        cert, iv = _cert(fn, CertKind.UNIFORMLY_CONVEX)
        mod = cert.companion
        if ineq == "jensen-uniform":
            X, W = sampling.convex_configs(rng, iv, T)
            return jensen_uniform(fn, mod, X, ConvexWeights(W), **tol)
        if ineq == "ext-jensen-uniform":
            X, V = sampling.external_configs(rng, iv, T, reach=mod.length)
            return external_jensen_uniform(fn, mod, X, ExternalWeights(V), form="general", **tol)
        a, b = sampling.interval_configs(rng, iv, T, max_width=mod.length)
        return hh_family("uniform", fn, mod, a, b, config.quad_tol, **tol)
    grid = GridSpec(fn.test_interval, config.grid_points, **tol)
    if ineq == "gamma":
        err = _as_error_function(fn)
        pairs = sampling.gamma_pair_configs(rng, err.length, T)
        pairs = pairs[pairs[:, 0] + pairs[:, 1] < err.length]
        return check_gamma(err, GridSpec((0.0, err.length), config.grid_points, **tol), pairs)
    if ineq == "minus-gamma":
        hi = min(fn.domain[1], fn.test_interval[1])
        if fn.domain[0] != 0:
            raise PreconditionError(f"{fn.id} must be defined from 0")
        pairs = sampling.gamma_pair_configs(rng, hi, T)
        return check_minus_gamma(fn, grid.with_interval((0.0, hi)), pairs)
    if ineq == "subadditive":
        err = _subadditive_target(fn)
        L = err.length if math.isfinite(err.length) else fn.test_interval[1]
        pairs = sampling.gamma_pair_configs(rng, L, T)
        return check_subadditive_consequences(err, GridSpec((0.0, L), config.grid_points, **tol),
                                              pairs)
    raise UnknownInequality(f"unknown inequality {ineq!r}; choose from {', '.join(INEQUALITIES)}")


def cmd_verify(function_id: str, inequality: str, config: RunConfig) -> ReportBundle:
    """Check one inequality on ``config.trials`` seeded random configurations."""
    if inequality not in INEQUALITIES:
        raise UnknownInequality(f"unknown inequality {inequality!r}")
    fn = catalog_lookup(function_id)
    report = _verify_report(fn, inequality, config, config.rng())
    cfg = {"command": "verify", "function": function_id, "inequality": inequality,
           **asdict(config)}
    return ReportBundle(cfg, [report])


# --- bound -------------------------------------------------------------------

def read_sample(path: str) -> WeightedSample:
    """Header-less rows ``x[,weight]``; weights all present or all absent."""
    try:
        with open(path, newline="", encoding="utf-8") as fh:
            rows = list(csv.reader(fh))
    except UnicodeDecodeError as exc:
        raise MalformedCSV(0, f"not UTF-8 ({exc.reason})") from None
    xs, ws = [], []
    width = None
    for lineno, row in enumerate(rows, start=1):
        cells = [c.strip() for c in row]
        if not cells or cells == [""]:
            continue
        if len(cells) > 2:
            raise MalformedCSV(lineno, f"expected 'x' or 'x,weight', got {len(cells)} fields")
        if width is None:
            width = len(cells)
        elif len(cells) != width:
            raise MalformedCSV(lineno, "weight column present on some rows only")
        try:
            vals = [float(c) for c in cells]
        except ValueError:
            raise MalformedCSV(lineno, f"not a number: {','.join(cells)!r}") from None
        xs.append(vals[0])
        if width == 2:
            ws.append(vals[1])
    if not xs:
        raise MalformedCSV(0, "no data rows")
    if width == 2:
        return WeightedSample(xs, ws)
    return WeightedSample.equal(xs)


def cmd_bound(data_path: str, bound: str, config: RunConfig, *, p: Optional[float] = None,
              m: Optional[float] = None, function_id: Optional[str] = None,
              modulus_id: Optional[str] = None) -> ReportBundle:
    if bound not in BOUNDS:
        raise ValidationError(f"unknown bound {bound!r}; choose from {', '.join(BOUNDS)}")
    sample = read_sample(data_path)

    def need(value, flag):
        if value is None:
            raise ValidationError(f"bound {bound!r} needs {flag}")
        return value

    if bound == "cipu":
        report = cipu_bound(sample)
    elif bound == "power":
        report = deviation_bound_power(sample, float(need(p, "--p")))
    elif bound == "submult":
        report = deviation_bound_submultiplicative(sample, catalog_lookup(need(function_id, "--function")))
    elif bound == "strong":
        fn = catalog_lookup(need(function_id, "--function"))
        report = deviation_bound_strong(sample, float(need(m, "--m")), float(need(p, "--p")), fn)
    else:
        fn = catalog_lookup(need(function_id, "--function"))
        mod = None
        if modulus_id is not None:
            mods = [c.companion for c in fn.certs(CertKind.UNIFORMLY_CONVEX)
                    if c.companion.id == modulus_id]
            if not mods:
                raise CertificateError(f"{fn.id} has no modulus {modulus_id!r}")
            mod = mods[0]
        report = deviation_bound_modulus(sample, fn, mod)
    cfg = {"command": "bound", "data": os.path.basename(data_path), "bound": bound,
           "p": p, "m": m, "function": function_id, "modulus": modulus_id, **asdict(config)}
    return ReportBundle(cfg, [report])


# --- argument parsing ----------------------------------------------------------

def _common() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=None,
                        help=f"RNG seed (default 0; or set {SEED_ENV}, not both)")
    common.add_argument("--trials", type=int, default=10_000)
    common.add_argument("--grid", type=int, default=64, help="grid points per axis")
    common.add_argument("--tol", type=float, default=1e-9, help="absolute and relative gap tolerance")
    common.add_argument("--quad-tol", type=float, default=1e-10)
    common.add_argument("--json", metavar="PATH", help="write the JSON bundle here instead of stdout")
    common.add_argument("--csv", metavar="PATH", help="also write a one-row-per-report CSV summary")
    return common


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(prog="convexkit", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("catalog", parents=[common], help="list catalog functions")
    c = sub.add_parser("classify", parents=[common], help="run certificate checks for a function")
    c.add_argument("--function", required=True)
    c.add_argument("--check", action="append", choices=CHECKS, default=[],
                   help="force an extra check (repeatable)")
    v = sub.add_parser("verify", parents=[common], help="verify an inequality on random configurations")
    v.add_argument("--function", required=True)
    v.add_argument("inequality", choices=INEQUALITIES)
    b = sub.add_parser("bound", parents=[common], help="deviation bound for a CSV sample")
    b.add_argument("data")
    b.add_argument("bound", choices=BOUNDS)
    b.add_argument("--function")
    b.add_argument("--p", type=float)
    b.add_argument("--m", type=float)
    b.add_argument("--modulus", help="modulus id when the function carries several")
    return parser


def _config(args) -> RunConfig:
    env = os.environ.get(SEED_ENV)
    if env is not None and args.seed is not None:
        raise ValidationError(f"give the seed through --seed or {SEED_ENV}, not both")
    seed = args.seed
    if env is not None:
        try:
            seed = int(env)
        except ValueError:
            raise ValidationError(f"{SEED_ENV} must be an integer, got {env!r}") from None
    return RunConfig(seed=0 if seed is None else seed, trials=args.trials,
                     grid_points=args.grid, tolerance=args.tol, quad_tol=args.quad_tol)


def _summary_rows(bundle: ReportBundle):
    for r in bundle.reports:
        d = r.to_dict()
        gap = d.get("min_gap", d.get("slack"))
        yield [d["name"], "pass" if d["passed"] else "fail", _num(float(gap)),
               _num(float(d["tolerance"]))]


def _emit(bundle: ReportBundle, args, out) -> None:
    text = dumps(bundle.to_dict()) + "\n"
    if args.json:
        with open(args.json, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        for r in bundle.reports:
            print(f"{'PASS' if r.passed else 'FAIL'}  {r.name}", file=out)
        print(f"{bundle.passed} passed, {bundle.failed} failed", file=out)
    else:
        out.write(text)
    if args.csv:
        with open(args.csv, "w", encoding="utf-8", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["name", "result", "min_gap_or_slack", "tolerance"])
            w.writerows(_summary_rows(bundle))


def _run(args, out) -> int:
    if args.command == "catalog":
        rows = cmd_catalog()
        if args.json:
            with open(args.json, "w", encoding="utf-8", newline="\n") as fh:
                fh.write(dumps({"version": __version__, "functions": rows}) + "\n")
        for row in rows:
            print(f"{row['id']:<20} {row['domain']:<12} {row['summary']}"
                  + (f" ({row['parameter']})" if row.get("parameter") else ""), file=out)
        return 0
    config = _config(args)
    if args.command == "classify":
        bundle = cmd_classify(args.function, config, args.check)
    elif args.command == "verify":
        bundle = cmd_verify(args.function, args.inequality, config)
    else:
        bundle = cmd_bound(args.data, args.bound, config, p=args.p, m=args.m,
                           function_id=args.function, modulus_id=args.modulus)
    _emit(bundle, args, out)
    return bundle.exit_code


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return _run(args, sys.stdout)
    except MalformedCSV as exc:
        print(f"convexkit: malformed input: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"convexkit: I/O error: {exc}", file=sys.stderr)
        return 3
    except ValidationError as exc:
        print(f"convexkit: {exc}", file=sys.stderr)
        return 2
    except ConvexKitError as exc:
        print(f"convexkit: check could not complete: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
