"""Grid-based membership checks for the convexity classes and the
structural criteria that relate them.

Every checker evaluates its inequality on a uniform grid (pairs, or
(x, y, t) triples) and returns an :class:`InequalityReport`. A passing report
is evidence, not proof: raise ``point_count`` for more resolution.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import CertificateError, DomainError, PreconditionError, ValidationError
from .functions import (CertKind, ErrorOrModulus, Rule, ScalarFn, derivative_at,
                        derivative_values, zero_companion)
from .reports import ATOL, RTOL, InequalityReport, combine, summarize


@dataclass(frozen=True)
class GridSpec:
    interval: tuple[float, float]
    point_count: int = 64
    t_count: int = 16
    atol: float = ATOL
    rtol: float = RTOL

    def __post_init__(self):
        lo, hi = (float(v) for v in self.interval)
        if not (math.isfinite(lo) and math.isfinite(hi) and hi > lo):
            raise ValidationError(f"grid interval must be finite and nondegenerate: {self.interval}")
        if self.point_count < 2 or self.t_count < 2:
            raise ValidationError("grid needs point_count >= 2 and t_count >= 2")
        if self.atol < 0 or self.rtol < 0:
            raise ValidationError("tolerances must be nonnegative")
        object.__setattr__(self, "interval", (lo, hi))

    @classmethod
    def for_fn(cls, fn: ScalarFn, **kw) -> "GridSpec":
        return cls(fn.test_interval, **kw)

    @classmethod
    def for_companion(cls, comp: ErrorOrModulus, **kw) -> "GridSpec":
        length = comp.length if math.isfinite(comp.length) else 10.0
        return cls((0.0, length), **kw)

    def points(self) -> np.ndarray:
        return np.linspace(self.interval[0], self.interval[1], self.point_count)

    def ts(self) -> np.ndarray:
        # cell midpoints: t in {0, 1} makes every class inequality trivial
        return (np.arange(self.t_count) + 0.5) / self.t_count

    def with_interval(self, interval) -> "GridSpec":
        return GridSpec(interval, self.point_count, self.t_count, self.atol, self.rtol)

    @property
    def width(self) -> float:
        return self.interval[1] - self.interval[0]


def _summ(grid: GridSpec, name, gaps, scales, witnesses, **kw):
    return summarize(name, gaps, scales, witnesses, atol=grid.atol, rtol=grid.rtol, **kw)


def _require_within(fn: ScalarFn, interval):
    lo, hi = interval
    if lo < fn.domain[0] or hi > fn.domain[1]:
        raise DomainError(f"{fn.id}: grid interval [{lo}, {hi}] leaves domain {fn.domain}")


def _pairs(xs: np.ndarray, ys: Optional[np.ndarray] = None):
    ys = xs if ys is None else ys
    X, Y = np.meshgrid(xs, ys, indexing="ij")
    return X.ravel(), Y.ravel()


def _default_c_rule(fn: ScalarFn) -> Optional[Rule]:
    for cert in fn.certs(CertKind.SUPERQUADRATIC):
        if cert.c_rule is not None:
            return cert.c_rule
    return None


def _quadratic_gaps(fn: ScalarFn, grid: GridSpec, c_rule: Optional[Rule]):
    _require_within(fn, grid.interval)
    if fn.domain[0] > 0 or grid.width > fn.domain[1]:
        raise DomainError(f"{fn.id}: differences |y-x| in [0, {grid.width}] leave domain {fn.domain}")
    xs = grid.points()
    rule = c_rule or _default_c_rule(fn)
    if rule is not None:
        cx = np.asarray(rule(xs), dtype=float) * np.ones_like(xs)
    else:
        cx = derivative_values(fn, xs)
    fx = fn(xs)
    X, Y = _pairs(xs)
    i, j = np.divmod(np.arange(X.size), xs.size)
    f_x, f_y = fx[i], fx[j]
    lin = cx[i] * (Y - X)
    f_d = fn(np.abs(Y - X))
    gap = f_y - f_x - lin - f_d
    scale = np.abs(f_y) + np.abs(f_x) + np.abs(lin) + np.abs(f_d)
    return gap, scale, np.column_stack([X, Y])


def check_superquadratic(fn: ScalarFn, grid: Optional[GridSpec] = None,
                         c_rule: Optional[Rule] = None) -> InequalityReport:
    """f(y) >= f(x) + C_x (y - x) + f(|y - x|) for all grid pairs.

    C_x defaults to the certificate's rule when the catalog provides one,
    else to f'(x).
    """
    grid = grid or GridSpec.for_fn(fn)
    gap, scale, wit = _quadratic_gaps(fn, grid, c_rule)
    return _summ(grid, "superquadratic", gap, scale, wit,
                 paper_ref="superquadratic definition")


def check_subquadratic(fn: ScalarFn, grid: Optional[GridSpec] = None,
                       c_rule: Optional[Rule] = None) -> InequalityReport:
    """Reverse of :func:`check_superquadratic`."""
    grid = grid or GridSpec.for_fn(fn)
    gap, scale, wit = _quadratic_gaps(fn, grid, c_rule)
    return _summ(grid, "subquadratic", -gap, scale, wit,
                 paper_ref="subquadratic definition (reversed superquadratic inequality)")


def lemma1_sanity(fn: ScalarFn, grid: Optional[GridSpec] = None) -> InequalityReport:
    """Basic consequences of superquadracity: f(0) <= 0, and when f >= 0 also
    convexity, f(0) = 0 and f'(0+) = 0."""
    if not fn.has(CertKind.SUPERQUADRATIC):
        raise CertificateError(f"{fn.id} carries no superquadratic certificate")
    if not fn.contains(0.0):
        raise DomainError(f"{fn.id}: 0 is not in the domain")
    grid = grid or GridSpec.for_fn(fn)
    _require_within(fn, grid.interval)
    f0 = fn(0.0)
    subs = [_summ(grid, "f(0) <= 0", [-f0], [abs(f0)], [[0.0]])]
    xs = grid.points()
    fx = fn(xs)
    notes = []
    if np.all(fx >= 0):
        notes.append("nonnegative on grid: convexity branch checked")
        subs.append(_summ(grid, "f(0) = 0", [-abs(f0)], [abs(f0)], [[0.0]]))
        X, Y = _pairs(xs)
        i, j = np.divmod(np.arange(X.size), xs.size)
        fm = fn(0.5 * (X + Y))
        subs.append(_summ(grid, "midpoint convexity", 0.5 * (fx[i] + fx[j]) - fm,
                          np.abs(fx[i]) + np.abs(fx[j]) + np.abs(fm), np.column_stack([X, Y])))
        eps = 1e-6
        d = derivative_at(fn, eps)
        subs.append(_summ(grid, "f'(0+) = 0", [1e-4 - abs(d)], [0.0], [[eps]]))
    else:
        notes.append("negative somewhere on grid: convexity branch skipped")
    return combine("lemma1", subs, paper_ref="elementary properties of superquadratic functions",
                   notes=notes)


def check_lemma2_criterion(fn: ScalarFn, grid: Optional[GridSpec] = None) -> InequalityReport:
    """Non-positive, non-increasing and superadditive (sufficient for superquadracity).

    Superadditivity pairs are restricted to x + y inside the domain.
    """
    grid = grid or GridSpec.for_fn(fn)
    _require_within(fn, grid.interval)
    xs = grid.points()
    fx = fn(xs)
    nonpos = _summ(grid, "nonpositive", -fx, np.abs(fx), xs[:, None])
    i, j = np.triu_indices(xs.size, 1)
    noninc = _summ(grid, "non-increasing", fx[i] - fx[j], np.abs(fx[i]) + np.abs(fx[j]),
                   np.column_stack([xs[i], xs[j]]))
    X, Y = _pairs(xs)
    keep = X + Y <= fn.domain[1]
    X, Y = X[keep], Y[keep]
    fs, fa, fb = fn(X + Y), fn(X), fn(Y)
    superadd = _summ(grid, "superadditive", fs - fa - fb, np.abs(fs) + np.abs(fa) + np.abs(fb),
                     np.column_stack([X, Y]))
    return combine("lemma2", [nonpos, noninc, superadd],
                   paper_ref="non-positive, non-increasing, superadditive implies superquadratic")


def check_derivative_ratio_criterion(fn: ScalarFn, grid: Optional[GridSpec] = None
                                     ) -> InequalityReport:
    """x -> f'(x)/x nondecreasing, given f(0) = 0 and f'(0+) = 0."""
    grid = grid or GridSpec.for_fn(fn)
    _require_within(fn, grid.interval)
    if not fn.contains(0.0):
        raise DomainError(f"{fn.id}: 0 is not in the domain")
    f0 = fn(0.0)
    if abs(f0) > grid.atol:
        raise PreconditionError(f"{fn.id}: f(0) = {f0} != 0")
    # f'(0+) = 0 is part of the criterion; a clear miss is a failed check
    eps = 1e-6
    d0 = derivative_at(fn, eps)
    slope = summarize("f'(0+) = 0", [1e-4 - abs(d0)], [0.0], [(eps,)], atol=0.0, rtol=0.0)
    xs = grid.points()
    xs = xs[xs > 0]
    r = derivative_values(fn, xs) / xs
    ratio = _summ(grid, "derivative ratio nondecreasing", r[1:] - r[:-1],
                  np.abs(r[1:]) + np.abs(r[:-1]), np.column_stack([xs[:-1], xs[1:]]))
    return combine(f"derivative ratio criterion ({fn.id})", [slope, ratio],
                   paper_ref="(f'(x)/x)' >= 0 criterion for superquadracity")


def _triples(fn: ScalarFn, comp: ErrorOrModulus, grid: GridSpec):
    _require_within(fn, grid.interval)
    if grid.width > comp.length:
        raise DomainError(f"{comp.id} lives on [0, {comp.length}] but the grid spans {grid.width}")
    xs, ts = grid.points(), grid.ts()
    fx = fn(xs)
    X, Y, T = np.meshgrid(xs, xs, ts, indexing="ij")
    FX = fx[:, None, None]
    FY = fx[None, :, None]
    FZ = fn(T * X + (1 - T) * Y)
    D = np.abs(xs[:, None] - xs[None, :])[:, :, None]
    wit = np.column_stack([X.ravel(), Y.ravel(), T.ravel()])
    return T, FX, FY, FZ, D, wit


def check_uniform_convexity(fn: ScalarFn, mod: ErrorOrModulus,
                            grid: Optional[GridSpec] = None) -> InequalityReport:
    """t f(x) + (1-t) f(y) >= f(tx + (1-t)y) + t(1-t) Phi(|x-y|) on the (x, y, t) grid."""
    grid = grid or GridSpec.for_fn(fn)
    T, FX, FY, FZ, D, wit = _triples(fn, mod, grid)
    corr = T * (1 - T) * mod(D)
    gap = T * FX + (1 - T) * FY - FZ - corr
    scale = np.abs(T * FX) + np.abs((1 - T) * FY) + np.abs(FZ) + np.abs(corr)
    name = "convex" if mod.id == "0" else f"uniformly convex (Phi = {mod.id})"
    return _summ(grid, name, gap, scale, wit, paper_ref="uniform convexity with modulus Phi")


def check_convexity(fn: ScalarFn, grid: Optional[GridSpec] = None) -> InequalityReport:
    return check_uniform_convexity(fn, zero_companion(), grid)


def check_phi_convexity(fn: ScalarFn, err: ErrorOrModulus,
                        grid: Optional[GridSpec] = None) -> InequalityReport:
    """t f(x) + (1-t) f(y) + t phi((1-t)|x-y|) + (1-t) phi(t|x-y|) >= f(tx + (1-t)y)."""
    if not err.nonnegative:
        raise PreconditionError(f"error function {err.id} is not flagged nonnegative")
    grid = grid or GridSpec.for_fn(fn)
    T, FX, FY, FZ, D, wit = _triples(fn, err, grid)
    c1 = T * err((1 - T) * D)
    c2 = (1 - T) * err(T * D)
    gap = T * FX + (1 - T) * FY + c1 + c2 - FZ
    scale = np.abs(T * FX) + np.abs((1 - T) * FY) + np.abs(c1) + np.abs(c2) + np.abs(FZ)
    return _summ(grid, f"phi-convex (phi = {err.id})", gap, scale, wit,
                 paper_ref="phi-convexity with error function phi")


def gamma_sides(err: ErrorOrModulus, x, y):
    """(LHS, RHS) of phi(x+y) <= phi(x) + phi(y) + 2 (x/y) phi(y)."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    fy = err(y)
    return err(x + y), err(x) + fy + 2 * (x / y) * fy


def _gamma_pairs(err: ErrorOrModulus, grid: Optional[GridSpec], pairs):
    if pairs is not None:
        P = np.atleast_2d(np.asarray(pairs, dtype=float))
        X, Y = P[:, 0], P[:, 1]
        if np.any(X < 0) or np.any(Y <= 0) or np.any(X + Y >= err.length):
            raise DomainError(f"Gamma pairs need x >= 0, y > 0, x + y < {err.length}")
        return X, Y, grid or GridSpec.for_companion(err)
    grid = grid or GridSpec.for_companion(err)
    if grid.interval[0] < 0 or grid.interval[1] > err.length:
        raise DomainError(f"grid {grid.interval} leaves [0, {err.length}]")
    xs = grid.points()
    X, Y = _pairs(xs)
    keep = (Y > 0) & (X + Y < err.length)
    return X[keep], Y[keep], grid


def check_gamma(err: ErrorOrModulus, grid: Optional[GridSpec] = None,
                pairs=None) -> InequalityReport:
    """Gamma property on grid pairs with x >= 0, y > 0, x + y < L (or on explicit ``pairs``)."""
    X, Y, grid = _gamma_pairs(err, grid, pairs)
    lhs, rhs = gamma_sides(err, X, Y)
    fx, fy = err(X), err(Y)
    scale = np.abs(lhs) + np.abs(fx) + np.abs(fy) + np.abs(2 * (X / Y) * fy)
    return _summ(grid, f"gamma ({err.id})", rhs - lhs, scale, np.column_stack([X, Y]),
                 paper_ref="property Gamma of an error function")


def check_minus_gamma(fn: ScalarFn, grid: Optional[GridSpec] = None,
                      pairs=None) -> InequalityReport:
    """Both reversed-Gamma inequalities satisfied by superquadratic functions:

    f(a) + f(b) <= f(a+b) - 2a/(a+b) f(b) - 2b/(a+b) f(a)
    f(a+b) >= f(a) + f(b) + 2 (a/b) f(b)
    over grid pairs (or explicit ``pairs``) with a >= 0, b > 0 and a + b in
    the domain.
    """
    grid = grid or GridSpec.for_fn(fn)
    _require_within(fn, grid.interval)
    if pairs is not None:
        P = np.atleast_2d(np.asarray(pairs, dtype=float))
        A, B = P[:, 0], P[:, 1]
        if np.any(A < 0) or np.any(B <= 0) or np.any(A + B > fn.domain[1]):
            raise DomainError(f"minus-gamma pairs need a >= 0, b > 0, a + b <= {fn.domain[1]}")
    else:
        A, B = _pairs(grid.points())
    keep = (A >= 0) & (B > 0) & (A + B <= fn.domain[1])
    A, B = A[keep], B[keep]
    fa, fb, fs = fn(A), fn(B), fn(A + B)
    wit = np.column_stack([A, B])
    t1 = 2 * A / (A + B) * fb
    t2 = 2 * B / (A + B) * fa
    first = _summ(grid, "minus-gamma (symmetric form)", fs - t1 - t2 - fa - fb,
                  np.abs(fs) + np.abs(t1) + np.abs(t2) + np.abs(fa) + np.abs(fb), wit)
    t3 = 2 * (A / B) * fb
    second = _summ(grid, "minus-gamma (ratio form)", fs - fa - fb - t3,
                   np.abs(fs) + np.abs(fa) + np.abs(fb) + np.abs(t3), wit)
    return combine(f"minus-gamma ({fn.id})", [first, second],
                   paper_ref="reversed Gamma inequalities of superquadratic functions")


def check_subadditive_consequences(err: ErrorOrModulus, grid: Optional[GridSpec] = None,
                                   pairs=None) -> InequalityReport:
    """sqrt(phi) and phi(t)/t subadditive on [0, L], for phi with property Gamma."""
    if not err.has_gamma:
        raise PreconditionError(f"{err.id} is not flagged with property Gamma")
    grid = grid or GridSpec.for_companion(err)
    if pairs is not None:
        P = np.atleast_2d(np.asarray(pairs, dtype=float))
        X, Y = P[:, 0], P[:, 1]
        if np.any(X < 0) or np.any(Y < 0):
            raise DomainError("subadditivity pairs need x, y >= 0")
    else:
        if grid.interval[0] < 0 or grid.interval[1] > err.length:
            raise DomainError(f"grid {grid.interval} leaves [0, {err.length}]")
        X, Y = _pairs(grid.points())
    keep = (X >= 0) & (X + Y <= err.length)
    X, Y = X[keep], Y[keep]
    sx, sy, ss = np.sqrt(err(X)), np.sqrt(err(Y)), np.sqrt(err(X + Y))
    root = _summ(grid, "sqrt(phi) subadditive", sx + sy - ss, sx + sy + ss,
                 np.column_stack([X, Y]))
    pos = (X > 0) & (Y > 0)
    X, Y = X[pos], Y[pos]
    rx, ry, rs = err(X) / X, err(Y) / Y, err(X + Y) / (X + Y)
    ratio = _summ(grid, "phi(t)/t subadditive", rx + ry - rs,
                  np.abs(rx) + np.abs(ry) + np.abs(rs), np.column_stack([X, Y]))
    return combine(f"subadditive consequences ({err.id})", [root, ratio],
                   paper_ref="subadditivity of sqrt(phi) and phi(t)/t under Gamma")


def check_gamma_closure(err: ErrorOrModulus, psi: ScalarFn,
                        grid: Optional[GridSpec] = None) -> InequalityReport:
    """Gamma for psi * phi when psi is nonnegative and non-increasing."""
    if not err.has_gamma:
        raise PreconditionError(f"{err.id} is not flagged with property Gamma")
    grid = grid or GridSpec.for_companion(err)
    xs = grid.points()
    pv = psi(xs)
    if np.any(pv < 0):
        raise PreconditionError(f"{psi.id} is negative on the grid")
    rise = np.diff(pv)
    if np.any(rise > grid.atol + grid.rtol * np.abs(pv[1:])):
        k = int(np.argmax(rise))
        raise PreconditionError(f"{psi.id} increases between {xs[k]} and {xs[k + 1]}")
    prod = ErrorOrModulus(
        ScalarFn(f"{psi.id}*{err.id}", (0.0, err.length),
                 lambda x: psi.rule(x) * err.fn.rule(x)),
        nonnegative=True, has_gamma=True)
    return check_gamma(prod, grid)


# --- certificate-driven classification --------------------------------------

def cert_interval(fn: ScalarFn, cert) -> Optional[tuple[float, float]]:
    """Test interval cut down to where ``cert`` is asserted and its companion lives."""
    lo, hi = fn.test_interval
    if cert.interval is not None:
        lo, hi = max(lo, cert.interval[0]), min(hi, cert.interval[1])
    if cert.companion is not None:
        hi = min(hi, lo + cert.companion.length)
    return (lo, hi) if hi > lo else None


def certificate_checks(fn: ScalarFn, point_count: int = 64, t_count: int = 16,
                       atol: float = ATOL, rtol: float = RTOL) -> list[InequalityReport]:
    """Run every checker that applies to the certificates ``fn`` carries."""
    out: list[InequalityReport] = []
    for cert in fn.certificates:
        interval = cert_interval(fn, cert)
        if interval is None:
            continue
        grid = GridSpec(interval, point_count, t_count, atol, rtol)
        kind = cert.kind
        if kind == CertKind.SUPERQUADRATIC:
            out.append(check_superquadratic(fn, grid, cert.c_rule))
            out.append(check_minus_gamma(fn, grid))
            if fn.contains(0.0) and grid.interval[0] == 0.0:
                out.append(lemma1_sanity(fn, grid))
        elif kind == CertKind.SUBQUADRATIC:
            out.append(check_subquadratic(fn, grid, cert.c_rule))
        elif kind == CertKind.CONVEX:
            out.append(check_convexity(fn, grid))
        elif kind in (CertKind.UNIFORMLY_CONVEX, CertKind.STRONGLY_CONVEX):
            if kind == CertKind.STRONGLY_CONVEX and fn.has(CertKind.UNIFORMLY_CONVEX):
                continue  # the paired uniform certificate covers the same check
            out.append(check_uniform_convexity(fn, cert.companion, grid))
        elif kind == CertKind.PHI_CONVEX:
            out.append(check_phi_convexity(fn, cert.companion, grid))
            if cert.companion.has_gamma:
                cgrid = GridSpec((0.0, grid.width), point_count, t_count, atol, rtol)
                out.append(check_gamma(cert.companion, cgrid))
                out.append(check_subadditive_consequences(cert.companion, cgrid))
    return out
