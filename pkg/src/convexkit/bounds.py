"""Closed-form bounds on max_k |x_k - a| for a weighted positive sample."""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import (CertificateError, DomainError, PreconditionError, ValidationError,
                     WeightError)
from .functions import CertKind, ErrorOrModulus, ScalarFn
from .reports import BoundReport

SUM_TOL = 1e-12
EQUAL_TOL = 1e-12
_SUBMULT_GRID = (0.5, 1.0, 2.0, 4.0)


@dataclass(frozen=True, eq=False)
class WeightedSample:
    """Positive points x_1..x_n (n >= 2) with weights strictly inside (0, 1)."""

    points: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        x = np.array(self.points, dtype=float)
        w = np.array(self.weights, dtype=float)
        if x.ndim != 1 or w.shape != x.shape:
            raise ValidationError("points and weights must be matching vectors")
        if x.size < 2:
            raise ValidationError("a sample needs n >= 2 points")
        if not (np.all(np.isfinite(x)) and np.all(np.isfinite(w))):
            raise ValidationError("sample values must be finite")
        if np.any(x <= 0):
            raise DomainError("sample points must be positive")
        if np.any(w <= 0) or np.any(w >= 1):
            raise WeightError("weights must lie strictly inside (0, 1)")
        if abs(w.sum() - 1) > SUM_TOL:
            raise WeightError(f"weights sum to {w.sum()!r}, not 1")
        x.setflags(write=False)
        w.setflags(write=False)
        object.__setattr__(self, "points", x)
        object.__setattr__(self, "weights", w)

    @classmethod
    def equal(cls, points) -> "WeightedSample":
        n = len(points)
        return cls(points, np.full(n, 1.0 / n))

    @property
    def n(self) -> int:
        return self.points.size

    @property
    def alpha0(self) -> float:
        return float(self.weights.min())

    @property
    def has_equal_weights(self) -> bool:
        return bool(np.all(np.abs(self.weights - 1.0 / self.n) <= EQUAL_TOL))


def weighted_mean(s: WeightedSample) -> float:
    return float(np.dot(s.weights, s.points))


def t_coefficient(alpha0: float, p: float) -> float:
    """T = (1-a)^(1-1/p) / (a^(1/p) (a^(p-1) + (1-a)^(p-1))^(1/p))."""
    if not 0 < alpha0 < 1:
        raise DomainError(f"alpha0 must be in (0, 1), got {alpha0!r}")
    if not p >= 2:
        raise DomainError(f"p must be >= 2, got {p!r}")
    a, q = float(alpha0), 1.0 - float(alpha0)
    return q ** (1 - 1 / p) / (a ** (1 / p) * (a ** (p - 1) + q ** (p - 1)) ** (1 / p))


def _clamp(name: str, value: float, scale: float) -> float:
    """Clamp a cancellation residue to 0; a genuinely negative value is an error."""
    if value >= 0:
        return value
    if value >= -(1e-15 + 64 * np.finfo(float).eps * abs(scale)):
        return 0.0
    raise PreconditionError(f"{name} = {value!r} < 0; the function is not in the certified class")


def _power_radicand(s: WeightedSample, a: float, p: float) -> float:
    """c - a^p written as sum alpha_i a^p [(1+u_i)^p - 1 - p u_i], u_i = (x_i - a)/a.

    Equal to c - a^p because sum alpha_i (x_i - a) = 0, but without the
    cancellation, which matters once the root amplifies it.
    """
    u = (s.points - a) / a
    g = np.expm1(p * np.log1p(u)) - p * u
    return float(a ** p * np.dot(s.weights, g))


def _require_equal(s: WeightedSample, what: str):
    if not s.has_equal_weights:
        raise WeightError(f"{what} needs equal weights 1/n")


def _deviation(s: WeightedSample, a: float) -> np.ndarray:
    return np.abs(s.points - a)


def cipu_bound(s: WeightedSample) -> BoundReport:
    """max |x_k - a| <= sqrt((n-1)(b - a^2)), b the mean of squares."""
    _require_equal(s, "the Cipu bound")
    n = s.n
    a = weighted_mean(s)
    b = float(np.mean(s.points ** 2))
    var = _clamp("b - a^2", _power_radicand(s, a, 2.0), b)
    bound = float(np.sqrt((n - 1) * var))
    return BoundReport("cipu", bound, float(_deviation(s, a).max()),
                       {"n": n, "a": a, "b": b}, "deviation bound for equal weights (p = 2)")


def deviation_bound_power(s: WeightedSample, p: float) -> BoundReport:
    """max |x_k - a| <= T(alpha0, p) (c - a^p)^(1/p), c = sum alpha_i x_i^p."""
    T = t_coefficient(s.alpha0, p)
    a = weighted_mean(s)
    c = float(np.dot(s.weights, s.points ** p))
    rad = _clamp("c - a^p", _power_radicand(s, a, p), c)
    bound = T * rad ** (1 / p)
    return BoundReport("power", float(bound), float(_deviation(s, a).max()),
                       {"p": float(p), "a": a, "c": c, "alpha0": s.alpha0, "t": T},
                       "deviation bound via power means")


def _positive_points(fn: ScalarFn, pts):
    vals = fn(np.asarray(pts, dtype=float))
    if np.any(vals <= 0):
        raise PreconditionError(f"{fn.id} must be positive on (0, inf)")
    return vals


def _check_submultiplicative(g, name: str):
    for A, B in itertools.product(_SUBMULT_GRID, repeat=2):
        lhs, rhs = float(g(A * B)), float(g(A)) * float(g(B))
        if lhs > rhs + 1e-12 * max(1.0, abs(rhs)):
            raise PreconditionError(f"{name} is not submultiplicative: "
                                    f"f({A}*{B}) = {lhs} > f({A}) f({B}) = {rhs}")


def _f_of_deviation(g, dev: np.ndarray) -> np.ndarray:
    # a nonnegative superquadratic f vanishes at 0, so a zero deviation contributes 0
    out = np.zeros_like(dev)
    pos = dev > 0
    out[pos] = g(dev[pos])
    return out


def deviation_bound_submultiplicative(s: WeightedSample, fn: ScalarFn) -> BoundReport:
    """max f(|x_k - a|) <= [f(n-1) n / (n-1 + f(n-1))] (d - f(a)), d = mean f(x_i)."""
    _require_equal(s, "the submultiplicative bound")
    if not fn.has(CertKind.SUPERQUADRATIC):
        raise CertificateError(f"{fn.id} has no superquadratic certificate")
    _positive_points(fn, _SUBMULT_GRID)
    _check_submultiplicative(fn, fn.id)
    n = s.n
    fn1 = float(fn(n - 1.0))
    coef = fn1 * n / (n - 1 + fn1)
    a = float(np.mean(s.points))
    fx = fn(s.points)
    d = float(np.mean(fx))
    fa = float(fn(a))
    rad = _clamp("d - f(a)", d - fa, float(np.mean(np.abs(fx))))
    actual = float(_f_of_deviation(fn, _deviation(s, a)).max())
    return BoundReport("submultiplicative", coef * rad, actual,
                       {"n": n, "a": a, "d": d, "f_a": fa, "f_n_minus_1": fn1,
                        "coefficient": coef},
                       "deviation bound for submultiplicative superquadratic functions")


def _inside(s: WeightedSample, interval) -> bool:
    return interval is None or bool(np.all((s.points >= interval[0]) & (s.points <= interval[1])))


def deviation_bound_strong(s: WeightedSample, m: float, p: float, fn: ScalarFn) -> BoundReport:
    """max |x_k - a| <= T(alpha0, p) ((c - f(a)) / m)^(1/p), c = sum alpha_i f(x_i).

    Needs a strong-convexity certificate with the same p and a constant
    m' >= m (a smaller m is implied by a larger one).
    """
    if not m > 0:
        raise DomainError(f"m must be positive, got {m!r}")
    certs = [c for c in fn.certs(CertKind.STRONGLY_CONVEX)
             if c.strong_params[1] == p and c.strong_params[0] >= m]
    if not certs:
        raise CertificateError(f"{fn.id} has no strongly convex certificate with p = {p:g} "
                               f"and m >= {m:g}")
    if not any(_inside(s, c.interval) for c in certs):
        raise CertificateError(f"sample leaves the interval where {fn.id} is strongly convex")
    T = t_coefficient(s.alpha0, p)
    a = weighted_mean(s)
    fx = fn(s.points)
    c = float(np.dot(s.weights, fx))
    fa = float(fn(a))
    rad = _clamp("c - f(a)", c - fa, float(np.dot(s.weights, np.abs(fx))))
    bound = T * (rad / m) ** (1 / p)
    notes = ("bound divides c - f(a) by m; at m = 1 this is the printed bound",)
    return BoundReport("strong", float(bound), float(_deviation(s, a).max()),
                       {"m": float(m), "p": float(p), "a": a, "c": c, "f_a": fa,
                        "alpha0": s.alpha0, "t": T},
                       "deviation bound for strongly convex functions", notes)


def _modulus_cert(fn: ScalarFn, mod: Optional[ErrorOrModulus]) -> ErrorOrModulus:
    certs = fn.certs(CertKind.UNIFORMLY_CONVEX)
    if mod is None:
        if not certs:
            raise CertificateError(f"{fn.id} has no uniform convexity certificate")
        return certs[0].companion
    if not any(c.companion.id == mod.id for c in certs):
        raise CertificateError(f"{fn.id} is not certified uniformly convex with modulus {mod.id}")
    return mod


def deviation_bound_modulus(s: WeightedSample, fn: ScalarFn,
                            mod: Optional[ErrorOrModulus] = None) -> BoundReport:
    """max Phi(|x_k - a|) <= [Phi(n-1) n / (n-1 + Phi(n-1))] (d - f(a)) for convex Phi."""
    _require_equal(s, "the modulus bound")
    mod = _modulus_cert(fn, mod)
    if not mod.is_convex:
        raise PreconditionError(f"modulus {mod.id} is not flagged convex")
    if not mod.vanishes_at_zero:
        raise PreconditionError(f"modulus {mod.id} does not vanish at 0")
    n = s.n
    a = float(np.mean(s.points))
    dev = _deviation(s, a)
    reach = max(float(n - 1), float(dev.max()), max(_SUBMULT_GRID) ** 2)
    if reach > mod.length:
        raise PreconditionError(f"modulus {mod.id} is defined on [0, {mod.length}], "
                                f"needs [0, {reach}]")
    grid = np.linspace(0.0, reach, 257)
    if np.any(np.diff(mod(grid)) < 0):
        raise PreconditionError(f"modulus {mod.id} is not increasing")
    _check_submultiplicative(mod, mod.id)
    cert = next(c for c in fn.certs(CertKind.UNIFORMLY_CONVEX) if c.companion.id == mod.id)
    if not _inside(s, cert.interval):
        raise CertificateError(f"sample leaves the interval where {fn.id} is uniformly convex")
    phi1 = float(mod(n - 1.0))
    coef = phi1 * n / (n - 1 + phi1)
    fx = fn(s.points)
    d = float(np.mean(fx))
    fa = float(fn(a))
    rad = _clamp("d - f(a)", d - fa, float(np.mean(np.abs(fx))))
    actual = float(_f_of_deviation(mod, dev).max())
    return BoundReport("modulus", coef * rad, actual,
                       {"n": n, "a": a, "d": d, "f_a": fa, "phi_n_minus_1": phi1,
                        "coefficient": coef},
                       "deviation bound through a convex modulus of convexity")


def cross_check_coefficients(n: int, p: float) -> tuple[float, float]:
    """(T(1/n, p)^p, (n-1)^p n / ((n-1) + (n-1)^p)); the two agree."""
    if int(n) != n or n < 2:
        raise DomainError(f"n must be an integer >= 2, got {n!r}")
    k = float(n - 1)
    return t_coefficient(1.0 / n, p) ** p, k ** p * n / (k + k ** p)
