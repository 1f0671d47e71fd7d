"""Scalar functions of one nonnegative variable, their class certificates,
companion error/modulus functions, and the catalog of named examples.

Every rule is written against numpy arrays so that grid checks and
quadrature can evaluate thousands of points per call.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .errors import DomainError, NonFinite, UnknownFunction, ValidationError

Rule = Callable[[np.ndarray], np.ndarray]

INF = math.inf
_DOMAIN_SLACK = 1e-12
DEFAULT_TEST_INTERVAL = (0.0, 10.0)


class CertKind(str, enum.Enum):
    SUPERQUADRATIC = "superquadratic"
    SUBQUADRATIC = "subquadratic"
    CONVEX = "convex"
    PHI_CONVEX = "phi-convex"
    UNIFORMLY_CONVEX = "uniformly-convex"
    STRONGLY_CONVEX = "strongly-convex"


def _as_interval(interval, what="interval") -> tuple[float, float]:
    lo, hi = (float(v) for v in interval)
    if math.isnan(lo) or math.isnan(hi) or not hi > lo:
        raise ValidationError(f"{what} must be nondegenerate, got [{lo}, {hi}]")
    return lo, hi


@dataclass(frozen=True, eq=False)
class ScalarFn:
    """A real function on a closed subinterval of [0, inf).

    ``domain`` is where the rule is defined; ``test_interval`` is the finite
    window grid checks default to. ``rule`` and ``derivative`` must accept
    numpy arrays.
    """

    id: str
    domain: tuple[float, float]
    rule: Rule
    derivative: Optional[Rule] = None
    certificates: tuple["ClassCertificate", ...] = ()
    test_interval: Optional[tuple[float, float]] = None
    description: str = ""

    def __post_init__(self):
        lo, hi = _as_interval(self.domain, "domain")
        if lo < 0:
            raise ValidationError(f"{self.id}: domain must lie in [0, inf)")
        object.__setattr__(self, "domain", (lo, hi))
        if self.test_interval is None:
            test = (lo, hi) if math.isfinite(hi) else (lo, lo + 10.0)
        else:
            test = _as_interval(self.test_interval, "test interval")
        if test[0] < lo or test[1] > hi or not math.isfinite(test[1]):
            raise ValidationError(
                f"{self.id}: test interval {test} must be a finite part of {self.domain}")
        object.__setattr__(self, "test_interval", test)
        object.__setattr__(self, "certificates", tuple(self.certificates))

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        x = clip_to_domain(self.id, self.domain, x)
        with np.errstate(all="ignore"):
            y = np.asarray(self.rule(x), dtype=float)
        if not np.all(np.isfinite(y)):
            bad = x[~np.isfinite(y)] if y.shape == x.shape and x.ndim else x
            raise NonFinite(f"{self.id} is not finite at x={np.ravel(bad)[0]!r}")
        return y if y.ndim else float(y)

    def contains(self, x) -> bool:
        x = np.asarray(x, dtype=float)
        return bool(np.all((x >= self.domain[0]) & (x <= self.domain[1])))

    def certs(self, kind: CertKind) -> list["ClassCertificate"]:
        return [c for c in self.certificates if c.kind == kind]

    def has(self, kind: CertKind) -> bool:
        return any(c.kind == kind for c in self.certificates)

    def __repr__(self):
        return f"ScalarFn({self.id!r}, domain={self.domain})"


def clip_to_domain(name: str, domain: tuple[float, float], x: np.ndarray) -> np.ndarray:
    """Raise DomainError for points outside ``domain``.

    Points within a few ulps of an endpoint (rounding in t*x + (1-t)*y and
    friends) are snapped onto it.
    """
    lo, hi = domain
    slack_lo = _DOMAIN_SLACK * max(1.0, abs(lo))
    slack_hi = _DOMAIN_SLACK * max(1.0, abs(hi)) if math.isfinite(hi) else 0.0
    bad = np.isnan(x) | (x < lo - slack_lo) | (x > hi + slack_hi)
    if np.any(bad):
        raise DomainError(f"{name}: x={np.ravel(x[bad] if x.ndim else x)[0]!r} "
                          f"outside domain [{lo}, {hi}]")
    return np.clip(x, lo, hi)


@dataclass(frozen=True, eq=False)
class ErrorOrModulus:
    """Nonnegative companion on [0, L]: an error function or a modulus.

    ``nonnegative`` and ``vanishes_at_zero`` are verified on construction;
    ``has_gamma`` and ``is_convex`` are declared and re-checked by the
    classifier.
    """

    fn: ScalarFn
    nonnegative: bool = True
    has_gamma: bool = False
    is_convex: bool = False
    vanishes_at_zero: bool = False

    def __post_init__(self):
        if self.fn.domain[0] != 0.0:
            raise ValidationError(f"companion {self.fn.id} must start at 0")
        span = min(self.length, 100.0)
        xs = np.linspace(0.0, span, 257)
        if self.nonnegative and np.any(self.fn(xs) < 0):
            raise ValidationError(f"companion {self.fn.id} is negative on [0, {span}]")
        if self.vanishes_at_zero and self.fn(0.0) != 0.0:
            raise ValidationError(f"companion {self.fn.id} does not vanish at 0")

    @property
    def id(self) -> str:
        return self.fn.id

    @property
    def length(self) -> float:
        return self.fn.domain[1]

    def __call__(self, x):
        return self.fn(x)

    def __repr__(self):
        return f"ErrorOrModulus({self.id!r}, length={self.length})"


@dataclass(frozen=True, eq=False)
class ClassCertificate:
    """Membership of a function in one of the convexity classes.

    ``interval`` restricts where the claim is made (None means the whole
    domain); a companion's length additionally caps the host interval width.
    ``c_rule`` supplies the constant C_x of the superquadratic definition
    when f'(x) is not a valid choice.
    """

    kind: CertKind
    companion: Optional[ErrorOrModulus] = None
    strong_params: Optional[tuple[float, float]] = None
    interval: Optional[tuple[float, float]] = None
    c_rule: Optional[Rule] = None
    note: str = ""

    def __post_init__(self):
        kind = CertKind(self.kind)
        object.__setattr__(self, "kind", kind)
        needs = (CertKind.PHI_CONVEX, CertKind.UNIFORMLY_CONVEX, CertKind.STRONGLY_CONVEX)
        if kind in needs and self.companion is None:
            raise ValidationError(f"{kind.value} certificate needs a companion function")
        if kind == CertKind.STRONGLY_CONVEX:
            if self.strong_params is None:
                raise ValidationError("strongly convex certificate needs (m, p)")
            m, p = self.strong_params
            if not (m > 0 and p >= 2):
                raise ValidationError(f"strong parameters need m > 0, p >= 2; got {(m, p)}")
        if self.interval is not None:
            object.__setattr__(self, "interval", _as_interval(self.interval))

    def describe(self) -> str:
        text = self.kind.value
        if self.kind == CertKind.STRONGLY_CONVEX:
            m, p = self.strong_params
            text += f" (m={m:g}, p={p:g})"
        if self.companion is not None:
            sym = "phi" if self.kind == CertKind.PHI_CONVEX else "Phi"
            text += f" with {sym} = {self.companion.id} on [0,{_fmt(self.companion.length)}]"
        if self.interval is not None:
            text += f" on [{_fmt(self.interval[0])},{_fmt(self.interval[1])}]"
        return text


def _fmt(v: float) -> str:
    if v == INF:
        return "inf"
    if abs(v - 1 / math.e) < 1e-15:
        return "e^-1"
    return f"{v:g}"


# --- evaluation --------------------------------------------------------------

def evaluate(fn: ScalarFn, x: float) -> float:
    """Value of ``fn`` at a single point."""
    if np.ndim(x):
        raise ValidationError("evaluate takes a scalar; call fn(array) for vectors")
    return fn(float(x))


def _fd_step(x: float, lo: float, hi: float) -> float:
    h = max(1e-6, 1e-6 * abs(x))
    return min(h, (x - lo) / 2, (hi - x) / 2)


def derivative_at(fn: ScalarFn, x: float) -> float:
    """f'(x) at an interior point.

    Uses the analytic derivative when the function has one, otherwise a
    central difference with h = max(1e-6, 1e-6|x|), shrunk to stay inside
    the domain.
    """
    lo, hi = fn.domain
    x = float(x)
    if not lo < x < hi:
        raise DomainError(f"{fn.id}: derivative needs x strictly inside ({lo}, {hi}), got {x}")
    if fn.derivative is not None:
        with np.errstate(all="ignore"):
            d = float(fn.derivative(np.asarray(x)))
        if not math.isfinite(d):
            raise NonFinite(f"{fn.id}: derivative not finite at {x}")
        return d
    return central_difference(fn, x)


def central_difference(fn: ScalarFn, x: float) -> float:
    lo, hi = fn.domain
    h = _fd_step(x, lo, hi)
    return (fn(x + h) - fn(x - h)) / (2 * h)


def derivative_values(fn: ScalarFn, x) -> np.ndarray:
    """Vectorized slope on the closed domain.

    Analytic where available; otherwise central differences in the interior
    and second-order one-sided differences at the endpoints.
    """
    x = clip_to_domain(fn.id, fn.domain, np.asarray(x, dtype=float))
    if fn.derivative is not None:
        with np.errstate(all="ignore"):
            d = np.asarray(fn.derivative(x), dtype=float) * np.ones_like(x)
    else:
        lo, hi = fn.domain
        h = np.maximum(1e-6, 1e-6 * np.abs(x))
        if math.isfinite(hi):
            h = np.minimum(h, (hi - lo) / 4)
        left = x - h < lo
        right = x + h > hi
        centre = ~(left | right)
        d = np.empty_like(x)
        xc, hc = x[centre], h[centre]
        d[centre] = (fn(xc + hc) - fn(xc - hc)) / (2 * hc)
        xl, hl = x[left], h[left]
        d[left] = (-3 * fn(xl) + 4 * fn(xl + hl) - fn(xl + 2 * hl)) / (2 * hl)
        xr, hr = x[right], h[right]
        d[right] = (3 * fn(xr) - 4 * fn(xr - hr) + fn(xr - 2 * hr)) / (2 * hr)
    if not np.all(np.isfinite(d)):
        raise NonFinite(f"{fn.id}: derivative not finite at x={x[~np.isfinite(d)][0]!r}")
    return d


def bisect_root(fn: ScalarFn, lo: float, hi: float, tol: float = 1e-12) -> float:
    """Root of ``fn`` in [lo, hi] by bisection; needs a sign change."""
    flo, fhi = fn(lo), fn(hi)
    if flo == 0:
        return float(lo)
    if fhi == 0:
        return float(hi)
    if np.sign(flo) == np.sign(fhi):
        raise ValidationError(f"{fn.id}: no sign change on [{lo}, {hi}]")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        fm = fn(mid)
        if fm == 0:
            return mid
        if np.sign(fm) == np.sign(flo):
            lo, flo = mid, fm
        else:
            hi = mid
    return 0.5 * (lo + hi)


# --- companions --------------------------------------------------------------

def make_companion(fid: str, rule: Rule, length: float = INF, *, has_gamma=False,
                   is_convex=False, derivative: Optional[Rule] = None,
                   nonnegative=True, description="") -> ErrorOrModulus:
    fn = ScalarFn(fid, (0.0, length), rule, derivative=derivative,
                  description=description)
    with np.errstate(all="ignore"):
        vanishes = float(rule(np.asarray(0.0))) == 0.0
    return ErrorOrModulus(fn, nonnegative=nonnegative, has_gamma=has_gamma,
                          is_convex=is_convex, vanishes_at_zero=vanishes)


def power_companion(p: float, m: float = 1.0, length: float = INF) -> ErrorOrModulus:
    """m * x**p on [0, length]."""
    fid = f"x^{p:g}" if m == 1 else f"{m:g}*x^{p:g}"
    return make_companion(
        fid, lambda x: m * x ** p, length,
        # x^p is subquadratic for p <= 2, and subquadratic functions carry Gamma
        has_gamma=0 < p <= 2, is_convex=p >= 1,
        derivative=lambda x: m * p * x ** (p - 1))


def zero_companion(length: float = INF) -> ErrorOrModulus:
    return make_companion("0", np.zeros_like, length, has_gamma=True, is_convex=True,
                          derivative=np.zeros_like)


def negated_companion(fn: ScalarFn, length: float, *, is_convex=False) -> ErrorOrModulus:
    """phi = -f for a superquadratic f that is nonpositive on [0, length].

    Superquadratic functions satisfy the reversed Gamma inequality, so -f
    satisfies Gamma itself.
    """
    d = fn.derivative
    return make_companion(
        f"-({fn.id})", lambda x: -fn.rule(x), length, has_gamma=True, is_convex=is_convex,
        derivative=None if d is None else (lambda x: -d(x)))


def strongly_convex_certificates(m: float, p: float, interval=None, note=""):
    """StronglyConvex(m, p) plus the UniformlyConvex certificate it implies."""
    mod = power_companion(p, m)
    return (
        ClassCertificate(CertKind.STRONGLY_CONVEX, mod, strong_params=(float(m), float(p)),
                         interval=interval, note=note),
        ClassCertificate(CertKind.UNIFORMLY_CONVEX, mod, interval=interval, note=note),
    )


def _slope_or_zero_at_origin(derivative: Rule) -> Rule:
    """C_x = f'(x) for x > 0 and 0 at the origin.

    At x = 0 the definition reduces to 0 >= C_0 * y + f(0), so C_0 = 0 is a
    valid constant whenever f(0) <= 0, even where f'(0) is infinite. The
    reversed (subquadratic) form needs f(0) >= 0 instead.
    """
    def rule(x):
        x = np.asarray(x, dtype=float)
        with np.errstate(all="ignore"):
            d = np.asarray(derivative(x), dtype=float) * np.ones_like(x)
        return np.where(x == 0, 0.0, d)
    return rule


# --- catalog -----------------------------------------------------------------

@dataclass(frozen=True)
class _Family:
    template: str
    param: Optional[str]        # None, "real" or "int"
    builder: Callable
    summary: str
    default_test: tuple[float, float] = DEFAULT_TEST_INTERVAL
    check: Callable[[float], bool] = lambda v: True
    param_note: str = ""
    domain: str = "[0,inf)"


def _build_pow(p, test):
    certs = []
    if p >= 2:
        certs.append(ClassCertificate(CertKind.SUPERQUADRATIC))
    if p <= 2:
        # f'(0) is infinite for p < 1; C_0 = 0 still works since f(0) = 0
        rule = _slope_or_zero_at_origin(lambda x: p * x ** (p - 1)) if p < 1 else None
        certs.append(ClassCertificate(CertKind.SUBQUADRATIC, c_rule=rule))
    if p >= 1:
        certs.append(ClassCertificate(CertKind.CONVEX))
    if p >= 2 and float(p).is_integer():
        certs.extend(strongly_convex_certificates(1.0, p))
    return ScalarFn(f"pow:{p:g}", (0.0, INF), lambda x: x ** p,
                    derivative=lambda x: p * x ** (p - 1), certificates=certs,
                    test_interval=test, description=f"x^{p:g}")


def _build_neg_pow(p, test):
    deriv = lambda x: -p * x ** (p - 1)
    base = ScalarFn(f"neg_pow:{p:g}", (0.0, INF), lambda x: -x ** p, derivative=deriv,
                    test_interval=test)
    certs = []
    if p <= 2:
        certs.append(ClassCertificate(CertKind.SUPERQUADRATIC,
                                      c_rule=_slope_or_zero_at_origin(deriv)))
        certs.append(ClassCertificate(CertKind.PHI_CONVEX, power_companion(p)))
    if p >= 2:
        certs.append(ClassCertificate(CertKind.SUBQUADRATIC))
    if p <= 1:
        certs.append(ClassCertificate(CertKind.CONVEX))
    return _with(base, certs, f"-x^{p:g}")


def _with(fn: ScalarFn, certs, description) -> ScalarFn:
    return ScalarFn(fn.id, fn.domain, fn.rule, derivative=fn.derivative,
                    certificates=tuple(certs), test_interval=fn.test_interval,
                    description=description)


def _xsq_ln_rule(x):
    safe = np.where(x > 0, x, 1.0)
    return np.where(x > 0, safe * safe * np.log(safe), 0.0)


def _xsq_ln_deriv(x):
    safe = np.where(x > 0, x, 1.0)
    return np.where(x > 0, 2 * safe * np.log(safe) + safe, 0.0)


def _build_xsq_ln(_, test):
    base = ScalarFn("xsq_ln", (0.0, INF), _xsq_ln_rule, derivative=_xsq_ln_deriv,
                    test_interval=test)
    certs = [ClassCertificate(CertKind.SUPERQUADRATIC),
             ClassCertificate(CertKind.PHI_CONVEX, negated_companion(base, 1.0),
                              note="host intervals [a, a+1]; phi = -f on [0,1]")]
    return _with(base, certs, "x^2 ln x")


def _build_lp_root(p, test):
    deriv = lambda x: -(1 + x ** p) ** (1 / p - 1) * x ** (p - 1)
    base = ScalarFn(f"lp_root:{p:g}", (0.0, INF), lambda x: -(1 + x ** p) ** (1 / p),
                    derivative=deriv, test_interval=test)
    certs = [ClassCertificate(CertKind.SUPERQUADRATIC, c_rule=_slope_or_zero_at_origin(deriv)),
             ClassCertificate(CertKind.PHI_CONVEX,
                              negated_companion(base, INF, is_convex=p >= 1))]
    if p <= 1:
        certs.append(ClassCertificate(CertKind.CONVEX))
    return _with(base, certs, f"-(1+x^{p:g})^(1/{p:g})")


def _build_atan_neg(_, test):
    base = ScalarFn("atan_neg", (0.0, INF),
                    lambda x: 0.5 * np.log1p(x * x) - x * np.arctan(x),
                    derivative=lambda x: -np.arctan(x), test_interval=test)
    certs = [ClassCertificate(CertKind.SUPERQUADRATIC),
             ClassCertificate(CertKind.PHI_CONVEX, negated_companion(base, INF, is_convex=True))]
    return _with(base, certs, "1/2 ln(1+x^2) - x arctan x")


def _cipu_rule(x):
    r = np.sqrt(x * x + 1)
    return 0.5 * x * r - 2 * r - 0.5 * np.arcsinh(x) + 2


def _build_cipu_int(_, test):
    base = ScalarFn("cipu_int", (0.0, INF), _cipu_rule,
                    derivative=lambda x: x * (x - 2) / np.sqrt(x * x + 1), test_interval=test)
    # f <= 0 on [0, T], T = 3.4237..., so -f is a valid error function on [0, 2]
    certs = [ClassCertificate(CertKind.SUPERQUADRATIC),
             ClassCertificate(CertKind.PHI_CONVEX, negated_companion(base, 2.0),
                              note="phi = -f is nonnegative up to the positive root T = 3.4237...")]
    return _with(base, certs, "int_0^x t(t-2)/sqrt(t^2+1) dt")


def _cubic_gap_modulus(n):
    return make_companion(
        f"x^{n}(3x-x^3)", lambda x: x ** n * (3 * x - x ** 3), 1.0,
        is_convex=n >= 3, derivative=lambda x: 3 * (n + 1) * x ** n - (n + 3) * x ** (n + 2))


def _build_two_pow(n, test):
    n = int(n)
    certs = [ClassCertificate(CertKind.SUPERQUADRATIC), ClassCertificate(CertKind.CONVEX),
             *strongly_convex_certificates(2.0, n),
             ClassCertificate(CertKind.UNIFORMLY_CONVEX, _cubic_gap_modulus(n),
                              note="host intervals of length <= 1")]
    return ScalarFn(f"two_pow:{n}", (0.0, INF), lambda x: 2 * x ** n,
                    derivative=lambda x: 2 * n * x ** (n - 1), certificates=certs,
                    test_interval=test, description=f"2x^{n}")


def _build_x_shift_even(n, test):
    n = int(n)
    k = 2 * n
    certs = [ClassCertificate(CertKind.PHI_CONVEX, power_companion(2, float(k)))]
    return ScalarFn(f"x_shift_even:{n}", (0.0, INF), lambda x: x * (x - 1) ** k,
                    derivative=lambda x: (x - 1) ** k + k * x * (x - 1) ** (k - 1),
                    certificates=certs, test_interval=test, description=f"x(x-1)^{k}")


def _build_x_shift_odd(n, test):
    n = int(n)
    k = 2 * n + 1
    # f'' >= 2k needs x well past 1; x >= 2 suffices for every n >= 1
    certs = [ClassCertificate(CertKind.CONVEX, interval=(1.0, INF)),
             *strongly_convex_certificates(float(k), 2.0, interval=(2.0, INF),
                                           note="fails near [1/2, 1]; asserted on [2, inf)")]
    return ScalarFn(f"x_shift_odd:{n}", (0.0, INF), lambda x: x * (x - 1) ** k,
                    derivative=lambda x: (x - 1) ** k + k * x * (x - 1) ** (k - 1),
                    certificates=certs, test_interval=test, description=f"x(x-1)^{k}")


def _neglog_rule(x):
    inside = (x > 0) & (x < 1)
    safe = np.where(inside, x, 0.5)
    return np.where(inside, -safe * np.sqrt(-np.log(safe)), 0.0)


def _neglog_deriv(x):
    s = np.sqrt(-np.log(x))
    return -s + 0.5 / s


def _build_xsqrt_neglog(_, test):
    edge = math.exp(-1.0)
    base = ScalarFn("xsqrt_neglog", (0.0, 1.0), _neglog_rule, derivative=_neglog_deriv,
                    test_interval=test)
    phi = make_companion("x*sqrt(-ln x)", lambda x: -_neglog_rule(x), edge, has_gamma=True)
    certs = [
        # non-positive, non-increasing and superadditive: C_x = 0 works
        ClassCertificate(CertKind.SUPERQUADRATIC, interval=(0.0, edge),
                         c_rule=lambda x: np.zeros_like(np.asarray(x, dtype=float))),
        ClassCertificate(CertKind.PHI_CONVEX, phi, interval=(0.0, edge)),
    ]
    return _with(base, certs, "-x sqrt(-ln x)")


def _is_int(v):
    return float(v).is_integer()


_FAMILIES: dict[str, _Family] = {
    f.template.split(":")[0]: f for f in [
        _Family("pow:<p>", "real", _build_pow,
                "x^p; superquadratic for p >= 2, subquadratic for 0 <= p <= 2; "
                "uniformly convex with Phi = x^p for integer p >= 2",
                check=lambda p: p >= 0, param_note="p >= 0"),
        _Family("neg_pow:<p>", "real", _build_neg_pow,
                "-x^p; superquadratic and phi-convex with phi = x^p for 0 < p <= 2",
                check=lambda p: p > 0, param_note="p > 0"),
        _Family("xsq_ln", None, _build_xsq_ln,
                "x^2 ln x; superquadratic; phi-convex with phi = -f on [0,1]",
                default_test=(0.0, 1.0)),
        _Family("lp_root:<p>", "real", _build_lp_root,
                "-(1+x^p)^(1/p); superquadratic and negative; phi-convex with phi = -f",
                check=lambda p: p > 0, param_note="p > 0"),
        _Family("atan_neg", None, _build_atan_neg,
                "1/2 ln(1+x^2) - x arctan x; superquadratic; phi-convex with phi = -f; "
                "f'(x) = -arctan x"),
        _Family("cipu_int", None, _build_cipu_int,
                "int_0^x t(t-2)/sqrt(t^2+1) dt (closed form); superquadratic; "
                "phi-convex with phi = -f on [0,2]"),
        _Family("two_pow:<n>", "int", _build_two_pow,
                "2x^n; uniformly convex with Phi = 2x^n and, on intervals of length 1, "
                "with Phi = x^n(3x - x^3)",
                default_test=(1.0, 2.0), check=lambda n: _is_int(n) and n >= 2,
                param_note="integer n >= 2"),
        _Family("x_shift_even:<n>", "int", _build_x_shift_even,
                "x(x-1)^(2n); phi-convex with phi = 2n x^2",
                check=lambda n: _is_int(n) and n >= 1, param_note="integer n >= 1"),
        _Family("x_shift_odd:<n>", "int", _build_x_shift_odd,
                "x(x-1)^(2n+1); strongly convex with Phi = (2n+1) x^2 on [2, inf)",
                default_test=(2.0, 10.0), check=lambda n: _is_int(n) and n >= 1,
                param_note="integer n >= 1"),
        _Family("xsqrt_neglog", None, _build_xsqrt_neglog,
                "-x sqrt(-ln x); superquadratic and phi-convex with phi = x sqrt(-ln x) "
                "on [0,e^-1]",
                default_test=(0.0, math.exp(-1.0)), domain="[0,1]"),
    ]
}


def catalog_lookup(fid: str, test_interval=None) -> ScalarFn:
    """Build the catalog function registered under ``fid``.

    ``test_interval`` overrides the family's default grid window.
    """
    name, sep, raw = str(fid).partition(":")
    family = _FAMILIES.get(name)
    if family is None or bool(sep) != (family.param is not None):
        raise UnknownFunction(f"unknown function id {fid!r}")
    param = None
    if family.param is not None:
        try:
            param = float(raw)
        except ValueError:
            raise UnknownFunction(f"unknown function id {fid!r}") from None
        if not math.isfinite(param) or not family.check(param):
            raise UnknownFunction(f"unknown function id {fid!r} ({family.param_note})")
        if family.param == "int":
            param = int(param)
    test = family.default_test if test_interval is None else test_interval
    return family.builder(param, test)


def catalog_entries() -> list[dict]:
    """One record per registered family, sorted by id template."""
    rows = []
    for key in sorted(_FAMILIES, key=lambda k: _FAMILIES[k].template):
        fam = _FAMILIES[key]
        rows.append({"id": fam.template, "domain": fam.domain,
                     "parameter": fam.param_note or None,
                     "test_interval": list(fam.default_test), "summary": fam.summary})
    return sorted(rows, key=lambda r: r["id"])
