"""Adaptive Simpson quadrature and refined Hermite-Hadamard chains.

The integrator is breadth-first: all live subintervals of all problems in a
batch are refined together, so one numpy call evaluates a whole level.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .errors import DomainError, NonConvergence, NonFinite, ValidationError
from .functions import ErrorOrModulus, ScalarFn
from .reports import ATOL, RTOL, HHReport, InequalityReport, summarize

MAX_DEPTH = 40
QUAD_TOL = 1e-10
_ROUNDOFF = 50 * np.finfo(float).eps

BatchIntegrand = Callable[[np.ndarray, np.ndarray], np.ndarray]


@dataclass(frozen=True)
class QuadratureResult:
    value: float
    error_estimate: float
    evaluations: int


def integrate_batch(g: BatchIntegrand, a, b, tol: float = QUAD_TOL, split_mid: bool = False):
    """Integrate K problems at once.

    ``g(t, k)`` evaluates problem ``k[i]`` at ``t[i]``. Each problem gets the
    absolute tolerance ``tol``, shared among its subintervals in proportion to
    their length. Returns arrays ``(values, error_estimates, evaluations)``.
    """
    a = np.atleast_1d(np.asarray(a, dtype=float))
    b = np.atleast_1d(np.asarray(b, dtype=float))
    if a.shape != b.shape or a.ndim != 1:
        raise ValidationError("a and b must be matching 1-d arrays")
    if not np.all(np.isfinite(a) & np.isfinite(b)) or np.any(a >= b):
        raise ValidationError("integration needs finite a < b")
    if not tol > 0:
        raise ValidationError("tolerance must be positive")
    K = a.size
    owner = np.arange(K)
    lo, hi, tl = a.copy(), b.copy(), np.full(K, float(tol))
    if split_mid:
        m = 0.5 * (a + b)
        lo, hi = np.concatenate([a, m]), np.concatenate([m, b])
        owner = np.concatenate([owner, owner])
        tl = np.full(2 * K, 0.5 * tol)

    evals = np.zeros(K, dtype=np.int64)

    def G(t, own):
        y = np.asarray(g(t, own), dtype=float) * np.ones_like(t)
        if not np.all(np.isfinite(y)):
            i = int(np.argmax(~np.isfinite(y)))
            raise NonFinite(f"integrand not finite at t={t[i]!r}")
        np.add.at(evals, own, 1)
        return y

    mid = 0.5 * (lo + hi)
    fa, fm, fb = G(lo, owner), G(mid, owner), G(hi, owner)
    whole = (hi - lo) / 6 * (fa + 4 * fm + fb)
    values = np.zeros(K)
    errors = np.zeros(K)
    for depth in range(MAX_DEPTH + 1):
        if lo.size == 0:
            break
        lm, rm = 0.5 * (lo + mid), 0.5 * (mid + hi)
        flm, frm = G(lm, owner), G(rm, owner)
        left = (mid - lo) / 6 * (fa + 4 * flm + fm)
        right = (hi - mid) / 6 * (fm + 4 * frm + fb)
        delta = left + right - whole
        limit = np.maximum(15 * tl, _ROUNDOFF * (np.abs(left) + np.abs(right)))
        done = np.abs(delta) <= limit
        if depth == MAX_DEPTH and not np.all(done):
            i = int(np.argmax(~done))
            raise NonConvergence(f"no convergence on [{lo[i]}, {hi[i]}] after {MAX_DEPTH} bisections")
        np.add.at(values, owner[done], (left + right + delta / 15)[done])
        np.add.at(errors, owner[done], np.abs(delta[done]) / 15)
        k = ~done
        lo, mid, hi = (np.concatenate([lo[k], mid[k]]), np.concatenate([lm[k], rm[k]]),
                       np.concatenate([mid[k], hi[k]]))
        fa, fm, fb = (np.concatenate([fa[k], fm[k]]), np.concatenate([flm[k], frm[k]]),
                      np.concatenate([fm[k], fb[k]]))
        whole = np.concatenate([left[k], right[k]])
        tl = np.concatenate([tl[k], tl[k]]) * 0.5
        owner = np.concatenate([owner[k], owner[k]])
    return values, errors, evals


def integrate(g: Callable[[np.ndarray], np.ndarray], a: float, b: float,
              tol: float = QUAD_TOL) -> QuadratureResult:
    """Adaptive Simpson integral of a vectorized ``g`` over [a, b]."""
    v, e, n = integrate_batch(lambda t, k: g(t), [a], [b], tol)
    return QuadratureResult(float(v[0]), float(e[0]), int(n[0]))


# --- Hermite-Hadamard chains -------------------------------------------------

_KINDS = {
    "superquadratic": ("hermite-hadamard (superquadratic)",
                       "refined Hermite-Hadamard inequality for superquadratic functions"),
    "phi": ("hermite-hadamard (phi-convex)",
            "Hermite-Hadamard inequality for phi-convex functions"),
    "uniform": ("hermite-hadamard (uniformly convex)",
                "Hermite-Hadamard inequality for uniformly convex functions"),
}


def _validate(kind, fn, comp, A, B):
    if np.any(A >= B):
        raise ValidationError("Hermite-Hadamard chains need a < b")
    if kind == "superquadratic":
        if np.any(A < 0):
            raise DomainError("the superquadratic chain needs 0 <= a")
        if fn.domain[0] > 0 or np.any(B > fn.domain[1]):
            raise DomainError(f"{fn.id}: [0, b] must lie in the domain {fn.domain}")
        return
    if np.any(A < fn.domain[0]) or np.any(B > fn.domain[1]):
        raise DomainError(f"{fn.id}: [a, b] leaves the domain {fn.domain}")
    if np.any(B - A > comp.length):
        raise DomainError(f"{comp.id} lives on [0, {comp.length}], shorter than b - a")


def hh_arrays(kind: str, fn: ScalarFn, comp: Optional[ErrorOrModulus], a, b,
              tol: float = QUAD_TOL):
    """Chain members for many intervals at once.

    Returns ``(lower, middle, upper, quad_error)`` arrays; ``quad_error``
    bounds the quadrature contribution to each member.
    """
    if kind not in _KINDS:
        raise ValidationError(f"unknown chain {kind!r}")
    A = np.atleast_1d(np.asarray(a, dtype=float))
    B = np.atleast_1d(np.asarray(b, dtype=float))
    A, B = np.broadcast_arrays(A, B)
    _validate(kind, fn, comp, A, B)
    corr = fn if kind == "superquadratic" else comp
    w = B - A
    mid = 0.5 * (A + B)
    # |t - mid| has a kink at the midpoint, so every integral starts split there
    I_f, e_f, _ = integrate_batch(lambda t, k: fn(t), A, B, tol, split_mid=True)
    I_c, e_c, _ = integrate_batch(lambda t, k: corr(np.abs(t - mid[k])), A, B, tol,
                                  split_mid=True)
    f_mid, f_a, f_b = fn(mid), fn(A), fn(B)
    middle = I_f / w
    ends = 0.5 * (f_a + f_b)
    err = (e_f + e_c) / w
    if kind == "uniform":
        lower = f_mid + I_c / w
        upper = ends - comp(w) / 6
    else:
        I_u, e_u, _ = integrate_batch(
            lambda t, k: (B[k] - t) * corr(t - A[k]) + (t - A[k]) * corr(B[k] - t),
            A, B, tol, split_mid=True)
        err = err + e_u / w ** 2
        if kind == "superquadratic":
            lower = f_mid + I_c / w
            upper = ends - I_u / w ** 2
        else:
            lower = f_mid - I_c / w
            upper = ends + I_u / w ** 2
    return lower, middle, upper, err


def _chain(kind, fn, comp, a, b, tol):
    lower, middle, upper, err = hh_arrays(kind, fn, comp, [a], [b], tol)
    scale = max(1.0, abs(lower[0]), abs(middle[0]), abs(upper[0]))
    name, ref = _KINDS[kind]
    return HHReport(name, float(a), float(b), float(lower[0]), float(middle[0]),
                    float(upper[0]), float(err[0] + RTOL * scale), ref)


def hh_superquadratic(fn: ScalarFn, a: float, b: float, tol: float = QUAD_TOL) -> HHReport:
    """f(m) + avg f(|t-m|) <= avg f <= (f(a)+f(b))/2 - (1/(b-a)^2) int[(b-t)f(t-a) + (t-a)f(b-t)]."""
    return _chain("superquadratic", fn, None, a, b, tol)


def hh_phi(fn: ScalarFn, err: ErrorOrModulus, a: float, b: float,
           tol: float = QUAD_TOL) -> HHReport:
    """f(m) - avg phi(|t-m|) <= avg f <= (f(a)+f(b))/2 + (1/(b-a)^2) int[(b-t)phi(t-a) + (t-a)phi(b-t)]."""
    return _chain("phi", fn, err, a, b, tol)


def hh_uniform(fn: ScalarFn, mod: ErrorOrModulus, a: float, b: float,
               tol: float = QUAD_TOL) -> HHReport:
    """f(m) + avg Phi(|t-m|) <= avg f <= (f(a)+f(b))/2 - Phi(b-a)/6."""
    return _chain("uniform", fn, mod, a, b, tol)


def hh_family(kind: str, fn: ScalarFn, comp: Optional[ErrorOrModulus], a, b,
              tol: float = QUAD_TOL, atol: float = ATOL, rtol: float = RTOL
              ) -> InequalityReport:
    """Both chain gaps over many intervals, as one report.

    Witnesses are (a, b, side) with side 0 for the lower gap and 1 for the
    upper gap.
    """
    lower, middle, upper, err = hh_arrays(kind, fn, comp, a, b, tol)
    A, B = np.broadcast_arrays(np.atleast_1d(np.asarray(a, float)),
                               np.atleast_1d(np.asarray(b, float)))
    scale = np.maximum.reduce([np.ones_like(lower), np.abs(lower), np.abs(middle), np.abs(upper)])
    gaps = np.column_stack([middle - lower, upper - middle]).ravel()
    wit = np.column_stack([np.repeat(A, 2), np.repeat(B, 2), np.tile([0.0, 1.0], A.size)])
    name, ref = _KINDS[kind]
    return summarize(name, gaps, np.repeat(scale, 2), wit, paper_ref=ref, atol=atol,
                     rtol=rtol, extra_tolerance=np.repeat(err, 2))
