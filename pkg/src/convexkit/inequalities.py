"""Jensen-type and external Jensen inequalities for superquadratic,
uniformly convex and phi-convex functions.

Every evaluator takes one configuration (``x`` of shape ``(n,)``) or a
batch (``x`` of shape ``(trials, n)`` with matching weights) and returns a
single :class:`InequalityReport`; for a batch the report carries the worst
row. Gaps are oriented so that gap >= 0 means the inequality holds.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, PreconditionError, ValidationError, WeightError
from .functions import ErrorOrModulus, ScalarFn
from .reports import ATOL, RTOL, InequalityReport, summarize

SUM_TOL = 1e-12


def _weights_array(values) -> np.ndarray:
    v = np.array(values, dtype=float)
    if v.ndim not in (1, 2) or v.shape[-1] < 1:
        raise WeightError(f"weights must be a vector or a (trials, n) array, got shape {v.shape}")
    if not np.all(np.isfinite(v)):
        raise WeightError("weights must be finite")
    v.setflags(write=False)
    return v


@dataclass(frozen=True, eq=False)
class ConvexWeights:
    """lambda_1..lambda_n >= 0 summing to 1 (per row for a batch)."""

    values: np.ndarray

    def __post_init__(self):
        v = _weights_array(self.values)
        if np.any(v < 0):
            raise WeightError("convex weights must be nonnegative")
        if np.any(np.abs(v.sum(axis=-1) - 1) > SUM_TOL):
            raise WeightError("convex weights must sum to 1")
        object.__setattr__(self, "values", v)

    @classmethod
    def uniform(cls, n: int) -> "ConvexWeights":
        return cls(np.full(n, 1.0 / n))


@dataclass(frozen=True, eq=False)
class ExternalWeights:
    """nu_n >= 1 and nu_i <= 0 for i < n.

    The sum is not constrained, but the external Jensen inequalities are
    only guaranteed for affine weights (sum 1); other weights trigger a
    warning and a note in every report built from them.
    """

    values: np.ndarray

    def __post_init__(self):
        v = _weights_array(self.values)
        if np.any(v[..., -1] < 1):
            raise WeightError("the last external weight must be >= 1")
        if np.any(v[..., :-1] > 0):
            raise WeightError("all but the last external weight must be <= 0")
        object.__setattr__(self, "values", v)
        if not np.all(self.affine):
            warnings.warn("external weights do not sum to 1; the inequality is only "
                          "guaranteed for affine combinations", stacklevel=3)

    @property
    def affine(self) -> np.ndarray:
        return np.abs(self.values.sum(axis=-1) - 1) <= SUM_TOL


def _rows(x, w: np.ndarray):
    X = np.asarray(x, dtype=float)
    if X.ndim == 1:
        X = X[None, :]
    W = w[None, :] if w.ndim == 1 else w
    if X.ndim != 2 or X.shape[1] != W.shape[1] or W.shape[0] not in (1, X.shape[0]):
        raise ValidationError(f"points {np.shape(x)} and weights {w.shape} do not align")
    return X, np.broadcast_to(W, X.shape)


def _report(name, ref, gap, scale, X, W, notes=(), atol=ATOL, rtol=RTOL):
    return summarize(name, gap, scale, np.concatenate([X, W], axis=1), paper_ref=ref,
                     atol=atol, rtol=rtol, notes=notes)


def _jensen(fn, corr, sign, x, w: ConvexWeights, name, ref, atol, rtol):
    X, W = _rows(x, w.values)
    mean = (W * X).sum(axis=1)
    dev = np.abs(X - mean[:, None])
    lhs = fn(mean)
    fx = fn(X)
    c = corr(dev)
    gap = (W * (fx + sign * c)).sum(axis=1) - lhs
    scale = np.abs(lhs) + (W * (np.abs(fx) + np.abs(c))).sum(axis=1)
    return _report(name, ref, gap, scale, X, W, atol=atol, rtol=rtol)


def jensen_superquadratic(fn: ScalarFn, x, w: ConvexWeights, *, atol=ATOL, rtol=RTOL
                          ) -> InequalityReport:
    """f(sum l_r x_r) <= sum l_r (f(x_r) - f(|x_r - mean|))."""
    return _jensen(fn, fn, -1.0, x, w, "jensen (superquadratic)",
                   "Jensen inequality for superquadratic functions, discrete form", atol, rtol)


def jensen_uniform(fn: ScalarFn, mod: ErrorOrModulus, x, w: ConvexWeights, *,
                   atol=ATOL, rtol=RTOL) -> InequalityReport:
    """f(sum l_r x_r) <= sum l_r (f(x_r) - Phi(|x_r - mean|))."""
    return _jensen(fn, mod, -1.0, x, w, f"jensen (uniform, Phi = {mod.id})",
                   "Jensen inequality with modulus of uniform convexity", atol, rtol)


def jensen_phi(fn: ScalarFn, err: ErrorOrModulus, x, w: ConvexWeights, *,
               atol=ATOL, rtol=RTOL) -> InequalityReport:
    """f(sum l_r x_r) <= sum l_r (f(x_r) + phi(|x_r - mean|))."""
    return _jensen(fn, err, 1.0, x, w, f"jensen (phi = {err.id})",
                   "Jensen characterisation of phi-convexity", atol, rtol)


def _non_affine_notes(v: ExternalWeights, rows: int):
    affine = np.atleast_1d(v.affine)
    bad = rows if affine.size == 1 else int(np.count_nonzero(~affine))
    if not np.all(affine):
        return (f"{bad} configuration(s) with weights not summing to 1; "
                "inequality not guaranteed there",)
    return ()


def _external(fn, corr, s_tail, s_pairs, x, v: ExternalWeights, name, ref, atol, rtol,
              require_positive=False):
    X, V = _rows(x, v.values)
    S = (V * X).sum(axis=1)
    if require_positive and np.any(S <= 0):
        raise DomainError(f"{name}: sum nu_i x_i must be > 0")
    xn = X[:, -1]
    lhs = fn(S)
    fx = fn(X)
    tail = corr(np.abs(S - xn))
    pairs = corr(np.abs(X[:, :-1] - xn[:, None]))
    weighted = V[:, :-1] * pairs
    rhs = (V * fx).sum(axis=1) + s_tail * tail + s_pairs * weighted.sum(axis=1)
    scale = np.abs(lhs) + np.abs(V * fx).sum(axis=1) + np.abs(tail) + np.abs(weighted).sum(axis=1)
    return _report(name, ref, lhs - rhs, scale, X, V, _non_affine_notes(v, len(X)), atol, rtol)


def external_jensen_superquadratic(fn: ScalarFn, x, v: ExternalWeights, *, atol=ATOL,
                                   rtol=RTOL) -> InequalityReport:
    """f(S) >= sum nu_i f(x_i) + f(|S - x_n|) - sum_{i<n} nu_i f(|x_i - x_n|),
    S = sum nu_i x_i > 0."""
    return _external(fn, fn, 1.0, -1.0, x, v, "external jensen (superquadratic)",
                     "external Jensen inequality for superquadratic functions",
                     atol, rtol, require_positive=True)


def external_jensen_phi(fn: ScalarFn, err: ErrorOrModulus, x, v: ExternalWeights, *,
                        atol=ATOL, rtol=RTOL) -> InequalityReport:
    """f(S) >= sum nu_i f(x_i) - phi(|S - x_n|) + sum_{i<n} nu_i phi(|x_i - x_n|)."""
    return _external(fn, err, -1.0, 1.0, x, v, f"external jensen (phi = {err.id})",
                     "external Jensen inequality for phi-convex functions", atol, rtol)


def _external_uniform_pair(fn, mod, x, v: ExternalWeights, atol, rtol):
    X, V = _rows(x, v.values)
    n1, n2 = V[:, 0], V[:, 1]
    if np.any(n2 <= 1) or np.any(np.abs(n1 + n2 - 1) > 1e-12):
        raise PreconditionError("two-point form needs nu_2 > 1 and nu_1 = 1 - nu_2")
    reach = n2 * np.abs(X[:, 1] - X[:, 0])
    if np.any(reach > mod.length):
        raise PreconditionError(f"{mod.id} is defined on [0, {mod.length}] but needs "
                                f"nu_2 |x_2 - x_1| up to {reach.max()}")
    S = n1 * X[:, 0] + n2 * X[:, 1]
    lhs = fn(S)
    f1, f2 = fn(X[:, 0]), fn(X[:, 1])
    corr = (n1 / n2) * mod(reach)
    rhs = n1 * f1 + n2 * f2 - corr
    scale = np.abs(lhs) + np.abs(n1 * f1) + np.abs(n2 * f2) + np.abs(corr)
    return _report(f"external jensen two-point (uniform, Phi = {mod.id})",
                   "two-point external Jensen inequality for uniformly convex functions",
                   lhs - rhs, scale, X, V, atol=atol, rtol=rtol)


def external_jensen_uniform(fn: ScalarFn, mod: ErrorOrModulus, x, v: ExternalWeights, *,
                            form: str = "auto", atol=ATOL, rtol=RTOL) -> InequalityReport:
    """External Jensen for f uniformly convex with modulus Phi.

    ``form="general"``: f(S) >= sum nu_i f(x_i) + Phi(|S - x_n|)
    - sum_{i<n} nu_i Phi(|x_i - x_n|). ``form="pair"`` (the default for
    n = 2): f(S) >= nu_1 f(x_1) + nu_2 f(x_2) - (nu_1/nu_2) Phi(nu_2 |x_2 - x_1|).
    """
    n = np.shape(v.values)[-1]
    if form == "auto":
        form = "pair" if n == 2 else "general"
    if form == "pair":
        if n != 2:
            raise ValidationError("the two-point form needs exactly two points")
        return _external_uniform_pair(fn, mod, x, v, atol, rtol)
    if form != "general":
        raise ValidationError(f"unknown form {form!r}")
    return _external(fn, mod, 1.0, -1.0, x, v, f"external jensen (uniform, Phi = {mod.id})",
                     "external Jensen inequality for uniformly convex functions", atol, rtol)


def _n2_arrays(a, b, nu):
    a, b, nu = np.broadcast_arrays(*(np.atleast_1d(np.asarray(t, dtype=float)) for t in (a, b, nu)))
    return a, b, nu


def external_jensen_n2(fn: ScalarFn, a, b, nu, *, atol=ATOL, rtol=RTOL) -> InequalityReport:
    """Two-point external Jensen for superquadratic g.

    nu < 0:  (1-nu) g(a) + nu g(b) <= g(S) + nu g(|a-b|) - g(|nu| |a-b|)
    nu > 1:  (1-nu) g(a) + nu g(b) <= g(S) + (1-nu) g(|a-b|) - g((nu-1) |a-b|)
    with S = (1-nu) a + nu b >= 0.
    """
    a, b, nu = _n2_arrays(a, b, nu)
    if np.any((nu >= 0) & (nu <= 1)):
        raise PreconditionError("nu in [0, 1] is the ordinary Jensen regime")
    S = (1 - nu) * a + nu * b
    if np.any(S < 0):
        raise DomainError("(1 - nu) a + nu b must be >= 0")
    d = np.abs(a - b)
    neg = nu < 0
    lhs = (1 - nu) * fn(a) + nu * fn(b)
    gS = fn(S)
    gd = fn(d)
    # g(nu |a-b|) with nu < 0 is read as g(|nu| |a-b|)
    inner = fn(np.where(neg, -nu, nu - 1) * d)
    lin = np.where(neg, nu, 1 - nu) * gd
    rhs = gS + lin - inner
    scale = np.abs((1 - nu) * fn(a)) + np.abs(nu * fn(b)) + np.abs(gS) + np.abs(lin) + np.abs(inner)
    notes = ("nu < 0: g(nu|a-b|) evaluated at |nu||a-b|",) if np.any(neg) else ()
    return summarize("external jensen n=2 (superquadratic)", rhs - lhs, scale,
                     np.column_stack([a, b, nu]), atol=atol, rtol=rtol, notes=notes,
                     paper_ref="two-point external Jensen inequality for superquadratic functions")


def external_jensen_phi_n2(fn: ScalarFn, err: ErrorOrModulus, a, b, nu, *, atol=ATOL,
                           rtol=RTOL) -> InequalityReport:
    """(1-nu) f(a) + nu f(b) <= f(S) - (1-nu) phi(|a-b|) + phi((nu-1)|a-b|), nu >= 1.

    Same statement as :func:`external_jensen_phi` with x = (a, b),
    weights (1 - nu, nu).
    """
    a, b, nu = _n2_arrays(a, b, nu)
    if np.any(nu < 1):
        raise PreconditionError("the phi-convex two-point form needs nu >= 1")
    S = (1 - nu) * a + nu * b
    d = np.abs(a - b)
    fa, fb, fS = fn(a), fn(b), fn(S)
    p1 = (1 - nu) * err(d)
    p2 = err((nu - 1) * d)
    lhs = (1 - nu) * fa + nu * fb
    rhs = fS - p1 + p2
    scale = np.abs((1 - nu) * fa) + np.abs(nu * fb) + np.abs(fS) + np.abs(p1) + np.abs(p2)
    return summarize(f"external jensen n=2 (phi = {err.id})", rhs - lhs, scale,
                     np.column_stack([a, b, nu]), atol=atol, rtol=rtol,
                     paper_ref="two-point external Jensen inequality for phi-convex functions")
