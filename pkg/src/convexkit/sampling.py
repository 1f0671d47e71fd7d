"""Seeded random configurations for the inequality families.

Every sampler takes a ``numpy.random.Generator`` and returns arrays of
exactly ``trials`` valid configurations. Constraints that are awkward to
sample directly (an affine combination landing inside the interval, a
distance fitting the companion's domain) are met by redrawing rejected rows.
"""
from __future__ import annotations

import math
from typing import Callable

import numpy as np

from .errors import NonConvergence, ValidationError

MAX_ROUNDS = 500


def _check_interval(interval):
    lo, hi = (float(v) for v in interval)
    if not (math.isfinite(lo) and math.isfinite(hi) and hi > lo):
        raise ValidationError(f"sampling needs a finite interval, got {interval}")
    return lo, hi


def _fill(trials: int, draw: Callable[[int], tuple], valid: Callable[..., np.ndarray]):
    """Draw batches until ``trials`` rows pass ``valid``; keeps draw order."""
    parts = None
    have = 0
    for _ in range(MAX_ROUNDS):
        batch = draw(max(2 * (trials - have), 16))
        ok = valid(*batch)
        batch = tuple(b[ok] for b in batch)
        parts = batch if parts is None else tuple(np.concatenate([p, b]) for p, b in zip(parts, batch))
        have = len(parts[0])
        if have >= trials:
            return tuple(p[:trials] for p in parts)
    raise NonConvergence(f"only {have} of {trials} valid configurations after {MAX_ROUNDS} rounds")


def _active_mask(rng, trials: int, n_range) -> np.ndarray:
    n_min, n_max = n_range
    if not 1 <= n_min <= n_max:
        raise ValidationError(f"bad n range {n_range}")
    n = rng.integers(n_min, n_max + 1, size=trials)
    return np.arange(n_max)[None, :] < n[:, None]


def convex_configs(rng: np.random.Generator, interval, trials: int, n_range=(2, 6)):
    """Points uniform in ``interval`` with normalized-uniform convex weights.

    Rows have ``n_range[1]`` columns; a row with fewer points carries zero
    weight in its trailing columns.
    """
    lo, hi = _check_interval(interval)
    mask = _active_mask(rng, trials, n_range)
    X = rng.uniform(lo, hi, size=mask.shape)
    raw = rng.uniform(0.0, 1.0, size=mask.shape) * mask
    W = raw / raw.sum(axis=1, keepdims=True)
    return X, W


def external_configs(rng: np.random.Generator, interval, trials: int, n_range=(2, 6),
                     reach: float = math.inf):
    """Affine external weights: nu_n = 1 + |u|, the rest -|v_i| rescaled so sum nu = 1.

    Rows are kept when S = sum nu_i x_i lies in ``interval`` and every
    distance |S - x_n|, |x_i - x_n| is at most ``reach``; with a finite
    reach the other points are drawn within ``reach`` of x_n. The active point
    count varies per row; inactive columns sit before the last one with
    weight 0.
    """
    lo, hi = _check_interval(interval)
    n_max = n_range[1]

    def draw(k):
        mask = _active_mask(rng, k, (n_range[0] - 1, n_max - 1))
        X = rng.uniform(lo, hi, size=(k, n_max))
        if math.isfinite(reach):
            # draw the other points near x_n so short reaches are not mostly rejected
            xn = X[:, -1:]
            X[:, :-1] = rng.uniform(np.maximum(lo, xn - reach), np.minimum(hi, xn + reach),
                                    size=(k, n_max - 1))
        s = np.abs(rng.standard_normal(k))
        v = rng.uniform(0.0, 1.0, size=(k, n_max - 1)) * mask
        neg = -s[:, None] * v / v.sum(axis=1, keepdims=True)
        V = np.column_stack([neg, 1.0 + s])
        return X, V

    def valid(X, V):
        S = (V * X).sum(axis=1)
        xn = X[:, -1]
        ok = (S >= lo) & (S <= hi) & (np.abs(S - xn) <= reach)
        return ok & np.all(np.abs(X - xn[:, None]) <= reach, axis=1)

    return _fill(trials, draw, valid)


def pair_uniform_configs(rng: np.random.Generator, interval, trials: int,
                         reach: float = math.inf):
    """(x_1, x_2) with nu_2 = 1 + |u| > 1, nu_1 = 1 - nu_2, S in ``interval``
    and nu_2 |x_2 - x_1| <= ``reach``."""
    lo, hi = _check_interval(interval)

    def draw(k):
        X = rng.uniform(lo, hi, size=(k, 2))
        n2 = 1.0 + np.abs(rng.standard_normal(k))
        return X, np.column_stack([1.0 - n2, n2])

    def valid(X, V):
        S = (V * X).sum(axis=1)
        return (S >= lo) & (S <= hi) & (V[:, 1] * np.abs(X[:, 1] - X[:, 0]) <= reach)

    return _fill(trials, draw, valid)


def n2_configs(rng: np.random.Generator, interval, trials: int):
    """(a, b, nu) for the two-point external forms, half with nu < 0 and half
    with nu > 1; every argument the inequality evaluates stays in ``interval``."""
    lo, hi = _check_interval(interval)

    def draw(k):
        a, b = rng.uniform(lo, hi, size=(2, k))
        mag = np.abs(rng.standard_normal(k))
        nu = np.where(rng.uniform(size=k) < 0.5, -mag, 1.0 + mag)
        return a, b, nu

    def valid(a, b, nu):
        S = (1 - nu) * a + nu * b
        d = np.abs(a - b)
        scaled = np.maximum(np.abs(nu), np.abs(nu - 1)) * d
        inside = (S >= lo) & (S <= hi)
        # distances are evaluated from 0, so they must fit [0, hi] as well
        return inside & (d <= hi) & (scaled <= hi) & (nu != 0) & (nu != 1)

    return _fill(trials, draw, valid)


def interval_configs(rng: np.random.Generator, interval, trials: int,
                     max_width: float = math.inf):
    """Endpoints a < b in ``interval`` with b - a <= ``max_width``."""
    lo, hi = _check_interval(interval)

    def draw(k):
        u, v = rng.uniform(lo, hi, size=(2, k))
        return np.minimum(u, v), np.maximum(u, v)

    return _fill(trials, draw, lambda a, b: (b > a) & (b - a <= max_width))


def gamma_pair_configs(rng: np.random.Generator, length: float, trials: int):
    """(x, y) with x >= 0, y > 0 and x + y <= ``length`` (finite)."""
    _check_interval((0.0, length))
    x, y = rng.uniform(0.0, length, size=(2, trials))
    flip = x + y > length
    x = np.where(flip, length - x, x)
    y = np.where(flip, length - y, y)
    y = np.where(y == 0, length / 2, y)
    return np.column_stack([x, y])


def bound_samples(rng: np.random.Generator, trials: int, n_range=(2, 12), hi: float = 10.0):
    """(points, weights) pairs with x in (0, hi) and Dirichlet(1) weights."""
    out = []
    for _ in range(trials):
        n = int(rng.integers(n_range[0], n_range[1] + 1))
        x = rng.uniform(0.0, hi, size=n)
        while np.any(x <= 0):
            x = rng.uniform(0.0, hi, size=n)
        w = rng.dirichlet(np.ones(n))
        w = w / w.sum()
        out.append((x, w))
    return out
