import math
import warnings

import numpy as np
import pytest
from hypothesis import given, strategies as st

from convexkit.errors import DomainError, PreconditionError, ValidationError, WeightError
from convexkit.functions import catalog_lookup, power_companion, zero_companion
from convexkit.inequalities import (ConvexWeights, ExternalWeights, external_jensen_n2,
                                    external_jensen_phi, external_jensen_phi_n2,
                                    external_jensen_superquadratic, external_jensen_uniform,
                                    jensen_phi, jensen_superquadratic, jensen_uniform)
from convexkit.sampling import convex_configs, external_configs, n2_configs

HALF = ConvexWeights([0.5, 0.5])
THIRDS = ConvexWeights.uniform(3)
NU = ExternalWeights([-1.0, 2.0])


def test_weight_validation():
    with pytest.raises(WeightError):
        ConvexWeights([0.5, 0.6])
    with pytest.raises(WeightError):
        ConvexWeights([-0.5, 1.5])
    with pytest.raises(WeightError):
        ExternalWeights([0.5, 0.5])
    with pytest.raises(WeightError):
        ExternalWeights([1.0, 1.0])
    with pytest.raises(WeightError):
        ConvexWeights([math.nan, 1.0])
    ConvexWeights([1.0])


def test_non_affine_external_weights_warn_and_are_noted():
    with pytest.warns(UserWarning):
        v = ExternalWeights([-1.0, 3.0])
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        rep = external_jensen_superquadratic(catalog_lookup("pow:3"), [1.0, 2.0], v)
    assert any("not summing to 1" in n for n in rep.notes)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        assert not external_jensen_superquadratic(catalog_lookup("pow:3"), [1.0, 2.0], NU).notes


def test_jensen_superquadratic_examples():
    rep = jensen_superquadratic(catalog_lookup("pow:2"), [1, 3], HALF)
    assert rep.min_gap == 0 and rep.passed
    rep = jensen_superquadratic(catalog_lookup("pow:3"), [1, 2, 3], THIRDS)
    assert rep.min_gap == pytest.approx(10 / 3, rel=1e-12)


def test_jensen_constant_sample_gives_minus_f0():
    fn = catalog_lookup("atan_neg")
    rep = jensen_superquadratic(fn, [2.0, 2.0, 2.0], THIRDS)
    assert rep.min_gap == pytest.approx(-fn(0.0), abs=1e-15)
    rep = jensen_uniform(catalog_lookup("pow:3"), power_companion(3), [2.0, 2.0], HALF)
    assert rep.min_gap == 0


def test_jensen_uniform_examples():
    rep = jensen_uniform(catalog_lookup("two_pow:2"), power_companion(2, 2.0), [1, 3], HALF)
    assert rep.min_gap == 0
    rep = jensen_uniform(catalog_lookup("pow:3"), power_companion(3), [1, 2, 3], THIRDS)
    # mean 2: (1 + 8 + 27)/3 - (1 + 0 + 1)/3 - 8
    assert rep.min_gap == pytest.approx(34 / 3 - 8, rel=1e-12)


def test_jensen_phi_examples():
    rep = jensen_phi(catalog_lookup("neg_pow:1.5"), power_companion(1.5), [1, 4], HALF)
    expected = -4.5 + 1.5 ** 1.5 + 2.5 ** 1.5
    assert rep.min_gap == pytest.approx(expected, rel=1e-12)
    assert rep.min_gap == pytest.approx(1.2899, abs=1e-4)
    rep = jensen_phi(catalog_lookup("pow:3"), zero_companion(), [1, 2, 3], THIRDS)
    assert rep.min_gap == pytest.approx(4.0, rel=1e-12)
    assert jensen_phi(catalog_lookup("neg_pow:1.5"), power_companion(1.5), [2, 2], HALF).min_gap == 0


def test_external_superquadratic_examples():
    assert external_jensen_superquadratic(catalog_lookup("pow:2"), [1, 2], NU).min_gap == 0
    rep = external_jensen_superquadratic(catalog_lookup("pow:3"), [1, 2], NU)
    assert rep.min_gap == 10
    fn = catalog_lookup("atan_neg")
    rep = external_jensen_superquadratic(fn, [3.0, 1.5], ExternalWeights([0.0, 1.0]))
    assert rep.min_gap == pytest.approx(-fn(0.0), abs=1e-15)


def test_external_superquadratic_needs_positive_combination():
    with pytest.raises(DomainError):
        external_jensen_superquadratic(catalog_lookup("pow:3"), [3, 1], ExternalWeights([-1, 2]))


def test_external_n2_examples():
    assert external_jensen_n2(catalog_lookup("pow:2"), 1, 2, 2).min_gap == 0
    assert external_jensen_n2(catalog_lookup("pow:3"), 1, 2, 2).min_gap == 10
    rep = external_jensen_n2(catalog_lookup("pow:2"), 2, 1, -1)
    assert rep.min_gap == 0 and rep.notes


def test_external_n2_preconditions():
    with pytest.raises(PreconditionError):
        external_jensen_n2(catalog_lookup("pow:2"), 1, 2, 0.5)
    with pytest.raises(DomainError):
        external_jensen_n2(catalog_lookup("pow:2"), 1, 0, 2)


def test_external_phi_examples():
    rep = external_jensen_phi(catalog_lookup("neg_pow:1.5"), power_companion(1.5), [1, 2], NU)
    expected = -3 ** 1.5 - (1 - 2 * 2 ** 1.5 - 2)
    assert rep.min_gap == pytest.approx(expected, rel=1e-12)
    assert rep.min_gap == pytest.approx(1.461, abs=1e-3)
    rep = external_jensen_phi(catalog_lookup("neg_pow:2"), power_companion(2), [1, 2], NU)
    assert abs(rep.min_gap) <= rep.tolerance


def test_external_phi_affine_function_is_equality():
    affine = catalog_lookup("pow:1")
    rep = external_jensen_phi(affine, zero_companion(), [1.0, 2.0, 5.0],
                              ExternalWeights([-0.5, -0.25, 1.75]))
    assert abs(rep.min_gap) <= rep.tolerance


def test_external_phi_n2_matches_general_form():
    fn, err = catalog_lookup("neg_pow:1.5"), power_companion(1.5)
    for a, b, nu in [(1.0, 2.0, 2.0), (3.0, 2.5, 1.5), (0.5, 4.0, 1.25)]:
        pair = external_jensen_phi_n2(fn, err, a, b, nu)
        gen = external_jensen_phi(fn, err, [a, b], ExternalWeights([1 - nu, nu]))
        assert pair.min_gap == pytest.approx(gen.min_gap, abs=1e-12)
    with pytest.raises(PreconditionError):
        external_jensen_phi_n2(fn, err, 1.0, 2.0, 0.5)


def test_external_uniform_examples():
    rep = external_jensen_uniform(catalog_lookup("two_pow:2"), power_companion(2, 2.0), [1, 2], NU)
    assert rep.min_gap == 0
    rep = external_jensen_uniform(catalog_lookup("pow:4"), power_companion(4), [1, 2], NU)
    assert rep.min_gap == 42
    rep = external_jensen_uniform(catalog_lookup("pow:4"), power_companion(4), [2, 2], NU)
    assert rep.min_gap == 0


def test_external_uniform_forms():
    fn, mod = catalog_lookup("pow:4"), power_companion(4)
    v3 = ExternalWeights([-0.25, -0.25, 1.5])
    assert external_jensen_uniform(fn, mod, [1, 2, 3], v3).passed
    with pytest.raises(ValidationError):
        external_jensen_uniform(fn, mod, [1, 2, 3], v3, form="pair")
    with pytest.raises(ValidationError):
        external_jensen_uniform(fn, mod, [1, 2], NU, form="other")
    with pytest.raises(PreconditionError):
        external_jensen_uniform(fn, power_companion(4, length=1.0), [1, 2], NU)


def test_points_and_weights_must_align():
    with pytest.raises(ValidationError):
        jensen_superquadratic(catalog_lookup("pow:3"), [1, 2, 3], HALF)


# --- invariants ---------------------------------------------------------------

QUADRATIC_EVALUATORS = [
    lambda X, W: jensen_superquadratic(catalog_lookup("pow:2"), X, ConvexWeights(W)),
    lambda X, W: jensen_uniform(catalog_lookup("two_pow:2"), power_companion(2, 2.0), X,
                                ConvexWeights(W)),
    lambda X, W: jensen_phi(catalog_lookup("neg_pow:2"), power_companion(2), X, ConvexWeights(W)),
]


@pytest.mark.parametrize("evaluate", QUADRATIC_EVALUATORS)
def test_quadratics_are_equality_cases(evaluate):
    X, W = convex_configs(np.random.default_rng(3), (0.0, 10.0), 2000)
    rep = evaluate(X, W)
    assert rep.passed and rep.is_equality


def test_quadratics_are_equality_cases_external():
    X, V = external_configs(np.random.default_rng(4), (0.0, 10.0), 2000)
    v = ExternalWeights(V)
    for rep in (external_jensen_superquadratic(catalog_lookup("pow:2"), X, v),
                external_jensen_phi(catalog_lookup("neg_pow:2"), power_companion(2), X, v),
                external_jensen_uniform(catalog_lookup("two_pow:2"), power_companion(2, 2.0), X,
                                        v, form="general")):
        assert rep.is_equality, rep.name


@pytest.mark.parametrize("fid", ["pow:2.5", "pow:3", "atan_neg", "cipu_int", "lp_root:2",
                                 "neg_pow:1.5", "xsq_ln"])
def test_superquadratic_families_hold(fid):
    fn = catalog_lookup(fid)
    interval = (0.0, 1.0) if fid == "xsq_ln" else fn.test_interval
    rng = np.random.default_rng(7)
    X, W = convex_configs(rng, interval, 10_000)
    assert jensen_superquadratic(fn, X, ConvexWeights(W)).passed
    X, V = external_configs(rng, interval, 10_000)
    assert external_jensen_superquadratic(fn, X, ExternalWeights(V)).passed


def test_n2_agrees_with_general_form():
    fn = catalog_lookup("pow:3")
    a, b, nu = n2_configs(np.random.default_rng(5), (0.0, 10.0), 500)
    big = nu > 1
    for ai, bi, ni in zip(a[big], b[big], nu[big]):
        pair = external_jensen_n2(fn, ai, bi, ni)
        gen = external_jensen_superquadratic(fn, [ai, bi], ExternalWeights([1 - ni, ni]))
        assert pair.min_gap == pytest.approx(gen.min_gap, abs=1e-12 * max(1.0, abs(gen.min_gap)))


@given(st.floats(2.0, 5.0), st.floats(0.1, 10.0),
       st.lists(st.floats(0.1, 5.0), min_size=3, max_size=3))
def test_scaling_covariance(p, s, xs):
    fn = catalog_lookup(f"pow:{p!r}")
    w = THIRDS
    base = jensen_superquadratic(fn, xs, w).min_gap
    scaled = jensen_superquadratic(fn, [s * x for x in xs], w).min_gap
    scale_ref = sum(x ** p for x in xs) * s ** p
    assert scaled == pytest.approx(s ** p * base, rel=1e-9, abs=1e-12 * scale_ref)


@given(st.floats(0.1, 5.0), st.floats(0.1, 5.0), st.floats(1.01, 3.0), st.floats(0.1, 4.0))
def test_external_scaling_covariance(x1, x2, nu, s):
    fn = catalog_lookup("pow:3")
    v = ExternalWeights([1 - nu, nu])
    if (1 - nu) * x1 + nu * x2 <= 0:
        return
    base = external_jensen_superquadratic(fn, [x1, x2], v).min_gap
    scaled = external_jensen_superquadratic(fn, [s * x1, s * x2], v).min_gap
    ref = (abs(nu) * (x1 + x2) + x2) ** 3 * s ** 3
    assert scaled == pytest.approx(s ** 3 * base, rel=1e-9, abs=1e-12 * ref)
