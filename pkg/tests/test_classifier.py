import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from convexkit.classifier import (GridSpec, certificate_checks, check_convexity,
                                  check_derivative_ratio_criterion, check_gamma, check_gamma_closure,
                                  check_lemma2_criterion, check_minus_gamma, check_phi_convexity,
                                  check_subadditive_consequences, check_subquadratic,
                                  check_superquadratic, check_uniform_convexity, gamma_sides,
                                  lemma1_sanity)
from convexkit.errors import CertificateError, DomainError, PreconditionError, ValidationError
from convexkit.functions import (CertKind, ClassCertificate, ScalarFn, catalog_lookup,
                                 make_companion, negated_companion, power_companion,
                                 zero_companion)

G10 = GridSpec((0.0, 10.0))


def _fn(fid, rule, domain=(0.0, math.inf), **kw):
    return ScalarFn(fid, domain, rule, **kw)


def test_grid_validation():
    with pytest.raises(ValidationError):
        GridSpec((1.0, 1.0))
    with pytest.raises(ValidationError):
        GridSpec((0.0, math.inf))
    with pytest.raises(ValidationError):
        GridSpec((0.0, 1.0), point_count=1)
    ts = GridSpec((0.0, 1.0), t_count=4).ts()
    np.testing.assert_allclose(ts, [0.125, 0.375, 0.625, 0.875])


def test_superquadratic_examples():
    sq = check_superquadratic(catalog_lookup("pow:2"), G10)
    assert sq.passed and abs(sq.min_gap) <= sq.tolerance
    assert check_superquadratic(catalog_lookup("pow:3"), G10).passed
    bad = check_superquadratic(catalog_lookup("pow:1.5"), G10)
    assert not bad.passed and bad.min_gap < -bad.tolerance
    assert len(bad.witness) == 2


def test_superquadratic_witness_reproduces():
    fn = catalog_lookup("pow:1.5")
    x, y = check_superquadratic(fn, G10).witness
    d = 1.5 * x ** 0.5
    assert y ** 1.5 - x ** 1.5 - d * (y - x) - abs(y - x) ** 1.5 < 0


def test_subquadratic_examples():
    assert check_subquadratic(catalog_lookup("pow:1.5"), G10).passed
    rep = check_subquadratic(catalog_lookup("pow:2"), G10)
    assert rep.passed and abs(rep.min_gap) <= rep.tolerance
    assert not check_subquadratic(catalog_lookup("pow:3"), G10).passed


def test_superquadratic_domain_errors():
    with pytest.raises(DomainError):
        check_superquadratic(catalog_lookup("xsqrt_neglog"), GridSpec((0.0, 2.0)))
    shifted = _fn("shifted", lambda x: x ** 2, domain=(1.0, 5.0))
    with pytest.raises(DomainError):
        check_superquadratic(shifted, GridSpec((1.0, 5.0)))


def test_custom_c_rule():
    # for x^2 any C_x other than 2x breaks the inequality on one side
    rep = check_superquadratic(catalog_lookup("pow:2"), G10, c_rule=lambda x: 2 * x + 1)
    assert not rep.passed


def test_lemma1_examples():
    assert lemma1_sanity(catalog_lookup("pow:3"), G10).passed
    assert lemma1_sanity(catalog_lookup("xsq_ln"), GridSpec((0.0, 1.0))).passed
    assert lemma1_sanity(catalog_lookup("atan_neg"), G10).passed


def test_lemma1_flags_positive_value_at_zero():
    lifted = _fn("plus_one", lambda x: x ** 2 + 1,
                 certificates=(ClassCertificate(CertKind.SUPERQUADRATIC),))
    assert not lemma1_sanity(lifted, G10).passed
    with pytest.raises(CertificateError):
        lemma1_sanity(_fn("plain", lambda x: x ** 2), G10)


def test_lemma2_examples():
    rep = check_lemma2_criterion(catalog_lookup("xsqrt_neglog"), GridSpec((0.0, math.exp(-1))))
    assert rep.passed and len(rep.sub_reports) == 3
    zero = _fn("zero", np.zeros_like)
    zrep = check_lemma2_criterion(zero, G10)
    assert zrep.passed and zrep.min_gap == 0
    assert not check_lemma2_criterion(catalog_lookup("pow:1.5"), G10).passed


def test_derivative_ratio_examples():
    assert check_derivative_ratio_criterion(catalog_lookup("atan_neg"), G10).passed
    assert check_derivative_ratio_criterion(catalog_lookup("pow:2"), G10).passed
    bad = check_derivative_ratio_criterion(catalog_lookup("pow:1.5"), G10)
    assert not bad.passed and all(not r.passed for r in bad.sub_reports)


def test_derivative_ratio_precondition():
    with pytest.raises(PreconditionError):
        check_derivative_ratio_criterion(_fn("lifted", lambda x: x ** 2 + 1), G10)


def test_uniform_convexity_examples():
    rep = check_uniform_convexity(catalog_lookup("two_pow:2"), power_companion(2, 2.0),
                                  GridSpec((1.0, 2.0)))
    assert rep.passed and abs(rep.min_gap) <= rep.tolerance
    two4 = catalog_lookup("two_pow:4")
    mod = {c.companion.id: c.companion for c in two4.certificates if c.companion}["x^4(3x-x^3)"]
    assert check_uniform_convexity(two4, mod, GridSpec((1.0, 2.0))).passed
    assert not check_uniform_convexity(catalog_lookup("pow:1.5"), power_companion(2),
                                       G10).passed


def test_uniform_modulus_too_short():
    with pytest.raises(DomainError):
        check_uniform_convexity(catalog_lookup("pow:4"), power_companion(4, length=1.0),
                                GridSpec((0.0, 2.0)))


def test_phi_convexity_examples():
    assert check_phi_convexity(catalog_lookup("neg_pow:1.5"), power_companion(1.5), G10).passed
    assert check_phi_convexity(catalog_lookup("pow:4"), zero_companion(), G10).passed
    assert check_phi_convexity(catalog_lookup("neg_pow:2"), power_companion(1.5),
                               GridSpec((1.0, 2.0))).passed


def test_phi_convexity_needs_nonnegative_err():
    err = make_companion("neg", lambda x: -x, nonnegative=False)
    with pytest.raises(PreconditionError):
        check_phi_convexity(catalog_lookup("pow:2"), err, G10)


def test_gamma_examples():
    sq = check_gamma(power_companion(2), G10)
    assert sq.passed and abs(sq.min_gap) <= sq.tolerance
    cube = check_gamma(power_companion(3), G10, pairs=[(1.0, 1.0)])
    assert not cube.passed and cube.min_gap == -4.0
    lhs, rhs = gamma_sides(power_companion(3), 1.0, 1.0)
    assert (lhs, rhs) == (8.0, 4.0)
    phi = negated_companion(catalog_lookup("xsq_ln"), 1.0)
    assert check_gamma(phi, GridSpec((0.0, 1.0))).passed


def test_gamma_pair_domain():
    with pytest.raises(DomainError):
        check_gamma(power_companion(2, length=1.0), pairs=[(0.6, 0.6)])
    with pytest.raises(DomainError):
        check_gamma(power_companion(2), pairs=[(1.0, 0.0)])


def test_minus_gamma_examples():
    rep = check_minus_gamma(catalog_lookup("pow:2"), G10)
    assert rep.passed
    ratio = [r for r in rep.sub_reports if "ratio" in r.name][0]
    assert abs(ratio.min_gap) <= ratio.tolerance
    assert check_minus_gamma(catalog_lookup("pow:3"), G10).passed
    assert not check_minus_gamma(catalog_lookup("pow:1.5"), G10).passed


def test_subadditive_examples():
    sq = check_subadditive_consequences(power_companion(2), G10)
    root = [r for r in sq.sub_reports if "sqrt" in r.name][0]
    assert sq.passed and abs(root.min_gap) <= root.tolerance
    assert check_subadditive_consequences(power_companion(1.5), G10).passed
    with pytest.raises(PreconditionError):
        check_subadditive_consequences(power_companion(3), G10)


def test_gamma_closure_examples():
    one = _fn("one", np.ones_like)
    assert check_gamma_closure(power_companion(2), one, G10).passed
    decay = _fn("exp(-x)", lambda x: np.exp(-x))
    assert check_gamma_closure(power_companion(2), decay, G10).passed
    with pytest.raises(PreconditionError):
        check_gamma_closure(power_companion(2), _fn("x", lambda x: x), G10)


def test_gamma_closure_rejects_negative_psi():
    with pytest.raises(PreconditionError):
        check_gamma_closure(power_companion(2), _fn("neg", lambda x: -np.ones_like(x)), G10)


CERTIFIED = ["pow:2", "pow:2.5", "pow:3", "pow:4", "pow:1.5", "pow:0.5", "neg_pow:1",
             "neg_pow:1.5", "neg_pow:2", "xsq_ln", "lp_root:0.5", "lp_root:2", "lp_root:3",
             "atan_neg", "cipu_int", "two_pow:2", "two_pow:4", "x_shift_even:1",
             "x_shift_even:2", "xsqrt_neglog"]


@pytest.mark.parametrize("fid", CERTIFIED)
def test_catalog_certificates_pass_their_checks(fid):
    reports = certificate_checks(catalog_lookup(fid), point_count=48, t_count=8)
    assert reports
    failed = [(r.name, r.min_gap, r.witness) for r in reports if not r.passed]
    assert not failed


def test_x_shift_odd_false_on_the_half_line():
    # strong convexity only holds from x = 2 on; near 0 the modulus is too large
    fn = catalog_lookup("x_shift_odd:1")
    (mod,) = {c.companion for c in fn.certificates if c.companion is not None}
    assert check_uniform_convexity(fn, mod, GridSpec((2.0, 4.0))).passed
    assert not check_uniform_convexity(fn, mod, GridSpec((0.0, 2.0))).passed


@pytest.mark.parametrize("fid", ["pow:2", "pow:1.5", "pow:3", "xsq_ln", "atan_neg"])
def test_duality_only_on_equality(fid):
    fn = catalog_lookup(fid)
    grid = GridSpec((0.0, 1.0) if fid == "xsq_ln" else (0.0, 10.0), point_count=40)
    sup, sub = check_superquadratic(fn, grid), check_subquadratic(fn, grid)
    if sup.passed and sub.passed:
        assert abs(sup.min_gap) <= sup.tolerance and abs(sub.min_gap) <= sub.tolerance


@pytest.mark.parametrize("fid", ["pow:2.5", "pow:3", "pow:4", "atan_neg", "cipu_int", "lp_root:2"])
def test_superquadratic_implies_minus_gamma(fid):
    fn = catalog_lookup(fid)
    grid = GridSpec.for_fn(fn, point_count=40)
    assert check_superquadratic(fn, grid).passed
    assert check_minus_gamma(fn, grid).passed


@given(st.floats(2.0, 5.0), st.floats(0.5, 3.0))
def test_uniform_refines_convexity(p, hi):
    fn = catalog_lookup(f"pow:{p!r}")
    grid = GridSpec((0.0, hi), point_count=12, t_count=6)
    mod = power_companion(p) if float(p).is_integer() else zero_companion()
    if check_uniform_convexity(fn, mod, grid).passed:
        assert check_convexity(fn, grid).passed


@given(st.floats(1.0, 2.0), st.floats(0.0, 50.0), st.floats(1e-3, 50.0))
def test_power_gamma_holds_for_p_between_one_and_two(p, x, y):
    lhs, rhs = gamma_sides(power_companion(p), x, y)
    assert rhs - lhs >= -1e-9 * max(1.0, abs(lhs), abs(rhs))


@given(st.floats(0.0, 20.0), st.floats(1e-3, 20.0))
def test_passed_iff_min_gap_within_tolerance(x, y):
    rep = check_gamma(power_companion(2.5), pairs=[(x, y)])
    assert rep.passed == (rep.min_gap >= -rep.tolerance)
    assert rep.checks_run == 1 and rep.witness == (x, y)
