import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from convexkit.errors import DomainError, NonFinite, UnknownFunction, ValidationError
from convexkit.functions import (CertKind, ClassCertificate, ErrorOrModulus, ScalarFn,
                                 bisect_root, catalog_entries, catalog_lookup, central_difference,
                                 derivative_at, derivative_values, evaluate, make_companion,
                                 power_companion, strongly_convex_certificates, zero_companion)

CATALOG_IDS = ["pow:2", "pow:2.5", "pow:3", "pow:4", "pow:1.5", "pow:0.5", "neg_pow:1",
               "neg_pow:1.5", "neg_pow:2", "neg_pow:3", "xsq_ln", "lp_root:0.5", "lp_root:2",
               "lp_root:3", "atan_neg", "cipu_int", "two_pow:2", "two_pow:4", "x_shift_even:1",
               "x_shift_even:2", "x_shift_odd:1", "x_shift_odd:2", "xsqrt_neglog"]


def test_evaluate_examples():
    assert evaluate(catalog_lookup("pow:2"), 3) == 9
    assert evaluate(catalog_lookup("xsq_ln"), 1) == 0
    assert evaluate(catalog_lookup("cipu_int"), 0) == 0


def test_evaluate_rejects_out_of_domain_and_vectors():
    with pytest.raises(DomainError):
        evaluate(catalog_lookup("pow:2"), -1)
    with pytest.raises(DomainError):
        evaluate(catalog_lookup("xsqrt_neglog"), 1.5)
    with pytest.raises(ValidationError):
        evaluate(catalog_lookup("pow:2"), [1.0, 2.0])


def test_non_finite_rule_raises():
    fn = ScalarFn("blowup", (0.0, 1.0), lambda x: 1.0 / (x - 0.5))
    with pytest.raises(NonFinite):
        fn(np.array([0.25, 0.5]))


def test_derivative_examples():
    assert derivative_at(catalog_lookup("pow:2"), 3) == 6
    assert derivative_at(catalog_lookup("atan_neg"), 1) == pytest.approx(-math.pi / 4, rel=1e-12)
    fn = catalog_lookup("xsq_ln")
    assert derivative_at(fn, 0.5) == pytest.approx(2 * 0.5 * math.log(0.5) + 0.5, rel=1e-12)
    assert central_difference(fn, 0.5) == pytest.approx(derivative_at(fn, 0.5), rel=1e-6)


def test_derivative_needs_interior_point():
    with pytest.raises(DomainError):
        derivative_at(catalog_lookup("pow:2"), 0.0)
    with pytest.raises(DomainError):
        derivative_at(catalog_lookup("xsqrt_neglog"), 1.0)


def test_finite_difference_without_analytic_derivative():
    fn = ScalarFn("cube", (0.0, math.inf), lambda x: x ** 3)
    assert derivative_at(fn, 2.0) == pytest.approx(12.0, rel=1e-8)
    vals = derivative_values(fn, np.array([0.0, 1.0, 2.0]))
    np.testing.assert_allclose(vals, [0.0, 3.0, 12.0], atol=1e-6)


@pytest.mark.parametrize("fid", CATALOG_IDS)
def test_analytic_derivative_agrees_with_central_difference(fid):
    fn = catalog_lookup(fid)
    lo, hi = fn.test_interval
    xs = np.linspace(lo, hi, 102)[1:-1]
    for x in xs:
        analytic = derivative_at(fn, x)
        fd = central_difference(fn, x)
        assert fd == pytest.approx(analytic, rel=1e-5, abs=1e-6), x


@pytest.mark.parametrize("fid", [f for f in CATALOG_IDS
                                 if catalog_lookup(f).has(CertKind.SUPERQUADRATIC)])
def test_superquadratic_entries_are_nonpositive_at_zero(fid):
    fn = catalog_lookup(fid)
    assert fn(0.0) <= 0
    xs = np.linspace(*fn.test_interval, 257)
    if np.all(fn(xs) >= 0):
        assert fn(0.0) == 0
        assert abs(derivative_at(fn, 1e-6)) <= 1e-4


def test_catalog_certificates():
    cube = catalog_lookup("pow:3")
    assert cube.domain == (0.0, math.inf)
    assert cube.has(CertKind.SUPERQUADRATIC)
    assert [c.companion.id for c in cube.certs(CertKind.UNIFORMLY_CONVEX)] == ["x^3"]
    neg = catalog_lookup("neg_pow:1.5")
    (phi,) = neg.certs(CertKind.PHI_CONVEX)
    assert phi.companion.id == "x^1.5" and phi.companion(4.0) == 8.0
    two = catalog_lookup("two_pow:4")
    mods = {c.companion.id: c.companion for c in two.certs(CertKind.UNIFORMLY_CONVEX)}
    assert mods["x^4(3x-x^3)"].length == 1.0
    assert mods["x^4(3x-x^3)"](0.5) == pytest.approx(0.5 ** 4 * (1.5 - 0.125))
    assert catalog_lookup("two_pow:2").certs(CertKind.STRONGLY_CONVEX)[0].strong_params == (2.0, 2.0)


def test_pow_certificates_switch_at_two():
    assert catalog_lookup("pow:1.5").has(CertKind.SUBQUADRATIC)
    assert not catalog_lookup("pow:1.5").has(CertKind.SUPERQUADRATIC)
    sq = catalog_lookup("pow:2")
    assert sq.has(CertKind.SUBQUADRATIC) and sq.has(CertKind.SUPERQUADRATIC)
    assert not catalog_lookup("pow:2.5").has(CertKind.UNIFORMLY_CONVEX)


@pytest.mark.parametrize("bad", ["nosuchfn", "pow", "pow:abc", "pow:-1", "neg_pow:0",
                                 "two_pow:2.5", "two_pow:1", "xsq_ln:2", "pow:nan", ""])
def test_unknown_ids(bad):
    with pytest.raises(UnknownFunction):
        catalog_lookup(bad)


def test_unknown_function_is_a_key_and_value_error():
    with pytest.raises(KeyError):
        catalog_lookup("nosuchfn")
    with pytest.raises(ValueError):
        catalog_lookup("nosuchfn")


def test_catalog_listing_is_sorted_and_documents_examples():
    rows = catalog_entries()
    ids = [r["id"] for r in rows]
    assert ids == sorted(ids)
    by_id = {r["id"]: r for r in rows}
    assert "superquadratic; phi-convex with phi = -f on [0,1]" in by_id["xsq_ln"]["summary"]
    assert by_id["lp_root:<p>"]["parameter"] == "p > 0"
    assert by_id["xsqrt_neglog"]["domain"] == "[0,1]"


def test_xsq_ln_continuous_at_zero():
    fn = catalog_lookup("xsq_ln")
    assert fn(0.0) == 0.0
    assert fn(1e-300) == pytest.approx(0.0, abs=1e-300)


def test_companions():
    z = zero_companion()
    assert z.vanishes_at_zero and z.has_gamma and z(3.0) == 0
    p = power_companion(1.5)
    assert p.has_gamma and p.is_convex and p.vanishes_at_zero
    assert not power_companion(3).has_gamma
    assert power_companion(2, 2.0).id == "2*x^2"
    with pytest.raises(ValidationError):
        make_companion("neg", lambda x: -x)
    with pytest.raises(ValidationError):
        ErrorOrModulus(ScalarFn("shifted", (1.0, 2.0), lambda x: x))


def test_certificate_validation():
    with pytest.raises(ValidationError):
        ClassCertificate(CertKind.PHI_CONVEX)
    with pytest.raises(ValidationError):
        ClassCertificate(CertKind.STRONGLY_CONVEX, power_companion(2), strong_params=(1.0, 1.5))
    strong, uniform = strongly_convex_certificates(3.0, 2.0)
    assert strong.companion is uniform.companion
    assert uniform.companion(2.0) == 12.0
    assert "m=3" in strong.describe()


def test_bisect_root():
    fn = ScalarFn("shifted", (0.0, 10.0), lambda x: x * x - 2)
    assert bisect_root(fn, 0.0, 2.0) == pytest.approx(math.sqrt(2), abs=1e-12)
    with pytest.raises(ValidationError):
        bisect_root(fn, 2.0, 3.0)


@given(st.floats(0.0, 50.0), st.floats(2.0, 6.0))
def test_pow_matches_numpy_power(x, p):
    assert catalog_lookup(f"pow:{p!r}")(x) == pytest.approx(x ** p, rel=1e-15)


@given(st.floats(0.0, 50.0))
def test_cipu_int_closed_form_derivative_sign(x):
    # f' = t(t-2)/sqrt(t^2+1): decreasing on (0, 2), increasing after
    fn = catalog_lookup("cipu_int")
    h = 1e-3
    if x > 2 + h:
        assert fn(x) >= fn(x - h)
    elif h < x < 2 - h:
        assert fn(x) <= fn(x - h)


@given(st.floats(1e-6, 1.0))
def test_domain_clipping_is_within_slack(x):
    fn = catalog_lookup("xsqrt_neglog")
    assert fn(1.0 + 1e-13) == fn(1.0)
    assert fn(x) <= 0
