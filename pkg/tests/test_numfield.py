from fractions import Fraction
from math import isqrt

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from siav.catalog import parse_catalog
from siav.errors import DomainError
from siav.numfield import (
    CMFieldData,
    TotallyRealField,
    _is_fundamental_disc,
    cm_conjugate,
    cm_norm_to_F,
    cm_norm_to_Q,
    fundamental_unit,
    is_totally_positive,
    square_root_in_field,
    unit_log_exponent,
    unit_square_root,
    validate_field_data,
)

FUND_DISCS = [D for D in range(5, 240) if _is_fundamental_disc(D)]


def pell_unit(D):
    """Smallest (x + y sqrt D)/2 > 1 with x^2 - D y^2 = +-4, by brute force on y."""
    y = 1
    while True:
        for s in (-4, 4):
            t = D * y * y + s
            if t > 0:
                r = isqrt(t)
                if r * r == t:
                    return r, y
        y += 1


@pytest.mark.parametrize("D", FUND_DISCS)
def test_fundamental_unit_matches_pell(D):
    F = TotallyRealField.from_disc(D)
    eps = fundamental_unit(F)
    x, y = pell_unit(D)
    # sqrt(D) = 2 eta + t1, so (x + y sqrt D)/2 = (x + y t1)/2 + y eta
    assert eps == F(Fraction(x + y * F.t1, 2), y)
    assert abs(eps.norm()) == 1 and eps.is_integral()


def test_sqrt21_unit():
    F = TotallyRealField.from_disc(21)
    eps = F.fundamental_unit
    assert eps == F(2, 1)  # 2 + (1 + sqrt21)/2 = (5 + sqrt21)/2
    assert eps.norm() == 1
    assert is_totally_positive(eps)
    other = eps.galois_conjugate()  # (5 - sqrt21)/2
    assert other == eps.inverse()
    assert is_totally_positive(other)


def test_from_disc_rejects_non_discriminants():
    with pytest.raises(DomainError):
        TotallyRealField.from_disc(7)


def test_signs_of_eta():
    F = TotallyRealField.from_disc(5)
    assert F.signs(F.eta) == (1, -1)
    assert F.signs(F(-1, 0)) == (-1, -1)


@settings(max_examples=50)
@given(st.sampled_from([5, 8, 12, 13, 21, 29, 33, 77]), st.integers(-12, 12), st.integers(-12, 12),
       st.integers(-12, 12), st.integers(-12, 12))
def test_field_arithmetic(D, a, b, c, d):
    F = TotallyRealField.from_disc(D)
    x, y = F(a, b), F(c, d)
    assert (x * y).norm() == x.norm() * y.norm()
    assert (x + y).trace() == x.trace() + y.trace()
    assert (x * y).galois_conjugate() == x.galois_conjugate() * y.galois_conjugate()
    if not x.is_zero():
        assert x * x.inverse() == F.one
    assert x.min_poly()(0) in (x.norm(), -x.trace()) or x.is_rational()


@pytest.mark.parametrize("D", [5, 8, 13, 21, 28, 44, 61])
def test_unit_square_roots(D):
    F = TotallyRealField.from_disc(D)
    eps = F.fundamental_unit
    for m in range(-3, 4):
        v = eps**m
        assert unit_square_root(v * v) == (v if F.sign(v) > 0 else -v)
        assert unit_log_exponent(v, eps) == (1, m)
    if eps.norm() == 1 and is_totally_positive(eps):
        assert unit_square_root(eps) is None


@settings(max_examples=50)
@given(st.sampled_from([5, 12, 21, 24, 41]), st.integers(-9, 9), st.integers(-9, 9))
def test_square_root_in_field(D, a, b):
    F = TotallyRealField.from_disc(D)
    t = F(a, b)
    r = square_root_in_field(t * t)
    assert r is not None and r * r == t * t


def test_square_root_absent():
    F = TotallyRealField.from_disc(5)
    assert square_root_in_field(F(2)) is None
    assert square_root_in_field(F(5)) == F(-1, 2)  # sqrt5 = 2 eta - 1


def gaussian():
    Q = TotallyRealField.rationals()
    return CMFieldData("gauss", Q, Q(0), Q(1), -4, True)


def test_cm_norms_gaussian():
    K = gaussian()
    z = K.element(4, 1)  # 4 + i
    assert cm_norm_to_Q(z) == 17
    assert cm_norm_to_F(z) == K.base(17)
    assert cm_conjugate(z) == K.element(4, -1)


def test_zeta5_relative_data():
    text = """
field {
  id = zeta5
  f_poly = -1,-1,1
  rel_b = 1,0
  rel_c = 2,-1
  disc_K = 125
  class_number_one = true
}
"""
    K = parse_catalog(text).by_id("zeta5")
    assert validate_field_data(K) == []
    g = K.gamma
    # gamma is zeta5 up to a unit of F: gamma^5 lands in F as a unit
    g5 = g * g * g * g * g
    assert g5.in_base() and abs(g5.x.norm()) == 1
    assert cm_norm_to_Q(g) == 1


def test_validate_reports_wrong_discriminant():
    Q = TotallyRealField.rationals()
    bad = CMFieldData("bad", Q, Q(0), Q(2), -4, True)  # sqrt(-2) has disc -8
    assert any("disc" in v for v in validate_field_data(bad))


def test_validate_reports_positive_relative_disc():
    Q = TotallyRealField.rationals()
    bad = CMFieldData("real", Q, Q(0), Q(-2), 8, True)
    assert validate_field_data(bad)
