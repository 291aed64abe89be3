from fractions import Fraction
from math import gcd, lcm

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from siav.catalog import builtin_degree2
from siav.errors import DomainError, NotWeilPolynomialError
from siav.exactmath import IntegerMatrix, IntPolynomial, discriminant, hermite_normal_form
from siav.generators import enumerate_generators
from siav.weilpoly import (
    analyze,
    cross_norm,
    disc_order,
    has_real_roots,
    is_ideal,
    is_ordinary,
    is_prime,
    middle_coeff,
    newton_slopes,
    norm_pi_minus_conj,
    prime_power_split,
    real_weil_poly,
    twist,
    validate_weil,
)

from conftest import P

OCTIC_NO_PP = P(1, 1, -3, -1, 7, -2, -12, 8, 16)
EX62 = P(1, -1, 1, -3, 9)


def generated_weil_polys():
    """Weil polynomials of every builtin generator with q < 60, plus products of pairs."""
    out = []
    for K in builtin_degree2():
        for q in range(2, 60):
            if prime_power_split(q):
                out.extend((r.h, q) for r in enumerate_generators(K, q))
    prods = []
    for (h1, q1) in out[:40]:
        for (h2, q2) in out[:40]:
            if q1 == q2 and h1 != h2:
                prods.append((h1 * h2, q1))
    return out + prods[:40]


SAMPLE = generated_weil_polys() + [
    (OCTIC_NO_PP, 2),
    (EX62, 3),
    (P(1, -3, 5), 5),
    (P(1, -1, 3), 3),
    (P(1, 0, -5, 0, 9), 3),
    (P(1, 0, 2), 2),
]


def test_sample_is_large_enough():
    assert len(SAMPLE) >= 100


def test_primality_against_sympy():
    for n in list(range(-5, 3000)) + [2**61 - 1, 2**61 + 1, 3215031751, 341550071728321]:
        assert is_prime(n) == sympy.isprime(n), n


@pytest.mark.parametrize("q,expected", [(32, (2, 5)), (6, None), (17, (17, 1)), (2, (2, 1)), (3**7, (3, 7)), (12, None)])
def test_prime_power_split(q, expected):
    assert prime_power_split(q) == expected


def test_prime_power_split_rejects_small():
    with pytest.raises(DomainError):
        prime_power_split(1)


@pytest.mark.parametrize(
    "h,q,g",
    [(P(1, -3, 5), 5, P(1, -3)), (P(1, 0, -5, 0, 9), 3, P(1, 0, -11)), (EX62, 3, P(1, -1, -5))],
)
def test_real_weil_poly_examples(h, q, g):
    assert real_weil_poly(h, q) == g


def test_real_weil_poly_symmetry_error():
    with pytest.raises(NotWeilPolynomialError):
        real_weil_poly(P(1, 0, 1), 5)


def test_validate_examples():
    assert validate_weil(P(1, -1, 5), 5)
    bad = validate_weil(P(1, 0, 1), 5)
    assert not bad and bad.reasons
    assert validate_weil(OCTIC_NO_PP, 2)
    # symmetric but the real Weil polynomial has a root outside the band
    assert not validate_weil(P(1, -5, 5), 5)


def test_real_roots_examples():
    assert has_real_roots(P(1, 0, -4), 4)
    assert not has_real_roots(P(1, -3, 5), 5)
    assert has_real_roots(P(1, 0, -9) * P(1, -1, 9), 9)
    assert has_real_roots(P(1, 0, -2), 2)


def test_ordinary_examples():
    assert not is_ordinary(P(1, 0, 2), 2)
    assert newton_slopes(P(1, 0, 2), 2) == [Fraction(1, 2)] * 2
    assert is_ordinary(P(1, 0, -5, 0, 9), 3)
    assert is_ordinary(P(1, -3, 5), 5)


def test_ideal_examples():
    assert is_ideal(P(1, -3, 5) * P(1, -1, 5), 5)
    rep = is_ideal(P(1, -3, 5) ** 2, 5)
    assert not rep and any("repeated" in r or "squarefree" in r for r in rep.reasons)
    assert is_ideal(P(1, 0, 2), 2)
    assert not is_ideal(P(1, 0, 3) * P(1, 0, 3), 9)


@pytest.mark.parametrize("h,q,n", [(P(1, -1, 3), 3, 11), (P(1, 0, -5, 0, 9), 3, 1), (OCTIC_NO_PP, 2, 1)])
def test_norm_examples(h, q, n):
    assert norm_pi_minus_conj(h, q) == n


def test_disc_order_quadratic():
    assert disc_order(P(1, -3, 5), 5) == -11
    assert disc_order(P(1, -1, 2), 2) == -7
    with pytest.raises(DomainError):
        disc_order(P(1, -3, 5) * P(1, -1, 5), 5)


def lattice_disc(h, q):
    """disc of Z[pi, conj pi] from the lattice spanned by pi^i conj(pi)^j in the power basis."""
    n = h.degree
    a = h.coeffs

    def mul(u, v):
        prod = [Fraction(0)] * (2 * n)
        for i, x in enumerate(u):
            for j, y in enumerate(v):
                prod[i + j] += x * y
        for k in range(2 * n - 1, n - 1, -1):
            c = prod[k]
            if c:
                for i in range(n + 1):
                    prod[k - n + i] -= c * a[i]
        return prod[:n]

    # conj(pi) = q / pi and 1/pi = -(pi^(n-1) + a_(n-1) pi^(n-2) + ... + a_1) / a_0
    inv = [Fraction(-a[i + 1], a[0]) for i in range(n)]
    conj = [q * c for c in inv]
    pi = [Fraction(0)] * n
    pi[1] = Fraction(1)
    one = [Fraction(1)] + [Fraction(0)] * (n - 1)
    vecs = []
    pw = one
    for _ in range(n):
        cw = pw
        for _ in range(n):
            vecs.append(cw)
            cw = mul(cw, conj)
        pw = mul(pw, pi)
    den = lcm(*[c.denominator for v in vecs for c in v])
    H = hermite_normal_form(IntegerMatrix([[int(c * den) for c in v] for v in vecs]))
    # index of Z[pi] (scaled by den) over the new lattice
    covol = abs(H.determinant())
    index = Fraction(den**n, covol)
    return Fraction(discriminant(h)) / (index * index)


@pytest.mark.parametrize("h,q", [(EX62, 3), (OCTIC_NO_PP, 2), (P(1, -3, 5), 5), (P(1, 0, -5, 0, 9), 3)])
def test_disc_order_against_lattice_oracle(h, q):
    assert disc_order(h, q) == lattice_disc(h, q)


def test_example_62_disc():
    assert disc_order(EX62, 3) == 16317


@pytest.mark.parametrize("h,q", SAMPLE)
def test_cross_norm_identity(h, q):
    assert norm_pi_minus_conj(h, q) == cross_norm(h, q)
    assert norm_pi_minus_conj(h, q) >= 0


@pytest.mark.parametrize("h,q", SAMPLE)
def test_ordinarity_equals_middle_coefficient_test(h, q):
    p, _ = prime_power_split(q)
    assert is_ordinary(h, q) == (gcd(middle_coeff(h), p) == 1)


@pytest.mark.parametrize("h,q", SAMPLE)
def test_twist_involution(h, q):
    t = twist(h)
    assert twist(t) == h
    # h(-x) multiplies a_i by (-1)^i, so the middle coefficient survives up to (-1)^g
    g = h.degree // 2
    assert middle_coeff(t) == (-1) ** g * middle_coeff(h)
    if g % 2 == 0:
        assert middle_coeff(t) == middle_coeff(h)
    assert validate_weil(t, q)
    assert norm_pi_minus_conj(t, q) == norm_pi_minus_conj(h, q)


@pytest.mark.parametrize("h,q", SAMPLE)
def test_constant_term_and_identity(h, q):
    g = h.degree // 2
    assert h[0] == q**g
    rw = real_weil_poly(h, q)
    # x^g * rw(x + q/x), cleared of denominators
    acc = IntPolynomial(())
    base = IntPolynomial((q, 0, 1))
    for k, c in enumerate(rw.coeffs):
        acc = acc + IntPolynomial.monomial(g - k, c) * base**k
    assert acc == h


def test_twist_examples():
    assert twist(P(1, -3, 5)) == P(1, 3, 5)
    assert twist(P(1, 0, 2)) == P(1, 0, 2)
    assert twist(EX62) == P(1, 1, 1, 3, 9)


def test_disc_order_equals_disc_for_quadratics():
    for h, q in SAMPLE:
        if h.degree == 2:
            assert disc_order(h, q) == discriminant(h)


def test_analyze_summary():
    an = analyze(OCTIC_NO_PP, 2)
    assert an.is_weil and an.is_squarefree and not an.has_real_roots
    assert an.norm_pi_diff == 1 and an.middle_coeff == 7 and an.g == 4
    bad = analyze(P(1, 0, 1), 5)
    assert not bad.is_weil and bad.norm_pi_diff is None
    with pytest.raises(DomainError):
        analyze(P(1, -3, 5), 6)


@settings(max_examples=40, deadline=None)
@given(st.sampled_from([2, 3, 4, 5, 7, 8, 9, 11, 13]), st.integers(-40, 40))
def test_quadratic_weil_polynomials(q, a):
    h = P(1, -a, q)
    assert bool(validate_weil(h, q)) == (a * a <= 4 * q)
