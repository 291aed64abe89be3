"""Analysis of a single Weil polynomial h for a given q."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, isqrt
from typing import Optional

from .errors import ConsistencyError, DomainError, NotWeilPolynomialError
from .exactmath import (
    IntPolynomial,
    discriminant,
    eval_at_sqrt,
    factor_over_integers,
    isolate_real_roots,
    squarefree_part,
    sturm_count,
)

# Deterministic Miller-Rabin bases for n < 3.3e24
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _iroot(n: int, k: int) -> int:
    """floor(n ** (1/k)) for n >= 0."""
    if n < 2 or k == 1:
        return n
    r = int(round(n ** (1.0 / k))) if n.bit_length() < 1000 else 1 << (n.bit_length() // k + 1)
    # Newton correction, then nudge
    while True:
        s = ((k - 1) * r + n // r ** (k - 1)) // k
        if s >= r:
            break
        r = s
    while r**k > n:
        r -= 1
    while (r + 1) ** k <= n:
        r += 1
    return r


def prime_power_split(q: int) -> Optional[tuple[int, int]]:
    """(p, v) with q = p^v and p prime, or None."""
    if q < 2:
        raise DomainError(f"q must be >= 2, got {q}")
    for v in range(q.bit_length(), 0, -1):
        r = _iroot(q, v)
        if r >= 2 and r**v == q and is_prime(r):
            return r, v
    return None


def _is_square(n: int) -> bool:
    return n >= 0 and isqrt(n) ** 2 == n


def weil_dimension(h: IntPolynomial) -> int:
    if h.degree < 2 or h.degree % 2:
        raise NotWeilPolynomialError(f"Weil polynomials have even positive degree, got {h.degree}")
    return h.degree // 2


def check_symmetry(h: IntPolynomial, q: int) -> Optional[str]:
    """None if h is monic with a_{2g-i} = q^{g-i} a_i for all i, else a reason."""
    if not h.is_monic():
        return "polynomial is not monic"
    if h.degree < 2 or h.degree % 2:
        return f"degree {h.degree} is not even and positive"
    g = h.degree // 2
    for i in range(g):
        if h[2 * g - i] * q ** (g - i) != h[i]:
            return f"coefficient symmetry fails: a_{i} = {h[i]} but q^{g - i} * a_{2 * g - i} = {h[2 * g - i] * q ** (g - i)}"
    return None


def real_weil_poly(h: IntPolynomial, q: int) -> IntPolynomial:
    """The monic g of degree deg(h)/2 with h(x) = x^g * g(x + q/x)."""
    reason = check_symmetry(h, q)
    if reason:
        raise NotWeilPolynomialError(reason)
    g = h.degree // 2
    base = IntPolynomial((q, 0, 1))
    rest = h
    b = [0] * (g + 1)
    for k in range(g, -1, -1):
        c = rest[g + k]
        b[k] = c
        if c:
            rest = rest - IntPolynomial.monomial(g - k, c) * base**k
    if not rest.is_zero():
        raise ConsistencyError("descending recursion left a remainder")
    return IntPolynomial(b)


@dataclass(frozen=True)
class Check:
    """A boolean verdict carrying its reasons."""

    ok: bool
    reasons: tuple[str, ...] = ()

    def __bool__(self):
        return self.ok


def _roots_in_band(s: IntPolynomial, q: int) -> bool:
    """All real roots of squarefree s lie in [-2 sqrt q, 2 sqrt q]."""
    four_q = 4 * q
    # peel off endpoint roots so bisection below always terminates
    if _is_square(four_q):
        r = isqrt(four_q)
        for e in (r, -r):
            lin = IntPolynomial((-e, 1))
            if s(e) == 0:
                s = s.exact_div(lin)
    else:
        quad = IntPolynomial((-four_q, 0, 1))
        if eval_at_sqrt(s, four_q).is_zero():
            s = s.exact_div(quad)
    if s.degree < 1:
        return True
    for lo, hi in isolate_real_roots(s):
        while True:
            # inside iff |root| < 2 sqrt q, i.e. root^2 < 4q
            if lo >= 0 or hi <= 0:
                a, b = (lo, hi) if lo >= 0 else (-hi, -lo)
                if b * b < four_q:
                    break
                if a * a > four_q:
                    return False
            elif lo * lo < four_q and hi * hi < four_q:
                break
            mid = (lo + hi) / 2
            if sturm_count(s, lo, mid) == 1:
                hi = mid
            else:
                lo = mid
    return True


def validate_weil(h: IntPolynomial, q: int) -> Check:
    """Coefficient symmetry plus all roots of the real Weil polynomial real in [-2 sqrt q, 2 sqrt q]."""
    reason = check_symmetry(h, q)
    if reason:
        return Check(False, (reason,))
    g = real_weil_poly(h, q)
    s = squarefree_part(g)
    if s.degree >= 1 and sturm_count(s) != s.degree:
        return Check(False, ("real Weil polynomial has non-real roots",))
    if not _roots_in_band(s, q):
        return Check(False, ("real Weil polynomial has a root outside [-2 sqrt q, 2 sqrt q]",))
    return Check(True)


def _is_zero_value(v, q: int) -> bool:
    if v.is_zero():
        return True
    return _is_square(q) and v.collapse() == 0


def has_real_roots(h: IntPolynomial, q: int) -> bool:
    """True iff +sqrt(q) or -sqrt(q) is a root of h."""
    return _is_zero_value(eval_at_sqrt(h, q), q) or _is_zero_value(eval_at_sqrt(h.negate_variable(), q), q)


def _vp(n: int, p: int) -> Optional[int]:
    if n == 0:
        return None
    k = 0
    while n % p == 0:
        n //= p
        k += 1
    return k


def newton_slopes(h: IntPolynomial, p: int) -> list[Fraction]:
    """Slopes of the p-adic Newton polygon of h, one per root, ascending.

    Points are (deg h - i, v_p(a_i)), i.e. the reversed polynomial, so the
    slopes are the valuations of the roots themselves.
    """
    n = h.degree
    pts = [(n - i, _vp(c, p)) for i, c in enumerate(h.coeffs) if c]
    pts.sort()
    hull: list[tuple[int, int]] = []
    for pt in pts:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            # drop hull[-1] if it lies on or above the segment hull[-2] -> pt
            if (y2 - y1) * (pt[0] - x1) >= (pt[1] - y1) * (x2 - x1):
                hull.pop()
            else:
                break
        hull.append(pt)
    slopes = []
    for (x1, y1), (x2, y2) in zip(hull, hull[1:]):
        slopes.extend([Fraction(y2 - y1, x2 - x1)] * (x2 - x1))
    return sorted(slopes)


def is_ordinary(h: IntPolynomial, q: int) -> bool:
    """Newton polygon slopes (normalized by v) are 0 and 1, each with multiplicity g."""
    pv = prime_power_split(q)
    if pv is None:
        raise DomainError(f"{q} is not a prime power")
    p, v = pv
    g = weil_dimension(h)
    slopes = [s / v for s in newton_slopes(h, p)]
    return slopes == [0] * g + [1] * g


def middle_coeff(h: IntPolynomial) -> int:
    return h[weil_dimension(h)]


def is_ideal(h: IntPolynomial, q: int) -> Check:
    """Squarefree, no real roots, and ordinary or q prime."""
    pv = prime_power_split(q)
    if pv is None:
        raise DomainError(f"{q} is not a prime power")
    reasons = []
    fz = factor_over_integers(h)
    if not fz.is_squarefree():
        reasons.append("h has a repeated irreducible factor")
    if has_real_roots(h, q):
        reasons.append("h has a real root +-sqrt(q)")
    if pv[1] != 1 and not is_ordinary(h, q):
        reasons.append("h is not ordinary and q is not prime")
    return Check(not reasons, tuple(reasons))


def _norm_single(h: IntPolynomial, q: int) -> int:
    g = weil_dimension(h)
    prod = eval_at_sqrt(h, q) * eval_at_sqrt(h.negate_variable(), q)
    if prod.b != 0:
        raise ConsistencyError("h(sqrt q) h(-sqrt q) has a nonzero sqrt(q) component")
    n, r = divmod(prod.a, q**g)
    if r:
        raise ConsistencyError(f"h(sqrt q) h(-sqrt q) is not divisible by q^{g}")
    return n


def norm_pi_minus_conj(h: IntPolynomial, q: int) -> int:
    """h(sqrt q) h(-sqrt q) / q^g, taken as the product over irreducible factors."""
    weil_dimension(h)
    fz = factor_over_integers(h)
    if len(fz.factors) == 1 and fz.factors[0][1] == 1:
        return _norm_single(h, q)
    out = 1
    for fac, m in fz.factors:
        if fac.degree % 2:
            raise DomainError(f"factor {fac} has odd degree; h has real roots")
        out *= _norm_single(fac, q) ** m
    return out


def cross_norm(h: IntPolynomial, q: int) -> int:
    """(-1)^g g(2 sqrt q) g(-2 sqrt q) for g the real Weil polynomial."""
    g = real_weil_poly(h, q)
    val = eval_at_sqrt(g, 4 * q).norm()
    return -val if g.degree % 2 else val


def disc_order(h: IntPolynomial, q: int) -> int:
    """Discriminant of Z[pi, conj(pi)] for irreducible h."""
    fz = factor_over_integers(h)
    if len(fz.factors) != 1 or fz.factors[0][1] != 1:
        raise DomainError("disc_order needs an irreducible h")
    g = real_weil_poly(h, q)
    dg = discriminant(g) if g.degree >= 1 else 1
    return dg * dg * eval_at_sqrt(g, 4 * q).norm()


def twist(h: IntPolynomial) -> IntPolynomial:
    t = h.negate_variable()
    return -t if t.lc < 0 else t


@dataclass(frozen=True)
class WeilPolyAnalysis:
    h: IntPolynomial
    q: int
    p: int
    v: int
    g: int
    is_weil: bool
    weil_reasons: tuple[str, ...]
    is_squarefree: bool
    has_real_roots: bool
    is_ordinary: bool
    is_ideal: bool
    ideal_reasons: tuple[str, ...]
    real_weil_poly: Optional[IntPolynomial]
    middle_coeff: int
    norm_pi_diff: Optional[int]
    disc_order: Optional[int]
    factors: tuple[tuple[IntPolynomial, int], ...] = field(default=())

    @property
    def is_irreducible(self) -> bool:
        return len(self.factors) == 1 and self.factors[0][1] == 1


def analyze(h: IntPolynomial, q: int) -> WeilPolyAnalysis:
    """Full single-polynomial analysis; raises DomainError on bad q."""
    pv = prime_power_split(q)
    if pv is None:
        raise DomainError(f"{q} is not a prime power")
    p, v = pv
    g = weil_dimension(h)
    check = validate_weil(h, q)
    fz = factor_over_integers(h)
    real = real_weil_poly(h, q) if check_symmetry(h, q) is None else None
    sqf = fz.is_squarefree()
    rr = has_real_roots(h, q)
    ordinary = is_ordinary(h, q)
    if check and ordinary != (gcd(middle_coeff(h), p) == 1):
        raise ConsistencyError("Newton polygon and middle-coefficient ordinarity tests disagree")
    ideal = is_ideal(h, q) if check else Check(False, ("not a Weil polynomial",))
    norm = None
    disc = None
    if check and not rr:
        norm = norm_pi_minus_conj(h, q)
        irreducible = len(fz.factors) == 1 and fz.factors[0][1] == 1
        if irreducible:
            disc = disc_order(h, q)
    return WeilPolyAnalysis(
        h=h,
        q=q,
        p=p,
        v=v,
        g=g,
        is_weil=check.ok,
        weil_reasons=check.reasons,
        is_squarefree=sqf,
        has_real_roots=rr,
        is_ordinary=ordinary,
        is_ideal=ideal.ok,
        ideal_reasons=ideal.reasons,
        real_weil_poly=real,
        middle_coeff=middle_coeff(h),
        norm_pi_diff=norm,
        disc_order=disc,
        factors=fz.factors,
    )
