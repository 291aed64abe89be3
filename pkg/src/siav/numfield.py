"""Totally real fields of degree 1 or 2 and CM fields as relative quadratic extensions.

A totally real field F is presented by a monic generator polynomial for eta,
with O_F = Z[eta]; degree 1 uses eta = 0 (polynomial x). A CM field K = F(gamma)
is given by gamma^2 + b*gamma + c = 0 with b, c in O_F and O_K = O_F[gamma].

Real embeddings are ordered with the principal one first: it sends eta to the
larger real root of its polynomial.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from math import isqrt
from typing import Optional

from .errors import DomainError
from .exactmath import IntPolynomial, discriminant, isolate_real_roots, sturm_count

Number = int | Fraction


@dataclass(frozen=True)
class TotallyRealField:
    eta_poly: IntPolynomial

    def __post_init__(self):
        p = self.eta_poly
        if not p.is_monic() or p.degree not in (1, 2):
            raise DomainError("eta polynomial must be monic of degree 1 or 2")
        if p.degree == 1 and p != IntPolynomial((0, 1)):
            raise DomainError("degree-1 base field must use eta = 0 (polynomial x)")

    @classmethod
    def rationals(cls) -> TotallyRealField:
        return cls(IntPolynomial((0, 1)))

    @classmethod
    def from_disc(cls, D: int) -> TotallyRealField:
        """Real quadratic field of fundamental discriminant D with its standard eta."""
        if D % 4 == 1:
            return cls(IntPolynomial((-(D - 1) // 4, -1, 1)))
        if D % 4 == 0:
            return cls(IntPolynomial((-(D // 4), 0, 1)))
        raise DomainError(f"{D} is not a discriminant")

    @property
    def degree(self) -> int:
        return self.eta_poly.degree

    @property
    def t0(self) -> int:
        return self.eta_poly[0]

    @property
    def t1(self) -> int:
        return self.eta_poly[1] if self.degree == 2 else 0

    @cached_property
    def disc(self) -> int:
        return 1 if self.degree == 1 else discriminant(self.eta_poly)

    def __call__(self, x0: Number = 0, x1: Number = 0) -> RealElement:
        return RealElement(Fraction(x0), Fraction(x1), self)

    @property
    def one(self) -> RealElement:
        return self(1)

    @property
    def eta(self) -> RealElement:
        return self(0, 1) if self.degree == 2 else self(0)

    @cached_property
    def t_set(self) -> tuple[RealElement, ...]:
        """Translation-class representatives of the generators of O_F."""
        if self.degree == 1:
            return (self(0),)
        return (self.eta, -self.eta)

    @cached_property
    def _root_intervals(self) -> list[list[Fraction]]:
        if self.degree == 1:
            return []
        ivs = isolate_real_roots(self.eta_poly)
        # principal embedding first (larger root)
        return [list(iv) for iv in sorted(ivs, reverse=True)]

    def embedding_count(self) -> int:
        return self.degree

    def sign(self, x: RealElement, embedding: int = 0) -> int:
        """Exact sign of x under the given real embedding (0 = principal)."""
        if x.x1 == 0 or self.degree == 1:
            return (x.x0 > 0) - (x.x0 < 0)
        iv = self._root_intervals[embedding]
        # refine a private copy; eta is irrational so the loop terminates
        lo, hi = iv
        while True:
            vlo = x.x0 + x.x1 * lo
            vhi = x.x0 + x.x1 * hi
            if vlo > 0 and vhi > 0:
                return 1
            if vlo < 0 and vhi < 0:
                return -1
            mid = (lo + hi) / 2
            if sturm_count(self.eta_poly, lo, mid) == 1:
                hi = mid
            else:
                lo = mid

    def signs(self, x: RealElement) -> tuple[int, ...]:
        return tuple(self.sign(x, i) for i in range(self.degree))

    def approx(self, x: RealElement, embedding: int = 0, bits: int = 60) -> Fraction:
        """Rational approximation of x under an embedding (for display and bounds)."""
        if self.degree == 1 or x.x1 == 0:
            return x.x0
        lo, hi = self._root_intervals[embedding]
        target = Fraction(1, 2**bits)
        while hi - lo > target:
            mid = (lo + hi) / 2
            if sturm_count(self.eta_poly, lo, mid) == 1:
                hi = mid
            else:
                lo = mid
        return x.x0 + x.x1 * hi

    @cached_property
    def fundamental_unit(self) -> RealElement:
        return fundamental_unit(self)


@dataclass(frozen=True)
class RealElement:
    """x0 + x1*eta in F, with exact rational coordinates."""

    x0: Fraction
    x1: Fraction
    F: TotallyRealField = field(repr=False, compare=True)

    def __post_init__(self):
        if self.F.degree == 1 and self.x1 != 0:
            raise DomainError("degree-1 field elements have x1 = 0")

    def _lift(self, other) -> RealElement:
        if isinstance(other, RealElement):
            if other.F != self.F:
                raise DomainError("elements of different fields")
            return other
        if isinstance(other, (int, Fraction)):
            return RealElement(Fraction(other), Fraction(0), self.F)
        return NotImplemented

    @property
    def coords(self) -> tuple[Fraction, Fraction]:
        return (self.x0, self.x1)

    def __add__(self, other):
        o = self._lift(other)
        return RealElement(self.x0 + o.x0, self.x1 + o.x1, self.F)

    __radd__ = __add__

    def __neg__(self):
        return RealElement(-self.x0, -self.x1, self.F)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        o = self._lift(other)
        t0, t1 = self.F.t0, self.F.t1
        a0, a1, b0, b1 = self.x0, self.x1, o.x0, o.x1
        # eta^2 = -t1*eta - t0
        return RealElement(a0 * b0 - t0 * a1 * b1, a0 * b1 + a1 * b0 - t1 * a1 * b1, self.F)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        out, base = self.F.one, self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def galois_conjugate(self) -> RealElement:
        """Image under the nontrivial automorphism of F (identity in degree 1)."""
        if self.F.degree == 1:
            return self
        # eta' = -t1 - eta
        return RealElement(self.x0 - self.F.t1 * self.x1, -self.x1, self.F)

    def norm(self) -> Fraction:
        """Norm_{F/Q}."""
        if self.F.degree == 1:
            return self.x0
        return self.x0 * self.x0 - self.F.t1 * self.x0 * self.x1 + self.F.t0 * self.x1 * self.x1

    def trace(self) -> Fraction:
        if self.F.degree == 1:
            return self.x0
        return 2 * self.x0 - self.F.t1 * self.x1

    def inverse(self) -> RealElement:
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("inverse of zero")
        c = self.galois_conjugate() if self.F.degree == 2 else self.F.one
        return RealElement(c.x0 / n, c.x1 / n, self.F)

    def __truediv__(self, other):
        o = self._lift(other)
        return self * o.inverse()

    def __rtruediv__(self, other):
        return self._lift(other) * self.inverse()

    def is_zero(self) -> bool:
        return self.x0 == 0 and self.x1 == 0

    def is_integral(self) -> bool:
        return self.x0.denominator == 1 and self.x1.denominator == 1

    def is_rational(self) -> bool:
        return self.x1 == 0

    def min_poly(self) -> IntPolynomial:
        """Monic minimal polynomial over Q (must be integral)."""
        if self.x1 == 0:
            return _int_poly((-self.x0, 1))
        return _int_poly((self.norm(), -self.trace(), 1))

    def __repr__(self):
        if self.F.degree == 1:
            return f"RealElement({self.x0})"
        return f"RealElement({self.x0} + {self.x1}*eta)"


def _int_poly(cs) -> IntPolynomial:
    cs = [Fraction(c) for c in cs]
    if any(c.denominator != 1 for c in cs):
        raise DomainError("minimal polynomial is not integral")
    return IntPolynomial(int(c) for c in cs)


def is_totally_positive(x: RealElement, F: Optional[TotallyRealField] = None) -> bool:
    F = F or x.F
    return all(s > 0 for s in F.signs(x))


def _is_fundamental_disc(D: int) -> bool:
    def squarefree(n):
        n = abs(n)
        d = 2
        while d * d <= n:
            if n % (d * d) == 0:
                return False
            d += 1
        return True

    if D % 4 == 1:
        return squarefree(D)
    if D % 4 == 0:
        m = D // 4
        return m % 4 in (2, 3) and squarefree(m)
    return False


def fundamental_unit(F: TotallyRealField) -> RealElement:
    """Fundamental unit (> 1 under the principal embedding) via continued fractions.

    The larger root of the eta polynomial, (-t1 + sqrt(D))/2, is expanded as a
    continued fraction of quadratic irrationals (P + sqrt(D))/Q. The product of
    the complete quotients over one period of the purely periodic tail is the
    fundamental unit of the order of discriminant D.
    """
    if F.degree != 2:
        raise DomainError("degree-1 fields have no fundamental unit")
    D = F.disc
    r = isqrt(D)
    if r * r == D:
        raise DomainError("eta polynomial has a square discriminant")
    P, Q = -F.t1, 2
    seen: dict[tuple[int, int], int] = {}
    states: list[tuple[int, int]] = []
    while (P, Q) not in seen:
        seen[(P, Q)] = len(states)
        states.append((P, Q))
        # floor((P + sqrt D)/Q) without floating point
        if Q > 0:
            a = (P + r) // Q
        else:
            a = -((P + r) // (-Q)) - 1
        P2 = a * Q - P
        Q2 = (D - P2 * P2) // Q
        P, Q = P2, Q2
    cycle = states[seen[(P, Q)]:]
    # multiply complete quotients (P + sqrt D)/Q as A + B*sqrt(D)
    A, B = Fraction(1), Fraction(0)
    for P, Q in cycle:
        A, B = (A * P + B * D) / Q, (A + B * P) / Q
    # sqrt(D) = 2*eta + t1 for the principal root
    unit = F(A + B * F.t1, 2 * B)
    if not unit.is_integral() or abs(unit.norm()) != 1:
        raise ArithmeticError("continued-fraction period did not produce a unit")
    if F.sign(unit - 1) < 0:
        unit = unit.inverse()
    return unit


def unit_log_exponent(x: RealElement, eps: RealElement) -> Optional[tuple[int, int]]:
    """Write a unit x as sign * eps^m; return (sign, m) or None if not of that form."""
    F = x.F
    if not x.is_integral() or abs(x.norm()) != 1:
        return None
    s = F.sign(x)
    y = x if s > 0 else -x
    m = 0
    inv = eps.inverse()
    # |m| is bounded by the logarithmic size of x; each step changes it by one
    limit = 4 * (max(abs(y.x0), abs(y.x1), 1).numerator.bit_length() + 4)
    while F.sign(y - 1) > 0:
        y = y * inv
        m += 1
        if m > limit:
            return None
    while F.sign(y - 1) < 0:
        y = y * eps
        m -= 1
        if -m > limit:
            return None
    if y != F.one:
        return None
    return s, m


def unit_square_root(x: RealElement, F: Optional[TotallyRealField] = None) -> Optional[RealElement]:
    """v with v^2 = x for a unit v of O_F, positive at the principal embedding."""
    F = F or x.F
    if not x.is_integral() or abs(x.norm()) != 1:
        return None
    if F.degree == 1:
        return F.one if x == F.one else None
    if not is_totally_positive(x, F):
        return None
    sm = unit_log_exponent(x, F.fundamental_unit)
    if sm is None:
        return None
    s, m = sm
    if s < 0 or m % 2:
        return None
    return F.fundamental_unit ** (m // 2)


def square_root_in_field(x: RealElement) -> Optional[RealElement]:
    """A square root of x inside F, or None."""
    F = x.F
    if x.is_zero():
        return x
    if F.degree == 1:
        r = _rational_sqrt(x.x0)
        return None if r is None else F(r)
    n = _rational_sqrt(x.norm())
    if n is None:
        return None
    # t^2 = x with N(t) = +-n gives Tr(t)^2 = Tr(x) + 2 N(t)
    for nt in (n, -n):
        tr2 = x.trace() + 2 * nt
        tr = _rational_sqrt(tr2) if tr2 >= 0 else None
        if tr is None:
            continue
        for trace in (tr, -tr):
            if trace == 0:
                # t = x1' * sqrt(D)-type element; solve directly below
                continue
            # t + t' = trace and t*t' = nt; t = (x + nt) / trace
            t = (x + nt) / trace
            if t * t == x:
                return t
    # trace zero case: t = s * (2 eta + t1), t^2 = s^2 D
    D = F.disc
    if x.x1 == 0:
        r = _rational_sqrt(x.x0 / D)
        if r is not None:
            return F(r * F.t1, 2 * r)
    return None


def _rational_sqrt(v: Fraction) -> Optional[Fraction]:
    v = Fraction(v)
    if v < 0:
        return None
    a, b = isqrt(v.numerator), isqrt(v.denominator)
    if a * a == v.numerator and b * b == v.denominator:
        return Fraction(a, b)
    return None


@dataclass(frozen=True)
class CMFieldData:
    """K = F(gamma) with gamma^2 + b*gamma + c = 0 and O_K = O_F[gamma]."""

    id: str
    base: TotallyRealField
    rel_b: RealElement
    rel_c: RealElement
    disc_K: int
    class_number_one: bool
    source: str = ""
    has_relative_generator: bool = True

    @property
    def degree(self) -> int:
        return 2 * self.base.degree

    @property
    def disc_F(self) -> int:
        return self.base.disc

    @cached_property
    def norm_gamma_diff(self) -> RealElement:
        """Norm_{K/F}(gamma - conj(gamma)) = 4c - b^2."""
        return 4 * self.rel_c - self.rel_b * self.rel_b

    @cached_property
    def disc_ratio(self) -> int:
        q, r = divmod(self.disc_K, self.disc_F**2)
        if r:
            raise DomainError(f"{self.id}: disc_K / disc_F^2 is not an integer")
        return q

    @property
    def gamma(self) -> CMElement:
        return CMElement(self.base(0), self.base(1), self)

    def element(self, x: RealElement | Number, y: RealElement | Number = 0) -> CMElement:
        F = self.base
        x = x if isinstance(x, RealElement) else F(x)
        y = y if isinstance(y, RealElement) else F(y)
        return CMElement(x, y, self)

    def __hash__(self):
        return hash((self.id, self.disc_K))


@dataclass(frozen=True)
class CMElement:
    """x + y*gamma in K with x, y in F."""

    x: RealElement
    y: RealElement
    K: CMFieldData = field(repr=False, compare=False)

    def _lift(self, other) -> CMElement:
        if isinstance(other, CMElement):
            return other
        if isinstance(other, (RealElement, int, Fraction)):
            return self.K.element(other)
        return NotImplemented

    def __add__(self, other):
        o = self._lift(other)
        return CMElement(self.x + o.x, self.y + o.y, self.K)

    __radd__ = __add__

    def __neg__(self):
        return CMElement(-self.x, -self.y, self.K)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        o = self._lift(other)
        b, c = self.K.rel_b, self.K.rel_c
        yy = self.y * o.y
        return CMElement(self.x * o.x - c * yy, self.x * o.y + o.x * self.y - b * yy, self.K)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise DomainError("negative powers not supported")
        out, base = self.K.element(1), self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return CMElement(self.x / other, self.y / other, self.K)
        if isinstance(other, RealElement):
            inv = other.inverse()
            return CMElement(self.x * inv, self.y * inv, self.K)
        return NotImplemented

    def conjugate(self) -> CMElement:
        return cm_conjugate(self)

    def is_integral(self) -> bool:
        return self.x.is_integral() and self.y.is_integral()

    def in_base(self) -> bool:
        return self.y.is_zero()

    def z_coords(self) -> tuple[Fraction, ...]:
        """Coordinates over the Z-basis (1, eta, gamma, eta*gamma) of O_K."""
        if self.K.base.degree == 1:
            return (self.x.x0, self.y.x0)
        return (self.x.x0, self.x.x1, self.y.x0, self.y.x1)


def cm_conjugate(z: CMElement, K: Optional[CMFieldData] = None) -> CMElement:
    K = K or z.K
    return CMElement(z.x - z.y * K.rel_b, -z.y, K)


def cm_norm_to_F(z: CMElement) -> RealElement:
    b, c = z.K.rel_b, z.K.rel_c
    return z.x * z.x - b * z.x * z.y + c * z.y * z.y


def cm_norm_to_Q(z: CMElement) -> Fraction:
    return cm_norm_to_F(z).norm()


def validate_field_data(K: CMFieldData) -> list[str]:
    """Every violated CMFieldData invariant, as human-readable strings."""
    out = []
    F = K.base
    if F.degree == 2:
        D = F.disc
        if D <= 0 or isqrt(D) ** 2 == D:
            out.append(f"eta polynomial {F.eta_poly} is not irreducible with real roots")
        elif not _is_fundamental_disc(D):
            out.append(f"disc(eta polynomial) = {D} is not a fundamental discriminant, Z[eta] != O_F")
    if not K.has_relative_generator:
        return out
    if not (K.rel_b.is_integral() and K.rel_c.is_integral()):
        out.append("rel_b and rel_c must lie in O_F")
    delta = K.rel_b * K.rel_b - 4 * K.rel_c
    if out:
        return out
    if not all(s < 0 for s in F.signs(delta)):
        out.append("b^2 - 4c is not totally negative; K is not a CM field")
    expected = F.disc**2 * delta.norm()
    if expected != K.disc_K:
        out.append(
            f"disc_F^2 * Norm(b^2 - 4c) = {expected} != disc_K = {K.disc_K}; O_K != O_F[gamma]"
        )
    elif K.disc_K % (F.disc**2):
        out.append("disc_K / disc_F^2 is not an integer")
    return out
