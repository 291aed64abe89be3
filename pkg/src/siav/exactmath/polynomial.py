"""Exact univariate polynomials over the integers.

Coefficients are stored in ascending degree order. The zero polynomial is the
empty tuple.
"""

from __future__ import annotations

from fractions import Fraction
from functools import reduce
from math import comb, gcd
from typing import Iterable, Sequence

from ..errors import ConsistencyError, DomainError

__all__ = [
    "IntPolynomial",
    "QuadRingValue",
    "X",
    "discriminant",
    "eval_at_sqrt",
    "interpolate",
    "poly_gcd",
    "resultant",
    "resultant_subresultant",
    "resultant_sylvester",
    "squarefree_part",
]


def _strip(coeffs: Iterable[int]) -> tuple[int, ...]:
    cs = list(coeffs)
    while cs and cs[-1] == 0:
        cs.pop()
    return tuple(cs)


class IntPolynomial:
    """Immutable polynomial with exact integer coefficients (ascending order)."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[int] = ()):
        cs = _strip(coeffs)
        for c in cs:
            if not isinstance(c, int):
                raise TypeError(f"coefficients must be int, got {type(c).__name__}")
        object.__setattr__(self, "coeffs", cs)

    def __setattr__(self, name, value):
        raise AttributeError("IntPolynomial is immutable")

    def __reduce__(self):
        return (IntPolynomial, (self.coeffs,))

    # construction helpers

    @classmethod
    def constant(cls, c: int) -> IntPolynomial:
        return cls((c,))

    @classmethod
    def monomial(cls, n: int, c: int = 1) -> IntPolynomial:
        return cls([0] * n + [c])

    @classmethod
    def from_roots(cls, roots: Iterable[int]) -> IntPolynomial:
        p = cls((1,))
        for r in roots:
            p = p * cls((-r, 1))
        return p

    # basic properties

    @property
    def degree(self) -> int:
        """Degree; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    @property
    def lc(self) -> int:
        if not self.coeffs:
            raise DomainError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_monic(self) -> bool:
        return bool(self.coeffs) and self.coeffs[-1] == 1

    def __getitem__(self, i: int) -> int:
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return 0

    def __len__(self):
        return len(self.coeffs)

    def __iter__(self):
        return iter(self.coeffs)

    def __eq__(self, other):
        if isinstance(other, IntPolynomial):
            return self.coeffs == other.coeffs
        if isinstance(other, int):
            return self.coeffs == _strip((other,))
        return NotImplemented

    def __hash__(self):
        return hash(("IntPolynomial", self.coeffs))

    def __lt__(self, other: IntPolynomial):
        # canonical order: degree first, then coefficients from the top
        return (self.degree, self.coeffs[::-1]) < (other.degree, other.coeffs[::-1])

    def __repr__(self):
        return f"IntPolynomial({list(self.coeffs)!r})"

    def __str__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[i]
            if c == 0:
                continue
            sign = "-" if c < 0 else "+"
            a = abs(c)
            if i == 0:
                body = str(a)
            else:
                mon = "x" if i == 1 else f"x^{i}"
                body = mon if a == 1 else f"{a}*{mon}"
            parts.append((sign, body))
        first_sign, first = parts[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    # arithmetic

    @staticmethod
    def _coerce(other) -> IntPolynomial:
        if isinstance(other, IntPolynomial):
            return other
        if isinstance(other, int):
            return IntPolynomial((other,))
        raise TypeError(f"cannot combine IntPolynomial with {type(other).__name__}")

    def __add__(self, other):
        o = self._coerce(other)
        n = max(len(self.coeffs), len(o.coeffs))
        return IntPolynomial(self[i] + o[i] for i in range(n))

    __radd__ = __add__

    def __neg__(self):
        return IntPolynomial(-c for c in self.coeffs)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, int):
            return IntPolynomial(c * other for c in self.coeffs)
        o = self._coerce(other)
        if not self.coeffs or not o.coeffs:
            return IntPolynomial()
        out = [0] * (len(self.coeffs) + len(o.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(o.coeffs):
                    out[i + j] += a * b
        return IntPolynomial(out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise DomainError("negative polynomial power")
        result, base = IntPolynomial((1,)), self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __call__(self, x):
        """Evaluate by Horner's rule; works for int, Fraction, QuadRingValue."""
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def derivative(self) -> IntPolynomial:
        return IntPolynomial(i * c for i, c in enumerate(self.coeffs) if i)

    def content(self) -> int:
        """Positive gcd of the coefficients, signed like the leading coefficient."""
        if not self.coeffs:
            return 0
        g = reduce(gcd, self.coeffs)
        return g if self.coeffs[-1] > 0 else -g

    def primitive_part(self) -> IntPolynomial:
        if not self.coeffs:
            return self
        c = self.content()
        return IntPolynomial(a // c for a in self.coeffs)

    def exact_div_scalar(self, c: int) -> IntPolynomial:
        out = []
        for a in self.coeffs:
            qq, r = divmod(a, c)
            if r:
                raise ConsistencyError(f"{self} not divisible by {c}")
            out.append(qq)
        return IntPolynomial(out)

    def shift(self, t: int) -> IntPolynomial:
        """Return p(x + t)."""
        n = len(self.coeffs)
        out = [0] * n
        for i, a in enumerate(self.coeffs):
            if a:
                tp = 1
                for j in range(i, -1, -1):
                    # contributes a * C(i, j) * t^(i-j) to x^j
                    out[j] += a * comb(i, j) * tp
                    tp *= t
        return IntPolynomial(out)

    def compose(self, other: IntPolynomial) -> IntPolynomial:
        acc = IntPolynomial()
        for c in reversed(self.coeffs):
            acc = acc * other + c
        return acc

    def negate_variable(self) -> IntPolynomial:
        """Return p(-x)."""
        return IntPolynomial(c if i % 2 == 0 else -c for i, c in enumerate(self.coeffs))

    def pseudo_divmod(self, other: IntPolynomial) -> tuple[IntPolynomial, IntPolynomial]:
        """lc(other)^(deg self - deg other + 1) * self = q * other + r."""
        if other.is_zero():
            raise DomainError("division by zero polynomial")
        db = other.degree
        r = list(self.coeffs)
        if len(r) - 1 < db:
            return IntPolynomial(), self
        e = len(r) - 1 - db + 1
        lb = other.coeffs[-1]
        q = [0] * (len(r) - db)
        for k in range(len(r) - 1 - db, -1, -1):
            # multiply everything so far by lb, then eliminate r[k + db]
            q = [c * lb for c in q]
            r = [c * lb for c in r]
            t = r[k + db] // lb
            q[k] += t
            for j, b in enumerate(other.coeffs):
                r[k + j] -= t * b
            e -= 1
        # e is now 0: every step multiplied by lb exactly once
        return IntPolynomial(q), IntPolynomial(r[:db])

    def pseudo_rem(self, other: IntPolynomial) -> IntPolynomial:
        return self.pseudo_divmod(other)[1]

    def divmod_exact(self, other: IntPolynomial) -> tuple[IntPolynomial, IntPolynomial]:
        """Division over Q, asserting the quotient and remainder are integral."""
        q, r = _divmod_q(self.coeffs, other.coeffs)
        if any(c.denominator != 1 for c in q + r):
            raise ConsistencyError(f"{self} / {other} is not integral")
        return IntPolynomial(int(c) for c in q), IntPolynomial(int(c) for c in r)

    def exact_div(self, other: IntPolynomial) -> IntPolynomial:
        q, r = self.divmod_exact(other)
        if not r.is_zero():
            raise ConsistencyError(f"{other} does not divide {self}")
        return q

    def divides(self, other: IntPolynomial) -> bool:
        """True if self divides other in Z[x]."""
        if self.is_zero():
            return other.is_zero()
        q, r = _divmod_q(other.coeffs, self.coeffs)
        return not any(r) and all(c.denominator == 1 for c in q)


X = IntPolynomial((0, 1))


def _divmod_q(a: Sequence, b: Sequence) -> tuple[list[Fraction], list[Fraction]]:
    if not b:
        raise DomainError("division by zero polynomial")
    r = [Fraction(c) for c in a]
    db = len(b) - 1
    if len(r) - 1 < db:
        return [], r
    q = [Fraction(0)] * (len(r) - db)
    lb = b[-1]
    for k in range(len(r) - 1 - db, -1, -1):
        t = r[k + db] / lb
        q[k] = t
        if t:
            for j, c in enumerate(b):
                r[k + j] -= t * c
    r = r[:db]
    while r and r[-1] == 0:
        r.pop()
    return q, r


def poly_gcd(f: IntPolynomial, g: IntPolynomial) -> IntPolynomial:
    """Primitive gcd in Z[x] with positive leading coefficient (primitive PRS)."""
    a, b = f.primitive_part(), g.primitive_part()
    if a.is_zero():
        return b
    while not b.is_zero():
        a, b = b, a.pseudo_rem(b).primitive_part()
    return a.primitive_part()


def squarefree_part(f: IntPolynomial) -> IntPolynomial:
    """Primitive squarefree part of f (product of its distinct irreducible factors)."""
    if f.degree < 1:
        return IntPolynomial((1,))
    g = poly_gcd(f, f.derivative())
    return f.primitive_part().exact_div(g) if g.degree > 0 else f.primitive_part()


# resultants


def _bareiss_det(m: list[list[int]]) -> int:
    n = len(m)
    if n == 0:
        return 1
    a = [row[:] for row in m]
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        akk = a[k][k]
        for i in range(k + 1, n):
            aik = a[i][k]
            row_i, row_k = a[i], a[k]
            for j in range(k + 1, n):
                row_i[j] = (row_i[j] * akk - aik * row_k[j]) // prev
        prev = akk
    return sign * a[n - 1][n - 1]


def sylvester_matrix(f: IntPolynomial, g: IntPolynomial) -> list[list[int]]:
    """Sylvester matrix, f's (descending) coefficients in the top rows."""
    m, n = f.degree, g.degree
    size = m + n
    fd, gd = list(reversed(f.coeffs)), list(reversed(g.coeffs))
    rows = []
    for i in range(n):
        rows.append([0] * i + fd + [0] * (size - m - 1 - i))
    for i in range(m):
        rows.append([0] * i + gd + [0] * (size - n - 1 - i))
    return rows


def resultant_sylvester(f: IntPolynomial, g: IntPolynomial) -> int:
    if f.is_zero() or g.is_zero():
        raise DomainError("resultant of the zero polynomial")
    if f.degree == 0 and g.degree == 0:
        return 1
    return _bareiss_det(sylvester_matrix(f, g))


def resultant_subresultant(f: IntPolynomial, g: IntPolynomial) -> int:
    """Resultant by the subresultant PRS (Collins/Brown)."""
    if f.is_zero() or g.is_zero():
        raise DomainError("resultant of the zero polynomial")
    a, b = f, g
    s = 1
    if a.degree < b.degree:
        a, b = b, a
        if a.degree % 2 and b.degree % 2:
            s = -1
    if b.degree == 0:
        return s * b.coeffs[0] ** a.degree
    ca, cb = abs(a.content()), abs(b.content())
    t = ca ** b.degree * cb ** a.degree
    a = a.exact_div_scalar(ca)
    b = b.exact_div_scalar(cb)
    gg, h = 1, Fraction(1)
    while True:
        delta = a.degree - b.degree
        if a.degree % 2 and b.degree % 2:
            s = -s
        r = a.pseudo_rem(b)
        if r.is_zero():
            return 0
        a = b
        div = gg * h**delta
        assert div.denominator == 1
        b = r.exact_div_scalar(int(div))
        gg = a.lc
        h = Fraction(gg) ** delta / h ** (delta - 1) if delta else h
        if b.degree == 0:
            hh = Fraction(b.lc) ** a.degree / h ** (a.degree - 1)
            assert hh.denominator == 1
            return s * t * int(hh)


def resultant(f: IntPolynomial, g: IntPolynomial) -> int:
    """Res(f, g), Sylvester convention with f's coefficients in the top rows."""
    if f.is_zero() or g.is_zero():
        raise DomainError("resultant of the zero polynomial")
    if max(f.degree, g.degree) > 6:
        return resultant_subresultant(f, g)
    return resultant_sylvester(f, g)


def discriminant(f: IntPolynomial) -> int:
    d = f.degree
    if d < 1:
        raise DomainError("discriminant of a constant polynomial")
    r = resultant(f, f.derivative())
    q, rem = divmod(r, f.lc)
    if rem:
        raise ConsistencyError("Res(f, f') not divisible by lc(f)")
    return -q if (d * (d - 1) // 2) % 2 else q


def interpolate(points: Sequence[tuple[int, int]]) -> IntPolynomial:
    """Integer polynomial through the given integer points (Newton form)."""
    xs = [Fraction(x) for x, _ in points]
    coef = [Fraction(y) for _, y in points]
    n = len(points)
    for j in range(1, n):
        for i in range(n - 1, j - 1, -1):
            coef[i] = (coef[i] - coef[i - 1]) / (xs[i] - xs[i - j])
    # expand Newton form into monomial coefficients
    out = [Fraction(0)] * n
    for k in range(n - 1, -1, -1):
        # out = out * (x - xs[k]) + coef[k]
        nxt = [Fraction(0)] * n
        for i in range(n - 1):
            nxt[i + 1] += out[i]
        for i in range(n):
            nxt[i] -= xs[k] * out[i]
        nxt[0] += coef[k]
        out = nxt
    if any(c.denominator != 1 for c in out):
        raise ConsistencyError("interpolated polynomial is not integral")
    return IntPolynomial(int(c) for c in out)


class QuadRingValue:
    """a + b*sqrt(q) with exact integers; sqrt(q) is never simplified."""

    __slots__ = ("a", "b", "q")

    def __init__(self, a: int, b: int, q: int):
        if q < 0:
            raise DomainError("QuadRingValue requires q >= 0")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "q", q)

    def __setattr__(self, name, value):
        raise AttributeError("QuadRingValue is immutable")

    def __reduce__(self):
        return (QuadRingValue, (self.a, self.b, self.q))

    @classmethod
    def sqrt(cls, q: int) -> QuadRingValue:
        return cls(0, 1, q)

    def _lift(self, other) -> QuadRingValue:
        if isinstance(other, QuadRingValue):
            if other.q != self.q:
                raise DomainError("mixing QuadRingValues with different q")
            return other
        if isinstance(other, int):
            return QuadRingValue(other, 0, self.q)
        return NotImplemented

    def __add__(self, other):
        o = self._lift(other)
        return QuadRingValue(self.a + o.a, self.b + o.b, self.q)

    __radd__ = __add__

    def __neg__(self):
        return QuadRingValue(-self.a, -self.b, self.q)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        o = self._lift(other)
        return QuadRingValue(
            self.a * o.a + self.q * self.b * o.b, self.a * o.b + o.a * self.b, self.q
        )

    __rmul__ = __mul__

    def __eq__(self, other):
        if isinstance(other, QuadRingValue):
            return (self.a, self.b, self.q) == (other.a, other.b, other.q)
        if isinstance(other, int):
            return self.b == 0 and self.a == other
        return NotImplemented

    def __hash__(self):
        return hash((self.a, self.b, self.q))

    def __repr__(self):
        return f"QuadRingValue({self.a}, {self.b}, q={self.q})"

    def __str__(self):
        sign = "-" if self.b < 0 else "+"
        return f"{self.a} {sign} {abs(self.b)}*sqrt({self.q})"

    def conjugate(self) -> QuadRingValue:
        return QuadRingValue(self.a, -self.b, self.q)

    def norm(self) -> int:
        """a^2 - q b^2, the product with the conjugate."""
        return self.a * self.a - self.q * self.b * self.b

    def is_zero(self) -> bool:
        """Syntactic zero test (both components vanish)."""
        return self.a == 0 and self.b == 0

    def collapse(self) -> int:
        """The rational integer value; only defined for perfect-square q."""
        from math import isqrt

        r = isqrt(self.q)
        if r * r != self.q:
            raise DomainError(f"collapse() requires square q, got {self.q}")
        return self.a + self.b * r

    def sign(self) -> int:
        """Sign of the real number a + b*sqrt(q)."""
        a, b = self.a, self.b
        sa = (a > 0) - (a < 0)
        sb = (b > 0) - (b < 0)
        if sb == 0 or self.q == 0:
            return sa
        if sa == 0 or sa == sb:
            return sb
        # opposite signs: compare a^2 with q b^2
        d = a * a - self.q * b * b
        return sa if d > 0 else (-sa if d < 0 else 0)


def eval_at_sqrt(f: IntPolynomial, q: int) -> QuadRingValue:
    """f(sqrt(q)) as an element of Z[sqrt(q)], computed exactly."""
    if q < 0:
        raise DomainError("eval_at_sqrt requires q >= 0")
    a = b = 0
    # Horner in the twisted ring; multiplying by sqrt(q) maps (a, b) -> (q b, a)
    for c in reversed(f.coeffs):
        a, b = q * b + c, a
    return QuadRingValue(a, b, q)
