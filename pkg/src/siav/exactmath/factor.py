"""Factorization in Z[x]: modular factoring, Hensel lifting, subset recombination."""

from __future__ import annotations

import random
from dataclasses import dataclass
from itertools import combinations
from math import isqrt

from ..errors import CapabilityError, DomainError
from .polynomial import IntPolynomial, poly_gcd

MAX_DEGREE = 24


@dataclass(frozen=True)
class Factorization:
    """f = content * prod(factor ** multiplicity); factors primitive, lc > 0."""

    content: int
    factors: tuple[tuple[IntPolynomial, int], ...]

    def expand(self) -> IntPolynomial:
        out = IntPolynomial((self.content,))
        for fac, m in self.factors:
            out = out * fac**m
        return out

    def is_squarefree(self) -> bool:
        return all(m == 1 for _, m in self.factors)

    def irreducible_factors(self) -> list[IntPolynomial]:
        return [f for f, _ in self.factors]


# arithmetic in (Z/mZ)[x]; lists in ascending order, no trailing zeros


def _trim(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def _mod(a, m):
    return _trim([c % m for c in a])


def _add(a, b, m):
    n = max(len(a), len(b))
    return _trim([((a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0)) % m for i in range(n)])


def _sub(a, b, m):
    n = max(len(a), len(b))
    return _trim([((a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0)) % m for i in range(n)])


def _mul(a, b, m):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _mod(out, m)


def _divmod(a, b, m):
    """Division by b whose leading coefficient is a unit mod m."""
    inv = pow(b[-1], -1, m)
    r = list(a)
    db = len(b) - 1
    if len(r) - 1 < db:
        return [], _mod(r, m)
    q = [0] * (len(r) - db)
    for k in range(len(r) - 1 - db, -1, -1):
        t = (r[k + db] * inv) % m
        q[k] = t
        if t:
            for j, c in enumerate(b):
                r[k + j] = (r[k + j] - t * c) % m
    return _trim(q), _trim(r[:db])


def _monic(a, p):
    inv = pow(a[-1], -1, p)
    return [(c * inv) % p for c in a]


def _gcd(a, b, p):
    while b:
        a, b = b, _divmod(a, b, p)[1]
    return _monic(a, p) if a else a


def _powmod(base, e, f, p):
    result = [1]
    base = _divmod(base, f, p)[1]
    while e:
        if e & 1:
            result = _divmod(_mul(result, base, p), f, p)[1]
        base = _divmod(_mul(base, base, p), f, p)[1]
        e >>= 1
    return result


def _deriv(a, p):
    return _trim([(i * c) % p for i, c in enumerate(a)][1:])


def _distinct_degree(f, p):
    out = []
    h = [0, 1]
    i = 1
    while len(f) - 1 >= 2 * i:
        h = _powmod(h, p, f, p)
        g = _gcd(f, _sub(h, [0, 1], p), p)
        if len(g) > 1:
            out.append((g, i))
            f = _divmod(f, g, p)[0]
            h = _divmod(h, f, p)[1]
        i += 1
    if len(f) > 1:
        out.append((_monic(f, p), len(f) - 1))
    return out


def _equal_degree(g, d, p, rng):
    if len(g) - 1 == d:
        return [g]
    while True:
        a = _trim([rng.randrange(p) for _ in range(len(g) - 1)])
        if len(a) < 2:
            continue
        b = _sub(_powmod(a, (p**d - 1) // 2, g, p), [1], p)
        c = _gcd(g, b, p)
        if 1 < len(c) < len(g):
            return _equal_degree(c, d, p, rng) + _equal_degree(_divmod(g, c, p)[0], d, p, rng)


def factor_mod_p(f: IntPolynomial, p: int, seed: int = 0) -> list[list[int]]:
    """Monic irreducible factors of squarefree f modulo an odd prime p."""
    fm = _monic(_mod(list(f.coeffs), p), p)
    rng = random.Random(seed)
    out = []
    for g, d in _distinct_degree(fm, p):
        out.extend(_equal_degree(g, d, p, rng))
    out.sort()
    return out


# Hensel lifting


def _hensel_step(f, g, h, s, t, m):
    """One quadratic Hensel step mod m -> m^2 (h monic)."""
    m2 = m * m
    e = _sub(f, _mul(g, h, m2), m2)
    q, r = _divmod(_mul(s, e, m2), h, m2)
    g2 = _add(g, _add(_mul(t, e, m2), _mul(q, g, m2), m2), m2)
    h2 = _add(h, r, m2)
    b = _sub(_add(_mul(s, g2, m2), _mul(t, h2, m2), m2), [1], m2)
    c, d = _divmod(_mul(s, b, m2), h2, m2)
    s2 = _sub(s, d, m2)
    t2 = _sub(t, _add(_mul(t, b, m2), _mul(c, g2, m2), m2), m2)
    return g2, h2, s2, t2, m2


def _ext_gcd(a, b, p):
    """s, t with s a + t b = 1 mod p for coprime a, b."""
    r0, r1 = a, b
    s0, s1 = [1], []
    t0, t1 = [], [1]
    while r1:
        q, r = _divmod(r0, r1, p)
        r0, r1 = r1, r
        s0, s1 = s1, _sub(s0, _mul(q, s1, p), p)
        t0, t1 = t1, _sub(t0, _mul(q, t1, p), p)
    inv = pow(r0[-1], -1, p)
    return [c * inv % p for c in s0], [c * inv % p for c in t0]


def _lift_two(f, g, h, p, target):
    s, t = _ext_gcd(g, h, p)
    m = p
    while m < target:
        g, h, s, t, m = _hensel_step(_mod(f, m * m), g, h, s, t, m)
    return g, h, m


def hensel_lift(f: IntPolynomial, factors: list[list[int]], p: int, target: int):
    """Lift a mod-p factorization f = lc * prod(factors) to modulus >= target.

    Returns (lifted monic factors, modulus).
    """

    def rec(fpoly, facs, modulus_goal):
        if len(facs) == 1:
            lc = fpoly[-1]
            return [_monic_mod(fpoly, lc, modulus_goal)], modulus_goal
        k = len(facs) // 2
        left, right = facs[:k], facs[k:]
        lc = fpoly[-1]
        g = [lc % p]
        for a in left:
            g = _mul(g, a, p)
        h = [1]
        for a in right:
            h = _mul(h, a, p)
        g2, h2, m = _lift_two(fpoly, g, h, p, modulus_goal)
        lf, _ = rec(g2, left, m)
        rf, _ = rec(h2, right, m)
        return lf + rf, m

    m = p
    while m < target:
        m *= m
    lifted, m = rec(_mod(list(f.coeffs), m), factors, m)
    return lifted, m


def _monic_mod(a, lc, m):
    inv = pow(lc, -1, m)
    return [(c * inv) % m for c in a]


def _symmetric(a, m):
    half = m // 2
    return [c - m if c > half else c for c in a]


_SMALL_PRIMES = [p for p in range(3, 400) if all(p % d for d in range(2, isqrt(p) + 1))]


def _good_primes(f: IntPolynomial):
    df = f.derivative()
    for p in _SMALL_PRIMES:
        if f.lc % p == 0:
            continue
        fm = _mod(list(f.coeffs), p)
        if len(_gcd(fm, _mod(list(df.coeffs), p), p)) == 1:
            yield p


def _factor_squarefree_primitive(f: IntPolynomial) -> list[IntPolynomial]:
    if f.degree <= 1:
        return [f]
    best = None
    tried = 0
    for p in _good_primes(f):
        facs = factor_mod_p(f, p)
        if best is None or len(facs) < len(best[1]):
            best = (p, facs)
        tried += 1
        if len(facs) == 1 or tried >= 5:
            break
    if best is None:
        raise CapabilityError("no suitable prime for modular factorization")
    p, facs = best
    if len(facs) == 1:
        return [f]
    n = f.degree
    norm2 = isqrt(sum(c * c for c in f.coeffs)) + 1
    bound = 2 * abs(f.lc) * (2**n) * norm2
    lifted, m = hensel_lift(f, facs, p, bound)

    out = []
    rest = f
    pool = list(lifted)
    size = 1
    while 2 * size <= len(pool):
        found = False
        for S in combinations(range(len(pool)), size):
            g = [rest.lc % m]
            for i in S:
                g = _mul(g, pool[i], m)
            cand = IntPolynomial(_symmetric(g, m)).primitive_part()
            if cand.degree > 0 and cand.divides(rest):
                out.append(cand)
                rest = rest.exact_div(cand)
                pool = [a for i, a in enumerate(pool) if i not in S]
                found = True
                break
        if not found:
            size += 1
    if rest.degree > 0:
        out.append(rest.primitive_part())
    return out


def squarefree_decomposition(f: IntPolynomial) -> list[tuple[IntPolynomial, int]]:
    """Yun's algorithm on the primitive part: f ~ prod(a_i ** i)."""
    f = f.primitive_part()
    if f.degree < 1:
        return []
    out = []
    df = f.derivative()
    a0 = poly_gcd(f, df)
    b = f.exact_div(a0)
    c = df.exact_div(a0)
    d = c - b.derivative()
    i = 1
    while b.degree > 0:
        a = poly_gcd(b, d)
        if a.degree > 0:
            out.append((a, i))
        b = b.exact_div(a)
        c = d.exact_div(a)
        d = c - b.derivative()
        i += 1
    return out


def factor_over_integers(f: IntPolynomial) -> Factorization:
    """Complete factorization of a nonzero f into primitive irreducibles."""
    if f.is_zero():
        raise DomainError("cannot factor the zero polynomial")
    content = f.content()
    factors: dict[IntPolynomial, int] = {}
    g = f.primitive_part()
    # pull out powers of x first; they confuse nothing but are cheap to remove
    k = next(i for i, c in enumerate(g.coeffs) if c)
    if k:
        factors[IntPolynomial((0, 1))] = k
        g = IntPolynomial(g.coeffs[k:])
    for part, mult in squarefree_decomposition(g):
        # the bound applies to squarefree parts, so high powers of small factors are fine
        if part.degree > MAX_DEGREE:
            raise CapabilityError(f"squarefree part of degree {part.degree} exceeds the factorization bound {MAX_DEGREE}")
        for fac in _factor_squarefree_primitive(part):
            fac = fac.primitive_part()
            factors[fac] = factors.get(fac, 0) + mult
    items = tuple(sorted(factors.items(), key=lambda t: (t[0].degree, t[0].coeffs[::-1])))
    fz = Factorization(content, items)
    return fz


def is_irreducible(f: IntPolynomial) -> bool:
    """Irreducible over Q (content ignored) and of positive degree."""
    if f.degree < 1:
        return False
    fz = factor_over_integers(f)
    return len(fz.factors) == 1 and fz.factors[0][1] == 1
