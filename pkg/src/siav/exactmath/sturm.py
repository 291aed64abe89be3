"""Real root counting and isolation with Sturm sequences, exact rationals only."""

from __future__ import annotations

from fractions import Fraction
from typing import Optional

from ..errors import DomainError
from .polynomial import IntPolynomial, poly_gcd, squarefree_part

Bound = Optional[Fraction]  # None stands for -inf (left end) or +inf (right end)


def sign_at(f: IntPolynomial, x) -> int:
    """Sign of f(x) for a rational x, using integer arithmetic only."""
    x = Fraction(x)
    p, q = x.numerator, x.denominator
    n = f.degree
    acc = 0
    qp = 1
    # sum a_i p^i q^(n-i); q > 0 so the sign is that of f(x)
    for c in reversed(f.coeffs):
        acc = acc * p + c * qp
        qp *= q
    return (acc > 0) - (acc < 0) if n >= 0 else 0


def _sign_at_inf(f: IntPolynomial, positive: bool) -> int:
    s = 1 if f.lc > 0 else -1
    if not positive and f.degree % 2:
        s = -s
    return s


def sturm_sequence(f: IntPolynomial) -> list[IntPolynomial]:
    """Sturm chain f, f', -rem, ... with primitive-part normalization per step."""
    seq = [f.primitive_part(), f.derivative().primitive_part()]
    while seq[-1].degree > 0:
        a, b = seq[-2], seq[-1]
        lb = b.lc
        r = a.pseudo_rem(b)
        if r.is_zero():
            break
        # prem scales by lb^(da-db+1); undo a negative factor to keep the sign
        k = a.degree - b.degree + 1
        if lb < 0 and k % 2:
            r = -r
        c = abs(r.content())
        r = IntPolynomial(-(x // c) for x in r.coeffs)
        seq.append(r)
    return seq


def _variations(signs: list[int]) -> int:
    nz = [s for s in signs if s != 0]
    return sum(1 for a, b in zip(nz, nz[1:]) if a != b)


def _var_at(seq: list[IntPolynomial], x: Bound, right: bool) -> int:
    if x is None:
        return _variations([_sign_at_inf(p, right) for p in seq])
    return _variations([sign_at(p, x) for p in seq])


def _check_squarefree(f: IntPolynomial):
    if f.degree < 0:
        raise DomainError("Sturm count of the zero polynomial")
    if f.degree > 0 and poly_gcd(f, f.derivative()).degree > 0:
        raise DomainError("Sturm counting requires a squarefree polynomial")


def sturm_count(f: IntPolynomial, lo: Bound = None, hi: Bound = None) -> int:
    """Number of distinct real roots of squarefree f in the half-open (lo, hi]."""
    _check_squarefree(f)
    if f.degree == 0:
        return 0
    lo = None if lo is None else Fraction(lo)
    hi = None if hi is None else Fraction(hi)
    if lo is not None and hi is not None and lo >= hi:
        return 0
    seq = sturm_sequence(f)
    return _var_at(seq, lo, False) - _var_at(seq, hi, True)


def root_bound(f: IntPolynomial) -> Fraction:
    """Cauchy bound: every complex root has |z| < 1 + max |a_i / a_n|."""
    lc = abs(f.lc)
    return 1 + Fraction(max(abs(c) for c in f.coeffs[:-1]) if f.degree > 0 else 0, lc)


def isolate_real_roots(f: IntPolynomial, width: Fraction | None = None) -> list[tuple[Fraction, Fraction]]:
    """Disjoint half-open intervals (lo, hi], each holding exactly one real root.

    f must be squarefree. If width is given, every interval is refined until
    hi - lo <= width.
    """
    _check_squarefree(f)
    if f.degree < 1:
        return []
    seq = sturm_sequence(f)
    B = root_bound(f)
    out = []
    stack = [(-B, B, _var_at(seq, -B, False), _var_at(seq, B, True))]
    while stack:
        lo, hi, vlo, vhi = stack.pop()
        n = vlo - vhi
        if n == 0:
            continue
        if n == 1 and (width is None or hi - lo <= width):
            out.append((lo, hi))
            continue
        mid = (lo + hi) / 2
        vmid = _var_at(seq, mid, True)
        stack.append((lo, mid, vlo, vmid))
        stack.append((mid, hi, vmid, vhi))
    out.sort()
    return out


def integer_roots(f: IntPolynomial) -> set[int]:
    """All integer roots of a nonzero f.

    Candidates come from the real roots of the squarefree part, each isolated
    to an interval of width below one, then filtered by divisibility of the
    trailing coefficient and confirmed by exact evaluation.
    """
    if f.is_zero():
        raise DomainError("every integer is a root of the zero polynomial")
    roots: set[int] = set()
    g = f
    if g.degree >= 1 and g.coeffs[0] == 0:
        roots.add(0)
        k = next(i for i, c in enumerate(g.coeffs) if c)
        g = IntPolynomial(g.coeffs[k:])
    if g.degree < 1:
        return roots
    sf = squarefree_part(g)
    a0 = sf.coeffs[0]
    for lo, hi in isolate_real_roots(sf, width=Fraction(1, 2)):
        # (lo, hi] with width <= 1/2 holds at most one integer
        cand = hi.numerator // hi.denominator
        if cand > lo and cand != 0 and a0 % cand == 0 and sf(cand) == 0:
            roots.add(cand)
    return roots
