"""Weil generators of a single CM field K = F(gamma).

A Weil generator is written alpha = (u(gamma - conj gamma) + eta + a)/2 with u
a unit of O_F, eta in the T-set of F and a an integer. Since
gamma - conj(gamma) = 2 gamma + b, this is alpha = (u b + eta + a)/2 + u gamma.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import TYPE_CHECKING, Iterable, Optional

from .errors import ConsistencyError, DomainError
from .exactmath import (
    IntegerMatrix,
    IntPolynomial,
    discriminant,
    factor_over_integers,
    integer_roots,
    lattice_index,
)
from .numfield import (
    CMElement,
    CMFieldData,
    RealElement,
    cm_conjugate,
    cm_norm_to_F,
    square_root_in_field,
    unit_square_root,
)
from .weilpoly import (
    Check,
    disc_order,
    is_ideal,
    prime_power_split,
    real_weil_poly,
    validate_weil,
)

if TYPE_CHECKING:
    from .catalog import Catalog


class Verdict(str, Enum):
    TRUE = "true"
    FALSE = "false"
    UNKNOWN_FIELD = "unknown-field"
    INAPPLICABLE = "inapplicable"


@dataclass(frozen=True)
class WeilGeneratorRecord:
    """One Weil generator up to complex conjugation, keyed by its minimal polynomial.

    The triple (u, eta_index, a) is None for members supplied by the caller
    without field data.
    """

    field_id: str
    q: int
    h: IntPolynomial
    g_real: IntPolynomial
    u: Optional[RealElement] = field(default=None, compare=False)
    eta_index: Optional[int] = field(default=None, compare=False)
    a: Optional[int] = field(default=None, compare=False)

    @property
    def dimension(self) -> int:
        return self.h.degree // 2

    def sort_key(self):
        return (self.q, self.h.degree, self.h.coeffs)

    def __lt__(self, other: WeilGeneratorRecord):
        return (self.sort_key(), self.field_id) < (other.sort_key(), other.field_id)

    @classmethod
    def from_polynomial(cls, h: IntPolynomial, q: int, field_id: str = "") -> WeilGeneratorRecord:
        """A record for a caller-supplied member (field-level status taken on trust)."""
        check = validate_weil(h, q)
        if not check:
            raise DomainError(f"{h} is not a Weil polynomial for q = {q}: {check.reasons[0]}")
        return cls(field_id, q, h, real_weil_poly(h, q))


def weil_from_real(g: IntPolynomial, q: int) -> IntPolynomial:
    """h(x) = x^deg(g) * g(x + q/x)."""
    n = g.degree
    base = IntPolynomial((q, 0, 1))
    out = IntPolynomial()
    for k, c in enumerate(g.coeffs):
        if c:
            out = out + IntPolynomial.monomial(n - k, c) * base**k
    return out


def gamma_diff(K: CMFieldData) -> CMElement:
    """gamma - conj(gamma) = 2 gamma + b."""
    return K.element(K.rel_b, 2)


def alpha_from_triple(K: CMFieldData, u: RealElement, eta: RealElement, a: int) -> CMElement:
    return K.element((u * K.rel_b + eta + a) / 2, u)


def _is_unit(u: RealElement) -> bool:
    return u.is_integral() and abs(u.norm()) == 1


def _record(K: CMFieldData, u, eta_index, a, q) -> WeilGeneratorRecord:
    eta = K.base.t_set[eta_index]
    g_real = (eta + a).min_poly()
    return WeilGeneratorRecord(K.id, q, weil_from_real(g_real, q), g_real, u, eta_index, a)


def generator_from_triple(K: CMFieldData, u: RealElement, eta_index: int, a: int) -> Optional[WeilGeneratorRecord]:
    """Record for alpha = (u(gamma - conj gamma) + eta + a)/2, or None if it is not a Weil generator."""
    return generator_from_triple_why(K, u, eta_index, a)[0]


def generator_from_triple_why(K, u, eta_index, a) -> tuple[Optional[WeilGeneratorRecord], str]:
    if not K.has_relative_generator:
        return None, "field has no relative generator gamma"
    if not _is_unit(u):
        return None, "u is not a unit of O_F"
    if not 0 <= eta_index < len(K.base.t_set):
        return None, "eta index out of range"
    alpha = alpha_from_triple(K, u, K.base.t_set[eta_index], a)
    if not alpha.is_integral():
        return None, "alpha is not integral"
    n = cm_norm_to_F(alpha)
    if not n.is_rational() or n.x0.denominator != 1:
        return None, "alpha * conj(alpha) is not a rational integer"
    q = int(n.x0)
    if q < 2 or prime_power_split(q) is None:
        return None, f"alpha * conj(alpha) = {q} is not a prime power"
    return _record(K, u, eta_index, a, q), ""


def decompose_generator(K: CMFieldData, alpha: CMElement) -> tuple[RealElement, int, int]:
    """The unique (u, eta_index, a) with alpha = (u(gamma - conj gamma) + eta + a)/2."""
    if not alpha.is_integral():
        raise DomainError("alpha is not integral")
    n = cm_norm_to_F(alpha)
    if not n.is_rational() or n.x0.denominator != 1 or n.x0 < 2:
        raise DomainError("alpha * conj(alpha) is not an integer >= 2")
    q = int(n.x0)
    beta = alpha.x * 2 - K.rel_b * alpha.y  # alpha + conj(alpha)
    u = alpha.y  # alpha - conj(alpha) = y (2 gamma + b)
    if not _is_unit(u):
        raise DomainError("alpha - conj(alpha) is not a unit multiple of gamma - conj(gamma)")
    found = None
    for i, eta in enumerate(K.base.t_set):
        d = beta - eta
        if d.is_rational() and d.x0.denominator == 1:
            found = (i, int(d.x0))
            break
    if found is None:
        raise DomainError("alpha + conj(alpha) is not eta + a for any eta in T")
    rec = _record(K, u, found[0], found[1], q)
    if disc_order(rec.h, q) != K.disc_K:
        raise DomainError("Z[alpha, conj alpha] is not the maximal order")
    return u, found[0], found[1]


def record_alpha(K: CMFieldData, rec: WeilGeneratorRecord) -> CMElement:
    if rec.u is None:
        raise DomainError("record carries no triple")
    return alpha_from_triple(K, rec.u, K.base.t_set[rec.eta_index], rec.a)


def _roots_in_F(K: CMFieldData, g: IntPolynomial) -> list[RealElement]:
    """Roots of g lying in F (g of degree deg F)."""
    F = K.base
    if g.degree != F.degree:
        return []
    if F.degree == 1:
        return [F(-g[0])]
    s0, s1 = g[0], g[1]
    dg = discriminant(g)
    # sqrt(dg) = m sqrt(disc_F) = m (2 eta + t1)
    m2, r = divmod(dg, F.disc)
    if r or m2 <= 0:
        return []
    from math import isqrt

    m = isqrt(m2)
    if m * m != m2:
        return []
    out = []
    for sign in (1, -1):
        beta = (F(-s1) + sign * m * (2 * F.eta + F.t1)) / 2
        if beta.norm() == s0 and beta.trace() == -s1:
            out.append(beta)
    return out


def _delta_square(K: CMFieldData, beta: RealElement, q: int) -> RealElement:
    """(beta^2 - 4q)/(b^2 - 4c), the square of the u-coordinate."""
    return (beta * beta - 4 * q) / (K.rel_b * K.rel_b - 4 * K.rel_c)


def field_contains_roots(K: CMFieldData, h: IntPolynomial, q: int) -> bool:
    """Does K contain a root of the irreducible Weil polynomial h?"""
    if h.degree != K.degree or not K.has_relative_generator:
        return False
    g = real_weil_poly(h, q)
    return any(square_root_in_field(_delta_square(K, beta, q)) is not None for beta in _roots_in_F(K, g))


def is_weil_generator(K: CMFieldData, h: IntPolynomial, q: int) -> Check:
    """Is a root of h a Weil generator of K, i.e. Z[pi, conj pi] = O_K?"""
    if not K.has_relative_generator:
        return Check(False, ("field has no relative generator",))
    if h.degree != K.degree:
        return Check(False, (f"degree {h.degree} differs from [K:Q] = {K.degree}",))
    g = real_weil_poly(h, q)
    dg = discriminant(g) if g.degree >= 1 else 1
    if g.degree == 1:
        dg = 1
    do = disc_order(h, q)
    reasons = []
    if do != K.disc_K:
        reasons.append(f"disc Z[pi, conj pi] = {do} != disc_K = {K.disc_K}")
    if dg != K.disc_F:
        reasons.append(f"disc of the real Weil polynomial {dg} != disc_F = {K.disc_F}")
    if reasons:
        return Check(False, tuple(reasons))
    for beta in _roots_in_F(K, g):
        eta_a = _split_eta(K, beta)
        if eta_a is None:
            continue
        u2 = (4 * q - beta * beta) / K.norm_gamma_diff
        u = unit_square_root(u2)
        if u is None:
            continue
        alpha = alpha_from_triple(K, u, K.base.t_set[eta_a[0]], eta_a[1])
        if alpha.is_integral():
            return Check(True)
    return Check(False, ("no triple (u, eta, a) reproduces h",))


def _split_eta(K: CMFieldData, beta: RealElement) -> Optional[tuple[int, int]]:
    for i, eta in enumerate(K.base.t_set):
        d = beta - eta
        if d.is_rational() and d.x0.denominator == 1:
            return i, int(d.x0)
    return None


def norm_equation_polynomial(K: CMFieldData, eta_index: int, q: int) -> IntPolynomial:
    """Norm_{F/Q}((eta + a)^2 - 4q) - disc_K/disc_F^2 as a polynomial in a."""
    F = K.base
    eta = F.t_set[eta_index]
    if F.degree == 1:
        return IntPolynomial((-4 * q - K.disc_ratio, 0, 1))
    mp = eta.min_poly()
    t0, t1 = mp[0], mp[1]
    X0 = IntPolynomial((-4 * q - t0, 0, 1))  # a^2 - 4q - t0
    X1 = IntPolynomial((-t1, 2))  # 2a - t1
    return X0 * X0 - X0 * X1 * t1 + X1 * X1 * t0 - K.disc_ratio


def enumerate_generators(K: CMFieldData, q: int) -> list[WeilGeneratorRecord]:
    """All Weil generators of K with alpha * conj(alpha) = q, one record per h."""
    if q < 2 or prime_power_split(q) is None:
        raise DomainError(f"q = {q} is not a prime power")
    if not K.has_relative_generator:
        return []
    F = K.base
    found: dict[IntPolynomial, WeilGeneratorRecord] = {}
    for i, eta in enumerate(F.t_set):
        P = norm_equation_polynomial(K, i, q)
        for a in sorted(integer_roots(P)):
            beta = eta + a
            u = unit_square_root((4 * q - beta * beta) / K.norm_gamma_diff)
            if u is None:
                continue
            for sgn in (1, -1):
                rec = generator_from_triple(K, sgn * u, i, a)
                if rec is not None and rec.q == q and rec.h not in found:
                    found[rec.h] = rec
    return sorted(found.values())


def enumerate_generators_range(K: CMFieldData, q_max: int, q_min: int = 2) -> list[WeilGeneratorRecord]:
    out = []
    for q in range(max(2, q_min), q_max + 1):
        if prime_power_split(q) is not None:
            out.extend(enumerate_generators(K, q))
    return out


def record_violations(K: CMFieldData, rec: WeilGeneratorRecord) -> list[str]:
    """Check the five record invariants from scratch."""
    out = []
    F = K.base
    eta = F.t_set[rec.eta_index]
    alpha = alpha_from_triple(K, rec.u, eta, rec.a)
    if not alpha.is_integral():
        out.append("alpha not integral")
    lhs = rec.u * rec.u * K.norm_gamma_diff + (eta + rec.a) * (eta + rec.a)
    if lhs != F(4 * rec.q):
        out.append("4q != u^2 Norm(gamma - conj gamma) + (eta + a)^2")
    if ((eta + rec.a) ** 2 - 4 * rec.q).norm() != K.disc_ratio:
        out.append("Norm((eta + a)^2 - 4q) != disc_K / disc_F^2")
    if disc_order(rec.h, rec.q) != K.disc_K:
        out.append("disc_order(h) != disc_K")
    if rec.g_real != (eta + rec.a).min_poly():
        out.append("g_real is not the minimal polynomial of eta + a")
    return out


@dataclass(frozen=True)
class SimpleVerdict:
    verdict: Verdict
    reasons: tuple[str, ...] = ()
    field_id: Optional[str] = None
    record: Optional[WeilGeneratorRecord] = None


def identify_fields(h: IntPolynomial, q: int, fields: Iterable[CMFieldData]) -> list[CMFieldData]:
    """Catalog fields that contain a root of irreducible h."""
    return [K for K in fields if field_contains_roots(K, h, q)]


def is_super_isolated_simple(h: IntPolynomial, q: int, catalog: Catalog) -> SimpleVerdict:
    """Verdict for a simple ideal isogeny class: class number one and Z[pi, conj pi] = O_K."""
    fz = factor_over_integers(h)
    if len(fz.factors) != 1 or fz.factors[0][1] != 1:
        raise DomainError("h must be irreducible")
    ideal = is_ideal(h, q)
    if not ideal:
        raise DomainError(f"h is not ideal: {'; '.join(ideal.reasons)}")
    if not validate_weil(h, q):
        raise DomainError("h is not a Weil polynomial")
    do = disc_order(h, q)
    matches = identify_fields(h, q, catalog.of_degree(h.degree))
    if not matches:
        if catalog.is_complete(h.degree):
            return SimpleVerdict(
                Verdict.FALSE,
                (f"no class-number-1 CM field of degree {h.degree} contains a root of h",),
            )
        return SimpleVerdict(Verdict.UNKNOWN_FIELD, ("no catalog field contains a root of h",))
    for K in matches:
        if not K.class_number_one:
            return SimpleVerdict(Verdict.FALSE, (f"field {K.id} does not have class number one",), K.id)
        if do != K.disc_K:
            return SimpleVerdict(
                Verdict.FALSE,
                (f"Z[pi, conj pi] has discriminant {do}, O_K has {K.disc_K}; order is not maximal",),
                K.id,
            )
        check = is_weil_generator(K, h, q)
        if check:
            return SimpleVerdict(Verdict.TRUE, (), K.id, _record_for(K, h, q))
        return SimpleVerdict(Verdict.FALSE, check.reasons, K.id)
    raise AssertionError("unreachable")


def _record_for(K: CMFieldData, h: IntPolynomial, q: int) -> WeilGeneratorRecord:
    for rec in enumerate_generators(K, q):
        if rec.h == h:
            return rec
    raise ConsistencyError(f"{h} accepted for {K.id} but not found by enumeration")


def _root_in_K(K: CMFieldData, h: IntPolynomial, q: int) -> Optional[CMElement]:
    """A root of h inside K, built with square roots in F (no unit machinery)."""
    g = real_weil_poly(h, q)
    for beta in _roots_in_F(K, g):
        delta = square_root_in_field(_delta_square(K, beta, q))
        if delta is None:
            continue
        # alpha + conj alpha = beta, alpha - conj alpha = delta (2 gamma + b)
        return K.element((beta + delta * K.rel_b) / 2, delta)
    return None


def brute_force_maximality(K: CMFieldData, h: IntPolynomial, q: int) -> bool:
    """Index of Z[pi, conj pi] in O_K = O_F[gamma] via Smith normal form, compared with 1."""
    if h.degree > 8:
        raise DomainError("brute-force maximality is limited to degree <= 8")
    alpha = _root_in_K(K, h, q)
    if alpha is None:
        return False
    if h(0) != q ** (h.degree // 2):
        raise ConsistencyError("constant term is not q^g")
    beta = cm_conjugate(alpha)
    n = h.degree
    rows = []
    ai = K.element(1)
    for i in range(n):
        m = ai
        for j in range(n):
            coords = m.z_coords()
            if any(c.denominator != 1 for c in coords):
                raise ConsistencyError("root of a monic h has non-integral coordinates")
            rows.append([int(c) for c in coords])
            m = m * beta
        ai = ai * alpha
    return lattice_index(IntegerMatrix(rows)) == 1
