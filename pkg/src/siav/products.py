"""Products of Weil generators: pair enumeration, cliques, super-isolation and polarizations."""

from __future__ import annotations

import os
from collections import defaultdict
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations
from typing import TYPE_CHECKING, Iterable, Optional, Sequence

from .errors import CapabilityError, ConsistencyError, DomainError
from .exactmath import (
    IntegerMatrix,
    IntPolynomial,
    factor_over_integers,
    hermite_normal_form,
    in_lattice,
    integer_roots,
    interpolate,
    resultant,
)
from .generators import (
    SimpleVerdict,
    Verdict,
    WeilGeneratorRecord,
    generator_from_triple,
    is_super_isolated_simple,
    norm_equation_polynomial,
)
from .numfield import CMFieldData, unit_square_root
from .weilpoly import (
    is_ideal,
    is_ordinary,
    middle_coeff,
    norm_pi_minus_conj,
    prime_power_split,
    validate_weil,
)

if TYPE_CHECKING:
    from .catalog import Catalog

TABLE_TYPES = ((1, 1), (1, 2), (1, 1, 2), (1, 2, 2), (2, 2))
WORKERS_ENV = "SIAV_WORKERS"


def type_label(dims: Sequence[int]) -> str:
    return "x".join(str(d) for d in sorted(dims))


@dataclass(frozen=True)
class ProductRecord:
    members: tuple[WeilGeneratorRecord, ...]
    q: int
    h_product: IntPolynomial = field(compare=False)
    decomposition_type: tuple[int, ...] = field(compare=False)

    @classmethod
    def from_members(cls, members: Iterable[WeilGeneratorRecord]) -> ProductRecord:
        ms = tuple(sorted(members, key=lambda r: (r.dimension, r.h.coeffs)))
        qs = {m.q for m in ms}
        if len(qs) != 1:
            raise DomainError("members do not share q")
        h = IntPolynomial((1,))
        for m in ms:
            h = h * m.h
        return cls(ms, qs.pop(), h, tuple(m.dimension for m in ms))

    @property
    def key(self) -> tuple:
        return (self.q, tuple(m.h.coeffs for m in self.members))

    @property
    def type_label(self) -> str:
        return type_label(self.decomposition_type)

    @property
    def dimension(self) -> int:
        return sum(self.decomposition_type)

    def __lt__(self, other: ProductRecord):
        return (self.q, self.decomposition_type, self.key) < (other.q, other.decomposition_type, other.key)


def pair_resultants(members: Sequence[WeilGeneratorRecord]) -> list[tuple[int, int, int]]:
    """(i, j, Res(g_i, g_j)) for all i < j."""
    return [(i, j, resultant(members[i].g_real, members[j].g_real)) for i, j in combinations(range(len(members)), 2)]


def is_product_weil_generator(members: Sequence[WeilGeneratorRecord]) -> bool:
    """Common q and |Res(g_i, g_j)| = 1 for every pair of real Weil polynomials."""
    if len({m.q for m in members}) != 1:
        return False
    return all(abs(r) == 1 for _, _, r in pair_resultants(members))


# Pair enumeration


def _shift_resultant_poly(m1: IntPolynomial, m2: IntPolynomial) -> IntPolynomial:
    """R(d) = Res_s(m1(s), m2(s + d)) = prod (d + sigma(eta1) - tau(eta2))."""
    n = m1.degree * m2.degree
    pts = [(d, resultant(m1, m2.shift(d))) for d in range(-(n // 2), n - n // 2 + 1)]
    return interpolate(pts)


@dataclass(frozen=True)
class _NormSystem:
    """Norm((eta + a)^2 - 4q) - r as a polynomial in a with q left symbolic.

    Stored as coefficient polynomials: P(a, q) = sum_k c_k(a) q^k.
    """

    by_q: tuple[IntPolynomial, ...]

    @classmethod
    def build(cls, K: CMFieldData, eta_index: int) -> _NormSystem:
        # the q-degree is deg F; interpolate in q using integer sample points
        n = K.base.degree
        samples = [norm_equation_polynomial(K, eta_index, q) for q in range(n + 1)]
        width = max(s.degree for s in samples) + 1
        by_q = []
        for k in range(width):
            by_q.append(interpolate([(q, samples[q][k]) for q in range(n + 1)]))
        # by_q[k] is the polynomial in q of the coefficient of a^k; transpose
        qdeg = max(p.degree for p in by_q)
        out = []
        for j in range(qdeg + 1):
            out.append(IntPolynomial(p[j] if j <= p.degree else 0 for p in by_q))
        return cls(tuple(out))

    def at_a(self, a: int) -> IntPolynomial:
        return IntPolynomial(c(a) for c in self.by_q)

    def at_q(self, q: int) -> IntPolynomial:
        out = IntPolynomial()
        qp = 1
        for c in self.by_q:
            out = out + c * qp
            qp *= q
        return out

    @property
    def q_degree(self) -> int:
        return len(self.by_q) - 1

    @property
    def a_degree(self) -> int:
        return max(c.degree for c in self.by_q)


def _eliminate(S1: _NormSystem, S2: _NormSystem, d: int, var: str) -> IntPolynomial:
    """Resultant eliminating one variable from S1(a1, q) = S2(a1 - d, q) = 0."""
    if var == "q":
        bound = S2.q_degree * S1.a_degree + S1.q_degree * S2.a_degree

        def spec(t):
            return resultant(S1.at_a(t), S2.at_a(t - d))

    else:
        bound = S2.a_degree * S1.q_degree + S1.a_degree * S2.q_degree

        def spec(t):
            return resultant(S1.at_q(t), S2.at_q(t).shift(-d))

    pts = [(t, spec(t)) for t in range(-(bound // 2), bound - bound // 2 + 1)]
    E = interpolate(pts)
    if E.is_zero():
        raise ConsistencyError(f"degenerate elimination at d = {d}")
    return E


def _common_int_roots(f: IntPolynomial, g: IntPolynomial) -> set[int]:
    if f.is_zero():
        return integer_roots(g) if not g.is_zero() else set()
    return {r for r in integer_roots(f) if g(r) == 0}


def _records_at(K: CMFieldData, eta_index: int, a: int, q: int) -> Optional[WeilGeneratorRecord]:
    beta = K.base.t_set[eta_index] + a
    u = unit_square_root((4 * q - beta * beta) / K.norm_gamma_diff)
    if u is None:
        return None
    rec = generator_from_triple(K, u, eta_index, a)
    if rec is None or rec.q != q:
        return None
    return rec


def enumerate_pairs(K1: CMFieldData, K2: CMFieldData, order: str = "q-first") -> list[ProductRecord]:
    """All Weil generators of K1 x K2, one ProductRecord per pair of distinct h's.

    order="q-first" eliminates q between the two norm equations and solves
    for a1; order="a-first" eliminates a1 and solves for q.
    """
    if order not in ("q-first", "a-first"):
        raise DomainError(f"unknown elimination order {order!r}")
    for K in (K1, K2):
        if K.base.degree > 2:
            raise CapabilityError(f"{K.id}: base field degree > 2")
    if not (K1.has_relative_generator and K2.has_relative_generator):
        return []
    out: dict[tuple, ProductRecord] = {}
    T1, T2 = K1.base.t_set, K2.base.t_set
    for i1, eta1 in enumerate(T1):
        S1 = _NormSystem.build(K1, i1)
        m1 = eta1.min_poly()
        for i2, eta2 in enumerate(T2):
            S2 = _NormSystem.build(K2, i2)
            R = _shift_resultant_poly(m1, eta2.min_poly())
            ds = integer_roots(R - 1) | integer_roots(R + 1)
            for d in sorted(ds):
                sols = set()
                if order == "q-first":
                    for a1 in integer_roots(_eliminate(S1, S2, d, "q")):
                        for q in _common_int_roots(S1.at_a(a1), S2.at_a(a1 - d)):
                            sols.add((a1, q))
                else:
                    for q in integer_roots(_eliminate(S1, S2, d, "a")):
                        if q < 2:
                            continue
                        for a1 in _common_int_roots(S1.at_q(q), S2.at_q(q).shift(-d)):
                            sols.add((a1, q))
                for a1, q in sorted(sols):
                    if q < 2 or prime_power_split(q) is None:
                        continue
                    r1 = _records_at(K1, i1, a1, q)
                    r2 = _records_at(K2, i2, a1 - d, q)
                    if r1 is None or r2 is None or r1.h == r2.h:
                        continue
                    if not is_product_weil_generator([r1, r2]):
                        raise ConsistencyError("solver produced a pair failing the resultant condition")
                    p = ProductRecord.from_members([r1, r2])
                    out.setdefault(p.key, p)
    return sorted(out.values())


# Cliques


def _bron_kerbosch(adj: dict[int, set[int]]) -> list[frozenset[int]]:
    cliques = []

    def rec(R, P, X):
        if not P and not X:
            cliques.append(frozenset(R))
            return
        pivot = max(P | X, key=lambda v: len(adj[v] & P))
        for v in sorted(P - adj[pivot]):
            rec(R | {v}, P & adj[v], X & adj[v])
            P = P - {v}
            X = X | {v}

    rec(set(), set(adj), set())
    return cliques


def clique_products(
    pair_sets: Iterable[Iterable[ProductRecord]] | dict,
    max_factors: int = 3,
    max_dimension: Optional[int] = None,
    require_ideal: bool = True,
) -> list[ProductRecord]:
    """Every clique of size 2..max_factors in the generator graph, re-verified."""
    if isinstance(pair_sets, dict):
        pair_sets = pair_sets.values()
    vertices: dict[tuple, WeilGeneratorRecord] = {}
    edges: set[tuple[tuple, tuple]] = set()
    for ps in pair_sets:
        for pr in ps:
            if len(pr.members) != 2:
                raise DomainError("pair sets must hold two-member records")
            ks = []
            for m in pr.members:
                k = (m.q, m.h.coeffs)
                vertices.setdefault(k, m)
                ks.append(k)
            edges.add((min(ks), max(ks)))
    order = sorted(vertices)
    idx = {k: i for i, k in enumerate(order)}
    adj: dict[int, set[int]] = {i: set() for i in range(len(order))}
    for a, b in edges:
        adj[idx[a]].add(idx[b])
        adj[idx[b]].add(idx[a])
    found: dict[tuple, ProductRecord] = {}
    for maximal in _bron_kerbosch(adj):
        vs = sorted(maximal)
        for n in range(2, min(max_factors, len(vs)) + 1):
            for sub in combinations(vs, n):
                members = [vertices[order[i]] for i in sub]
                if max_dimension is not None and sum(m.dimension for m in members) > max_dimension:
                    continue
                p = ProductRecord.from_members(members)
                if p.key in found:
                    continue
                if not _verify_clique(p, require_ideal):
                    raise ConsistencyError(f"clique {p.key} fails re-verification")
                found[p.key] = p
    return sorted(found.values())


def _verify_clique(p: ProductRecord, require_ideal: bool) -> bool:
    hs = [m.h for m in p.members]
    if len(set(hs)) != len(hs):
        return False
    if not is_product_weil_generator(p.members):
        return False
    if require_ideal and not is_ideal(p.h_product, p.q):
        return False
    return True


def verify_members(members: Sequence[WeilGeneratorRecord]) -> tuple[bool, list[tuple[int, int, int]]]:
    """Clique check for caller-supplied members: pairwise resultants and common q."""
    res = pair_resultants(members)
    ok = len({m.q for m in members}) == 1 and all(abs(r) == 1 for _, _, r in res)
    return ok, res


# Super-isolation


@dataclass(frozen=True)
class ProductVerdict:
    verdict: Verdict
    reasons: tuple[str, ...] = ()
    factor_verdicts: tuple[tuple[IntPolynomial, SimpleVerdict], ...] = ()
    failing_resultants: tuple[tuple[IntPolynomial, IntPolynomial, int], ...] = ()
    power: int = 1


def is_super_isolated(h: IntPolynomial, q: int, catalog: Catalog) -> ProductVerdict:
    if q < 2 or prime_power_split(q) is None:
        raise DomainError(f"q = {q} is not a prime power")
    if not validate_weil(h, q):
        raise DomainError(f"{h} is not a Weil polynomial for q = {q}")
    fz = factor_over_integers(h)
    mults = {m for _, m in fz.factors}
    if mults != {1}:
        if len(mults) > 1:
            return ProductVerdict(
                Verdict.INAPPLICABLE,
                ("mixed multiplicities; no statement covers this case",),
            )
        n = mults.pop()
        radical = IntPolynomial((1,))
        for f, _ in fz.factors:
            radical = radical * f
        base = is_super_isolated(radical, q, catalog)
        note = f"h is the {n}-th power of its radical; verdict carried by the power theorem"
        return ProductVerdict(
            base.verdict,
            base.reasons + (note,),
            base.factor_verdicts,
            base.failing_resultants,
            n,
        )
    ideal = is_ideal(h, q)
    if not ideal:
        return ProductVerdict(Verdict.INAPPLICABLE, ideal.reasons)
    factors = [f for f, _ in fz.factors]
    simple = [(f, is_super_isolated_simple(f, q, catalog)) for f in factors]
    reasons = []
    for f, v in simple:
        if v.verdict != Verdict.TRUE:
            reasons.append(f"factor {f}: {v.verdict.value}" + (f" ({v.reasons[0]})" if v.reasons else ""))
    from .weilpoly import real_weil_poly

    gs = [(f, real_weil_poly(f, q)) for f in factors]
    failing = []
    for (f1, g1), (f2, g2) in combinations(gs, 2):
        r = resultant(g1, g2)
        if abs(r) != 1:
            failing.append((g1, g2, r))
            reasons.append(f"|Res({g1}, {g2})| = {abs(r)}")
    verdicts = {v.verdict for _, v in simple}
    if failing or Verdict.FALSE in verdicts:
        verdict = Verdict.FALSE
    elif Verdict.UNKNOWN_FIELD in verdicts:
        verdict = Verdict.UNKNOWN_FIELD
    else:
        verdict = Verdict.TRUE
    return ProductVerdict(verdict, tuple(reasons), tuple(simple), tuple(failing))


# Polarizations


@dataclass(frozen=True)
class PolarizationVerdict:
    exists: Optional[bool]
    count_up_to_isomorphism: Optional[int]
    applicable: bool
    reason: str = ""


def pp_exists_simple(h: IntPolynomial, q: int, super_isolated: bool = True) -> PolarizationVerdict:
    """Principal polarization test for a simple ordinary super-isolated class.

    No principal polarization iff Norm(pi - conj pi) = 1 and a_g = -1 mod q
    (mod 4 when q = 2); when one exists it is unique.
    """
    fz = factor_over_integers(h)
    if len(fz.factors) != 1 or fz.factors[0][1] != 1:
        return PolarizationVerdict(None, None, False, "h is not irreducible")
    if not validate_weil(h, q):
        return PolarizationVerdict(None, None, False, "not a Weil polynomial")
    if not is_ordinary(h, q):
        return PolarizationVerdict(None, None, False, "not ordinary")
    if not super_isolated:
        return PolarizationVerdict(None, None, False, "not super-isolated")
    n = norm_pi_minus_conj(h, q)
    ag = middle_coeff(h)
    m = 4 if q == 2 else q
    blocked = n == 1 and (ag + 1) % m == 0
    if blocked:
        return PolarizationVerdict(False, 0, True, f"Norm(pi - conj pi) = 1 and a_g = {ag} = -1 mod {m}")
    why = f"Norm(pi - conj pi) = {n}" if n != 1 else f"a_g = {ag} != -1 mod {m}"
    return PolarizationVerdict(True, 1, True, why)


def pp_verdict(h: IntPolynomial, q: int, catalog: Catalog) -> PolarizationVerdict:
    """Polarization verdict for a product (factor-wise) or a power of a simple class."""
    si = is_super_isolated(h, q, catalog)
    if si.verdict != Verdict.TRUE:
        return PolarizationVerdict(None, None, False, f"not super-isolated ({si.verdict.value})")
    if not is_ordinary(h, q):
        return PolarizationVerdict(None, None, False, "not ordinary")
    fz = factor_over_integers(h)
    factors = [f for f, _ in fz.factors]
    parts = [pp_exists_simple(f, q) for f in factors]
    if not all(p.applicable for p in parts):
        bad = next(p for p in parts if not p.applicable)
        return PolarizationVerdict(None, None, False, bad.reason)
    base_exists = all(p.exists for p in parts)
    n = si.power
    if n == 1:
        if base_exists:
            return PolarizationVerdict(True, 1, True, "every factor admits a principal polarization")
        bad = next(p for p in parts if not p.exists)
        return PolarizationVerdict(False, 0, True, bad.reason)
    if base_exists:
        return PolarizationVerdict(True, None, True, f"base admits one, so does its {n}-th power; count not determined")
    if n % 8 == 0:
        return PolarizationVerdict(True, None, True, "every 8-th power is principally polarized; count not determined")
    return PolarizationVerdict(None, None, True, f"base has none and {n} is not a multiple of 8; existence not determined")


# Resultant coprimality vs idempotents


def idempotent_in_image(g1: IntPolynomial, g2: IntPolynomial) -> bool:
    """Does (1, 0) lie in the image of Z[x] in Z[x]/g1 x Z[x]/g2 (monic g_i)?"""
    if not (g1.is_monic() and g2.is_monic()):
        raise DomainError("idempotent test needs monic polynomials")
    n1, n2 = g1.degree, g2.degree
    rows = []
    xk = IntPolynomial((1,))
    for _ in range(n1 + n2):
        r1 = xk.divmod_exact(g1)[1]
        r2 = xk.divmod_exact(g2)[1]
        rows.append([r1[i] for i in range(n1)] + [r2[i] for i in range(n2)])
        xk = xk * IntPolynomial((0, 1))
    H = hermite_normal_form(IntegerMatrix(rows))
    e1 = [1] + [0] * (n1 - 1) + [0] * n2
    return in_lattice(e1, H)


# Product-count table


@dataclass(frozen=True)
class Table1Result:
    counts: dict[tuple[int, str], int]
    products: tuple[ProductRecord, ...]
    partial: bool
    field_count: int

    @property
    def grand_total(self) -> int:
        return sum(self.counts.values())

    def rows(self) -> list[int]:
        return sorted({q for q, _ in self.counts})

    def types(self) -> list[str]:
        base = [type_label(t) for t in TABLE_TYPES]
        extra = sorted({t for _, t in self.counts} - set(base), key=lambda s: (len(s), s))
        return base + extra


def _pairs_task(args):
    K1, K2, order = args
    return enumerate_pairs(K1, K2, order)


def worker_count() -> int:
    v = os.environ.get(WORKERS_ENV)
    if v:
        try:
            n = int(v)
        except ValueError:
            raise DomainError(f"{WORKERS_ENV} must be an integer, got {v!r}") from None
        return max(1, n)
    return os.cpu_count() or 1


def all_pair_sets(fields: Sequence[CMFieldData], order: str = "q-first", workers: Optional[int] = None):
    """enumerate_pairs over all unordered field pairs, including each field with itself."""
    from .catalog import iter_field_pairs

    tasks = [(a, b, order) for a, b in iter_field_pairs(fields)]
    workers = worker_count() if workers is None else workers
    if workers <= 1 or len(tasks) < 2:
        results = [_pairs_task(t) for t in tasks]
    else:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            results = list(ex.map(_pairs_task, tasks, chunksize=8))
    return {(a.id, b.id): r for (a, b, _), r in zip(tasks, results)}


def table1(catalog: Catalog, order: str = "q-first", workers: Optional[int] = None) -> Table1Result:
    fields = [
        K
        for K in catalog
        if K.class_number_one and K.has_relative_generator and K.degree in (2, 4)
    ]
    pair_sets = all_pair_sets(fields, order, workers)
    ideal_cache: dict[tuple, bool] = {}

    def ideal(m: WeilGeneratorRecord) -> bool:
        k = (m.q, m.h)
        if k not in ideal_cache:
            ideal_cache[k] = bool(is_ideal(m.h, m.q))
        return ideal_cache[k]

    filtered = [[p for p in ps if all(ideal(m) for m in p.members)] for ps in pair_sets.values()]
    products = clique_products(filtered, max_factors=4, max_dimension=5)
    counts: dict[tuple[int, str], int] = defaultdict(int)
    for p in products:
        counts[(p.q, p.type_label)] += 1
    partial = not (catalog.is_complete(2) and catalog.is_complete(4))
    return Table1Result(dict(counts), tuple(products), partial, len(fields))
