import random
from itertools import combinations

import pytest

from siav.catalog import builtin_degree2, iter_field_pairs
from siav.errors import DomainError
from siav.exactmath import IntPolynomial, resultant
from siav.generators import Verdict, WeilGeneratorRecord, enumerate_generators_range
from siav.products import (
    ProductRecord,
    clique_products,
    enumerate_pairs,
    idempotent_in_image,
    is_product_weil_generator,
    is_super_isolated,
    pp_exists_simple,
    pp_verdict,
    table1,
    verify_members,
)
from siav.weilpoly import twist

from conftest import P

OCTIC_NO_PP = P(1, 1, -3, -1, 7, -2, -12, 8, 16)
TWENTY_DIM = [
    P(1, -2, 3, -4, 4),
    P(1, -4, 9, -15, 18, -16, 8),
    P(1, -3, 6, -9, 12, -12, 8),
    P(1, -5, 12, -20, 29, -40, 48, -40, 16),
    P(1, -5, 13, -25, 39, -50, 52, -40, 16),
    P(1, -4, 5, 2, -11, 4, 20, -32, 16),
]


def fid(cat, disc):
    return next(K for K in cat if K.degree == 2 and K.disc_K == disc)


def test_pair_examples(builtins):
    K4, K7, K8, K11, K19 = (fid(builtins, d) for d in (-4, -7, -8, -11, -19))
    assert enumerate_pairs(K11, K19) == []
    pairs = enumerate_pairs(K4, K19)
    assert [p.q for p in pairs] == [17, 17]
    assert {frozenset(m.h for m in p.members) for p in pairs} == {
        frozenset({P(1, -8, 17), P(1, -7, 17)}),
        frozenset({P(1, 8, 17), P(1, 7, 17)}),
    }
    for K in (K4, K8):
        assert {p.q for p in enumerate_pairs(K, K7)} == {2}


@pytest.mark.parametrize("order", ["q-first", "a-first"])
def test_elimination_orders_agree(builtins, order):
    for K1, K2 in iter_field_pairs(builtins):
        assert enumerate_pairs(K1, K2, order) == enumerate_pairs(K1, K2, "q-first")


def test_unknown_order(builtins):
    with pytest.raises(DomainError):
        enumerate_pairs(builtins.fields[0], builtins.fields[1], "sideways")


def test_double_enumeration_on_builtins(builtins):
    """Pair enumeration for q <= 50 equals brute-force pairing of per-field generators."""
    q_max = 50
    per_field = {K.id: enumerate_generators_range(K, q_max) for K in builtins}
    for K1, K2 in iter_field_pairs(builtins):
        brute = set()
        for r1 in per_field[K1.id]:
            for r2 in per_field[K2.id]:
                if r1.q == r2.q and r1.h != r2.h and is_product_weil_generator([r1, r2]):
                    brute.add(ProductRecord.from_members([r1, r2]).key)
        solved = {p.key for p in enumerate_pairs(K1, K2) if p.q <= q_max}
        assert solved == brute, (K1.id, K2.id)


def test_double_enumeration_with_quartics(catalog):
    q_max = 30
    fields = [catalog.by_id(i) for i in ("disc-4", "disc-7", "q125-C4-x^4-x^3+x^2-x+1", "q1088-D4-x^4-2*x^3+5*x^2-4*x+2")]
    per_field = {K.id: enumerate_generators_range(K, q_max) for K in fields}
    for K1, K2 in iter_field_pairs(fields):
        brute = {
            ProductRecord.from_members([r1, r2]).key
            for r1 in per_field[K1.id]
            for r2 in per_field[K2.id]
            if r1.q == r2.q and r1.h != r2.h and is_product_weil_generator([r1, r2])
        }
        assert {p.key for p in enumerate_pairs(K1, K2) if p.q <= q_max} == brute


def test_f5_example(catalog):
    h1, h2 = P(1, -3, 5), P(1, -1, 5)
    assert is_super_isolated(h1, 5, catalog).verdict == Verdict.TRUE
    assert is_super_isolated(h2, 5, catalog).verdict == Verdict.TRUE
    v = is_super_isolated(h1 * h2, 5, catalog)
    assert v.verdict == Verdict.FALSE
    assert [(str(a), str(b), abs(r)) for a, b, r in v.failing_resultants] == [("x - 3", "x - 1", 2)]
    assert "|Res(x - 3, x - 1)| = 2" in v.reasons


def test_powers(catalog):
    v = is_super_isolated(P(1, -3, 5) ** 2, 5, catalog)
    assert v.verdict == Verdict.TRUE and v.power == 2
    mixed = is_super_isolated(P(1, -3, 5) ** 2 * P(1, 3, 5), 5, catalog)
    assert mixed.verdict == Verdict.INAPPLICABLE
    assert is_super_isolated(P(1, -3, 5) ** 2 * P(1, -1, 5) ** 2, 5, catalog).verdict == Verdict.FALSE


def test_non_weil_input_rejected(catalog):
    with pytest.raises(DomainError):
        is_super_isolated(P(1, 0, 1), 5, catalog)
    with pytest.raises(DomainError):
        is_super_isolated(P(1, -3, 5), 10, catalog)


def test_polarization_examples(catalog):
    # no degree-8 catalog: super-isolation is not decidable, the polarization rule itself is
    assert not pp_verdict(OCTIC_NO_PP, 2, catalog).applicable
    v = pp_exists_simple(OCTIC_NO_PP, 2)
    assert v.applicable and v.exists is False
    v = pp_verdict(P(1, -1, 3), 3, catalog)
    assert (v.exists, v.count_up_to_isomorphism) == (True, 1)
    v = pp_verdict(P(1, 0, -5, 0, 9), 3, catalog)
    assert (v.exists, v.count_up_to_isomorphism) == (True, 1)
    v = pp_verdict(P(1, -3, 5) ** 8, 5, catalog)
    assert (v.exists, v.count_up_to_isomorphism) == (True, None)


def test_pp_simple_blocked_and_refusals():
    v = pp_exists_simple(OCTIC_NO_PP, 2)
    assert v.exists is False and v.count_up_to_isomorphism == 0
    assert not pp_exists_simple(P(1, 0, 2), 2).applicable  # not ordinary
    assert not pp_exists_simple(P(1, -3, 5), 5, super_isolated=False).applicable


def test_pp_power_of_blocked_class(catalog):
    # OCTIC_NO_PP is blocked; its square is undetermined, its 8th power is principally polarized
    sq = pp_verdict(OCTIC_NO_PP**2, 2, catalog)
    if sq.applicable:
        assert sq.exists is None
    eighth = pp_verdict(OCTIC_NO_PP**8, 2, catalog)
    if eighth.applicable:
        assert eighth.exists is True and eighth.count_up_to_isomorphism is None


def weil_sample(catalog):
    out = []
    for K in list(catalog)[:25]:
        for r in enumerate_generators_range(K, 30):
            out.append((r.h, r.q))
    return out


def test_pp_verdict_twist_invariance(catalog):
    n = 0
    for h, q in weil_sample(catalog) + [(OCTIC_NO_PP, 2), (P(1, 0, -5, 0, 9), 3)]:
        a, b = pp_verdict(h, q, catalog), pp_verdict(twist(h), q, catalog)
        assert (a.applicable, a.exists, a.count_up_to_isomorphism) == (b.applicable, b.exists, b.count_up_to_isomorphism), h
        n += 1
    assert n > 50


def test_twenty_dimensional_clique():
    members = [WeilGeneratorRecord.from_polynomial(h, 2, f"user-{i}") for i, h in enumerate(TWENTY_DIM)]
    assert sum(m.dimension for m in members) == 20
    ok, res = verify_members(members)
    assert ok and len(res) == 15
    assert all(abs(r) == 1 for _, _, r in res)
    assert all(m.q == 2 for m in members)


def test_resultant_counterexamples():
    assert abs(resultant(P(1, -3), P(1, -1))) == 2
    assert abs(resultant(P(1, -3), P(1, -4))) == 1
    assert not idempotent_in_image(P(1, -3), P(1, -1))
    assert idempotent_in_image(P(1, -3), P(1, -4))


def small_ring_pairs(n=20, seed=7):
    rng = random.Random(seed)
    pairs = [(P(1, -3), P(1, -1)), (P(1, -3), P(1, -4))]
    while len(pairs) < n:
        d1, d2 = rng.randint(1, 3), rng.randint(1, 3)
        g1 = IntPolynomial([rng.randint(-4, 4) for _ in range(d1)] + [1])
        g2 = IntPolynomial([rng.randint(-4, 4) for _ in range(d2)] + [1])
        if resultant(g1, g2) == 0:
            continue
        pairs.append((g1, g2))
    return pairs


def test_small_ring_pairs_cover_both_outcomes():
    outcomes = {abs(resultant(a, b)) == 1 for a, b in small_ring_pairs()}
    assert outcomes == {True, False}


@pytest.mark.parametrize("g1,g2", small_ring_pairs())
def test_coprimality_matches_idempotent_oracle(g1, g2):
    assert (abs(resultant(g1, g2)) == 1) == idempotent_in_image(g1, g2)


def test_clique_products_synthetic(builtins):
    K4, K7, K8 = (fid(builtins, d) for d in (-4, -7, -8))
    sets = [enumerate_pairs(a, b) for a, b in iter_field_pairs([K4, K7, K8])]
    prods = clique_products(sets, max_factors=3)
    assert prods == sorted(prods)
    for p in prods:
        assert is_product_weil_generator(p.members)
        for a, b in combinations(p.members, 2):
            assert a.h != b.h
    triples = [p for p in prods if len(p.members) == 3]
    if triples:
        with pytest.raises(DomainError):
            clique_products([[triples[0]]])


def test_table_builtins_only():
    res = table1(builtin_degree2(), workers=1)
    assert res.partial
    one = {q: c for (q, t), c in res.counts.items() if t == "1x1"}
    assert one == {2: 4, 3: 4, 5: 2, 11: 2, 17: 2, 83: 2, 101: 2, 227: 2, 257: 2, 1523: 2, 1601: 2}
    assert set(res.types()) == {"1x1", "1x2", "1x1x2", "1x2x2", "2x2"}


def test_table_parallel_matches_serial():
    a = table1(builtin_degree2(), workers=1)
    b = table1(builtin_degree2(), workers=2)
    assert a == b
