"""Regenerate the quartic class-number-1 CM field catalog with PARI/GP.

Offline data-build step; needs ``cypari2`` (``pip install .[catalog]``).
The package itself never imports PARI.

Candidates come from genus theory. If K is a quartic CM field with real
quadratic subfield F and h(K) = 1, then h(F) = 1 and the ambiguous class
number formula h(F) * 2^(t-1) / [E_F : E_F n N(K*)] = 1 forces t <= 3 ramified
places in K/F, i.e. at most one finite prime of F ramifies.  So
K = F(sqrt(u * pi)) with u in {1, -1, eps, -eps} and pi = 1 or a prime element
of F.  The search runs over d_F * N(pi) <= --bound.

Cross-checks (optional):

* ``--nflist-bound``: C4 and D4 fields from ``nflist`` up to a discriminant
  bound;
* biquadratic (V4) CM fields as composita of two imaginary quadratic fields
  of class number <= 2, a complete candidate set because
  h(K) = Q * h1 * h2 * h3 / 2 with Q in {1, 2}.

Every accepted field has a certified class number (``bnfcertify``).
"""

import argparse
import sys

import cypari2

pari = cypari2.Pari()
pari.allocatemem(4 * 10**9)

# imaginary quadratic discriminants with class number 1 or 2
IMAG_H1 = [-3, -4, -7, -8, -11, -19, -43, -67, -163]
IMAG_H2 = [-15, -20, -24, -35, -40, -51, -52, -88, -91, -115, -123, -148,
           -187, -232, -235, -267, -403, -427]


def eta_poly(dF):
    """Ascending coefficients of the minimal polynomial of the standard eta."""
    if dF % 4 == 1:
        return [-(dF - 1) // 4, -1, 1]
    return [-(dF // 4), 0, 1]


def is_cm(pol):
    return any(int(pari.polsturm(s[0])) == 2 for s in pari.nfsubfields(pol, 2))


def relative_data(pol):
    """Return (dF, eta_coeffs, b, c) with O_K = O_F[gamma], gamma^2 + b gamma + c = 0."""
    real = [s[0] for s in pari.nfsubfields(pol, 2) if int(pari.polsturm(s[0])) == 2]
    dF = int(pari.nfdisc(real[0]))
    ec = eta_poly(dF)
    m = pari(f"Pol({list(reversed(ec))}, 'y)")
    bnfF = pari.bnfinit(m, 1)
    if int(bnfF.bnf_get_no()) != 1:
        raise ValueError("real subfield has class number > 1")
    nfF = bnfF
    facs = pari.nffactor(nfF, pol)[0]
    P = [f for f in facs if int(pari.poldegree(f)) == 2][0]
    pb = pari.rnfpseudobasis(nfF, P)
    A, I = pb[0], pb[1]
    # HNF w.r.t. (1, x): first basis vector is 1 with ideal O_F
    i1 = pari.idealhnf(nfF, I[0])
    if i1 != pari.matid(2):
        raise ValueError("unexpected first pseudo-basis ideal")
    gen = pari.bnfisprincipal(bnfF, I[1], 3)[1]
    g = pari.nfbasistoalg(nfF, gen)
    a = pari.nfbasistoalg(nfF, A[1][0])
    x = pari("'x")
    gamma = pari.lift(g * (a + x))
    cp = pari.rnfcharpoly(nfF, P, gamma)
    b = pari.lift(pari.polcoef(cp, 1))
    c = pari.lift(pari.polcoef(cp, 0))

    def coords(e):
        e = pari.lift(e)
        c0 = pari.polcoef(e, 0, "y")
        c1 = pari.polcoef(e, 1, "y")
        if pari.denominator(c0) != 1 or pari.denominator(c1) != 1:
            raise ValueError("non-integral relative coefficient")
        return int(c0), int(c1)

    return dF, ec, coords(b), coords(c)


def accept(pol, require_h1=True):
    """Certified (disc, class number == 1), or None when rejected."""
    bnf = pari.bnfinit(pol, 1)
    h1 = int(bnf.bnf_get_no()) == 1
    if require_h1 and not h1:
        return None
    if int(pari.bnfcertify(bnf)) != 1:
        raise RuntimeError(f"certification failed for {pol}")
    return int(pari.nfdisc(pol)), h1


def galois_label(pol):
    order, sign = (int(v) for v in pari.polgalois(pol)[:2])
    if order == 8:
        return "D4"
    return "C4" if sign == -1 else "V4"


def genus_candidates(bound):
    """Quartic CM fields F(sqrt(u * pi)) with h(F) = 1 and d_F * N(pi) <= bound."""
    for dF in range(5, bound + 1):
        if dF % 10000 == 0:
            print(f"# genus search: d_F = {dF}", file=sys.stderr, flush=True)
        if not pari.isfundamental(dF) or int(pari.quadclassunit(dF)[0]) != 1:
            continue
        m = f"y^2 - {dF}"
        bnfF = pari.bnfinit(m, 1)
        eps = pari.lift(bnfF.bnf_get_fu()[0])
        gens = [pari(1)]
        for p in pari.primes([2, bound // dF]):
            for pr in pari.idealprimedec(bnfF, p):
                if int(pari.idealnorm(bnfF, pr)) * dF <= bound:
                    g = pari.bnfisprincipal(bnfF, pr, 3)[1]
                    gens.append(pari.lift(pari.nfbasistoalg(bnfF, g)))
        for g in gens:
            for u in (1, -1, eps, -eps):
                delta = pari.lift(pari.Mod(u * g, m))
                pol = pari.polredbest(pari.rnfequation(bnfF, f"x^2 - ({delta})"))
                if int(pari.polsturm(pol)) != 0:
                    continue
                yield galois_label(pol), pol


def candidates(bound, nflist_bound=0):
    yield from genus_candidates(bound)
    if nflist_bound > 0:
        for G in ("C4", "D4"):
            for f in pari(f'nflist("{G}", [1, {nflist_bound}], 2)'):
                yield G, f
    seen = set()
    imag = IMAG_H1 + IMAG_H2
    for i, d1 in enumerate(imag):
        for d2 in imag[i + 1:]:
            f = pari.polredabs(pari.polcompositum(f"x^2 - ({d1})", f"x^2 - ({d2})")[0])
            key = str(f)
            if key not in seen:
                seen.add(key)
                yield "V4", f


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--bound", type=int, default=10**5,
                    help="bound on d_F * N(pi) for the genus-theory search")
    ap.add_argument("--nflist-bound", type=int, default=0,
                    help="also scan nflist C4/D4 fields up to this discriminant")
    ap.add_argument("--extra", action="append", default=[],
                    help="additional quartic CM polynomial, kept whatever its class number")
    ap.add_argument("--complete", action="store_true",
                    help="emit 'complete_degree = 4' (only after checking the output against known product counts)")
    ap.add_argument("-o", "--output", default="-")
    args = ap.parse_args()

    rows = []
    seen = set()
    todo = []
    for G, f in candidates(args.bound, args.nflist_bound):
        key = str(pari.polredabs(f))
        if key not in seen:
            seen.add(key)
            todo.append((G, pari(key), True))
    todo += [(galois_label(pari(e)), pari(e), False) for e in args.extra]
    for G, f, need_h1 in todo:
        if not is_cm(f):
            continue
        if need_h1 and int(pari.bnfinit(f).bnf_get_no()) != 1:
            continue
        res = accept(f, need_h1)
        if res is None:
            continue
        dK, h1 = res
        dF, ec, b, c = relative_data(f)
        rows.append((G, dK, str(pari.polredabs(f)), dF, ec, b, c, h1))
        print(G, dK, rows[-1][2], h1, file=sys.stderr, flush=True)
    rows.sort(key=lambda r: (r[1], r[2]))

    out = sys.stdout if args.output == "-" else open(args.output, "w")
    print("# Quartic CM fields (class number one unless flagged otherwise).", file=out)
    flags = f"--bound {args.bound} --nflist-bound {args.nflist_bound}"
    flags += "".join(f" --extra '{e}'" for e in args.extra) + (" --complete" if args.complete else "")
    print(f"# Generated by tools/build_quartic_catalog.py {flags}", file=out)
    print(f"# PARI/GP {'.'.join(str(v) for v in pari('version()')[:3])}; class numbers certified.", file=out)
    if args.complete:
        print(file=out)
        print("complete_degree = 4", file=out)
    for G, dK, pol, dF, ec, b, c, h1 in rows:
        print(file=out)
        print("field {", file=out)
        print(f"  id        = q{dK}-{G}-{pol.replace(' ', '')}", file=out)
        print(f"  f_poly    = {','.join(map(str, ec))}", file=out)
        print(f"  rel_b     = {b[0]},{b[1]}", file=out)
        print(f"  rel_c     = {c[0]},{c[1]}", file=out)
        print(f"  disc_K    = {dK}", file=out)
        print(f"  class_number_one = {'true' if h1 else 'false'}", file=out)
        print(f"  source    = PARI bnfinit+bnfcertify; {G}; defining polynomial {pol}", file=out)
        print("}", file=out)


if __name__ == "__main__":
    main()
