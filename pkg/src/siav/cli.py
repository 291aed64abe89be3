"""Command-line interface.

Exit status: 0 on success (negative verdicts included), 2 on usage or data
errors, including catalog validation failures.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time
from typing import Any, Optional

from . import __version__
from .catalog import Catalog, builtin_degree2, check_catalog_text, default_catalog, load_catalog
from .errors import CatalogError, SiavError
from .exactmath import IntPolynomial
from .generators import Verdict, WeilGeneratorRecord, enumerate_generators
from .numfield import RealElement
from .products import (
    ProductRecord,
    enumerate_pairs,
    is_super_isolated,
    pp_exists_simple,
    pp_verdict,
    table1,
)
from .weilpoly import analyze, prime_power_split

EXIT_OK = 0
EXIT_USAGE = 2


class UsageError(Exception):
    pass


# JSON helpers


def poly_json(h: IntPolynomial) -> dict:
    return {"coeffs": list(h.coeffs), "text": str(h)}


def real_json(x: Optional[RealElement]):
    if x is None:
        return None
    return [str(x.x0), str(x.x1)]


def record_json(r: WeilGeneratorRecord) -> dict:
    return {
        "field": r.field_id,
        "q": r.q,
        "h": poly_json(r.h),
        "g_real": poly_json(r.g_real),
        "u": real_json(r.u),
        "eta_index": r.eta_index,
        "a": r.a,
    }


def product_json(p: ProductRecord) -> dict:
    return {
        "q": p.q,
        "type": p.type_label,
        "members": [record_json(m) for m in p.members],
    }


class RunReport:
    def __init__(self, command: str, inputs: dict, catalog: Optional[Catalog]):
        self.command = command
        self.inputs = inputs
        self.catalog = catalog
        self.result: Any = None
        self.partial = False
        self.timing = 0.0

    def canonical(self) -> dict:
        doc = {
            "tool": "siav",
            "version": __version__,
            "command": self.command,
            "inputs": self.inputs,
            "partial": self.partial,
            "result": self.result,
        }
        if self.catalog is not None:
            doc["catalog"] = {
                "fingerprint": self.catalog.fingerprint(),
                "fields": len(self.catalog),
                "complete_degrees": sorted(self.catalog.complete_degrees),
            }
        return doc

    def canonical_text(self) -> str:
        return json.dumps(self.canonical(), sort_keys=True, indent=2)

    def digest(self) -> str:
        return hashlib.sha256(self.canonical_text().encode()).hexdigest()

    def structured(self) -> str:
        doc = self.canonical()
        doc["timing_seconds"] = round(self.timing, 3)
        return json.dumps(doc, sort_keys=True, indent=2)


def parse_poly(text: str, monic_check: bool = True) -> IntPolynomial:
    try:
        cs = [int(t) for t in text.replace(" ", "").split(",") if t != ""]
    except ValueError:
        raise UsageError(f"--poly expects comma-separated integers (ascending), got {text!r}") from None
    h = IntPolynomial(cs)
    if h.degree < 1:
        raise UsageError("--poly must have positive degree")
    if monic_check and not h.is_monic():
        raise UsageError(f"{h} is not monic")
    return h


def _catalog_from_args(args) -> Catalog:
    if getattr(args, "builtin_only", False):
        return builtin_degree2()
    if getattr(args, "catalog", None):
        return load_catalog(args.catalog)
    return default_catalog()


def _q_arg(q: int) -> int:
    if q < 2:
        raise UsageError(f"q must be >= 2, got {q}")
    if prime_power_split(q) is None:
        raise UsageError(f"q = {q} is not a prime power")
    return q


# Commands


def cmd_analyze(args) -> RunReport:
    cat = _catalog_from_args(args)
    q = _q_arg(args.q)
    h = parse_poly(args.poly, args.monic_check)
    rep = RunReport("analyze", {"poly": list(h.coeffs), "q": q}, cat)
    try:
        an = analyze(h, q)
    except SiavError as exc:
        raise UsageError(str(exc)) from None
    res: dict[str, Any] = {
        "h": poly_json(h),
        "q": q,
        "p": an.p,
        "v": an.v,
        "g": an.g,
        "is_weil": an.is_weil,
        "weil_reasons": list(an.weil_reasons),
        "is_squarefree": an.is_squarefree,
        "has_real_roots": an.has_real_roots,
        "is_ordinary": an.is_ordinary,
        "is_ideal": an.is_ideal,
        "ideal_reasons": list(an.ideal_reasons),
        "real_weil_poly": poly_json(an.real_weil_poly) if an.real_weil_poly is not None else None,
        "middle_coeff": an.middle_coeff,
        "norm_pi_diff": an.norm_pi_diff,
        "disc_order": an.disc_order,
        "factors": [{"factor": poly_json(f), "multiplicity": m} for f, m in an.factors],
    }
    if an.is_weil:
        si = is_super_isolated(h, q, cat)
        res["super_isolated"] = {
            "verdict": si.verdict.value,
            "reasons": list(si.reasons),
            "power": si.power,
            "failing_resultants": [
                {"g1": poly_json(a), "g2": poly_json(b), "resultant": r} for a, b, r in si.failing_resultants
            ],
            "factors": [
                {"factor": poly_json(f), "verdict": v.verdict.value, "field": v.field_id, "reasons": list(v.reasons)}
                for f, v in si.factor_verdicts
            ],
        }
        pp = pp_verdict(h, q, cat)
        conditional = False
        if not pp.applicable and si.verdict == Verdict.UNKNOWN_FIELD and an.is_irreducible:
            # the catalog cannot settle super-isolation (e.g. degree 8); evaluate the
            # polarization rule anyway and say that it rests on that hypothesis
            cand = pp_exists_simple(h, q, super_isolated=True)
            if cand.applicable:
                pp, conditional = cand, True
        res["principal_polarization"] = {
            "applicable": pp.applicable,
            "conditional_on_super_isolation": conditional,
            "exists": pp.exists,
            "count": pp.count_up_to_isomorphism,
            "reason": pp.reason,
        }
    rep.result = res
    return rep


def render_analyze(rep: RunReport) -> str:
    r = rep.result
    yn = {True: "yes", False: "no", None: "n/a"}
    lines = [
        f"h = {r['h']['text']}",
        f"q = {r['q']} (p = {r['p']}, v = {r['v']}), g = {r['g']}",
        f"weil polynomial      : {yn[r['is_weil']]}" + (f" ({r['weil_reasons'][0]})" if r["weil_reasons"] else ""),
        f"squarefree           : {yn[r['is_squarefree']]}",
        f"real roots           : {yn[r['has_real_roots']]}",
        f"ordinary             : {yn[r['is_ordinary']]}",
        f"ideal                : {yn[r['is_ideal']]}" + (f" ({'; '.join(r['ideal_reasons'])})" if r["ideal_reasons"] else ""),
    ]
    if r["real_weil_poly"]:
        lines.append(f"real Weil polynomial : {r['real_weil_poly']['text']}")
    lines.append(f"middle coeff a_{r['g']}     : {r['middle_coeff']}")
    if r["norm_pi_diff"] is not None:
        lines.append(f"Norm(pi - conj pi)   : {r['norm_pi_diff']}")
    if r["disc_order"] is not None:
        lines.append(f"disc Z[pi, conj pi]  : {r['disc_order']}")
    si = r.get("super_isolated")
    if si:
        lines.append(f"super-isolated       : {si['verdict']}")
        for reason in si["reasons"]:
            lines.append(f"  - {reason}")
        pp = r["principal_polarization"]
        if pp["applicable"]:
            ex = {True: "true", False: "false", None: "unknown"}[pp["exists"]]
            cnt = "unknown" if pp["count"] is None else str(pp["count"])
            cond = "; assumes super-isolation" if pp["conditional_on_super_isolation"] else ""
            lines.append(f"pp exists            : {ex} (count {cnt}; {pp['reason']}{cond})")
        else:
            lines.append(f"pp exists            : inapplicable ({pp['reason']})")
    return "\n".join(lines)


def _parse_q_range(text: str) -> tuple[int, int]:
    if ":" in text:
        a, b = text.split(":", 1)
        try:
            lo, hi = int(a), int(b)
        except ValueError:
            raise UsageError(f"--q-range expects LO:HI, got {text!r}") from None
        if lo > hi:
            raise UsageError("--q-range is empty")
        return max(2, lo), hi
    raise UsageError(f"--q-range expects LO:HI, got {text!r}")


def cmd_enum_field(args) -> RunReport:
    cat = _catalog_from_args(args)
    try:
        K = cat.by_id(args.field)
    except KeyError:
        raise UsageError(f"unknown field id {args.field!r}") from None
    if (args.q is None) == (args.q_range is None):
        raise UsageError("give exactly one of --q and --q-range")
    if args.q is not None:
        qs = [_q_arg(args.q)]
    else:
        lo, hi = _parse_q_range(args.q_range)
        qs = [q for q in range(lo, hi + 1) if prime_power_split(q)]
    recs = []
    for q in qs:
        recs.extend(enumerate_generators(K, q))
    rep = RunReport("enum-field", {"field": K.id, "q": qs if args.q_range else qs[0]}, cat)
    rep.result = {"records": [record_json(r) for r in recs]}
    return rep


def render_records(rep: RunReport) -> str:
    recs = rep.result["records"]
    if not recs:
        return "no Weil generators"
    lines = [f"{len(recs)} Weil generator(s)"]
    for r in recs:
        lines.append(f"q = {r['q']:>6}  h = {r['h']['text']}  (field {r['field']}, eta #{r['eta_index']}, a = {r['a']})")
    return "\n".join(lines)


def cmd_pairs(args) -> RunReport:
    cat = _catalog_from_args(args)
    if args.all == bool(args.fields):
        raise UsageError("give exactly one of --fields ID1,ID2 and --all")
    if args.all:
        from .products import all_pair_sets

        fields = [K for K in cat if K.class_number_one and K.has_relative_generator]
        sets = all_pair_sets(fields, args.order, args.workers)
        products = sorted(p for ps in sets.values() for p in ps)
        inputs: dict = {"all": True}
    else:
        ids = [s for s in args.fields.split(",") if s]
        if len(ids) != 2:
            raise UsageError("--fields expects exactly two ids")
        try:
            K1, K2 = cat.by_id(ids[0]), cat.by_id(ids[1])
        except KeyError as exc:
            raise UsageError(f"unknown field id {exc.args[0]!r}") from None
        products = enumerate_pairs(K1, K2, args.order)
        inputs = {"fields": ids}
    inputs["order"] = args.order
    rep = RunReport("pairs", inputs, cat)
    rep.result = {"pairs": [product_json(p) for p in products]}
    return rep


def render_pairs(rep: RunReport) -> str:
    ps = rep.result["pairs"]
    if not ps:
        return "no Weil generator pairs"
    lines = [f"{len(ps)} pair(s)"]
    for p in ps:
        hs = ", ".join(m["h"]["text"] for m in p["members"])
        lines.append(f"q = {p['q']:>6}  {{{hs}}}")
    return "\n".join(lines)


TABLE_COLUMNS = ["1x1", "1x2", "1x1x2", "1x2x2", "2x2"]


def cmd_table(args) -> RunReport:
    cat = _catalog_from_args(args)
    res = table1(cat, args.order, args.workers)
    rep = RunReport("table", {"order": args.order}, cat)
    rep.partial = res.partial
    columns = res.types()
    rows = []
    for q in res.rows():
        rows.append({"q": q, "counts": {t: res.counts.get((q, t), 0) for t in columns}})
    rep.result = {
        "columns": columns,
        "rows": rows,
        "grand_total": res.grand_total,
        "fields_used": res.field_count,
        "products": [product_json(p) for p in res.products] if args.records else None,
    }
    return rep


def render_table_csv(rep: RunReport) -> str:
    cols = rep.result["columns"]
    lines = ["q," + ",".join(f"type_{c}" for c in cols)]
    for row in rep.result["rows"]:
        cells = [str(row["counts"][c]) if row["counts"][c] else "" for c in cols]
        lines.append(f"{row['q']}," + ",".join(cells))
    return "\n".join(lines)


def render_table_text(rep: RunReport) -> str:
    cols = rep.result["columns"]
    head = ["q"] + [c.replace("x", " x ") for c in cols]
    body = []
    for row in rep.result["rows"]:
        body.append([str(row["q"])] + [str(row["counts"][c]) if row["counts"][c] else "" for c in cols])
    widths = [max(len(r[i]) for r in [head] + body) for i in range(len(head))]
    fmt = lambda r: " | ".join(s.rjust(w) for s, w in zip(r, widths))
    lines = [fmt(head), "-+-".join("-" * w for w in widths)] + [fmt(r) for r in body]
    lines.append(f"total: {rep.result['grand_total']}")
    if rep.partial:
        lines.append("partial: the catalog does not assert a complete quartic class-number-1 list")
    return "\n".join(lines)


def cmd_catalog_validate(args) -> tuple[RunReport, bool]:
    try:
        with open(args.path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {args.path}: {exc.strerror}") from None
    rep = RunReport("catalog-validate", {"path": args.path}, None)
    try:
        reports, cat = check_catalog_text(text)
    except CatalogError as exc:
        rep.result = {"ok": False, "error": str(exc), "entries": []}
        return rep, False
    builtin = [{"id": K.id, "line": None, "violations": []} for K in builtin_degree2()]
    entries = builtin + [{"id": r.id, "line": r.line, "violations": list(r.violations)} for r in reports]
    ok = cat is not None
    rep.result = {"ok": ok, "entries": entries}
    if ok:
        rep.catalog = cat
    return rep, ok


def render_validate(rep: RunReport) -> str:
    r = rep.result
    if "error" in r:
        return f"error: {r['error']}"
    lines = []
    for e in r["entries"]:
        where = "builtin" if e["line"] is None else f"line {e['line']}"
        status = "ok" if not e["violations"] else "FAIL: " + "; ".join(e["violations"])
        lines.append(f"{e['id']} ({where}): {status}")
    bad = sum(1 for e in r["entries"] if e["violations"])
    lines.append(f"{len(r['entries'])} entries, {bad} with violations")
    return "\n".join(lines)


# Argument parsing


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="siav", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=f"siav {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    src = common.add_mutually_exclusive_group()
    src.add_argument("--catalog", help="catalog file (merged with the builtin quadratic fields)")
    src.add_argument("--builtin-only", action="store_true", help="use only the nine imaginary quadratic fields")
    common.add_argument("--format", choices=["text", "structured", "csv"], default="text")
    sub = ap.add_subparsers(dest="command", required=True)

    a = sub.add_parser("analyze", parents=[common], help="analyze one Weil polynomial")
    a.add_argument("--q", type=int, required=True)
    a.add_argument("--poly", required=True, help="ascending coefficients, comma separated")
    a.add_argument("--monic-check", action=argparse.BooleanOptionalAction, default=True)

    e = sub.add_parser("enum-field", parents=[common], help="Weil generators of one CM field")
    e.add_argument("--field", required=True)
    e.add_argument("--q", type=int)
    e.add_argument("--q-range", help="LO:HI, prime powers only")

    p = sub.add_parser("pairs", parents=[common], help="Weil generators of a product of two fields")
    p.add_argument("--fields", help="ID1,ID2")
    p.add_argument("--all", action="store_true")
    p.add_argument("--order", choices=["q-first", "a-first"], default="q-first")
    p.add_argument("--workers", type=int)

    t = sub.add_parser("table", parents=[common], help="counts of super-isolated products by q and type")
    t.add_argument("--order", choices=["q-first", "a-first"], default="q-first")
    t.add_argument("--workers", type=int)
    t.add_argument("--records", action="store_true", help="include every product in structured output")

    v = sub.add_parser("catalog-validate", help="validate a catalog file")
    v.add_argument("path")
    v.add_argument("--format", choices=["text", "structured"], default="text")
    return ap


def main(argv: Optional[list[str]] = None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    start = time.perf_counter()
    ok = True
    try:
        if args.command == "analyze":
            rep, render = cmd_analyze(args), render_analyze
        elif args.command == "enum-field":
            rep, render = cmd_enum_field(args), render_records
        elif args.command == "pairs":
            rep, render = cmd_pairs(args), render_pairs
        elif args.command == "table":
            rep = cmd_table(args)
            render = render_table_csv if args.format == "csv" else render_table_text
        else:
            rep, ok = cmd_catalog_validate(args)
            render = render_validate
    except (UsageError, CatalogError) as exc:
        print(f"siav: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SiavError as exc:
        print(f"siav: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    rep.timing = time.perf_counter() - start
    fmt = args.format
    if fmt == "csv" and args.command != "table":
        print("siav: error: csv output is only available for 'table'", file=sys.stderr)
        return EXIT_USAGE
    if fmt == "structured":
        print(rep.structured())
    else:
        print(render(rep))
    return EXIT_OK if ok else EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
