"""CM-field catalogs: builtin imaginary quadratic fields plus text-file ingestion.

File format, one block per field (coefficients ascending, comments start
with ``#`` at the beginning of a line)::

    field {
      id        = q125-C4-x^4-x^3+x^2-x+1
      f_poly    = -1,-1,1
      rel_b     = 1,0
      rel_c     = 2,-1
      disc_K    = 125
      class_number_one = true
      source    = free text
    }

Two optional extensions: a block may say ``rel_generator = false`` (no gamma
with O_K = O_F[gamma] exists; rel_b/rel_c are then omitted), and a top-level
line ``complete_degree = 4`` asserts the file holds the complete class-number-1
list of that degree.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Iterable, Optional

from .errors import CatalogError
from .exactmath import IntPolynomial
from .numfield import CMFieldData, TotallyRealField, validate_field_data

QUARTIC_DATA = "quartic_cm.txt"

# (disc, b, c): gamma = sqrt(-d) or (1 + sqrt(-d))/2, as a root of x^2 + b x + c
_IMAGINARY_QUADRATIC_H1 = [
    (-3, -1, 1),
    (-4, 0, 1),
    (-7, -1, 2),
    (-8, 0, 2),
    (-11, -1, 3),
    (-19, -1, 5),
    (-43, -1, 11),
    (-67, -1, 17),
    (-163, -1, 41),
]

_KEYS = {"id", "f_poly", "rel_b", "rel_c", "disc_K", "class_number_one", "source", "rel_generator"}
_REQUIRED = {"id", "f_poly", "disc_K", "class_number_one"}


@dataclass(frozen=True)
class Catalog:
    fields: tuple[CMFieldData, ...]
    complete_degrees: frozenset[int] = frozenset()
    builtin_ids: frozenset[str] = field(default=frozenset(), compare=False)

    def __post_init__(self):
        ids = [f.id for f in self.fields]
        dup = {i for i in ids if ids.count(i) > 1}
        if dup:
            raise CatalogError(f"duplicate field id(s): {', '.join(sorted(dup))}")

    def __iter__(self):
        return iter(self.fields)

    def __len__(self):
        return len(self.fields)

    def by_id(self, fid: str) -> CMFieldData:
        for f in self.fields:
            if f.id == fid:
                return f
        raise KeyError(fid)

    def of_degree(self, d: int) -> list[CMFieldData]:
        return [f for f in self.fields if f.degree == d]

    def is_complete(self, degree: int) -> bool:
        return degree in self.complete_degrees

    def merged(self, other: Catalog) -> Catalog:
        return Catalog(
            self.fields + other.fields,
            self.complete_degrees | other.complete_degrees,
            self.builtin_ids | other.builtin_ids,
        )

    def fingerprint(self) -> str:
        """SHA-256 of the canonical serialization of every field."""
        return hashlib.sha256(serialize_catalog(self, include_builtins=True).encode()).hexdigest()


def _quadratic_entry(d: int, b: int, c: int) -> CMFieldData:
    Q = TotallyRealField.rationals()
    return CMFieldData(
        id=f"disc{d}",
        base=Q,
        rel_b=Q(b),
        rel_c=Q(c),
        disc_K=d,
        class_number_one=True,
        source="imaginary quadratic class-number-1 list (Heegner, Baker, Stark)",
    )


def builtin_degree2() -> Catalog:
    """The nine imaginary quadratic fields of class number one."""
    fields = tuple(_quadratic_entry(*t) for t in _IMAGINARY_QUADRATIC_H1)
    return Catalog(fields, frozenset({2}), frozenset(f.id for f in fields))


def _ints(value: str, line: int, n: Optional[int] = None) -> list[int]:
    try:
        out = [int(v) for v in value.replace(" ", "").split(",") if v != ""]
    except ValueError:
        raise CatalogError(f"expected comma-separated integers, got {value!r}", line) from None
    if n is not None and len(out) != n:
        raise CatalogError(f"expected {n} integers, got {len(out)}", line)
    return out


def _bool(value: str, line: int) -> bool:
    v = value.strip().lower()
    if v not in ("true", "false"):
        raise CatalogError(f"expected true or false, got {value!r}", line)
    return v == "true"


@dataclass
class _RawEntry:
    line: int
    values: dict[str, tuple[str, int]]


def _parse_blocks(text: str) -> tuple[list[_RawEntry], set[int]]:
    entries: list[_RawEntry] = []
    complete: set[int] = set()
    cur: Optional[_RawEntry] = None
    for n, raw in enumerate(text.splitlines(), 1):
        s = raw.strip()
        if not s or s.startswith("#"):
            continue
        if cur is None:
            if s.replace(" ", "") == "field{":
                cur = _RawEntry(n, {})
                continue
            if "=" in s:
                key, value = (t.strip() for t in s.split("=", 1))
                if key == "complete_degree":
                    complete.update(_ints(value, n))
                    continue
            raise CatalogError(f"expected 'field {{', got {s!r}", n)
        if s == "}":
            entries.append(cur)
            cur = None
            continue
        if "=" not in s:
            raise CatalogError(f"expected 'key = value', got {s!r}", n)
        key, value = (t.strip() for t in s.split("=", 1))
        if key not in _KEYS:
            raise CatalogError(f"unknown key {key!r}", n)
        if key in cur.values:
            raise CatalogError(f"duplicate key {key!r}", n)
        cur.values[key] = (value, n)
    if cur is not None:
        raise CatalogError("unterminated field block", cur.line)
    return entries, complete


def _build_entry(e: _RawEntry) -> CMFieldData:
    missing = _REQUIRED - e.values.keys()
    if missing:
        raise CatalogError(f"missing key(s): {', '.join(sorted(missing))}", e.line)
    v = e.values
    fid = v["id"][0]
    if not fid:
        raise CatalogError("empty id", v["id"][1])
    f_poly = _ints(*v["f_poly"])
    if len(f_poly) > 3:
        raise CatalogError("totally real base fields of degree > 2 are not supported", v["f_poly"][1])
    try:
        F = TotallyRealField(IntPolynomial(f_poly))
    except Exception as exc:
        raise CatalogError(str(exc), v["f_poly"][1]) from None
    has_gen = _bool(*v["rel_generator"]) if "rel_generator" in v else True
    if has_gen:
        for k in ("rel_b", "rel_c"):
            if k not in v:
                raise CatalogError(f"missing key {k!r}", e.line)

    def coords(key):
        if key not in v:
            return F(0)
        value, line = v[key]
        xs = _ints(value, line)
        if F.degree == 1:
            if len(xs) not in (1, 2) or (len(xs) == 2 and xs[1] != 0):
                raise CatalogError(f"{key}: base field is Q, expected one integer (or 'n,0')", line)
            return F(xs[0])
        if len(xs) != 2:
            raise CatalogError(f"{key}: expected two integers", line)
        return F(*xs)

    try:
        disc_K = int(v["disc_K"][0])
    except ValueError:
        raise CatalogError(f"disc_K must be an integer, got {v['disc_K'][0]!r}", v["disc_K"][1]) from None
    return CMFieldData(
        id=fid,
        base=F,
        rel_b=coords("rel_b"),
        rel_c=coords("rel_c"),
        disc_K=disc_K,
        class_number_one=_bool(*v["class_number_one"]),
        source=v["source"][0] if "source" in v else "",
        has_relative_generator=has_gen,
    )


@dataclass(frozen=True)
class EntryReport:
    id: str
    line: int
    violations: tuple[str, ...]


def check_catalog_text(text: str) -> tuple[list[EntryReport], Optional[Catalog]]:
    """Per-entry validation; the catalog is returned only when everything passes.

    Parse errors (bad syntax, unknown keys) raise CatalogError immediately.
    """
    raws, complete = _parse_blocks(text)
    reports = []
    fields = []
    builtin = builtin_degree2()
    seen = {f.id for f in builtin}
    for raw in raws:
        entry = _build_entry(raw)
        problems = list(validate_field_data(entry))
        if entry.id in seen:
            problems.append(f"duplicate id {entry.id!r}")
        seen.add(entry.id)
        if not problems and entry.has_relative_generator and entry.disc_K % (entry.disc_F**2):
            problems.append("disc_K / disc_F^2 is not an integer")
        reports.append(EntryReport(entry.id, raw.line, tuple(problems)))
        fields.append(entry)
    if any(r.violations for r in reports):
        return reports, None
    return reports, builtin.merged(Catalog(tuple(fields), frozenset(complete)))


def parse_catalog(text: str) -> Catalog:
    reports, cat = check_catalog_text(text)
    if cat is None:
        bad = [r for r in reports if r.violations]
        msg = "; ".join(f"{r.id} (line {r.line}): {', '.join(r.violations)}" for r in bad)
        raise CatalogError(f"invalid catalog entries: {msg}", bad[0].line)
    return cat


def load_catalog(path: str | Path) -> Catalog:
    """Parse and validate a catalog file, merged with the builtin quadratic fields."""
    p = Path(path)
    try:
        text = p.read_text(encoding="utf-8")
    except OSError as exc:
        raise CatalogError(f"cannot read catalog {p}: {exc.strerror}") from None
    return parse_catalog(text)


def default_catalog() -> Catalog:
    """Builtins plus the packaged quartic list."""
    text = resources.files("siav.data").joinpath(QUARTIC_DATA).read_text(encoding="utf-8")
    return parse_catalog(text)


def serialize_field(K: CMFieldData) -> str:
    def coords(x):
        if K.base.degree == 1:
            return f"{x.x0},0"
        return f"{x.x0},{x.x1}"

    lines = [
        "field {",
        f"  id        = {K.id}",
        f"  f_poly    = {','.join(str(c) for c in K.base.eta_poly.coeffs)}",
    ]
    if K.has_relative_generator:
        lines += [f"  rel_b     = {coords(K.rel_b)}", f"  rel_c     = {coords(K.rel_c)}"]
    else:
        lines.append("  rel_generator = false")
    lines += [
        f"  disc_K    = {K.disc_K}",
        f"  class_number_one = {'true' if K.class_number_one else 'false'}",
        f"  source    = {K.source}",
        "}",
    ]
    return "\n".join(lines)


def serialize_catalog(cat: Catalog, include_builtins: bool = False) -> str:
    chunks = []
    degs = sorted(cat.complete_degrees - ({2} if not include_builtins else set()))
    for d in degs:
        chunks.append(f"complete_degree = {d}")
    for K in cat.fields:
        if not include_builtins and K.id in cat.builtin_ids:
            continue
        chunks.append(serialize_field(K))
    return "\n\n".join(chunks) + "\n"


@dataclass(frozen=True)
class RuntimeFieldData:
    field: CMFieldData
    fundamental_unit: Optional[object]
    t_set: tuple
    norm_gamma_diff: object
    disc_ratio: int


def derive_runtime_data(K: CMFieldData) -> RuntimeFieldData:
    """Warm the per-field caches and return them bundled."""
    if K.disc_K % (K.disc_F**2):
        raise CatalogError(f"{K.id}: disc_K / disc_F^2 is not an integer")
    unit = K.base.fundamental_unit if K.base.degree == 2 else None
    return RuntimeFieldData(K, unit, K.base.t_set, K.norm_gamma_diff, K.disc_ratio)


def iter_field_pairs(fields: Iterable[CMFieldData]):
    """Unordered pairs including each field with itself, in catalog order."""
    fs = list(fields)
    for i, a in enumerate(fs):
        for b in fs[i:]:
            yield a, b
