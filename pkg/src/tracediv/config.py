"""TOML input files: field towers, generator matrices, abelian code specs, polynomials.

Field-element literals are ``"0"``, ``"a^t"`` (a power of the tower's
primitive element) or ``[c0, c1, ...]`` (coordinates over F_p in the
polynomial basis, lowest degree first).
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from pathlib import Path
from typing import Any

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from .abelian import AbelianCodeSpec
from .artin_schreier import Polynomial
from .errors import ConfigError, TraceDivError
from .field_tower import FieldTower, build_tower
from .numtheory import is_prime
from .trace_code import GeneratorMatrix

_POWER = re.compile(r"^\s*a\s*\^\s*(-?\d+)\s*$")
_TOML_POS = re.compile(r"\(at line (\d+), column (\d+)\)")


@dataclass
class Source:
    """Raw text of an input file, used to point diagnostics at a token."""

    text: str
    path: str | None = None

    def locate(self, needle: str | re.Pattern, occurrence: int = 0) -> tuple[int | None, int | None]:
        pattern = needle if isinstance(needle, re.Pattern) else re.compile(re.escape(needle))
        hits = [m.start() for m in pattern.finditer(self.text)]
        if occurrence >= len(hits):
            return None, None
        start = hits[occurrence]
        line = self.text.count("\n", 0, start) + 1
        col = start - (self.text.rfind("\n", 0, start) + 1) + 1
        return line, col

    def error(self, message: str, needle: str | re.Pattern | None = None, occurrence: int = 0) -> ConfigError:
        line, col = self.locate(needle, occurrence) if needle else (None, None)
        return ConfigError(message, line, col, self.path)


def load_source(path: str | Path) -> tuple[dict, Source]:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read file: {exc.strerror}", path=str(path)) from None
    return parse_text(text, str(path))


def parse_text(text: str, path: str | None = None) -> tuple[dict, Source]:
    src = Source(text, path)
    try:
        data = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        msg = str(exc)
        m = _TOML_POS.search(msg)
        line, col = (int(m.group(1)), int(m.group(2))) if m else (None, None)
        raise ConfigError(_TOML_POS.sub("", msg).strip(), line, col, path) from None
    return data, src


def _table(data: dict, key: str, src: Source) -> dict:
    val = data.get(key)
    if not isinstance(val, dict):
        raise src.error(f"missing [{key}] table")
    return val


def _int(table: dict, key: str, src: Source, default: int | None = None, minimum: int = 0) -> int:
    if key not in table:
        if default is None:
            raise src.error(f"missing integer field '{key}'")
        return default
    val = table[key]
    if isinstance(val, bool) or not isinstance(val, int):
        raise src.error(f"field '{key}' must be an integer", f"{key}")
    if val < minimum:
        raise src.error(f"field '{key}' must be >= {minimum}", f"{key}")
    return val


def parse_tower(data: dict, src: Source, section: str = "field", **kwargs) -> FieldTower:
    table = _table(data, section, src)
    p = _int(table, "p", src, minimum=2)
    e = _int(table, "e", src, default=1, minimum=1)
    m = _int(table, "m", src, default=1, minimum=1)
    poly = table.get("poly")
    if poly is not None and (not isinstance(poly, list) or not all(isinstance(c, int) for c in poly)):
        raise src.error("'poly' must be a list of integer coefficients, lowest degree first", "poly")
    try:
        return build_tower(p, e, m, None if poly is None else tuple(poly), **kwargs)
    except TraceDivError as exc:
        raise src.error(str(exc), "[" + section + "]") from None


class _Occurrences:
    def __init__(self):
        self.seen: dict[str, int] = {}

    def next(self, needle: str) -> int:
        n = self.seen.get(needle, 0)
        self.seen[needle] = n + 1
        return n


def parse_literal(tower: FieldTower, lit: Any, src: Source | None = None, occ: _Occurrences | None = None) -> int:
    """Field rep of a literal; raises ConfigError pointing at the offending token."""
    src = src or Source("")
    occ = occ or _Occurrences()
    if isinstance(lit, str):
        needle = f'"{lit}"'
        n = occ.next(needle)
        s = lit.strip()
        if s == "0":
            return tower.ZERO
        if s == "1":
            return tower.ONE
        m = _POWER.match(s)
        if not m:
            raise src.error(f"malformed field element {lit!r} (expected 0, a^t or [c0, c1, ...])", needle, n)
        return int(m.group(1)) % (tower.Q - 1)
    if isinstance(lit, int) and not isinstance(lit, bool) and lit == 0:
        return tower.ZERO
    if isinstance(lit, list):
        key = "[" + ",".join(str(c) for c in lit) + "]"
        n = occ.next(key)
        needle = re.compile(r"\[\s*" + r"\s*,\s*".join(re.escape(str(c)) for c in lit) + r"\s*,?\s*\]")
        if not all(isinstance(c, int) and not isinstance(c, bool) for c in lit):
            raise src.error("coordinate literal must contain integers", needle, n)
        if len(lit) > tower.degree or any(not 0 <= c < tower.p for c in lit):
            raise src.error(f"coordinate literal needs at most {tower.degree} entries in [0, {tower.p - 1}]",
                            needle, n)
        return tower.from_coeffs(lit)
    raise src.error(f"unsupported field element literal {lit!r}", str(lit))


def parse_matrix(data: dict, src: Source, tower: FieldTower) -> GeneratorMatrix:
    table = _table(data, "matrix", src)
    rows = table.get("rows")
    if not isinstance(rows, list) or not rows or not all(isinstance(r, list) and r for r in rows):
        raise src.error("[matrix] needs 'rows', a non-empty list of non-empty lists", "rows")
    width = len(rows[0])
    for i, r in enumerate(rows):
        if len(r) != width:
            raise src.error(f"row {i} has {len(r)} entries, expected {width}", "rows")
    occ = _Occurrences()
    reps = [[parse_literal(tower, x, src, occ) for x in r] for r in rows]
    return GeneratorMatrix.from_elements(tower, reps)


def load_matrix(path: str | Path, **kwargs) -> tuple[GeneratorMatrix, dict]:
    data, src = load_source(path)
    tower = parse_tower(data, src, **kwargs)
    return parse_matrix(data, src, tower), data


def parse_abelian(data: dict, src: Source) -> AbelianCodeSpec:
    table = _table(data, "code", src)
    p = _int(table, "p", src, minimum=2)
    e = _int(table, "e", src, default=1, minimum=1)
    group = table.get("group")
    if not isinstance(group, list) or not group or not all(isinstance(n, int) and n >= 1 for n in group):
        raise src.error("'group' must be a non-empty list of positive integers", "group")
    rows = table.get("rows")
    if not isinstance(rows, list) or not rows:
        raise src.error("'rows' must be a non-empty list of tuples", "rows")
    out = []
    for r in rows:
        r = [r] if isinstance(r, int) else r
        if not isinstance(r, list) or len(r) != len(group) or not all(isinstance(s, int) for s in r):
            raise src.error(f"row {r!r} must list one integer per cyclic factor", "rows")
        out.append(tuple(r))
    if not is_prime(p):
        raise src.error(f"p = {p} is not prime", "p")
    try:
        return AbelianCodeSpec(tuple(group), p, e, tuple(out))
    except (TraceDivError, ValueError) as exc:
        raise src.error(str(exc), "group") from None


def load_abelian(path: str | Path) -> tuple[AbelianCodeSpec, dict]:
    data, src = load_source(path)
    return parse_abelian(data, src), data


def parse_polynomial(data: dict, src: Source, tower: FieldTower) -> Polynomial:
    table = _table(data, "polynomial", src)
    k = _int(table, "k", src, minimum=1)
    terms = table.get("terms")
    if not isinstance(terms, list):
        raise src.error("[polynomial] needs 'terms', a list of [coefficient, exponents] pairs", "terms")
    occ = _Occurrences()
    parsed = []
    for term in terms:
        if isinstance(term, dict):
            coef, exps = term.get("coef"), term.get("exps")
        elif isinstance(term, list) and len(term) == 2:
            coef, exps = term
        else:
            raise src.error(f"malformed term {term!r}", "terms")
        if not isinstance(exps, list) or len(exps) != k or not all(isinstance(t, int) and t >= 0 for t in exps):
            raise src.error(f"exponent tuple {exps!r} must have {k} non-negative integers", "terms")
        parsed.append((parse_literal(tower, coef, src, occ), exps))
    return Polynomial.from_terms(tower, k, parsed)


def load_polynomial(path: str | Path) -> tuple[Polynomial, dict]:
    data, src = load_source(path)
    tower = parse_tower(data, src)
    return parse_polynomial(data, src, tower), data
