"""Simple Lie algebra data and the weight-one numerology built on it.

The type table (dimension, dual Coxeter number, root count for every simple
type up to dimension 250) ships as an embedded versioned JSON document; its
checksum is exposed so reports can pin the exact data they used.  On top of
the table sit the level formula, a constrained enumerator for semisimple
types of a given total dimension, fixed-subalgebra dimension counting, and
matching against the stored rows of the central-charge-24 classification.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from functools import lru_cache

from .lattice import Isometry
from .roots import RootSystem, enumerate_roots, orbit_count

_TABLE_JSON = """\
{"version": 1, "max_dimension": 250, "types": [
{"dimension": 3, "dual_coxeter": 2, "family": "A", "rank": 1, "root_count": 2, "two_root_lengths": false},
{"dimension": 8, "dual_coxeter": 3, "family": "A", "rank": 2, "root_count": 6, "two_root_lengths": false},
{"dimension": 15, "dual_coxeter": 4, "family": "A", "rank": 3, "root_count": 12, "two_root_lengths": false},
{"dimension": 24, "dual_coxeter": 5, "family": "A", "rank": 4, "root_count": 20, "two_root_lengths": false},
{"dimension": 35, "dual_coxeter": 6, "family": "A", "rank": 5, "root_count": 30, "two_root_lengths": false},
{"dimension": 48, "dual_coxeter": 7, "family": "A", "rank": 6, "root_count": 42, "two_root_lengths": false},
{"dimension": 63, "dual_coxeter": 8, "family": "A", "rank": 7, "root_count": 56, "two_root_lengths": false},
{"dimension": 80, "dual_coxeter": 9, "family": "A", "rank": 8, "root_count": 72, "two_root_lengths": false},
{"dimension": 99, "dual_coxeter": 10, "family": "A", "rank": 9, "root_count": 90, "two_root_lengths": false},
{"dimension": 120, "dual_coxeter": 11, "family": "A", "rank": 10, "root_count": 110, "two_root_lengths": false},
{"dimension": 143, "dual_coxeter": 12, "family": "A", "rank": 11, "root_count": 132, "two_root_lengths": false},
{"dimension": 168, "dual_coxeter": 13, "family": "A", "rank": 12, "root_count": 156, "two_root_lengths": false},
{"dimension": 195, "dual_coxeter": 14, "family": "A", "rank": 13, "root_count": 182, "two_root_lengths": false},
{"dimension": 224, "dual_coxeter": 15, "family": "A", "rank": 14, "root_count": 210, "two_root_lengths": false},
{"dimension": 10, "dual_coxeter": 3, "family": "B", "rank": 2, "root_count": 8, "two_root_lengths": true},
{"dimension": 21, "dual_coxeter": 5, "family": "B", "rank": 3, "root_count": 18, "two_root_lengths": true},
{"dimension": 36, "dual_coxeter": 7, "family": "B", "rank": 4, "root_count": 32, "two_root_lengths": true},
{"dimension": 55, "dual_coxeter": 9, "family": "B", "rank": 5, "root_count": 50, "two_root_lengths": true},
{"dimension": 78, "dual_coxeter": 11, "family": "B", "rank": 6, "root_count": 72, "two_root_lengths": true},
{"dimension": 105, "dual_coxeter": 13, "family": "B", "rank": 7, "root_count": 98, "two_root_lengths": true},
{"dimension": 136, "dual_coxeter": 15, "family": "B", "rank": 8, "root_count": 128, "two_root_lengths": true},
{"dimension": 171, "dual_coxeter": 17, "family": "B", "rank": 9, "root_count": 162, "two_root_lengths": true},
{"dimension": 210, "dual_coxeter": 19, "family": "B", "rank": 10, "root_count": 200, "two_root_lengths": true},
{"dimension": 21, "dual_coxeter": 4, "family": "C", "rank": 3, "root_count": 18, "two_root_lengths": true},
{"dimension": 36, "dual_coxeter": 5, "family": "C", "rank": 4, "root_count": 32, "two_root_lengths": true},
{"dimension": 55, "dual_coxeter": 6, "family": "C", "rank": 5, "root_count": 50, "two_root_lengths": true},
{"dimension": 78, "dual_coxeter": 7, "family": "C", "rank": 6, "root_count": 72, "two_root_lengths": true},
{"dimension": 105, "dual_coxeter": 8, "family": "C", "rank": 7, "root_count": 98, "two_root_lengths": true},
{"dimension": 136, "dual_coxeter": 9, "family": "C", "rank": 8, "root_count": 128, "two_root_lengths": true},
{"dimension": 171, "dual_coxeter": 10, "family": "C", "rank": 9, "root_count": 162, "two_root_lengths": true},
{"dimension": 210, "dual_coxeter": 11, "family": "C", "rank": 10, "root_count": 200, "two_root_lengths": true},
{"dimension": 28, "dual_coxeter": 6, "family": "D", "rank": 4, "root_count": 24, "two_root_lengths": false},
{"dimension": 45, "dual_coxeter": 8, "family": "D", "rank": 5, "root_count": 40, "two_root_lengths": false},
{"dimension": 66, "dual_coxeter": 10, "family": "D", "rank": 6, "root_count": 60, "two_root_lengths": false},
{"dimension": 91, "dual_coxeter": 12, "family": "D", "rank": 7, "root_count": 84, "two_root_lengths": false},
{"dimension": 120, "dual_coxeter": 14, "family": "D", "rank": 8, "root_count": 112, "two_root_lengths": false},
{"dimension": 153, "dual_coxeter": 16, "family": "D", "rank": 9, "root_count": 144, "two_root_lengths": false},
{"dimension": 190, "dual_coxeter": 18, "family": "D", "rank": 10, "root_count": 180, "two_root_lengths": false},
{"dimension": 231, "dual_coxeter": 20, "family": "D", "rank": 11, "root_count": 220, "two_root_lengths": false},
{"dimension": 78, "dual_coxeter": 12, "family": "E", "rank": 6, "root_count": 72, "two_root_lengths": false},
{"dimension": 133, "dual_coxeter": 18, "family": "E", "rank": 7, "root_count": 126, "two_root_lengths": false},
{"dimension": 248, "dual_coxeter": 30, "family": "E", "rank": 8, "root_count": 240, "two_root_lengths": false},
{"dimension": 52, "dual_coxeter": 9, "family": "F", "rank": 4, "root_count": 48, "two_root_lengths": true},
{"dimension": 14, "dual_coxeter": 4, "family": "G", "rank": 2, "root_count": 12, "two_root_lengths": true}
]}
"""


class LieDataError(Exception):
    """Lookup or arithmetic outside what the embedded table supports."""


@dataclass(frozen=True, order=True)
class SimpleLieData:
    """One simple type: dimension, dual Coxeter number, root data."""

    family: str
    rank: int
    dimension: int
    dual_coxeter: int
    root_count: int
    two_root_lengths: bool

    @property
    def symbol(self) -> str:
        return f"{self.family}{self.rank}"


def table_version() -> int:
    return _DOC["version"]


def table_checksum() -> str:
    """SHA-256 of the embedded table text, for report pinning."""
    return hashlib.sha256(_TABLE_JSON.encode("utf-8")).hexdigest()


def all_types() -> tuple[SimpleLieData, ...]:
    return _TYPES


def lookup(family: str, rank: int) -> SimpleLieData:
    key = (family, rank)
    if key not in _BY_KEY:
        raise LieDataError(f"no simple type {family}{rank} in the table "
                           "(canonical aliases: B2 for C2, A3 for D3)")
    return _BY_KEY[key]


def _load() -> tuple[dict, tuple[SimpleLieData, ...]]:
    doc = json.loads(_TABLE_JSON)
    types = tuple(
        SimpleLieData(row["family"], row["rank"], row["dimension"],
                      row["dual_coxeter"], row["root_count"],
                      row["two_root_lengths"])
        for row in doc["types"])
    for t in types:
        if t.dimension != t.rank + t.root_count:
            raise LieDataError(f"table row {t.symbol} is inconsistent")
    return doc, types


_DOC, _TYPES = _load()
_BY_KEY = {(t.family, t.rank): t for t in _TYPES}


def level_from_dim(dual_coxeter: int, dim_v1: int) -> int | None:
    """Level k with h/k = (dim_v1 - 24)/24; None when k is not an integer.

    dim_v1 is the full weight-one dimension of the ambient algebra, which
    fixes the ratio h/k for every simple summand.
    """
    if dim_v1 <= 24:
        raise LieDataError("level formula needs weight-one dimension > 24")
    k = 24 * dual_coxeter
    if k % (dim_v1 - 24) != 0:
        return None
    return k // (dim_v1 - 24)


@dataclass(frozen=True)
class SemisimpleType:
    """A multiset of simple components with a common level rule applied."""

    components: tuple[tuple[SimpleLieData, int], ...]  # (type, count), dim-desc

    @property
    def dimension(self) -> int:
        return sum(t.dimension * c for t, c in self.components)

    @property
    def rank(self) -> int:
        return sum(t.rank * c for t, c in self.components)

    def type_string(self, levels: dict | None = None) -> str:
        parts = []
        for t, count in self.components:
            name = t.symbol
            if levels is not None:
                name = f"{name},{levels[(t.family, t.rank)]}"
            parts.append(name if count == 1 else f"{name}^{count}")
        return " ".join(parts)


def _component_sort_key(t: SimpleLieData):
    return (-t.dimension, t.family, -t.rank)


def semisimple_candidates(dim: int, rank: int | None = None,
                          hcoxeter_divisor: int = 1) -> list[SemisimpleType]:
    """All semisimple types with the given total dimension.

    Args:
        dim: required total dimension.
        rank: required total rank, or None for unconstrained.
        hcoxeter_divisor: every component's dual Coxeter number must be a
            multiple of this (equivalently, its level k = h/divisor is a
            positive integer when the ambient weight-one ratio is divisor).

    Returns:
        Deterministically sorted list; each candidate's components are
        ordered by descending dimension.
    """
    if dim <= 0:
        return []
    pool = sorted((t for t in _TYPES
                   if t.dimension <= dim and t.dual_coxeter % hcoxeter_divisor == 0),
                  key=_component_sort_key)
    found: list[SemisimpleType] = []
    chosen: list[SimpleLieData] = []

    def search(start: int, dim_left: int, rank_left: int | None) -> None:
        if dim_left == 0:
            if rank_left in (None, 0):
                counts: list[tuple[SimpleLieData, int]] = []
                for t in chosen:
                    if counts and counts[-1][0] == t:
                        counts[-1] = (t, counts[-1][1] + 1)
                    else:
                        counts.append((t, 1))
                found.append(SemisimpleType(tuple(counts)))
            return
        for i in range(start, len(pool)):
            t = pool[i]
            if t.dimension > dim_left:
                continue
            if rank_left is not None and t.rank > rank_left:
                continue
            chosen.append(t)
            search(i, dim_left - t.dimension,
                   None if rank_left is None else rank_left - t.rank)
            chosen.pop()

    search(0, dim, rank)
    found.sort(key=lambda s: s.type_string())
    return found


def fixed_subalgebra_dim(iso: Isometry,
                         rs: RootSystem | None = None) -> int:
    """Dimension of the subalgebra fixed by the root-lattice isometry.

    Equals the fixed rank plus the number of orbits on the roots.  The
    root system is enumerated from the isometry's lattice when not given.
    """
    if rs is None:
        rs = enumerate_roots(iso.lattice)
    orbits, _ = orbit_count(rs, iso)
    return iso.fixed_rank + orbits


@dataclass(frozen=True)
class SchellekensRow:
    number: int
    dim_v1: int
    type_string: str


# The fifteen stored rows of the rank-24 weight-one classification that
# this package's constructions and cross-checks touch.
_SCHELLEKENS_ROWS = (
    SchellekensRow(3, 36, "D4,12 A2,6"),
    SchellekensRow(4, 36, "C4,10"),
    SchellekensRow(6, 48, "A2,3^6"),
    SchellekensRow(8, 48, "A5,6 B2,3 A1,2"),
    SchellekensRow(9, 48, "A4,5^2"),
    SchellekensRow(11, 48, "A6,7"),
    SchellekensRow(14, 60, "F4,6 A2,2"),
    SchellekensRow(17, 72, "A5,3 D4,3 A1,1^3"),
    SchellekensRow(20, 72, "D6,5 A1,1^2"),
    SchellekensRow(21, 72, "C5,3 G2,2 A1,1"),
    SchellekensRow(27, 96, "A8,3 A2,1^2"),
    SchellekensRow(28, 96, "E6,4 B2,1 A2,1"),
    SchellekensRow(32, 120, "E6,3 G2,1^3"),
    SchellekensRow(34, 120, "D7,3 A3,1 G2,1"),
    SchellekensRow(45, 168, "E7,3 A5,1"),
)


def schellekens_rows() -> tuple[SchellekensRow, ...]:
    return _SCHELLEKENS_ROWS


def parse_type_string(text: str) -> tuple[tuple[SimpleLieData, int, int], ...]:
    """Parse "A5,3 D4,3 A1,1^3" into ((type, level, count), ...) tuples."""
    out = []
    for token in text.split():
        if "^" in token:
            head, _, mult = token.partition("^")
            count = int(mult)
        else:
            head, count = token, 1
        name, _, level_text = head.partition(",")
        if not level_text:
            raise LieDataError(f"component {token!r} has no level")
        family, rank = name[0], int(name[1:])
        out.append((lookup(family, rank), int(level_text), count))
    return tuple(out)


@lru_cache(maxsize=None)
def _row_multiset(number: int) -> dict:
    row = next(r for r in _SCHELLEKENS_ROWS if r.number == number)
    counts: dict[tuple[str, int, int], int] = {}
    for t, level, count in parse_type_string(row.type_string):
        key = (t.family, t.rank, level)
        counts[key] = counts.get(key, 0) + count
    return counts


def schellekens_match(dim_v1: int, type_text: str | None = None) -> list[int]:
    """Stored rows with the given weight-one dimension and compatible type.

    A partial type (a sub-multiset of a row's components, levels included)
    matches; None matches on dimension alone.
    """
    query: dict[tuple[str, int, int], int] = {}
    if type_text:
        for t, level, count in parse_type_string(type_text):
            key = (t.family, t.rank, level)
            query[key] = query.get(key, 0) + count
    hits = []
    for row in _SCHELLEKENS_ROWS:
        if row.dim_v1 != dim_v1:
            continue
        stored = _row_multiset(row.number)
        if all(stored.get(key, 0) >= count for key, count in query.items()):
            hits.append(row.number)
    return hits


def lattice_voa_weight_one(rs: RootSystem) -> dict:
    """Weight-one algebra of a lattice construction: type at level one.

    A root system present means semisimple with every level 1; no roots
    means abelian of dimension equal to the rank.
    """
    rank = rs.lattice.rank
    if rs.count == 0:
        return {"kind": "abelian", "dimension": rank}
    counts: dict[tuple[str, int], int] = {}
    for comp in rs.components:
        key = (comp.family, comp.rank)
        counts[key] = counts.get(key, 0) + 1
    parts = []
    dim = 0
    for (family, comp_rank), count in sorted(
            counts.items(), key=lambda kv: _component_sort_key(lookup(*kv[0]))):
        data = lookup(family, comp_rank)
        dim += data.dimension * count
        name = f"{data.symbol},1"
        parts.append(name if count == 1 else f"{name}^{count}")
    return {"kind": "semisimple", "type": " ".join(parts), "dimension": dim}
