"""Named constructions: root lattices with their dual classes, four specific
rank-24 even unimodular lattices, and six order-3 isometries of them.

Every construction is verified while it is built: component isometries must
preserve their Gram form with the stated order, glue vectors must pair
integrally, the glued lattices must come out even and unimodular with the
expected root systems, and each assembled isometry must stabilize its
lattice.  A failed check aborts the construction; nothing is returned on
trust.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from .exactmat import IntMatrix, RatMatrix, inverse, solve_exact
from .lattice import (
    GlueExtension,
    Isometry,
    Lattice,
    LatticeVector,
    direct_sum,
    glue_extend,
    is_even_unimodular,
)
from .roots import (
    RootSystem,
    basis_highest_root,
    build_root_system,
    classify,
    enumerate_roots,
    glued_root_vectors,
    reflection,
)
from .terncode import golay_code, residue_perm

LATTICE_KEYS = ("A2_12", "D4_6", "A5_4_D4", "E6_4")
SIGMA_KEYS = ("sigma1", "sigma2", "sigma3", "sigma4", "sigma5", "sigma6")

SIGMA_TO_LATTICE = {
    "sigma1": "A2_12",
    "sigma2": "D4_6",
    "sigma3": "D4_6",
    "sigma4": "D4_6",
    "sigma5": "A5_4_D4",
    "sigma6": "E6_4",
}

COMPONENT_AUTO_NAMES = (
    "cycle_A2",
    "rotation_D4",
    "triality_D4",
    "coord_cycle_D4",
    "coord_cycle_A5",
    "reflection_product_E6",
)


class CatalogError(Exception):
    """A named construction failed one of its build-time checks."""


class StabilizationError(CatalogError):
    """An assembled map sent a lattice basis vector outside the lattice."""


@dataclass(frozen=True)
class RootLatticeData:
    """A root lattice together with representatives of its dual classes.

    The class representatives are fractional-coordinate vectors of the
    lattice itself (i.e. elements of the dual written in the lattice
    basis), keyed by class label starting at 0 for the trivial class.
    """

    lattice: Lattice
    glue: dict[int, LatticeVector]


def _ambient_lattice(family: str, rank: int, rows: Sequence[Sequence[int]],
                     ambient_dim: int, name: str) -> Lattice:
    emb = RatMatrix.from_rows([list(r) for r in rows], cols=ambient_dim)
    gram = emb @ emb.transpose()
    return Lattice(gram, embedding=emb, name=name)


def _glue_vector(l: Lattice, ambient: Sequence[Fraction]) -> LatticeVector:
    target = RatMatrix.from_rows([list(ambient)], cols=l.embedding.cols)
    coords = solve_exact(l.embedding, target).entries[0]
    return l.vector(coords)


@lru_cache(maxsize=None)
def build_root_lattice(family: str, rank: int) -> RootLatticeData:
    """A root lattice of the given type with its dual-class representatives.

    Supported types: A with any positive rank (difference vectors in the
    rank+1 coordinate ambient space), D of rank 4, and E of rank 6 (given
    directly by its Cartan Gram matrix, so basis = simple roots).
    """
    if family == "A" and rank >= 1:
        n = rank
        rows = [[1 if j == i else (-1 if j == i + 1 else 0)
                 for j in range(n + 1)] for i in range(n)]
        l = _ambient_lattice(family, rank, rows, n + 1, f"A{n}")
        glue = {}
        for ell in range(n + 1):
            amb = [Fraction(ell, n + 1)] * (n + 1 - ell) + \
                  [Fraction(ell - n - 1, n + 1)] * ell
            glue[ell] = _glue_vector(l, amb)
        return RootLatticeData(l, glue)
    if family == "D" and rank == 4:
        rows = [[1, -1, 0, 0], [0, 1, -1, 0], [0, 0, 1, -1], [0, 0, 1, 1]]
        l = _ambient_lattice(family, rank, rows, 4, "D4")
        half = Fraction(1, 2)
        glue_ambient = {
            0: [Fraction(0)] * 4,
            1: [half, half, half, half],
            2: [Fraction(0), Fraction(0), Fraction(0), Fraction(1)],
            3: [half, half, half, -half],
        }
        glue = {ell: _glue_vector(l, amb) for ell, amb in glue_ambient.items()}
        return RootLatticeData(l, glue)
    if family == "E" and rank == 6:
        gram = RatMatrix.from_rows([
            [2, -1, 0, 0, 0, 0],
            [-1, 2, -1, 0, 0, 0],
            [0, -1, 2, -1, 0, -1],
            [0, 0, -1, 2, -1, 0],
            [0, 0, 0, -1, 2, 0],
            [0, 0, -1, 0, 0, 2],
        ])
        l = Lattice(gram, name="E6")
        third = Fraction(1, 3)
        rep = l.vector([third, -third, 0, third, -third, 0])
        glue = {0: l.vector([0] * 6), 1: rep, 2: rep.scale(-1)}
        return RootLatticeData(l, glue)
    raise CatalogError(f"unsupported root lattice {family}{rank}")


def _auto_from_ambient(data: RootLatticeData,
                       ambient_images: Sequence[Sequence[Fraction]],
                       name: str) -> Isometry:
    """Convert an ambient-coordinate map to basis coordinates and verify it."""
    l = data.lattice
    w = RatMatrix.from_rows([list(r) for r in ambient_images])
    m = solve_exact(l.embedding, l.embedding @ w)
    if not m.is_integral():
        raise CatalogError(f"{name} does not preserve the lattice")
    return Isometry.create(l, m.to_int(), expected_order=3, name=name)


@lru_cache(maxsize=None)
def build_component_auto(name: str) -> Isometry:
    """One of the six verified order-3 component isometries.

    cycle_A2: cyclic shift of the three ambient coordinates (fixed rank 0).
    rotation_D4: the fixed-point-free rotation sending the first unit
        vector to half of (-1,1,1,1); cycles the three nonzero dual classes.
    triality_D4: the diagram rotation permuting the three outer nodes
        (fixed rank 2); also cycles the three nonzero dual classes.
    coord_cycle_D4: cyclic shift of the first three ambient coordinates
        (fixed rank 2); fixes every dual class.
    coord_cycle_A5: simultaneous 3-cycles on ambient coordinates
        (0,1,2) and (3,4,5) (fixed rank 1); fixes every dual class.
    reflection_product_E6: product of the six reflections in the simple
        roots other than the branch tail and in the highest root, applied
        highest-root-first (fixed rank 0); fixes every dual class.
    """
    half = Fraction(1, 2)
    if name == "cycle_A2":
        data = build_root_lattice("A", 2)
        images = [(0, 0, 1), (1, 0, 0), (0, 1, 0)]
        return _auto_from_ambient(data, [[Fraction(e) for e in r] for r in images], name)
    if name == "rotation_D4":
        data = build_root_lattice("D", 4)
        images = [
            [-half, half, half, half],
            [-half, -half, half, -half],
            [-half, -half, -half, half],
            [-half, half, -half, -half],
        ]
        return _auto_from_ambient(data, images, name)
    if name == "triality_D4":
        data = build_root_lattice("D", 4)
        m = IntMatrix.from_rows([
            [0, 0, 1, 0],
            [0, 1, 0, 0],
            [0, 0, 0, 1],
            [1, 0, 0, 0],
        ])
        return Isometry.create(data.lattice, m, expected_order=3, name=name)
    if name == "coord_cycle_D4":
        data = build_root_lattice("D", 4)
        images = [(0, 0, 1, 0), (1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 0, 1)]
        return _auto_from_ambient(data, [[Fraction(e) for e in r] for r in images], name)
    if name == "coord_cycle_A5":
        data = build_root_lattice("A", 5)
        perm = {0: 1, 1: 2, 2: 0, 3: 4, 4: 5, 5: 3}
        images = [[Fraction(1) if j == perm[i] else Fraction(0)
                   for j in range(6)] for i in range(6)]
        return _auto_from_ambient(data, images, name)
    if name == "reflection_product_E6":
        data = build_root_lattice("E", 6)
        l = data.lattice
        rs = enumerate_roots(l)
        top = basis_highest_root(l, rs.roots)
        m = reflection(l, top).matrix
        for i in (5, 4, 3, 1, 0):
            m = m @ reflection(l, l.basis_vector(i)).matrix
        return Isometry.create(l, m, expected_order=3, name=name)
    raise CatalogError(f"unknown component isometry {name!r}")


def glue_class_image(auto: Isometry, data: RootLatticeData,
                     ell: int) -> int:
    """Which dual class the isometry sends class ell to."""
    image = auto.apply(data.glue[ell])
    for m, rep in data.glue.items():
        if (image - rep).is_integral:
            return m
    raise CatalogError("image is not in any dual class")


_NIEMEIER_SPECS = {
    "A2_12": {
        "parts": (("A", 2),) * 12,
        "index": 729,
        "classified": (("A", 2),) * 12,
        "root_count": 72,
        "description": "rank-24 even unimodular lattice glued from twelve "
                       "hexagonal planes by the ternary Golay code",
    },
    "D4_6": {
        "parts": (("D", 4),) * 6,
        "words": ("111111", "222222", "002332", "023320", "033202",
                  "032023", "020233"),
        "index": 64,
        "classified": (("D", 4),) * 6,
        "root_count": 144,
        "description": "rank-24 even unimodular lattice glued from six "
                       "checkerboard blocks of rank 4",
    },
    "A5_4_D4": {
        "parts": (("A", 5),) * 4 + (("D", 4),),
        "words": ("33001", "30302", "30033", "20240", "22400", "24020"),
        "index": 72,
        "classified": (("A", 5),) * 4 + (("D", 4),),
        "root_count": 144,
        "description": "rank-24 even unimodular lattice glued from four "
                       "rank-5 blocks and one rank-4 block",
    },
    "E6_4": {
        "parts": (("E", 6),) * 4,
        "words": ("1012", "1120", "1201"),
        "index": 9,
        "classified": (("E", 6),) * 4,
        "root_count": 288,
        "description": "rank-24 even unimodular lattice glued from four "
                       "rank-6 blocks with ternary dual classes",
    },
}


@dataclass(frozen=True)
class NiemeierBundle:
    """A verified glued lattice with everything needed to work on it."""

    key: str
    base: Lattice
    part_data: tuple[RootLatticeData, ...]
    extension: GlueExtension
    glue_group: tuple[LatticeVector, ...]
    root_system: RootSystem
    description: str

    @property
    def lattice(self) -> Lattice:
        return self.extension.lattice


def _words_to_vectors(key: str, base: Lattice,
                      part_data: tuple[RootLatticeData, ...],
                      spec: dict, corrupt_generator: bool) -> list[LatticeVector]:
    if key == "A2_12":
        rows = [tuple(row) for row in golay_code().basis]
    else:
        rows = [tuple(int(ch) for ch in word) for word in spec["words"]]
    if corrupt_generator:
        # bump the second digit of the first word to the next dual class
        classes = sorted(part_data[1].glue)
        first = list(rows[0])
        first[1] = classes[(classes.index(first[1]) + 1) % len(classes)]
        rows[0] = tuple(first)
    vectors = []
    for row in rows:
        if len(row) != len(part_data):
            raise CatalogError(f"glue word {row} has wrong block count")
        coords: list[Fraction] = []
        for digit, data in zip(row, part_data):
            if digit not in data.glue:
                raise CatalogError(f"glue digit {digit} has no dual class")
            coords.extend(data.glue[digit].coords)
        vectors.append(base.vector(coords))
    return vectors


def _close_glue_group(base: Lattice,
                      generators: list[LatticeVector]) -> list[LatticeVector]:
    """All distinct cosets generated by the glue vectors, reduced mod 1."""

    def reduced(coords: Sequence[Fraction]) -> tuple[Fraction, ...]:
        return tuple(Fraction(c) % 1 for c in coords)

    gens = [reduced(g.coords) for g in generators]
    zero = tuple(Fraction(0) for _ in range(base.rank))
    group = {zero}
    frontier = [zero]
    while frontier:
        cur = frontier.pop()
        for g in gens:
            nxt = reduced(a + b for a, b in zip(cur, g))
            if nxt not in group:
                group.add(nxt)
                frontier.append(nxt)
    return [base.vector(coords) for coords in sorted(group)]


def construct_niemeier(key: str, corrupt_generator: bool = False) -> NiemeierBundle:
    """Build and fully verify one of the four glued rank-24 lattices.

    ``corrupt_generator`` deliberately perturbs one glue word first, to
    demonstrate that the verification chain rejects a wrong input.
    """
    if key not in _NIEMEIER_SPECS:
        raise CatalogError(f"unknown lattice key {key!r}")
    spec = _NIEMEIER_SPECS[key]
    part_data = tuple(build_root_lattice(f, r) for f, r in spec["parts"])
    base = direct_sum([d.lattice for d in part_data], name=f"{key}:base")
    generators = _words_to_vectors(key, base, part_data, spec, corrupt_generator)
    ext = glue_extend(base, generators, name=key)
    if ext.index != spec["index"]:
        raise CatalogError(
            f"{key}: glue index {ext.index}, expected {spec['index']}")
    even, unimodular = is_even_unimodular(ext.lattice)
    if not (even and unimodular and ext.lattice.rank == 24):
        raise CatalogError(f"{key}: lattice is not even unimodular of rank 24")
    group = _close_glue_group(base, generators)
    if len(group) != spec["index"]:
        raise CatalogError(
            f"{key}: glue group has {len(group)} cosets, expected {spec['index']}")
    vectors = glued_root_vectors(base, ext, group)
    rs = build_root_system(ext.lattice, vectors)
    if classify(rs) != spec["classified"] or rs.count != spec["root_count"]:
        raise CatalogError(f"{key}: root system mismatch")
    return NiemeierBundle(key, base, part_data, ext, tuple(group), rs,
                          spec["description"])


@lru_cache(maxsize=None)
def niemeier_bundle(key: str) -> NiemeierBundle:
    return construct_niemeier(key)


def build_niemeier(key: str) -> Lattice:
    return niemeier_bundle(key).lattice


def _block_assignments(key: str) -> list[tuple[int, IntMatrix]]:
    """Per source block: (target block, component matrix applied en route)."""
    rot = build_component_auto("rotation_D4").matrix
    if key == "sigma1":
        perm = residue_perm()
        cyc = build_component_auto("cycle_A2").matrix
        eye = IntMatrix.identity(2)
        turned = {0, 5, 8}  # positions of the three indices fixed by the shuffle
        return [(perm(p), cyc if p in turned else eye) for p in range(12)]
    if key == "sigma2":
        return [(i, rot) for i in range(6)]
    if key == "sigma3":
        tri = build_component_auto("triality_D4").matrix
        return [(i, rot if i < 3 else tri) for i in range(6)]
    if key == "sigma4":
        psi = build_component_auto("coord_cycle_D4").matrix
        rot2 = rot @ rot
        eye = IntMatrix.identity(4)
        return [(0, psi), (1, rot), (2, rot2), (4, rot2), (5, rot), (3, eye)]
    if key == "sigma5":
        psi = build_component_auto("coord_cycle_A5").matrix
        eye5 = IntMatrix.identity(5)
        return [(0, psi), (2, eye5), (3, eye5), (1, eye5),
                (4, build_component_auto("rotation_D4").matrix)]
    if key == "sigma6":
        phi = build_component_auto("reflection_product_E6").matrix
        eye6 = IntMatrix.identity(6)
        return [(0, phi), (2, eye6), (3, eye6), (1, eye6)]
    raise CatalogError(f"unknown isometry key {key!r}")


def assemble_block_isometry(bundle: NiemeierBundle,
                            assignments: Sequence[tuple[int, IntMatrix]],
                            expected_order: int,
                            name: str) -> Isometry:
    """Glue per-block maps into one isometry of the extended lattice.

    ``assignments[src] = (dst, m)`` sends the contents of block ``src``
    through ``m`` into block ``dst``.  The assembled map is conjugated into
    the glued basis and must keep every basis vector inside the lattice;
    the first violating image is reported otherwise.
    """
    base = bundle.base
    blocks = base.blocks
    if sorted(dst for dst, _ in assignments) != list(range(len(blocks))):
        raise CatalogError(f"{name}: block targets are not a permutation")
    if len(assignments) != len(blocks):
        raise CatalogError(f"{name}: block count mismatch")
    starts = []
    pos = 0
    for b in blocks:
        starts.append(pos)
        pos += b
    entries = [[0] * base.rank for _ in range(base.rank)]
    for src, (dst, m) in enumerate(assignments):
        if blocks[src] != blocks[dst] or m.rows != blocks[src]:
            raise CatalogError(f"{name}: block size mismatch at {src}->{dst}")
        for i in range(m.rows):
            for j in range(m.cols):
                entries[starts[src] + i][starts[dst] + j] = m.entries[i][j]
    s = IntMatrix.from_rows(entries, cols=base.rank)
    b = bundle.extension.basis_in_base
    x = b @ s.to_rat() @ inverse(b)
    for k in range(x.rows):
        if any(e.denominator != 1 for e in x.entries[k]):
            raise StabilizationError(
                f"{name}: image of basis vector {k} is outside the lattice: "
                f"{tuple(str(e) for e in x.entries[k])}")
    return Isometry.create(bundle.lattice, x.to_int(),
                           expected_order=expected_order, name=name)


@lru_cache(maxsize=None)
def build_sigma(key: str) -> Isometry:
    """Assemble, verify, and return one of the six order-3 isometries."""
    if key not in SIGMA_TO_LATTICE:
        raise CatalogError(f"unknown isometry key {key!r}")
    bundle = niemeier_bundle(SIGMA_TO_LATTICE[key])
    return assemble_block_isometry(bundle, _block_assignments(key), 3, key)


@dataclass(frozen=True)
class NamedConstruction:
    key: str
    kind: str
    description: str


_SIGMA_DESCRIPTIONS = {
    "sigma1": "Golay-residue block shuffle with plane rotations on the "
              "three fixed blocks",
    "sigma2": "the fixed-point-free rotation applied to all six blocks",
    "sigma3": "rotations on three blocks and diagram rotations on the "
              "other three",
    "sigma4": "coordinate 3-cycle on one block, rotations on two, and a "
              "3-cycle of the remaining three blocks",
    "sigma5": "coordinate 3-cycles on one rank-5 block, a 3-cycle of the "
              "other three, and a rotation on the rank-4 block",
    "sigma6": "reflection product on one block and a 3-cycle of the other "
              "three",
}


def catalog_entries() -> tuple[NamedConstruction, ...]:
    rows = [NamedConstruction(key, "lattice", _NIEMEIER_SPECS[key]["description"])
            for key in LATTICE_KEYS]
    rows.extend(
        NamedConstruction(key, "isometry",
                          f"order-3 isometry of {SIGMA_TO_LATTICE[key]}: "
                          + _SIGMA_DESCRIPTIONS[key])
        for key in SIGMA_KEYS)
    return tuple(rows)


def isometry_to_json(iso: Isometry) -> dict:
    return {
        "name": iso.name,
        "lattice": iso.lattice.name,
        "order": iso.order,
        "fixed_rank": iso.fixed_rank,
        "matrix": [list(row) for row in iso.matrix.entries],
    }
