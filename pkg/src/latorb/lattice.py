"""Positive-definite lattices with exact Gram data.

A lattice is represented basis-first: an exact symmetric positive-definite
Gram matrix, plus an optional embedding giving the basis vectors inside an
ambient quadratic space.  Every lattice has an *effective* embedding — the
stated one, or the identity with the Gram matrix as the ambient form — so
vectors of related lattices (duals, glue extensions, sublattices) can always
be compared in shared ambient coordinates.

All arithmetic is exact; see :mod:`latorb.exactmat`.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Iterable, Sequence

from .exactmat import (
    IntMatrix,
    NoSolution,
    RatMatrix,
    Rational,
    det,
    hnf,
    inverse,
    kernel_basis,
    snf,
    solve_exact,
)


class LatticeError(ValueError):
    """Invalid lattice data (non-symmetric or non-positive-definite Gram)."""


class NotInRationalSpan(Exception):
    """A vector given to :func:`member` lies outside the lattice's span."""


class GlueError(ValueError):
    """A glue vector does not pair integrally with the base lattice."""


class QuotientError(ValueError):
    """The requested quotient is infinite (rank drop)."""


class IsometryError(ValueError):
    """A claimed isometry fails verification."""


def rat_str(x: Rational) -> str:
    """Canonical string for an exact rational: 'p' or 'p/q' in lowest terms."""
    f = Fraction(x)
    return str(f)


@dataclass(frozen=True)
class Lattice:
    """A finite-rank positive-definite lattice over Z.

    Fields:
        gram: symmetric positive-definite RatMatrix — the pairing on a basis.
        embedding: optional basis-vectors-as-rows in ambient coordinates.
        ambient_form: optional ambient bilinear form (identity when omitted
            but an embedding is given; the Gram itself when both omitted).
        name: optional label.
        blocks: optional ranks of direct summands, recorded by direct_sum so
            block automorphisms can be assembled coordinate-wise.
    """

    gram: RatMatrix
    embedding: RatMatrix | None = None
    ambient_form: RatMatrix | None = None
    name: str | None = None
    blocks: tuple[int, ...] | None = None

    def __post_init__(self) -> None:
        g = self.gram
        if not g.is_symmetric():
            raise LatticeError("Gram matrix is not symmetric")
        # Positive definiteness: all leading principal minors positive.
        for k in range(1, g.rows + 1):
            minor = RatMatrix.from_rows(
                [row[:k] for row in g.entries[:k]], cols=k)
            if det(minor) <= 0:
                raise LatticeError("Gram matrix is not positive definite")
        if self.embedding is not None:
            e = self.embedding
            if e.rows != g.rows:
                raise LatticeError("embedding row count differs from rank")
            f = self.ambient_form
            if f is None:
                f = RatMatrix.identity(e.cols)
            if (e @ f @ e.transpose()) != g:
                raise LatticeError("embedding does not reproduce the Gram matrix")
        elif self.ambient_form is not None:
            raise LatticeError("ambient form given without an embedding")

    @property
    def rank(self) -> int:
        return self.gram.rows

    def effective_embedding(self) -> RatMatrix:
        if self.embedding is not None:
            return self.embedding
        return RatMatrix.identity(self.rank)

    def effective_ambient_form(self) -> RatMatrix:
        if self.embedding is not None:
            if self.ambient_form is not None:
                return self.ambient_form
            return RatMatrix.identity(self.embedding.cols)
        return self.gram

    @property
    def is_integral(self) -> bool:
        return self.gram.is_integral()

    @property
    def is_even(self) -> bool:
        return self.is_integral and all(
            int(self.gram.entries[i][i]) % 2 == 0 for i in range(self.rank))

    def determinant(self) -> Fraction:
        return det(self.gram)

    def vector(self, coords: Sequence[Rational]) -> "LatticeVector":
        return LatticeVector(self, tuple(Fraction(c) for c in coords))

    def basis_vector(self, i: int) -> "LatticeVector":
        return self.vector([1 if j == i else 0 for j in range(self.rank)])

    def inner(self, x: Sequence[Rational], y: Sequence[Rational]) -> Fraction:
        """Pairing of two vectors given in basis coordinates."""
        gy = [sum(self.gram.entries[i][j] * Fraction(y[j]) for j in range(self.rank))
              for i in range(self.rank)]
        return sum((Fraction(x[i]) * gy[i] for i in range(self.rank)), Fraction(0))

    def to_json(self) -> dict:
        even, unimodular = is_even_unimodular(self)
        doc = {
            "name": self.name,
            "rank": self.rank,
            "gram": [[rat_str(e) for e in row] for row in self.gram.entries],
            "even": even,
            "det": rat_str(self.determinant()),
        }
        if self.embedding is not None:
            doc["embedding"] = [[rat_str(e) for e in row] for row in self.embedding.entries]
        return doc


@dataclass(frozen=True)
class LatticeVector:
    """Exact rational coordinates in the basis of a fixed lattice."""

    lattice: Lattice
    coords: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        if len(self.coords) != self.lattice.rank:
            raise ValueError("coordinate count differs from lattice rank")
        object.__setattr__(self, "coords", tuple(Fraction(c) for c in self.coords))

    @property
    def is_integral(self) -> bool:
        return all(c.denominator == 1 for c in self.coords)

    def ambient(self) -> tuple[Fraction, ...]:
        e = self.lattice.effective_embedding()
        return tuple(
            sum((self.coords[i] * e.entries[i][j] for i in range(self.lattice.rank)),
                Fraction(0))
            for j in range(e.cols))

    def norm(self) -> Fraction:
        return self.lattice.inner(self.coords, self.coords)

    def inner(self, other: "LatticeVector") -> Fraction:
        if other.lattice is not self.lattice and other.lattice != self.lattice:
            raise ValueError("vectors belong to different lattices")
        return self.lattice.inner(self.coords, other.coords)

    def __add__(self, other: "LatticeVector") -> "LatticeVector":
        return LatticeVector(self.lattice,
                             tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other: "LatticeVector") -> "LatticeVector":
        return LatticeVector(self.lattice,
                             tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __neg__(self) -> "LatticeVector":
        return LatticeVector(self.lattice, tuple(-a for a in self.coords))

    def scale(self, k: Rational) -> "LatticeVector":
        kf = Fraction(k)
        return LatticeVector(self.lattice, tuple(kf * a for a in self.coords))


@dataclass(frozen=True)
class SublatticeOf:
    """A finite-index-or-smaller sublattice given by its rows in parent coordinates."""

    parent: Lattice
    inclusion: IntMatrix

    def __post_init__(self) -> None:
        if self.inclusion.cols != self.parent.rank:
            raise LatticeError("inclusion width differs from parent rank")
        if hnf(self.inclusion).rows != self.inclusion.rows:
            raise LatticeError("inclusion rows are not linearly independent")

    @property
    def rank(self) -> int:
        return self.inclusion.rows

    def lattice(self, name: str | None = None) -> Lattice:
        """The sublattice as a lattice in its own right (induced Gram)."""
        inc = self.inclusion.to_rat()
        gram = inc @ self.parent.gram @ inc.transpose()
        emb = inc @ self.parent.effective_embedding()
        return Lattice(gram, embedding=emb,
                       ambient_form=_explicit_ambient(self.parent), name=name)

    def contains(self, coords_in_parent: Sequence[Rational]) -> bool:
        """Whether a parent-coordinate vector lies in this sublattice."""
        target = RatMatrix.from_rows([list(coords_in_parent)],
                                     cols=self.parent.rank)
        try:
            x = solve_exact(self.inclusion.to_rat(), target)
        except NoSolution:
            return False
        return x.is_integral()


@dataclass(frozen=True)
class DiscriminantGroup:
    """Invariant factors of L*/L for an integral lattice L."""

    invariant_factors: tuple[int, ...]
    order: int


def _explicit_ambient(l: Lattice) -> RatMatrix | None:
    """Ambient form to attach to a derived lattice sharing l's ambient space."""
    f = l.effective_ambient_form()
    if f.rows and f == RatMatrix.identity(f.rows):
        return None
    return f


def dual(l: Lattice) -> Lattice:
    """The dual lattice L*: Gram is the inverse Gram, basis = G^-1 . basis.

    For an integral lattice, L sits inside L* with index det(gram).  The
    operation itself is defined for any positive-definite Gram so that
    taking the dual twice returns the original lattice.
    """
    ginv = inverse(l.gram)
    emb = ginv @ l.effective_embedding()
    name = f"{l.name}*" if l.name else None
    return Lattice(ginv, embedding=emb, ambient_form=_explicit_ambient(l), name=name)


def discriminant_group(l: Lattice) -> DiscriminantGroup:
    """Structure of L*/L via the SNF of the Gram matrix."""
    if not l.is_integral:
        raise LatticeError("discriminant group requires an integral Gram matrix")
    factors = snf(l.gram.to_int()).invariant_factors
    order = 1
    for f in factors:
        order *= f
    return DiscriminantGroup(tuple(f for f in factors if f > 1), order)


def direct_sum(parts: Sequence[Lattice], name: str | None = None) -> Lattice:
    """Orthogonal direct sum with block-diagonal Gram and block bookkeeping."""
    total_rank = sum(p.rank for p in parts)
    gram_rows = []
    emb_rows = []
    form_rows = []
    ambient_dims = [p.effective_embedding().cols for p in parts]
    total_ambient = sum(ambient_dims)
    r_off = 0
    a_off = 0
    for p, adim in zip(parts, ambient_dims):
        for i in range(p.rank):
            row = [Fraction(0)] * total_rank
            row[r_off:r_off + p.rank] = p.gram.entries[i]
            gram_rows.append(row)
            erow = [Fraction(0)] * total_ambient
            erow[a_off:a_off + adim] = p.effective_embedding().entries[i]
            emb_rows.append(erow)
        pform = p.effective_ambient_form()
        for i in range(adim):
            frow = [Fraction(0)] * total_ambient
            frow[a_off:a_off + adim] = pform.entries[i]
            form_rows.append(frow)
        r_off += p.rank
        a_off += adim
    gram = RatMatrix.from_rows(gram_rows, cols=total_rank)
    embedding = RatMatrix.from_rows(emb_rows, cols=total_ambient) if total_rank else None
    form = RatMatrix.from_rows(form_rows, cols=total_ambient) if total_ambient else None
    if form is not None and form == RatMatrix.identity(total_ambient):
        form = None
    return Lattice(gram, embedding=embedding, ambient_form=form, name=name,
                   blocks=tuple(p.rank for p in parts))


@dataclass(frozen=True)
class GlueExtension:
    """Result of glue_extend: the glued lattice, its index over the base, and
    the canonical new basis expressed in base coordinates."""

    lattice: Lattice
    index: int
    basis_in_base: RatMatrix
    base_in_lattice: SublatticeOf


def glue_extend(q: Lattice, glue: Sequence[LatticeVector],
                name: str | None = None) -> GlueExtension:
    """Extend q by glue vectors from its dual; canonical HNF basis.

    Each glue vector must pair integrally with every basis vector of q
    (i.e. lie in q*); otherwise :class:`GlueError` reports the offending
    pairing.  Glue coordinates are taken in the basis of q.
    """
    r = q.rank
    for gi, g in enumerate(glue):
        if g.lattice != q:
            raise GlueError(f"glue vector {gi} is not in the base lattice's basis")
        if len(g.coords) != r:
            raise GlueError(f"glue vector {gi} has wrong length")
        for bi in range(r):
            pairing = q.inner(g.coords, [1 if j == bi else 0 for j in range(r)])
            if pairing.denominator != 1:
                raise GlueError(
                    f"glue vector {gi} pairs non-integrally with basis vector "
                    f"{bi}: <g,b> = {rat_str(pairing)}")
    denom = 1
    for g in glue:
        for c in g.coords:
            denom = lcm(denom, c.denominator)
    rows = [[denom if i == j else 0 for j in range(r)] for i in range(r)]
    for g in glue:
        rows.append([int(c * denom) for c in g.coords])
    h = hnf(IntMatrix.from_rows(rows, cols=r))
    if h.rows != r:
        raise GlueError("glue span lost rank (internal error)")
    basis = RatMatrix.from_rows(
        [[Fraction(e, denom) for e in row] for row in h.entries], cols=r)
    det_basis = det(basis)
    index_frac = 1 / abs(det_basis)
    if index_frac.denominator != 1:
        raise GlueError("glue basis determinant is not the reciprocal of an integer")
    index = int(index_frac)
    gram = basis @ q.gram @ basis.transpose()
    embedding = basis @ q.effective_embedding()
    glued = Lattice(gram, embedding=embedding,
                    ambient_form=_explicit_ambient(q), name=name)
    base_rows = inverse(basis)
    base_in_lattice = SublatticeOf(glued, base_rows.to_int())
    return GlueExtension(glued, index, basis, base_in_lattice)


def is_even_unimodular(l: Lattice) -> tuple[bool, bool]:
    """(even, unimodular): integral Gram with even diagonal; determinant 1."""
    return l.is_even, l.determinant() == 1


def member(l: Lattice, v: LatticeVector) -> bool:
    """Whether v lies in l.

    v may be a vector of l itself or of any lattice sharing l's ambient
    space (duals, glue extensions, direct summands).  A vector outside the
    rational span of l raises :class:`NotInRationalSpan` — deliberately
    distinct from returning False.
    """
    if v.lattice is l or v.lattice == l:
        return v.is_integral
    my_form = l.effective_ambient_form()
    other_form = v.lattice.effective_ambient_form()
    if my_form.rows != other_form.rows or my_form != other_form:
        raise NotInRationalSpan(
            "vector lives in an unrelated ambient space; cannot test membership")
    target = RatMatrix.from_rows([list(v.ambient())], cols=my_form.rows)
    try:
        x = solve_exact(l.effective_embedding(), target)
    except NoSolution:
        raise NotInRationalSpan(
            "vector is outside the rational span of the lattice") from None
    return x.is_integral()


@dataclass(frozen=True)
class Quotient:
    """A finite quotient outer/inner: its order and cyclic decomposition."""

    index: int
    factors: tuple[int, ...]


def quotient_index(outer: Lattice, inner: SublatticeOf) -> Quotient:
    """|outer/inner| via the SNF of the inclusion matrix."""
    if inner.parent is not outer and inner.parent != outer:
        raise QuotientError("sublattice was not built inside the given lattice")
    if inner.rank != outer.rank:
        raise QuotientError(
            f"quotient is infinite: inner rank {inner.rank} < outer rank {outer.rank}")
    factors = snf(inner.inclusion).invariant_factors
    index = 1
    for f in factors:
        index *= f
    return Quotient(index, tuple(f for f in factors if f > 1))


@dataclass(frozen=True)
class Isometry:
    """A verified finite-order isometry of a lattice, in basis coordinates.

    Vectors are rows; the map is ``x -> x @ matrix``.  Construction via
    :meth:`create` checks the Gram form is preserved, the determinant is
    +-1, and the order is exactly the claimed one.
    """

    lattice: Lattice
    matrix: IntMatrix
    order: int
    name: str | None = None

    @classmethod
    def create(cls, lattice: Lattice, matrix: IntMatrix,
               expected_order: int | None = None, name: str | None = None) -> "Isometry":
        r = lattice.rank
        if matrix.rows != r or matrix.cols != r:
            raise IsometryError("matrix size differs from lattice rank")
        mr = matrix.to_rat()
        if (mr @ lattice.gram @ mr.transpose()) != lattice.gram:
            raise IsometryError("matrix does not preserve the Gram form")
        d = det(matrix)
        if d not in (1, -1):
            raise IsometryError(f"determinant is {d}, not +-1")
        order = cls._order_of(matrix, cap=expected_order)
        if expected_order is not None and order != expected_order:
            raise IsometryError(
                f"order is {order}, expected {expected_order}")
        return cls(lattice, matrix, order, name)

    @staticmethod
    def _order_of(matrix: IntMatrix, cap: int | None = None) -> int:
        limit = cap if cap is not None else 1000
        power = matrix
        for k in range(1, limit + 1):
            if power.is_identity():
                return k
            power = power @ matrix
        raise IsometryError(f"order exceeds {limit}")

    def apply(self, v: LatticeVector) -> LatticeVector:
        if v.lattice != self.lattice:
            raise ValueError("vector belongs to a different lattice")
        row = RatMatrix.from_rows([list(v.coords)], cols=self.lattice.rank)
        image = row @ self.matrix.to_rat()
        return LatticeVector(self.lattice, image.entries[0])

    def apply_coords(self, coords: Sequence[int]) -> tuple[int, ...]:
        m = self.matrix.entries
        n = self.matrix.rows
        return tuple(sum(coords[i] * m[i][j] for i in range(n)) for j in range(n))

    def power(self, k: int) -> IntMatrix:
        return self.matrix ** (k % self.order)

    def inverse_matrix(self) -> IntMatrix:
        return self.matrix ** (self.order - 1)

    @property
    def fixed_rank(self) -> int:
        delta = self.matrix - IntMatrix.identity(self.lattice.rank)
        return kernel_basis(delta).rows
