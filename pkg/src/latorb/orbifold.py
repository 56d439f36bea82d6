"""Order-3 orbifold invariants for a lattice with a chosen isometry.

Given an even lattice L and an order-3 isometry s, this module computes the
eigenspace dimensions, the weight offset rho, the nested sublattices
M = (1-s)L and N = ker(1+s+s^2) with the radical R of the mod-6 commutator
pairing between them, and the weight-one dimension bookkeeping: fixed part,
twisted part (square root of |N/R| when rho = 1), and their total.  The
index |N/R| is always computed by two independent routes that must agree.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import isqrt

from . import liealg
from .catalog import SIGMA_KEYS, SIGMA_TO_LATTICE, build_sigma, niemeier_bundle
from .exactmat import IntMatrix, det, hnf, inverse, kernel_basis, snf, solve_exact
from .lattice import Isometry, LatticeVector, SublatticeOf, rat_str
from .roots import RootSystem, enumerate_roots, orbit_count

TWIST_ORDER = 3

# c0(a, b) = sum_r (TWIST_ORDER + 2r) <s^r a, b> taken mod 2*TWIST_ORDER.
_COMMUTATOR_MOD = 2 * TWIST_ORDER

# Coset counts up to this size are filtered in one pass; beyond it the
# enumeration splits meet-in-the-middle (sigma2 has 3^12 cosets).
_DIRECT_COSET_LIMIT = 4096


class OrbifoldError(Exception):
    """An invariant of the orbifold computation failed to hold."""


class UnsupportedTwistWeight(OrbifoldError):
    """rho < 1 (or rho not in (1/3)Z): the twisted weight-one space picks up
    contributions above the top level and no dimension rule is available."""


@dataclass(frozen=True)
class EigenData:
    """Complex eigenspace dimensions for eigenvalues 1, zeta, zeta^2."""

    dim_h0: int
    dim_h1: int
    dim_h2: int

    def as_list(self) -> list[int]:
        return [self.dim_h0, self.dim_h1, self.dim_h2]


def eigen_dims(iso: Isometry) -> EigenData:
    """Eigenspace dimensions of an order-1-or-3 isometry.

    dim_h0 is the exact rational nullity of (s - 1); the two primitive
    eigenspaces are complex conjugates, so they share the remaining rank
    equally.  An odd remainder means the matrix is not what it claims.
    """
    if iso.order not in (1, TWIST_ORDER):
        raise OrbifoldError(f"isometry order {iso.order} is not 1 or {TWIST_ORDER}")
    h0 = iso.fixed_rank
    rest = iso.lattice.rank - h0
    if rest % 2 != 0:
        raise OrbifoldError("conjugate eigenspaces differ in dimension; "
                            "the isometry matrix is inconsistent")
    return EigenData(h0, rest // 2, rest // 2)


def rho(eigen: EigenData) -> Fraction:
    """Twisted-module weight offset: (1/4p^2) sum_r r(p-r) dim_h(r), p = 3."""
    p = TWIST_ORDER
    dims = eigen.as_list()
    return Fraction(sum(r * (p - r) * dims[r] for r in range(p)), 4 * p * p)


def rho_is_admissible(value: Fraction) -> bool:
    """Whether rho lands in (1/3)Z, the range the dimension rules cover."""
    return (TWIST_ORDER * value).denominator == 1


def sublattice_n(iso: Isometry) -> SublatticeOf:
    """N = {a in L : (1 + s + s^2)a = 0}, with a saturated basis.

    Equivalently the vectors whose projection to the fixed subspace is zero;
    the kernel form avoids rational fixed-space bases.
    """
    total = IntMatrix.zero(iso.lattice.rank, iso.lattice.rank)
    for r in range(TWIST_ORDER):
        total = total + iso.matrix ** r
    return SublatticeOf(iso.lattice, kernel_basis(total))


def sublattice_m(iso: Isometry) -> SublatticeOf:
    """M = (1 - s)L as the HNF row lattice of (1 - s)."""
    delta = IntMatrix.identity(iso.lattice.rank) - iso.matrix
    m = SublatticeOf(iso.lattice, hnf(delta))
    # (1-s)(1+s+s^2) = 1-s^3 = 0, so M annihilates the same operator as N.
    total = IntMatrix.zero(iso.lattice.rank, iso.lattice.rank)
    for r in range(TWIST_ORDER):
        total = total + iso.matrix ** r
    if not (m.inclusion @ total).is_zero():
        raise OrbifoldError("M = (1-s)L is not contained in N")
    return m


@lru_cache(maxsize=None)
def commutator_gram(iso: Isometry) -> IntMatrix:
    """Integer matrix C with c0(a, b) = a C b^T mod 6 in basis coordinates."""
    if not iso.lattice.is_even:
        raise OrbifoldError("the mod-6 commutator pairing needs an even lattice")
    g = iso.lattice.gram.to_int()
    total = IntMatrix.zero(g.rows, g.cols)
    for r in range(TWIST_ORDER):
        total = total + ((iso.matrix ** r) @ g).scale(TWIST_ORDER + 2 * r)
    return total


def commutator_value(iso: Isometry, alpha: LatticeVector,
                     beta: LatticeVector) -> int:
    """c0(alpha, beta) = sum_r (3 + 2r)<s^r alpha, beta> mod 6, in {0..5}."""
    for v in (alpha, beta):
        if v.lattice != iso.lattice:
            raise OrbifoldError("commutator arguments must live in the "
                                "isometry's lattice")
        if not v.is_integral:
            raise OrbifoldError("commutator arguments must be lattice members")
    c = commutator_gram(iso).entries
    a = [int(x) for x in alpha.coords]
    b = [int(x) for x in beta.coords]
    n = len(a)
    return sum(a[i] * sum(c[i][j] * b[j] for j in range(n))
               for i in range(n)) % _COMMUTATOR_MOD


def _pairing_on(iso: Isometry, n: SublatticeOf) -> IntMatrix:
    b = n.inclusion
    return b @ commutator_gram(iso) @ b.transpose()


def sublattice_r(iso: Isometry,
                 n: SublatticeOf | None = None) -> tuple[SublatticeOf, int]:
    """R = {a in N : c0(a, N) = 0 mod 6} and the index |N/R|.

    Route one of the dual computation: the congruence kernel x C = 0 mod 6
    is solved by an integer kernel of the stacked matrix (C over 6I); the
    projection of that kernel back to N coordinates is R.
    """
    if n is None:
        n = sublattice_n(iso)
    k = n.rank
    if k == 0:
        return SublatticeOf(iso.lattice, IntMatrix(0, iso.lattice.rank, ())), 1
    c = _pairing_on(iso, n)
    stacked = IntMatrix.from_rows(
        list(c.entries) + list(IntMatrix.identity(k).scale(_COMMUTATOR_MOD).entries),
        cols=k)
    ker = kernel_basis(stacked)
    proj = hnf(IntMatrix.from_rows([row[:k] for row in ker.entries], cols=k))
    if proj.rows != k:
        raise OrbifoldError("radical lost rank; 6N should always embed in R")
    index = int(abs(det(proj)))
    in_parent = hnf(proj @ n.inclusion)
    return SublatticeOf(iso.lattice, in_parent), index


def coset_filter_index(iso: Isometry, n: SublatticeOf | None = None,
                       m: SublatticeOf | None = None) -> tuple[int, int]:
    """Route two: (|N/M|, |N/R|) by filtering N/M cosets with c0.

    Cosets are enumerated in Smith coordinates for N/M; a coset lies in R/M
    exactly when its row pairs to zero mod 6 against all of N.  Beyond
    _DIRECT_COSET_LIMIT cosets the count splits meet-in-the-middle.
    """
    if n is None:
        n = sublattice_n(iso)
    if m is None:
        m = sublattice_m(iso)
    k = n.rank
    if k == 0:
        return 1, 1
    if m.rank != k:
        raise OrbifoldError("N/M is infinite; ranks differ")
    x = solve_exact(n.inclusion.to_rat(), m.inclusion.to_rat())
    if not x.is_integral():
        raise OrbifoldError("M does not embed in N integrally")
    xi = x.to_int()
    dec = snf(xi)
    divisors = dec.invariant_factors
    if any(d == 0 for d in divisors):
        raise OrbifoldError("M has lower rank than N")
    index_nm = 1
    for d in divisors:
        index_nm *= d

    # Pairing rows in Smith coordinates y = x V: condition y (V^-1 C) = 0 mod 6.
    c = _pairing_on(iso, n)
    vinv = inverse(dec.v.to_rat()).to_int()
    rows = [[e % _COMMUTATOR_MOD for e in row] for row in (vinv @ c).entries]
    if any(e % _COMMUTATOR_MOD for row in (xi @ c).entries for e in row):
        raise OrbifoldError("M is not in the radical; c0 does not descend to N/M")

    nontrivial = [i for i, d in enumerate(divisors) if d > 1]

    def partial_sums(indices: list[int]) -> dict[tuple[int, ...], int]:
        acc: dict[tuple[int, ...], int] = {}
        for combo in itertools.product(*(range(divisors[i]) for i in indices)):
            s = [0] * k
            for t, i in zip(combo, indices):
                if t:
                    row = rows[i]
                    for j in range(k):
                        s[j] = (s[j] + t * row[j]) % _COMMUTATOR_MOD
            key = tuple(s)
            acc[key] = acc.get(key, 0) + 1
        return acc

    if index_nm <= _DIRECT_COSET_LIMIT:
        radical_cosets = partial_sums(nontrivial).get((0,) * k, 0)
    else:
        half = len(nontrivial) // 2
        left = partial_sums(nontrivial[:half])
        right = partial_sums(nontrivial[half:])
        radical_cosets = 0
        for key, cnt in left.items():
            mirror = tuple((-e) % _COMMUTATOR_MOD for e in key)
            radical_cosets += cnt * right.get(mirror, 0)
    if radical_cosets == 0 or index_nm % radical_cosets != 0:
        raise OrbifoldError("coset filter produced a non-divisor count")
    return index_nm, index_nm // radical_cosets


@dataclass(frozen=True)
class TwistData:
    """Everything the twisted-module dimension rule consumes."""

    eigen: EigenData
    rho: Fraction
    n: SublatticeOf
    m: SublatticeOf
    r: SublatticeOf
    index_nm: int
    index_nr: int
    top_dim: int
    twisted_wt1_dim: int | None  # None: outside the supported weight range


def _contained_in(inner: IntMatrix, outer: IntMatrix) -> bool:
    if inner.rows == 0:
        return True
    x = solve_exact(outer.to_rat(), inner.to_rat())
    return x.is_integral()


@lru_cache(maxsize=None)
def twist_data(iso: Isometry) -> TwistData:
    """Assemble eigen data, rho, N/M/R, and the twisted top dimension.

    The two |N/R| routes (congruence kernel, coset filter) are both run and
    must agree; M is re-verified inside R inside N; |N/R| must be a perfect
    square.  Any failure raises rather than producing a report.
    """
    eigen = eigen_dims(iso)
    offset = rho(eigen)
    n = sublattice_n(iso)
    if n.rank != eigen.dim_h1 + eigen.dim_h2:
        raise OrbifoldError("rank N disagrees with the eigenspace dimensions")
    m = sublattice_m(iso)
    if m.rank != n.rank:
        raise OrbifoldError("rank M differs from rank N")
    r, index_kernel = sublattice_r(iso, n)
    index_nm, index_filter = coset_filter_index(iso, n, m)
    if index_kernel != index_filter:
        raise OrbifoldError(
            f"|N/R| routes disagree: congruence kernel {index_kernel}, "
            f"coset filter {index_filter}")
    if not _contained_in(m.inclusion, r.inclusion):
        raise OrbifoldError("M is not contained in R")
    if not _contained_in(r.inclusion, n.inclusion):
        raise OrbifoldError("R is not contained in N")
    top = isqrt(index_kernel)
    if top * top != index_kernel:
        raise OrbifoldError(f"|N/R| = {index_kernel} is not a perfect square")
    if rho_is_admissible(offset) and offset == 1:
        wt1 = top
    elif rho_is_admissible(offset) and offset > 1:
        wt1 = 0
    else:
        wt1 = None
    return TwistData(eigen, offset, n, m, r, index_nm, index_kernel, top, wt1)


def twisted_weight_one_dim(td: TwistData) -> int:
    """Weight-one dimension of one twisted module: top dim at rho = 1, zero
    above, and an explicit error below (never a silent zero)."""
    if td.twisted_wt1_dim is None:
        raise UnsupportedTwistWeight(
            f"rho = {td.rho}: weight one is above the top level and the "
            "dimension is not determined by |N/R|")
    return td.twisted_wt1_dim


def fixed_weight_one_dim(iso: Isometry, rs: RootSystem | None = None) -> int:
    """dim of the fixed weight-one space: dim_h0 plus root orbits."""
    if rs is None:
        rs = enumerate_roots(iso.lattice)
    orbits, _ = orbit_count(rs, iso)
    return eigen_dims(iso).dim_h0 + orbits


# Candidate queries for the unresolved weight-one summand of each
# construction: (dimension, rank bound or None, dual Coxeter divisor).
_CANDIDATE_QUERIES: dict[str, tuple[int, int | None, int] | None] = {
    "sigma1": (24, 6, 1),
    "sigma2": None,
    "sigma3": (78, None, 4),
    "sigma4": (28, None, 2),
    "sigma5": (35, None, 2),
    "sigma6": (42, None, 4),
}

# Numerological candidates the stored classification does not list; they are
# reported with a flag, never dropped.
_FLAGGED_CANDIDATES: dict[str, tuple[str, ...]] = {
    "sigma1": ("A3 A1^3",),
}

# The resolved weight-one type of each orbifold, used for row matching.
_RESOLVED_WEIGHT_ONE = {
    "sigma1": "A2,3^6",
    "sigma2": "A2,3^6",
    "sigma3": "E6,3 G2,1^3",
    "sigma4": "A5,3 D4,3 A1,1^3",
    "sigma5": "A5,3 D4,3 A1,1^3",
    "sigma6": "E6,3 G2,1^3",
}


def _candidate_entries(sigma_key: str, total: int) -> list[dict]:
    query = _CANDIDATE_QUERIES[sigma_key]
    if query is None:
        return []
    dim, rank_bound, divisor = query
    if (total - 24) % 24 != 0 or (total - 24) // 24 != divisor:
        raise OrbifoldError(
            f"{sigma_key}: stored divisor {divisor} disagrees with total {total}")
    flagged = _FLAGGED_CANDIDATES.get(sigma_key, ())
    out = []
    for cand in liealg.semisimple_candidates(dim, rank=rank_bound,
                                             hcoxeter_divisor=divisor):
        levels = {}
        for t, _ in cand.components:
            level = liealg.level_from_dim(t.dual_coxeter, total)
            if level is None or level * divisor != t.dual_coxeter:
                raise OrbifoldError("enumerated candidate fails the level rule")
            levels[(t.family, t.rank)] = level
        out.append({
            "type": cand.type_string(),
            "with_levels": cand.type_string(levels),
            "dimension": cand.dimension,
            "rank": cand.rank,
            "flagged": cand.type_string() in flagged,
        })
    return out


def _verify_resolved_type(sigma_key: str, total: int) -> str:
    text = _RESOLVED_WEIGHT_ONE[sigma_key]
    parsed = liealg.parse_type_string(text)
    if sum(t.dimension * count for t, _, count in parsed) != total:
        raise OrbifoldError(f"{sigma_key}: resolved type dimension is not {total}")
    for t, level, _ in parsed:
        if liealg.level_from_dim(t.dual_coxeter, total) != level:
            raise OrbifoldError(f"{sigma_key}: resolved type violates the level rule")
    return text


def assemble_report(sigma_key: str) -> dict:
    """Full orbifold report for one catalog construction, JSON-shaped.

    All checks are recomputed here from the isometry matrix; nothing is
    trusted from construction time.
    """
    if sigma_key not in SIGMA_KEYS:
        raise OrbifoldError(f"unknown isometry key {sigma_key!r}")
    lattice_key = SIGMA_TO_LATTICE[sigma_key]
    bundle = niemeier_bundle(lattice_key)
    iso = build_sigma(sigma_key)
    g = iso.lattice.gram
    mr = iso.matrix.to_rat()
    checks = {
        "isometry": (mr @ g @ mr.transpose()) == g,
        "order": (iso.matrix ** TWIST_ORDER).is_identity()
                 and not iso.matrix.is_identity(),
        "stabilizes": all(isinstance(e, int)
                          for row in iso.matrix.entries for e in row),
    }
    td = twist_data(iso)
    fixed = fixed_weight_one_dim(iso, bundle.root_system)
    twisted = twisted_weight_one_dim(td)
    total = fixed + 2 * twisted
    resolved = _verify_resolved_type(sigma_key, total)
    return {
        "lattice": lattice_key,
        "sigma": sigma_key,
        "checks": checks,
        "eigen": td.eigen.as_list(),
        "rho": rat_str(td.rho),
        "ranks": {"N": td.n.rank, "M": td.m.rank, "R": td.r.rank},
        "indices": {"N_over_M": td.index_nm, "N_over_R": td.index_nr},
        "R_equals_M": td.index_nm == td.index_nr,
        "dims": {"fixed": fixed, "twisted_each": twisted, "total": total},
        "candidates": _candidate_entries(sigma_key, total),
        "schellekens": liealg.schellekens_match(total, resolved),
    }
