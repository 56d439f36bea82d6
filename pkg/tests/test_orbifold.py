"""Orbifold invariants: eigenspace data, rho, the N/M/R chain, the mod-6
commutator pairing, twisted and fixed weight-one dimensions, reports."""

import json
import random
from fractions import Fraction

import pytest

from latorb.catalog import (
    SIGMA_KEYS,
    SIGMA_TO_LATTICE,
    build_component_auto,
    build_root_lattice,
    build_sigma,
    niemeier_bundle,
)
from latorb.exactmat import IntMatrix, det
from latorb.lattice import Isometry, quotient_index
from latorb.orbifold import (
    EigenData,
    OrbifoldError,
    UnsupportedTwistWeight,
    assemble_report,
    commutator_gram,
    commutator_value,
    coset_filter_index,
    eigen_dims,
    fixed_weight_one_dim,
    rho,
    rho_is_admissible,
    sublattice_m,
    sublattice_n,
    sublattice_r,
    twist_data,
    twisted_weight_one_dim,
)
from latorb.roots import enumerate_roots

EIGEN_EXPECTED = {
    "sigma1": (6, 9, 9),
    "sigma2": (0, 12, 12),
    "sigma3": (6, 9, 9),
    "sigma4": (6, 9, 9),
    "sigma5": (6, 9, 9),
    "sigma6": (6, 9, 9),
}

RHO_EXPECTED = {
    "sigma1": Fraction(1),
    "sigma2": Fraction(4, 3),
    "sigma3": Fraction(1),
    "sigma4": Fraction(1),
    "sigma5": Fraction(1),
    "sigma6": Fraction(1),
}

# (|N/M|, |N/R|, twisted weight-one dim); every pair here has R = M.
TWIST_EXPECTED = {
    "sigma1": (81, 81, 9),
    "sigma2": (531441, 531441, 0),
    "sigma3": (729, 729, 27),
    "sigma4": (81, 81, 9),
    "sigma5": (81, 81, 9),
    "sigma6": (81, 81, 9),
}

FIXED_EXPECTED = {
    "sigma1": 30,
    "sigma2": 48,
    "sigma3": 66,
    "sigma4": 54,
    "sigma5": 54,
    "sigma6": 102,
}

TOTAL_EXPECTED = {
    "sigma1": 48,
    "sigma2": 48,
    "sigma3": 120,
    "sigma4": 72,
    "sigma5": 72,
    "sigma6": 120,
}

SCHELLEKENS_EXPECTED = {
    "sigma1": [6],
    "sigma2": [6],
    "sigma3": [32],
    "sigma4": [17],
    "sigma5": [17],
    "sigma6": [32],
}


def identity_on(lattice, name="id"):
    return Isometry.create(lattice, IntMatrix.identity(lattice.rank),
                           expected_order=1, name=name)


@pytest.mark.parametrize("key", SIGMA_KEYS)
def test_eigen_dims(key):
    eigen = eigen_dims(build_sigma(key))
    assert (eigen.dim_h0, eigen.dim_h1, eigen.dim_h2) == EIGEN_EXPECTED[key]
    assert eigen.dim_h1 == eigen.dim_h2


def test_eigen_dims_identity_and_rejects():
    d4 = build_root_lattice("D", 4).lattice
    assert eigen_dims(identity_on(d4)).as_list() == [4, 0, 0]
    minus = Isometry.create(d4, IntMatrix.identity(4).scale(-1),
                            expected_order=2)
    with pytest.raises(OrbifoldError):
        eigen_dims(minus)


@pytest.mark.parametrize("key", SIGMA_KEYS)
def test_rho(key):
    assert rho(eigen_dims(build_sigma(key))) == RHO_EXPECTED[key]


def test_rho_degenerate_and_admissibility():
    assert rho(EigenData(24, 0, 0)) == 0
    assert rho_is_admissible(Fraction(4, 3))
    assert rho_is_admissible(Fraction(1))
    assert not rho_is_admissible(Fraction(1, 9))


def test_sublattice_n_special_cases():
    # sigma2 is fixed-point-free, so 1 + s + s^2 = 0 and N is all of L.
    n2 = sublattice_n(build_sigma("sigma2"))
    assert n2.inclusion == IntMatrix.identity(24)
    assert sublattice_n(build_sigma("sigma1")).rank == 18
    d4 = build_root_lattice("D", 4).lattice
    assert sublattice_n(identity_on(d4)).rank == 0


@pytest.mark.parametrize("key", SIGMA_KEYS)
def test_sublattice_ranks(key):
    iso = build_sigma(key)
    eigen = eigen_dims(iso)
    n = sublattice_n(iso)
    m = sublattice_m(iso)
    assert n.rank == eigen.dim_h1 + eigen.dim_h2 == 24 - eigen.dim_h0
    assert m.rank == n.rank
    for row in m.inclusion.entries:
        assert n.contains(row)


def test_sublattice_m_full_rank_index():
    # For the fixed-point-free isometry M has full rank in L and
    # |L/M| = |det(1 - s)|.
    iso = build_sigma("sigma2")
    m = sublattice_m(iso)
    expected = int(abs(det(IntMatrix.identity(24) - iso.matrix)))
    assert expected == 3 ** 12
    assert quotient_index(iso.lattice, m).index == expected


def test_commutator_cycled_block_pairs_vanish():
    # On each component turned in place by the code-fixing isometry, the
    # successive images of a root pair to -1 and their commutator is 0.
    iso = build_sigma("sigma1")
    ext = niemeier_bundle("A2_12").extension
    for position in (0, 5, 8):
        base_row = ext.base_in_lattice.inclusion.entries[2 * position]
        a0 = iso.lattice.vector(base_row)
        a1 = iso.apply(a0)
        a2 = iso.apply(a1)
        chain = (a0, a1, a2)
        for r in range(3):
            first, second = chain[r], chain[(r + 1) % 3]
            assert first.inner(second) == -1
            assert commutator_value(iso, first, second) == 0


def test_commutator_coordinate_cycle_example():
    # Block 0 of sigma4's lattice carries the coordinate 3-cycle; for
    # alpha = e1-e2 and beta = e1-e4 the three inner products are 1, -1, 0,
    # so c0 = 3*1 + 5*(-1) + 7*0 = -2 = 4 mod 6.
    iso = build_sigma("sigma4")
    rows = niemeier_bundle("D4_6").extension.base_in_lattice.inclusion.entries
    alpha = iso.lattice.vector(rows[0])
    beta = iso.lattice.vector([a + b + c for a, b, c in
                               zip(rows[0], rows[1], rows[2])])
    assert alpha.inner(beta) == 1
    images = [alpha, iso.apply(alpha), iso.apply(iso.apply(alpha))]
    assert [v.inner(beta) for v in images] == [1, -1, 0]
    assert commutator_value(iso, alpha, beta) == 4
    assert commutator_value(iso, alpha, alpha) == 0
    assert commutator_value(iso, beta, beta) == 0


def test_commutator_rejects_non_members():
    iso = build_sigma("sigma1")
    good = iso.lattice.basis_vector(0)
    frac = iso.lattice.vector([Fraction(1, 3)] + [0] * 23)
    with pytest.raises(OrbifoldError):
        commutator_value(iso, good, frac)
    other = build_root_lattice("D", 4).lattice.basis_vector(0)
    with pytest.raises(OrbifoldError):
        commutator_value(iso, good, other)


@pytest.mark.parametrize("key", SIGMA_KEYS)
def test_twist_data(key):
    td = twist_data(build_sigma(key))
    index_nm, index_nr, wt1 = TWIST_EXPECTED[key]
    assert td.index_nm == index_nm
    assert td.index_nr == index_nr
    assert td.top_dim ** 2 == td.index_nr
    assert twisted_weight_one_dim(td) == wt1
    assert td.index_nm % td.index_nr == 0
    # chain M inside R inside N, checked row by row in parent coordinates
    for row in td.m.inclusion.entries:
        assert td.r.contains(row)
    for row in td.r.inclusion.entries:
        assert td.n.contains(row)


@pytest.mark.parametrize("key", SIGMA_KEYS)
def test_index_routes_agree(key):
    # The congruence-kernel route and the coset-filter route are computed
    # independently here, not just inside twist_data.
    iso = build_sigma(key)
    _, via_kernel = sublattice_r(iso)
    _, via_filter = coset_filter_index(iso)
    assert via_kernel == via_filter == TWIST_EXPECTED[key][1]


def test_sigma1_radical_equals_image():
    td = twist_data(build_sigma("sigma1"))
    assert td.index_nm == td.index_nr
    assert td.r.inclusion == td.m.inclusion  # both in HNF, so equality is exact


def test_sigma2_index_matches_determinant():
    # N = L for sigma2 and R = M, so |N/R| must equal |det(1 - s)|.
    iso = build_sigma("sigma2")
    td = twist_data(iso)
    assert td.index_nr == int(abs(det(IntMatrix.identity(24) - iso.matrix)))


def test_unsupported_twist_weights():
    d4 = build_root_lattice("D", 4).lattice
    td = twist_data(identity_on(d4))
    assert td.rho == 0 and td.twisted_wt1_dim is None
    with pytest.raises(UnsupportedTwistWeight):
        twisted_weight_one_dim(td)
    # order-3 on A2 alone: rho = 1/9 is below 1 and outside (1/3)Z
    phi = build_component_auto("cycle_A2")
    td_phi = twist_data(phi)
    assert td_phi.rho == Fraction(1, 9)
    assert (td_phi.index_nm, td_phi.index_nr) == (3, 1)
    with pytest.raises(UnsupportedTwistWeight):
        twisted_weight_one_dim(td_phi)


@pytest.mark.parametrize("key", SIGMA_KEYS)
def test_fixed_weight_one(key):
    iso = build_sigma(key)
    rs = niemeier_bundle(SIGMA_TO_LATTICE[key]).root_system
    assert fixed_weight_one_dim(iso, rs) == FIXED_EXPECTED[key]


def test_fixed_weight_one_identity():
    d4 = build_root_lattice("D", 4).lattice
    assert fixed_weight_one_dim(identity_on(d4)) == 4 + 24
    rs = niemeier_bundle("A2_12").root_system
    iso = identity_on(niemeier_bundle("A2_12").lattice)
    assert fixed_weight_one_dim(iso, rs) == 24 + 72


def test_report_sigma1_golden():
    assert assemble_report("sigma1") == {
        "lattice": "A2_12",
        "sigma": "sigma1",
        "checks": {"isometry": True, "order": True, "stabilizes": True},
        "eigen": [6, 9, 9],
        "rho": "1",
        "ranks": {"N": 18, "M": 18, "R": 18},
        "indices": {"N_over_M": 81, "N_over_R": 81},
        "R_equals_M": True,
        "dims": {"fixed": 30, "twisted_each": 9, "total": 48},
        "candidates": [
            {"type": "A2^3", "with_levels": "A2,3^3",
             "dimension": 24, "rank": 6, "flagged": False},
            {"type": "A3 A1^3", "with_levels": "A3,4 A1,2^3",
             "dimension": 24, "rank": 6, "flagged": True},
            {"type": "B2 A2 A1^2", "with_levels": "B2,3 A2,3 A1,2^2",
             "dimension": 24, "rank": 6, "flagged": False},
        ],
        "schellekens": [6],
    }


@pytest.mark.parametrize("key", SIGMA_KEYS)
def test_report_summary_values(key):
    report = assemble_report(key)
    assert report["lattice"] == SIGMA_TO_LATTICE[key]
    assert all(report["checks"].values())
    assert report["eigen"] == list(EIGEN_EXPECTED[key])
    assert report["dims"]["fixed"] == FIXED_EXPECTED[key]
    assert report["dims"]["twisted_each"] == TWIST_EXPECTED[key][2]
    assert report["dims"]["total"] == TOTAL_EXPECTED[key]
    assert report["dims"]["total"] == (report["dims"]["fixed"]
                                       + 2 * report["dims"]["twisted_each"])
    assert (report["dims"]["total"] - 24) % 24 == 0
    assert report["schellekens"] == SCHELLEKENS_EXPECTED[key]
    flagged = [c["type"] for c in report["candidates"] if c["flagged"]]
    assert flagged == (["A3 A1^3"] if key == "sigma1" else [])
    again = assemble_report(key)
    assert json.dumps(report, sort_keys=True) == json.dumps(again, sort_keys=True)


def test_report_unknown_key():
    with pytest.raises(OrbifoldError):
        assemble_report("sigma9")


@pytest.mark.parametrize("key", SIGMA_KEYS)
def test_commutator_is_alternating_and_bilinear(key):
    iso = build_sigma(key)
    gram = commutator_gram(iso).entries
    rank = iso.lattice.rank
    rng = random.Random(2000 + SIGMA_KEYS.index(key))

    def image(vec):
        return [sum(gram[i][j] * vec[j] for j in range(rank))
                for i in range(rank)]

    def dot6(u, v):
        return sum(a * b for a, b in zip(u, v)) % 6

    for trial in range(1000):
        a = [rng.randint(-3, 3) for _ in range(rank)]
        b = [rng.randint(-3, 3) for _ in range(rank)]
        a2 = [rng.randint(-3, 3) for _ in range(rank)]
        via = image(b)
        value = dot6(a, via)
        assert (value + dot6(b, image(a))) % 6 == 0  # alternating
        assert dot6([x + y for x, y in zip(a, a2)], via) \
            == (value + dot6(a2, via)) % 6  # bilinear in the first slot
        if trial < 10:
            va = iso.lattice.vector(a)
            vb = iso.lattice.vector(b)
            assert commutator_value(iso, va, vb) == value
            # definition route: sum of (3 + 2r) <s^r a, b> without the matrix
            direct = 0
            img = va
            for r in range(3):
                direct += (3 + 2 * r) * img.inner(vb)
                img = iso.apply(img)
            assert direct % 6 == value
