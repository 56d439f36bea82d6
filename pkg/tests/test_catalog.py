"""Catalog constructions: root lattices, component isometries, the four
glued rank-24 lattices, and the six order-3 isometries."""

from fractions import Fraction

import pytest

from latorb.catalog import (
    COMPONENT_AUTO_NAMES,
    CatalogError,
    LATTICE_KEYS,
    SIGMA_KEYS,
    SIGMA_TO_LATTICE,
    StabilizationError,
    assemble_block_isometry,
    build_component_auto,
    build_niemeier,
    build_root_lattice,
    build_sigma,
    catalog_entries,
    construct_niemeier,
    glue_class_image,
    isometry_to_json,
    niemeier_bundle,
)
from latorb.exactmat import IntMatrix
from latorb.lattice import dual, is_even_unimodular, member
from latorb.roots import classify, orbit_count
from latorb.terncode import residue_perm

NIEMEIER_EXPECTED = {
    "A2_12": (729, 72, (("A", 2),) * 12),
    "D4_6": (64, 144, (("D", 4),) * 6),
    "A5_4_D4": (72, 144, (("A", 5),) * 4 + (("D", 4),)),
    "E6_4": (9, 288, (("E", 6),) * 4),
}

SIGMA_EXPECTED = {
    # key: (fixed rank, root orbits, fixed roots)
    "sigma1": (6, 24, 0),
    "sigma2": (0, 48, 0),
    "sigma3": (6, 60, 18),
    "sigma4": (6, 48, 0),
    "sigma5": (6, 48, 0),
    "sigma6": (6, 96, 0),
}


def test_root_lattice_determinants_and_classes():
    cases = {
        ("A", 2): (3, 3),
        ("A", 5): (6, 6),
        ("D", 4): (4, 4),
        ("E", 6): (3, 3),
    }
    for (family, rank), (det, n_classes) in cases.items():
        data = build_root_lattice(family, rank)
        assert data.lattice.determinant() == det
        assert len(data.glue) == n_classes
        assert all(c == 0 for c in data.glue[0].coords)
        star = dual(data.lattice)
        for ell, rep in data.glue.items():
            assert member(star, rep)
            assert member(data.lattice, rep) == (ell == 0)


def test_root_lattice_class_norms():
    a2 = build_root_lattice("A", 2)
    assert a2.glue[1].norm() == Fraction(2, 3)
    assert a2.glue[2].norm() == Fraction(2, 3)
    d4 = build_root_lattice("D", 4)
    assert [d4.glue[ell].norm() for ell in (1, 2, 3)] == [1, 1, 1]
    e6 = build_root_lattice("E", 6)
    assert e6.glue[1].norm() == Fraction(4, 3)
    a5 = build_root_lattice("A", 5)
    assert a5.glue[3].norm() == Fraction(3, 2)


def test_unsupported_root_lattice():
    with pytest.raises(CatalogError):
        build_root_lattice("D", 5)
    with pytest.raises(CatalogError):
        build_root_lattice("F", 4)


def test_component_isometry_orders_and_fixed_ranks():
    expected = {
        "cycle_A2": 0,
        "rotation_D4": 0,
        "triality_D4": 2,
        "coord_cycle_D4": 2,
        "coord_cycle_A5": 1,
        "reflection_product_E6": 0,
    }
    assert set(COMPONENT_AUTO_NAMES) == set(expected)
    for name, fixed in expected.items():
        auto = build_component_auto(name)
        assert auto.order == 3
        assert auto.fixed_rank == fixed


def test_rotation_and_triality_cycle_dual_classes():
    d4 = build_root_lattice("D", 4)
    for name in ("rotation_D4", "triality_D4"):
        auto = build_component_auto(name)
        assert [glue_class_image(auto, d4, ell) for ell in (1, 2, 3)] == [2, 3, 1]


def test_coordinate_cycles_fix_dual_classes():
    cases = [
        ("cycle_A2", ("A", 2)),
        ("coord_cycle_D4", ("D", 4)),
        ("coord_cycle_A5", ("A", 5)),
        ("reflection_product_E6", ("E", 6)),
    ]
    for name, (family, rank) in cases:
        data = build_root_lattice(family, rank)
        auto = build_component_auto(name)
        for ell in data.glue:
            assert glue_class_image(auto, data, ell) == ell


@pytest.mark.parametrize("key", LATTICE_KEYS)
def test_niemeier_lattices(key):
    index, root_count, classified = NIEMEIER_EXPECTED[key]
    bundle = niemeier_bundle(key)
    assert bundle.extension.index == index
    assert len(bundle.glue_group) == index
    assert bundle.lattice.rank == 24
    assert is_even_unimodular(bundle.lattice) == (True, True)
    assert bundle.root_system.count == root_count
    assert classify(bundle.root_system) == classified
    assert build_niemeier(key) == bundle.lattice


def test_unknown_keys_rejected():
    with pytest.raises(CatalogError):
        build_niemeier("E8_3")
    with pytest.raises(CatalogError):
        build_sigma("sigma7")


@pytest.mark.parametrize("key", SIGMA_KEYS)
def test_sigma_isometries(key):
    fixed, orbits, fixed_roots = SIGMA_EXPECTED[key]
    sigma = build_sigma(key)
    bundle = niemeier_bundle(SIGMA_TO_LATTICE[key])
    assert sigma.lattice == bundle.lattice
    assert sigma.order == 3
    assert sigma.fixed_rank == fixed
    assert orbit_count(bundle.root_system, sigma) == (orbits, fixed_roots)


def test_block_shuffle_follows_code_permutation():
    # The first isometry must shuffle the twelve planes exactly the way the
    # digit permutation shuffles code positions.
    bundle = niemeier_bundle("A2_12")
    sigma = build_sigma("sigma1")
    perm = residue_perm()
    incl = bundle.extension.base_in_lattice.inclusion
    back = bundle.extension.basis_in_base
    for p in range(12):
        base_root = incl.entries[2 * p]  # first simple root of block p
        image = sigma.apply_coords(base_root)
        q_coords = [
            sum(image[k] * back.entries[k][j] for k in range(24))
            for j in range(24)
        ]
        support = {j // 2 for j, c in enumerate(q_coords) if c != 0}
        assert support == {perm(p)}


def test_bad_block_assignment_is_rejected():
    bundle = niemeier_bundle("D4_6")
    rot = build_component_auto("rotation_D4").matrix
    eye = IntMatrix.identity(4)
    assignments = [(0, rot)] + [(i, eye) for i in range(1, 6)]
    with pytest.raises(StabilizationError, match="outside the lattice"):
        assemble_block_isometry(bundle, assignments, 3, "lopsided")


@pytest.mark.parametrize("key", LATTICE_KEYS)
def test_corrupted_generator_rejected(key):
    with pytest.raises(CatalogError):
        construct_niemeier(key, corrupt_generator=True)


def test_catalog_listing():
    entries = catalog_entries()
    assert [e.key for e in entries] == list(LATTICE_KEYS) + list(SIGMA_KEYS)
    kinds = {e.key: e.kind for e in entries}
    assert all(kinds[k] == "lattice" for k in LATTICE_KEYS)
    assert all(kinds[k] == "isometry" for k in SIGMA_KEYS)
    assert all(e.description for e in entries)
    assert SIGMA_TO_LATTICE == {
        "sigma1": "A2_12",
        "sigma2": "D4_6",
        "sigma3": "D4_6",
        "sigma4": "D4_6",
        "sigma5": "A5_4_D4",
        "sigma6": "E6_4",
    }


def test_isometry_serialization():
    sigma = build_sigma("sigma6")
    blob = isometry_to_json(sigma)
    assert blob["name"] == "sigma6"
    assert blob["lattice"] == "E6_4"
    assert blob["order"] == 3
    assert blob["fixed_rank"] == 6
    assert len(blob["matrix"]) == 24
    assert all(len(row) == 24 and all(isinstance(e, int) for e in row)
               for row in blob["matrix"])
