"""Tests for the ternary code layer and its index permutations."""

import random

from latorb.terncode import (
    IndexPermutation,
    TernaryCode,
    compose_perm,
    golay_code,
    golay_generators,
    identity_perm,
    is_self_dual,
    perm_from_label_map,
    residue_perm,
    shift_perm,
    span_dim,
    stable_under,
    swap_perm,
    weight_distribution,
)


def test_generator_words():
    words = golay_generators()
    assert len(words) == 12
    assert words[0] == (1,) * 12
    assert words[1] == (1, 2, 2, 1, 2, 2, 2, 1, 1, 1, 2, 1)
    # One shift: the doubled positions move from {0,1,3,4,5,9} to
    # {10,0,2,3,4,8} in digit labels.
    assert words[2] == (1, 2, 1, 2, 2, 2, 1, 1, 1, 2, 1, 2)


def test_code_dimension_and_size():
    c = golay_code()
    assert span_dim(c) == 6
    assert len(c.words()) == 729


def test_weight_distribution():
    assert weight_distribution(golay_code()) == {0: 1, 6: 264, 9: 440, 12: 24}
    zero = TernaryCode.from_generators([])
    assert weight_distribution(zero) == {0: 1}
    repetition = TernaryCode.from_generators([[1] * 12])
    assert weight_distribution(repetition) == {0: 1, 12: 2}


def test_six_word_basis_spans_the_code():
    words = golay_generators()
    subset = [words[0]] + [words[1 + i] for i in (1, 3, 4, 5, 9)]
    assert TernaryCode.from_generators(subset) == golay_code()


def test_stability():
    c = golay_code()
    assert stable_under(c, shift_perm())
    assert stable_under(c, swap_perm())
    assert stable_under(c, residue_perm())
    transposition = perm_from_label_map({"0": "1", "1": "0"})
    assert not stable_under(c, transposition)


def test_residue_perm_cycle_structure():
    sigma = residue_perm()
    assert sigma.cycle_string() == "(∞)(4)(7)(012)(35X)(689)"
    assert sigma.order() == 3
    assert identity_perm().order() == 1
    assert shift_perm().order() == 11
    assert swap_perm().order() == 2


def test_composition_and_inverse():
    nu = shift_perm()
    assert compose_perm(nu, nu.inverse()) == identity_perm()
    word = golay_generators()[1]
    assert nu.inverse().apply_to_word(nu.apply_to_word(word)) == word
    # Composition acts right-to-left.
    delta = swap_perm()
    x = 3 + 1  # position of digit 3
    assert compose_perm(nu.inverse(), delta)(x) == nu.inverse()(delta(x))


def test_self_duality():
    assert is_self_dual(golay_code())
    assert not is_self_dual(TernaryCode.from_generators([[1] * 12]))


def test_dimension_invariant_under_permutation():
    c = golay_code()
    rng = random.Random(20240814)
    for _ in range(50):
        images = list(range(12))
        rng.shuffle(images)
        perm = IndexPermutation(tuple(images))
        moved = TernaryCode.from_generators(
            [perm.apply_to_word(row) for row in c.basis])
        assert moved.dim == 6


def test_membership():
    c = golay_code()
    words = golay_generators()
    assert c.contains(words[1])
    assert c.contains([(a + b) % 3 for a, b in zip(words[1], words[2])])
    assert not c.contains([1] + [0] * 11)
