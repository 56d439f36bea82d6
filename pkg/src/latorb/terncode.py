"""Ternary linear codes on the 12-point index set {inf, 0..10} and the
permutations used to build order-3 lattice isometries from them."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from math import lcm
from typing import Iterable, Sequence

LENGTH = 12

# Storage order of the index set: infinity first, then 0..10.
LABELS = ("∞", "0", "1", "2", "3", "4", "5", "6", "7", "8", "9", "X")

# Support of the doubled entries of the base generator word.
THETA = (0, 1, 3, 4, 5, 9)


def label_position(label: str) -> int:
    return LABELS.index(label)


@dataclass(frozen=True)
class IndexPermutation:
    """Bijection of the 12 positions; images[p] is the image of position p."""

    images: tuple[int, ...]

    def __post_init__(self) -> None:
        if sorted(self.images) != list(range(LENGTH)):
            raise ValueError("not a bijection of the 12 positions")

    def __call__(self, p: int) -> int:
        return self.images[p]

    def apply_to_word(self, word: Sequence[int]) -> tuple[int, ...]:
        # Moves the entry at position p to position images[p].
        out = [0] * LENGTH
        for p, e in enumerate(word):
            out[self.images[p]] = e % 3
        return tuple(out)

    def order(self) -> int:
        return lcm(*(len(c) for c in self._cycles()))

    def inverse(self) -> "IndexPermutation":
        inv = [0] * LENGTH
        for p, q in enumerate(self.images):
            inv[q] = p
        return IndexPermutation(tuple(inv))

    def _cycles(self) -> list[list[int]]:
        seen = [False] * LENGTH
        cycles = []
        for start in range(LENGTH):
            if seen[start]:
                continue
            cyc = [start]
            seen[start] = True
            cur = self.images[start]
            while cur != start:
                seen[cur] = True
                cyc.append(cur)
                cur = self.images[cur]
            cycles.append(cyc)
        return sorted(cycles, key=lambda c: (len(c), c[0]))

    def cycle_string(self) -> str:
        return "".join("(" + "".join(LABELS[p] for p in c) + ")"
                       for c in self._cycles())


def identity_perm() -> IndexPermutation:
    return IndexPermutation(tuple(range(LENGTH)))


def compose_perm(a: IndexPermutation, b: IndexPermutation) -> IndexPermutation:
    """Composition acting as a after b: x -> a(b(x))."""
    return IndexPermutation(tuple(a.images[b.images[p]] for p in range(LENGTH)))


def perm_from_label_map(mapping: dict[str, str]) -> IndexPermutation:
    """Permutation from a partial label map; unlisted labels stay fixed."""
    images = list(range(LENGTH))
    for src, dst in mapping.items():
        images[label_position(src)] = label_position(dst)
    return IndexPermutation(tuple(images))


def shift_perm() -> IndexPermutation:
    """The 11-cycle fixing infinity and sending each digit i to i - 1 mod 11."""
    mapping = {"0": "X"}
    for i in range(1, 11):
        mapping[LABELS[i + 1]] = LABELS[i]
    return perm_from_label_map(mapping)


def swap_perm() -> IndexPermutation:
    """The involution (2 X)(3 4)(5 9)(6 7) fixing infinity, 0, 1, and 8."""
    mapping = {}
    for a, b in (("2", "X"), ("3", "4"), ("5", "9"), ("6", "7")):
        mapping[a] = b
        mapping[b] = a
    return perm_from_label_map(mapping)


def residue_perm() -> IndexPermutation:
    """The order-3 permutation obtained as shift-inverse composed with swap."""
    return compose_perm(shift_perm().inverse(), swap_perm())


@dataclass(frozen=True)
class TernaryCode:
    """A linear code over the field with three elements, stored canonically.

    The basis is the reduced row-echelon form mod 3 of whatever generators
    were supplied, so two codes are equal iff their stored bases are equal.
    """

    length: int
    basis: tuple[tuple[int, ...], ...]

    @classmethod
    def from_generators(cls, rows: Iterable[Sequence[int]],
                        length: int = LENGTH) -> "TernaryCode":
        mat = [[e % 3 for e in row] for row in rows]
        for row in mat:
            if len(row) != length:
                raise ValueError("generator length mismatch")
        pivot_row = 0
        for col in range(length):
            src = next((r for r in range(pivot_row, len(mat)) if mat[r][col]),
                       None)
            if src is None:
                continue
            mat[pivot_row], mat[src] = mat[src], mat[pivot_row]
            inv = {1: 1, 2: 2}[mat[pivot_row][col]]
            mat[pivot_row] = [(inv * e) % 3 for e in mat[pivot_row]]
            for r in range(len(mat)):
                if r != pivot_row and mat[r][col]:
                    f = mat[r][col]
                    mat[r] = [(e - f * p) % 3
                              for e, p in zip(mat[r], mat[pivot_row])]
            pivot_row += 1
        basis = tuple(tuple(row) for row in mat[:pivot_row])
        return cls(length, basis)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def words(self) -> list[tuple[int, ...]]:
        out = []
        for coeffs in product(range(3), repeat=self.dim):
            word = [0] * self.length
            for c, row in zip(coeffs, self.basis):
                if c:
                    word = [(w + c * e) % 3 for w, e in zip(word, row)]
            out.append(tuple(word))
        return out

    def contains(self, word: Sequence[int]) -> bool:
        residual = [e % 3 for e in word]
        col_of = {next(j for j, e in enumerate(row) if e): row
                  for row in self.basis}
        for col in sorted(col_of):
            if residual[col]:
                f = residual[col]
                residual = [(e - f * p) % 3 for e, p in zip(residual, col_of[col])]
        return not any(residual)

    def to_json(self) -> dict:
        return {
            "order": list(LABELS[:self.length]),
            "generators": ["".join(str(e) for e in row) for row in self.basis],
        }


def golay_generators() -> list[tuple[int, ...]]:
    """The 12 generator words, one per index: all-ones for infinity, the
    doubled-on-theta word for 0, and its shifted images for 1..10."""
    w_inf = tuple([1] * LENGTH)
    w0 = tuple(1 if p == 0 else (2 if p - 1 in THETA else 1)
               for p in range(LENGTH))
    nu = shift_perm()
    words = [w_inf, w0]
    current = w0
    for _ in range(10):
        current = nu.apply_to_word(current)
        words.append(current)
    return words


def golay_code() -> TernaryCode:
    return TernaryCode.from_generators(golay_generators())


def span_dim(c: TernaryCode) -> int:
    return c.dim


def weight_distribution(c: TernaryCode) -> dict[int, int]:
    dist: dict[int, int] = {}
    for word in c.words():
        w = sum(1 for e in word if e)
        dist[w] = dist.get(w, 0) + 1
    return dist


def stable_under(c: TernaryCode, perm: IndexPermutation) -> bool:
    return all(c.contains(perm.apply_to_word(row)) for row in c.basis)


def is_self_dual(c: TernaryCode) -> bool:
    if 2 * c.dim != c.length:
        return False
    return all(sum(a * b for a, b in zip(u, v)) % 3 == 0
               for u in c.basis for v in c.basis)
