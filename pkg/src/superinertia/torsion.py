"""Mod-p characters attached to ramification points.

``mu_p`` is written additively: a character is a vector of residues mod ``p``
on the lattice basis, with the value at ``gamma(i, 0)`` fixed by the relation.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import VerdictFailure
from .inertia import GammaBasis, character_of_v
from .skeleton import Skeleton


@dataclass(frozen=True)
class FpCharacter:
    p: int
    values: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(v % self.p for v in self.values))

    def __add__(self, other: "FpCharacter") -> "FpCharacter":
        return FpCharacter(self.p, tuple(a + b for a, b in zip(self.values, other.values)))

    def scale(self, k: int) -> "FpCharacter":
        return FpCharacter(self.p, tuple(k * a for a in self.values))

    def is_zero(self) -> bool:
        return not any(self.values)


class TorsionData:
    def __init__(self, skeleton: Skeleton):
        self.sk = skeleton
        self.p = skeleton.config.p
        self.h = skeleton.h
        self.exponents = skeleton.config.exponents
        self.basis = GammaBasis(self.p, self.h)

    def zero(self) -> FpCharacter:
        return FpCharacter(self.p, (0,) * len(self.basis))

    def sigma_char(self, i: int) -> FpCharacter:
        """Exponent sum of the generator attached to index ``i``."""
        parents = self.sk.parents
        vals = []
        for l, _ in self.basis:
            vals.append((1 if l == i else 0) - (1 if parents[l] == i else 0))
        return FpCharacter(self.p, tuple(vals))

    def aj_ramification(self, i: int) -> FpCharacter:
        inverse = pow(self.exponents[i], -1, self.p)
        return self.sigma_char(i).scale(inverse)

    def subtree_indices(self, i: int) -> frozenset[int]:
        out = {i}
        frontier = [i]
        while frontier:
            k = frontier.pop()
            for child in self.sk.children_of_index(k):
                if child not in out:
                    out.add(child)
                    frontier.append(child)
        by_depth = self.depth_condition_indices(i)
        if out != by_depth:
            raise VerdictFailure(f"subtree of {i} is {sorted(out)} but the depth test gives {sorted(by_depth)}")
        return frozenset(out)

    def depth_condition_indices(self, i: int) -> frozenset[int]:
        tree = self.sk.tree
        s_i = tree.pair_cluster(i)
        return frozenset(
            j for j in range(1, self.h + 1)
            if tree.depth(s_i) - tree.depth(tree.join(s_i, tree.pair_cluster(j))) <= self.sk.tube)

    def weighted_reduction(self, i: int) -> FpCharacter:
        """``sum_n n * chi(zeta^n v_i)`` mod ``p``; must equal the sum of sigma over the subtree."""
        total = self.zero()
        for n in range(1, self.p):
            total = total + FpCharacter(self.p, character_of_v(self.basis, i, n).values).scale(n)
        expected = self.zero()
        for j in self.subtree_indices(i):
            expected = expected + self.sigma_char(j)
        if total != expected:
            raise VerdictFailure(f"weighted reduction at {i} is {total.values}, expected {expected.values}")
        return total

    def divisor_image(self, pairs) -> FpCharacter:
        total = self.zero()
        for j, c in pairs:
            total = total + self.aj_ramification(j).scale(c)
        return total
