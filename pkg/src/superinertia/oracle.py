"""Independent Gram matrix by counting signed overlaps of fundamental paths.

Indices sharing a parent index and a tube top form a class.  For each class
the tops of their tubes and all pairwise joins span a rooted base tree below
the shared top.  The union of fundamental domains is modelled as ``p``
copies (sheets) of that tree glued at the top.  The path attached to
``gamma(i, n)`` climbs sheet ``n`` from the copy of the tube top of ``i`` and
descends sheet ``n - 1`` back to it.  Entries are signed overlap lengths;
no case analysis is involved.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

from .errors import VerdictFailure
from .skeleton import Skeleton, SkeletonPoint


@dataclass(frozen=True)
class BaseTree:
    top: SkeletonPoint
    nodes: tuple[SkeletonPoint, ...]
    up: dict  # node -> (parent node, edge length)


@dataclass(frozen=True)
class OrientedPath:
    # each step: ((class key, sheet, lower node of the edge), direction, length)
    steps: tuple[tuple[tuple, int, Fraction], ...]

    @property
    def length(self) -> Fraction:
        return sum((length for _, _, length in self.steps), Fraction(0))

    def reversed(self) -> "OrientedPath":
        return OrientedPath(tuple((key, -d, length) for key, d, length in reversed(self.steps)))

    def __add__(self, other: "OrientedPath") -> "OrientedPath":
        return OrientedPath(self.steps + other.steps)


def signed_intersection(first: OrientedPath, second: OrientedPath) -> Fraction:
    """Common length, counted positively where both run the same way."""
    seen: dict = {}
    for key, d, length in first.steps:
        seen.setdefault(key, []).append((d, length))
    total = Fraction(0)
    for key, d, length in second.steps:
        for d1, _ in seen.get(key, ()):
            total += d1 * d * length
    return total


class PairingOracle:
    def __init__(self, skeleton: Skeleton):
        self.sk = skeleton
        self.p = skeleton.config.p

    @cached_property
    def classes(self) -> dict[tuple, list[int]]:
        out: dict[tuple, list[int]] = {}
        for i, pts in self.sk.all_distinguished.items():
            out.setdefault((pts.parent, pts.tilde_up), []).append(i)
        return out

    def class_of(self, i: int) -> tuple:
        pts = self.sk.all_distinguished[i]
        return (pts.parent, pts.tilde_up)

    @cached_property
    def base_trees(self) -> dict[tuple, BaseTree]:
        return {key: self.build_base_tree(key) for key in self.classes}

    def build_base_tree(self, key: tuple) -> BaseTree:
        sk = self.sk
        top = key[1]
        lows = [sk.all_distinguished[i].tilde_down for i in self.classes[key]]
        nodes = {top, *lows}
        for a in lows:
            for b in lows:
                nodes.add(sk.join(a, b))
        for x in nodes:
            if sk.compare(top, x) not in (">", "="):
                raise VerdictFailure(f"node {x} is not below the class top {top}")
        up = {}
        for x in nodes:
            if x == top:
                continue
            above = [y for y in nodes if sk.compare(y, x) == ">"]
            parent = max(above, key=lambda y: y.radius)
            up[x] = (parent, x.radius - parent.radius)
        return BaseTree(top, tuple(sorted(nodes, key=lambda q: (-q.radius, q.anchor))), up)

    def build_sheeted_tree(self, i: int) -> tuple[BaseTree, int]:
        """Base tree of the class of ``i`` and its number of sheets."""
        return self.base_trees[self.class_of(i)], self.p

    def _climb(self, key, start: SkeletonPoint):
        tree = self.base_trees[key]
        node = start
        while node != tree.top:
            parent, length = tree.up[node]
            yield node, length
            node = parent

    def fundamental_path(self, i: int, n: int) -> OrientedPath:
        key = self.class_of(i)
        start = self.sk.all_distinguished[i].tilde_down
        edges = list(self._climb(key, start))
        rise = tuple(((key, n % self.p, node), 1, length) for node, length in edges)
        fall = tuple(((key, (n - 1) % self.p, node), -1, length) for node, length in reversed(edges))
        return OrientedPath(rise + fall)

    def gram_entry(self, i: int, m: int, j: int, n: int) -> Fraction:
        return signed_intersection(self.fundamental_path(i, m), self.fundamental_path(j, n))

    def gram_matrix(self, basis) -> list[list[Fraction]]:
        paths = {(i, m): self.fundamental_path(i, m) for i, m in basis}
        return [[signed_intersection(paths[a], paths[b]) for b in basis] for a in basis]
