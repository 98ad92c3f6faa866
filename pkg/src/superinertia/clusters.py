"""Clusters of finite branch points and their classification.

A cluster is a set of branch points cut out by a disc.  For an ultrametric
matrix these are exactly the sets ``{b : v(a, b) >= r}``, so every point
contributes the chain of clusters containing it by sorting its row.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property

from .errors import SplitDegeneracyViolation
from .valued import ValMatrix, alpha_index, beta_index, is_infinite


@dataclass(frozen=True)
class ClusterNode:
    id: int
    members: frozenset[int]
    depth: Fraction | None
    parent: int | None
    children: tuple[int, ...] = ()

    @property
    def size(self) -> int:
        return len(self.members)

    @property
    def is_singleton(self) -> bool:
        return len(self.members) == 1

    def __contains__(self, point: int) -> bool:
        return point in self.members


@dataclass(frozen=True)
class ClusterMetrics:
    join: ClusterNode
    depth: Fraction
    relative_depth: Fraction | None
    triple_term: Fraction


class ClusterTree:
    """Laminar family of clusters; node 0 is the root."""

    def __init__(self, matrix: ValMatrix, nodes: list[ClusterNode]):
        self.matrix = matrix
        self.nodes = nodes
        self._by_members = {n.members: n for n in nodes}

    @property
    def root(self) -> ClusterNode:
        return self.nodes[0]

    def __iter__(self):
        return iter(self.nodes)

    def __len__(self):
        return len(self.nodes)

    def node(self, members) -> ClusterNode:
        return self._by_members[frozenset(members)]

    def get(self, members) -> ClusterNode | None:
        return self._by_members.get(frozenset(members))

    def leaf(self, point: int) -> ClusterNode:
        return self._by_members[frozenset([point])]

    def parent(self, s: ClusterNode) -> ClusterNode | None:
        return None if s.parent is None else self.nodes[s.parent]

    def children(self, s: ClusterNode) -> list[ClusterNode]:
        return [self.nodes[c] for c in s.children]

    def ancestors(self, s: ClusterNode, include_self=True):
        node = s if include_self else self.parent(s)
        while node is not None:
            yield node
            node = self.parent(node)

    def non_singletons(self) -> list[ClusterNode]:
        return [n for n in self.nodes if not n.is_singleton]

    def join(self, s: ClusterNode, c: ClusterNode) -> ClusterNode:
        """Smallest cluster containing both."""
        for a in self.ancestors(s):
            if c.members <= a.members:
                return a
        raise AssertionError("root contains everything")

    def depth(self, s: ClusterNode) -> Fraction:
        if s.depth is None:
            raise ValueError(f"singleton {sorted(s.members)} has no depth")
        return s.depth

    def relative_depth(self, s: ClusterNode) -> Fraction:
        parent = self.parent(s)
        if parent is None:
            raise ValueError("the root cluster has no parent")
        return self.depth(s) - self.depth(parent)

    def triple_term(self, s: ClusterNode, c: ClusterNode) -> Fraction:
        return self.depth(s) + self.depth(c) - 2 * self.depth(self.join(s, c))

    def metrics(self, s: ClusterNode, c: ClusterNode) -> ClusterMetrics:
        j = self.join(s, c)
        rel = None if s.parent is None else self.relative_depth(s)
        return ClusterMetrics(j, self.depth(s), rel, self.triple_term(s, c))

    @cached_property
    def _even_split(self) -> dict[int, bool]:
        # f(c): c is even, or c is a non-singleton all of whose children satisfy f
        good: dict[int, bool] = {}
        for n in sorted(self.nodes, key=lambda n: n.size):
            good[n.id] = n.size % 2 == 0 or (
                not n.is_singleton and all(good[c] for c in n.children))
        return {n.id: (not n.is_singleton and all(good[c] for c in n.children))
                for n in self.nodes}

    def is_even_partitionable(self, s: ClusterNode) -> bool:
        """Whether ``s`` is a disjoint union of at least two even clusters."""
        return self._even_split[s.id]

    def is_ubereven(self, s: ClusterNode, tube) -> bool:
        if s.is_singleton:
            raise ValueError("singletons are never tested for being übereven")
        if not self.is_even_partitionable(s):
            return False
        return all(self.triple_term(s, c) > tube
                   for c in self.non_singletons() if not self.is_even_partitionable(c))

    def pair_cluster(self, i: int) -> ClusterNode:
        """Smallest cluster containing ``alpha_i`` and ``beta_i`` (``i >= 1``)."""
        if i < 1:
            raise ValueError("beta0 is at infinity, so index 0 has no pair cluster")
        return self.join(self.leaf(alpha_index(i)), self.leaf(beta_index(i)))

    def classify(self, tube, h: int) -> "Classification":
        return Classification.build(self, tube, h)


def build_cluster_tree(matrix: ValMatrix) -> ClusterTree:
    n = len(matrix)
    found: dict[frozenset, Fraction | None] = {}
    for a in range(n):
        found[frozenset([a])] = None
        levels = sorted({matrix.v(a, b) for b in range(n) if b != a}, reverse=True)
        for r in levels:
            members = frozenset(b for b in range(n) if b == a or matrix.v(a, b) >= r)
            if members not in found:
                found[members] = min(matrix.v(x, y) for x in members for y in members if x != y)
    if n == 1:
        found[frozenset([0])] = None
    # biggest first so the root gets id 0; ties broken deterministically
    ordered = sorted(found, key=lambda m: (-len(m), sorted(m)))
    ids = {m: k for k, m in enumerate(ordered)}
    parent_of: dict[frozenset, frozenset | None] = {}
    for m in ordered:
        supersets = [o for o in ordered if len(o) > len(m) and m < o]
        parent_of[m] = min(supersets, key=len) if supersets else None
    children: dict[frozenset, list[int]] = {m: [] for m in ordered}
    for m in ordered:
        if parent_of[m] is not None:
            children[parent_of[m]].append(ids[m])
    nodes = []
    for m in ordered:
        depth = found[m]
        if depth is not None and is_infinite(depth):
            raise ValueError("distinct points at valuation infinity")
        nodes.append(ClusterNode(ids[m], m, depth,
                                 None if parent_of[m] is None else ids[parent_of[m]],
                                 tuple(children[m])))
    return ClusterTree(matrix, nodes)


@dataclass(frozen=True)
class Classification:
    """Übereven flags and the sets of clusters carrying transvections."""

    tree: ClusterTree
    tube: Fraction
    ubereven: frozenset[int]
    principal: tuple[ClusterNode, ...]  # non-singletons that are übereven or not even-partitionable
    even_principal: tuple[ClusterNode, ...]
    pair_clusters: tuple[ClusterNode, ...] = field(default=())

    @classmethod
    def build(cls, tree: ClusterTree, tube, h: int) -> "Classification":
        uber = frozenset(s.id for s in tree.non_singletons() if tree.is_ubereven(s, tube))
        principal = tuple(s for s in tree.non_singletons()
                          if s.id in uber or not tree.is_even_partitionable(s))
        even = tuple(s for s in principal if s.size % 2 == 0)
        pairs = tuple(tree.pair_cluster(i) for i in range(1, h + 1))
        non_uber = {s.id for s in even if s.id not in uber}
        pair_ids = [s.id for s in pairs]
        if len(set(pair_ids)) != h or non_uber != set(pair_ids):
            raise SplitDegeneracyViolation(
                "even non-übereven clusters do not match the pair clusters: "
                f"{sorted(sorted(tree.nodes[k].members) for k in non_uber)} vs "
                f"{[sorted(s.members) for s in pairs]}")
        return cls(tree, Fraction(tube), uber, principal, even, pairs)

    def is_ubereven(self, s: ClusterNode) -> bool:
        return s.id in self.ubereven

    def pair_index(self, s: ClusterNode) -> int | None:
        for i, c in enumerate(self.pair_clusters, start=1):
            if c.id == s.id:
                return i
        return None
