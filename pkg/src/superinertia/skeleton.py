"""Disc model of the skeleton spanned by the branch points.

A point is a disc ``(anchor, radius)``: all ``z`` with ``v(z - z_anchor) >= radius``.
A larger disc (smaller radius) sits higher in the tree; ``Infinity`` is the
top.  Radius ``inf`` gives the leaf at a branch point.  Distances between
comparable discs are radius differences, and in general they go through the
join.  Axis ``i >= 1`` is the path between ``alpha_i`` and ``beta_i``; axis 0
runs from ``alpha_0`` up to infinity.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

from .clusters import Classification, ClusterNode, ClusterTree
from .errors import SplitDegeneracyViolation, VerdictFailure
from .valued import INF, BranchConfig, ValMatrix, alpha_index, beta_index, is_infinite


@dataclass(frozen=True)
class SkeletonPoint:
    anchor: int | None
    radius: object  # Fraction, or INF for a leaf; ignored at Infinity

    @property
    def is_infinity(self) -> bool:
        return self.anchor is None

    def __str__(self):
        if self.is_infinity:
            return "Infinity"
        return f"({self.anchor}, {self.radius})"


INFINITY = SkeletonPoint(None, INF)


class DiscAlgebra:
    """Join, order and distance on discs anchored at branch points."""

    def __init__(self, matrix: ValMatrix):
        self.matrix = matrix

    def v(self, a: int, b: int):
        return INF if a == b else self.matrix.v(a, b)

    def point(self, anchor: int, radius) -> SkeletonPoint:
        """Canonical form: the least anchor inside the disc."""
        best = min(b for b in range(len(self.matrix)) if self.v(anchor, b) >= radius)
        return SkeletonPoint(best, radius if is_infinite(radius) else Fraction(radius))

    def leaf(self, anchor: int) -> SkeletonPoint:
        return SkeletonPoint(anchor, INF)

    def join(self, x: SkeletonPoint, y: SkeletonPoint) -> SkeletonPoint:
        if x.is_infinity or y.is_infinity:
            return INFINITY
        return self.point(x.anchor, min(x.radius, y.radius, self.v(x.anchor, y.anchor)))

    def delta(self, x: SkeletonPoint, y: SkeletonPoint):
        if x.is_infinity or y.is_infinity:
            raise ValueError("the point at infinity is infinitely far from everything")
        j = self.join(x, y).radius
        return (x.radius - j) + (y.radius - j)

    def geq(self, x: SkeletonPoint, y: SkeletonPoint) -> bool:
        """Disc of ``x`` contains disc of ``y``."""
        if x.is_infinity:
            return True
        if y.is_infinity:
            return False
        return x.radius <= y.radius and self.v(x.anchor, y.anchor) >= x.radius

    def compare(self, x: SkeletonPoint, y: SkeletonPoint) -> str | None:
        up, down = self.geq(x, y), self.geq(y, x)
        if up and down:
            return "="
        if up:
            return ">"
        if down:
            return "<"
        return None

    def deepest(self, points) -> SkeletonPoint:
        """The point of largest radius (the lowest disc) among comparable-ish candidates."""
        finite = [q for q in points if not q.is_infinity]
        if not finite:
            return INFINITY
        return max(finite, key=lambda q: q.radius)


@dataclass(frozen=True)
class AxisProjection:
    closest: SkeletonPoint
    distance: object
    tube_distance: object
    in_tube: bool


@dataclass(frozen=True)
class DistinguishedPoints:
    index: int
    vbar: SkeletonPoint
    vhat: SkeletonPoint
    tilde_down: SkeletonPoint
    tilde_up: SkeletonPoint
    parent: int


class Skeleton:
    """Geometry of one branch configuration: axes, tubes, distinguished points."""

    def __init__(self, config: BranchConfig, tree: ClusterTree, classes: Classification):
        self.config = config
        self.tree = tree
        self.classes = classes
        self.discs = DiscAlgebra(config.matrix)
        self.tube = config.tube
        self.h = config.h

    # -- basic geometry -----------------------------------------------------

    def join(self, x, y):
        return self.discs.join(x, y)

    def delta(self, x, y):
        return self.discs.delta(x, y)

    def compare(self, x, y):
        return self.discs.compare(x, y)

    def point_of_cluster(self, s: ClusterNode) -> SkeletonPoint:
        if s.is_singleton:
            raise ValueError("a singleton cluster corresponds to a leaf, not a skeleton vertex")
        return self.discs.point(min(s.members), s.depth)

    def cluster_at(self, x: SkeletonPoint) -> ClusterNode | None:
        """The non-singleton cluster whose point is ``x``, if ``x`` is a vertex."""
        if x.is_infinity or is_infinite(x.radius):
            return None
        members = frozenset(b for b in range(len(self.config.matrix))
                            if self.discs.v(x.anchor, b) >= x.radius)
        s = self.tree.get(members)
        if s is None or s.is_singleton or s.depth != x.radius:
            return None
        return s

    def axis_projection(self, x: SkeletonPoint, i: int) -> AxisProjection:
        alpha = self.discs.leaf(alpha_index(i))
        if i == 0:
            closest = self.join(x, alpha)
        else:
            beta = self.discs.leaf(beta_index(i))
            closest = self.discs.deepest([self.join(alpha, beta), self.join(x, alpha),
                                          self.join(x, beta)])
        if x.is_infinity:
            dist = 0 if i == 0 else INF
        else:
            dist = self.delta(x, closest)
        tube_dist = max(Fraction(0), dist - self.tube) if not is_infinite(dist) else INF
        return AxisProjection(closest, dist, tube_dist, tube_dist == 0)

    def tube_distance(self, x: SkeletonPoint, i: int):
        return self.axis_projection(x, i).tube_distance

    def axis_distance(self, i: int, j: int):
        """Distance between axes ``i`` and ``j`` as subtrees."""
        if i == j:
            return Fraction(0)
        if j == 0:
            i, j = j, i
        start = self.vbar(j)
        near_i = self.axis_projection(start, i).closest
        near_j = self.axis_projection(near_i, j).closest
        return self.delta(near_i, near_j)

    # -- distinguished points -----------------------------------------------

    def vbar(self, i: int) -> SkeletonPoint:
        if i == 0:
            raise ValueError("axis 0 has no top vertex")
        return self.point_of_cluster(self.tree.pair_cluster(i))

    def vhat(self, i: int) -> SkeletonPoint:
        if i == 0:
            return INFINITY
        top = self.vbar(i)
        return self.discs.point(top.anchor, top.radius - self.tube)

    @cached_property
    def _hats(self) -> list[SkeletonPoint]:
        return [self.vhat(i) for i in range(self.h + 1)]

    def index_parent(self, i: int) -> int:
        if not 1 <= i <= self.h:
            raise ValueError(f"index {i} has no parent")
        hats = self._hats
        above = []
        for j in range(self.h + 1):
            if j == i:
                continue
            rel = self.compare(hats[j], hats[i])
            if rel == "=":
                raise SplitDegeneracyViolation(
                    f"tubes {i} and {j} share their top point {hats[i]}", pair=(i, j))
            if rel == ">":
                above.append(j)
        # the candidates form a chain; take its lowest member
        return min(above, key=lambda j: (-hats[j].radius if j else INF, j))

    @cached_property
    def parents(self) -> dict[int, int]:
        return {i: self.index_parent(i) for i in range(1, self.h + 1)}

    def tilde_up(self, i: int) -> SkeletonPoint:
        """Closest point of tube ``i'`` to tube ``i``."""
        start = self.vhat(i)
        proj = self.axis_projection(start, self.parents[i])
        if proj.distance <= self.tube:
            raise SplitDegeneracyViolation(
                f"top of tube {i} lies within the tube around axis {self.parents[i]}",
                pair=(i, self.parents[i]), margin=proj.distance - self.tube)
        xi = proj.closest
        top = self.join(start, xi)
        climb = xi.radius - top.radius
        if self.tube <= climb:
            return self.discs.point(xi.anchor, xi.radius - self.tube)
        return self.discs.point(start.anchor, top.radius + (self.tube - climb))

    def distinguished(self, i: int) -> DistinguishedPoints:
        hat = self.vhat(i)
        return DistinguishedPoints(i, self.vbar(i), hat, hat, self.tilde_up(i), self.parents[i])

    @cached_property
    def all_distinguished(self) -> dict[int, DistinguishedPoints]:
        return {i: self.distinguished(i) for i in range(1, self.h + 1)}

    def children_of_index(self, i: int) -> list[int]:
        return sorted(j for j, par in self.parents.items() if par == i)

    def index_tree_edges(self) -> list[tuple[int, int]]:
        return sorted((par, j) for j, par in self.parents.items())

    def ubereven_chain(self, i: int) -> list[ClusterNode]:
        pts = self.all_distinguished[i]
        s_i = self.tree.pair_cluster(i)
        low, high = pts.tilde_up.radius, pts.vhat.radius
        chain = [s_i]
        for c in self.tree.ancestors(s_i, include_self=False):
            if low < c.depth < high:
                if not self.classes.is_ubereven(c):
                    raise VerdictFailure(
                        f"cluster {sorted(c.members)} lies between tubes {i} and "
                        f"{pts.parent} but is not übereven")
                chain.append(c)
        return chain


def validate_split_degenerate(sk: Skeleton) -> None:
    """Gate: pairwise axis distances exceed twice the tube radius.

    The classification assertions already ran when ``sk.classes`` was built.
    Raises SplitDegeneracyViolation naming the first offending pair.
    """
    bound = 2 * sk.tube
    for i in range(sk.h + 1):
        for j in range(i + 1, sk.h + 1):
            dist = sk.axis_distance(i, j)
            if not dist > bound:
                raise SplitDegeneracyViolation(
                    f"axes {i} and {j} are {dist} apart, need more than {bound}",
                    pair=(i, j), margin=dist - bound)
    for i in range(1, sk.h + 1):
        sk.tilde_up(i)
