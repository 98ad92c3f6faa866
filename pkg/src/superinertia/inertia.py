"""Characters of the abelianized Schottky group and the inertia action.

The lattice side is the free abelian group on generators ``gamma(i, m)``,
``1 <= i <= h``, ``m`` mod ``p``, subject to ``sum_m gamma(i, m) = 0`` for
each ``i``; the basis keeps ``m = 1..p-1``.  A character is stored by its
values on that basis.  The toric side is spanned by ``zeta^n v_i``;
``chi(zeta^n v_i)`` is ``-1`` at ``gamma(i, -n)`` and ``+1`` at ``gamma(i, 1-n)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

import numpy as np

from .clusters import ClusterNode
from .errors import SplitDegeneracyViolation, VerdictFailure
from .skeleton import Skeleton


class GammaBasis:
    """Ordered basis ``(i, n)`` with ``1 <= i <= h`` and ``1 <= n <= p-1``."""

    def __init__(self, p: int, h: int):
        self.p = p
        self.h = h
        self.elements = [(i, n) for i in range(1, h + 1) for n in range(1, p)]
        self._pos = {e: k for k, e in enumerate(self.elements)}

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def position(self, i: int, n: int) -> int:
        return self._pos[(i, n % self.p)]

    def unit(self, i: int, m: int) -> tuple[int, ...]:
        """Lattice vector of ``gamma(i, m)``, rewriting ``m = 0`` by the relation."""
        vec = [0] * len(self)
        if m % self.p == 0:
            for n in range(1, self.p):
                vec[self.position(i, n)] = -1
        else:
            vec[self.position(i, m)] = 1
        return tuple(vec)

    def shift_lattice(self, vec) -> tuple[int, ...]:
        """Image of a lattice vector under ``gamma(i, m) -> gamma(i, m+1)``."""
        out = [0] * len(self)
        for (i, n), c in zip(self.elements, vec):
            if c:
                for k, x in enumerate(self.unit(i, n + 1)):
                    out[k] += c * x
        return tuple(out)


@dataclass(frozen=True)
class Character:
    basis: GammaBasis
    values: tuple[int, ...]

    def __call__(self, i: int, m: int) -> int:
        """Value at ``gamma(i, m)`` for any integer ``m``."""
        p = self.basis.p
        if m % p == 0:
            return -sum(self.values[self.basis.position(i, n)] for n in range(1, p))
        return self.values[self.basis.position(i, m)]

    def pair(self, lattice) -> int:
        return sum(a * b for a, b in zip(self.values, lattice))

    def __add__(self, other: "Character") -> "Character":
        return Character(self.basis, tuple(a + b for a, b in zip(self.values, other.values)))

    def __neg__(self):
        return Character(self.basis, tuple(-a for a in self.values))

    def __sub__(self, other):
        return self + (-other)

    def scale(self, k: int) -> "Character":
        return Character(self.basis, tuple(k * a for a in self.values))

    def is_zero(self) -> bool:
        return not any(self.values)

    @classmethod
    def zero(cls, basis: GammaBasis) -> "Character":
        return cls(basis, (0,) * len(basis))


def zeta_shift(x: Character) -> Character:
    """The automorphism of order ``p``: ``(zeta chi)(gamma(i, m)) = chi(gamma(i, m+1))``."""
    b = x.basis
    return Character(b, tuple(x(i, n + 1) for i, n in b))


def character_of_v(basis: GammaBasis, i: int, n: int = 0) -> Character:
    """``chi`` of ``zeta^n v_i``."""
    vals = []
    for j, m in basis:
        if j != i:
            vals.append(0)
        else:
            vals.append((1 if (m - 1 + n) % basis.p == 0 else 0)
                        - (1 if (m + n) % basis.p == 0 else 0))
    return Character(basis, tuple(vals))


def character_of_support(basis: GammaBasis, support, n: int = 0) -> Character:
    out = Character.zero(basis)
    for i in support:
        out = out + character_of_v(basis, i, n)
    return out


# ---------------------------------------------------------------------------
# Transvection data

@dataclass(frozen=True)
class TransvectionDatum:
    cluster: ClusterNode
    partner: ClusterNode  # the cluster s' selected for s
    exponent: Fraction
    support: tuple[int, ...]
    characters: tuple[Character, ...]  # chi(zeta^n w_s), n = 0..p-1
    ubereven: bool


class InertiaEngine:
    def __init__(self, skeleton: Skeleton):
        self.sk = skeleton
        self.tree = skeleton.tree
        self.classes = skeleton.classes
        self.p = skeleton.config.p
        self.h = skeleton.h
        self.tube = skeleton.tube
        self.basis = GammaBasis(self.p, self.h)

    @property
    def genus(self) -> int:
        return len(self.basis)

    def _uber(self, s: ClusterNode) -> int:
        return 1 if self.classes.is_ubereven(s) else 0

    # -- choosing s' --------------------------------------------------------

    def select_partner_by_minimum(self, s: ClusterNode) -> ClusterNode:
        tree, tube = self.tree, self.tube
        u_s = self._uber(s)
        scored = []
        for c in self.classes.principal:
            if tree.depth(s) - tree.depth(tree.join(s, c)) > (1 - u_s) * tube:
                value = tree.triple_term(s, c) - (2 - u_s - self._uber(c)) * tube
                scored.append((value, c))
        if not scored:
            raise VerdictFailure(f"no admissible partner for cluster {sorted(s.members)}")
        best = min(v for v, _ in scored)
        winners = [c for v, c in scored if v == best]
        if len(winners) != 1:
            raise VerdictFailure(
                f"partner of {sorted(s.members)} is not unique: "
                f"{[sorted(c.members) for c in winners]} tie at {best}")
        return winners[0]

    def _home_index(self, s: ClusterNode) -> int:
        """Index whose tube the walk from ``s`` starts at."""
        i = self.classes.pair_index(s)
        if i is not None:
            return i
        w = self.sk.point_of_cluster(s)
        inside = [l for l in range(1, self.h + 1)
                  if self.tree.pair_cluster(l).members <= s.members]
        return min(inside, key=lambda l: (self.sk.tube_distance(w, l), l))

    def select_partner_by_walk(self, s: ClusterNode) -> ClusterNode:
        sk = self.sk
        i = self._home_index(s)
        pts = sk.all_distinguished[i]
        w = sk.point_of_cluster(s)
        low = sk.join(pts.tilde_down, w)
        if sk.compare(pts.tilde_up, low) != ">":
            raise VerdictFailure(f"cluster {sorted(s.members)} is not below the top of its tube class")
        between = [c for c in self.tree.ancestors(s, include_self=False)
                   if pts.tilde_up.radius < c.depth < low.radius]
        if between:
            return max(between, key=lambda c: c.depth)
        target = sk.axis_projection(w, pts.parent).closest
        c = sk.cluster_at(target)
        if c is None:
            raise VerdictFailure(f"projection {target} of {sorted(s.members)} is not a cluster vertex")
        return c

    def select_partner(self, s: ClusterNode) -> ClusterNode:
        by_min = self.select_partner_by_minimum(s)
        by_walk = self.select_partner_by_walk(s)
        if by_min.id != by_walk.id:
            raise VerdictFailure(
                f"partner routes disagree for {sorted(s.members)}: "
                f"{sorted(by_min.members)} vs {sorted(by_walk.members)}")
        return by_min

    def exponent(self, s: ClusterNode, partner: ClusterNode | None = None) -> Fraction:
        partner = partner or self.select_partner(s)
        u = self._uber(s) + self._uber(partner)
        m = self.tree.triple_term(s, partner) - (2 - u) * self.tube
        if m <= 0:
            raise SplitDegeneracyViolation(
                f"non-positive transvection exponent {m} at cluster {sorted(s.members)}")
        return m

    @cached_property
    def _chains(self) -> dict[int, list[ClusterNode]]:
        return {i: self.sk.ubereven_chain(i) for i in range(1, self.h + 1)}

    def support(self, s: ClusterNode) -> tuple[int, ...]:
        """Indices ``i`` whose chain of clusters up to the next tube passes through ``s``.

        Cross-checked against the depth form of the rule; see ``support_by_depths``.
        """
        out = tuple(i for i, chain in self._chains.items() if any(c.id == s.id for c in chain))
        if not out:
            raise VerdictFailure(f"empty support for cluster {sorted(s.members)}")
        by_depths = self.support_by_depths(s)
        if out != by_depths:
            raise VerdictFailure(
                f"support of {sorted(s.members)}: chains give {out}, depths give {by_depths}")
        return out

    def support_by_depths(self, s: ClusterNode) -> tuple[int, ...]:
        """``s_i`` inside ``s``, and no other ``s_l`` inside ``s`` within a tube radius above it."""
        tree = self.tree
        pairs = {i: tree.pair_cluster(i) for i in range(1, self.h + 1)}
        inside = {i: c for i, c in pairs.items() if c.members <= s.members}

        def under(i, l):
            return tree.depth(inside[l]) - tree.depth(tree.join(inside[l], inside[i])) <= self.tube

        return tuple(i for i in inside if not any(l != i and under(i, l) for l in inside))

    def support_by_containment(self, s: ClusterNode) -> tuple[int, ...]:
        """Containment-only rule: drop ``i`` when ``s_i < s_l <= s`` for some ``l``.

        Agrees with ``support`` whenever ``vp = 0``; with positive ``vp`` it can
        keep an index whose tube hangs inside another tube below ``s``.
        """
        pairs = {i: self.tree.pair_cluster(i).members for i in range(1, self.h + 1)}
        inside = {i: m for i, m in pairs.items() if m <= s.members}
        return tuple(i for i, m in inside.items()
                     if not any(l != i and m < other for l, other in inside.items()))

    @cached_property
    def plan(self) -> list[TransvectionDatum]:
        data = []
        for s in self.classes.even_principal:
            partner = self.select_partner(s)
            support = self.support(s)
            chars = tuple(character_of_support(self.basis, support, n) for n in range(self.p))
            data.append(TransvectionDatum(s, partner, self.exponent(s, partner), support,
                                          chars, bool(self._uber(s))))
        return data

    def datum_for(self, s: ClusterNode) -> TransvectionDatum:
        for d in self.plan:
            if d.cluster.id == s.id:
                return d
        raise KeyError(sorted(s.members))

    # -- Gram matrix ----------------------------------------------------------

    def _epsilon(self) -> int:
        return 2 if self.p == 2 else 1

    def _shape(self, value, m: int, n: int):
        diff = (n - m) % self.p
        if diff == 0:
            return 2 * value
        if diff in (1, self.p - 1):
            return -self._epsilon() * value
        return Fraction(0)

    def gram_entry_formula(self, i: int, m: int, j: int, n: int, refined: bool = True) -> Fraction:
        sk = self.sk
        a, b = sk.all_distinguished[i], sk.all_distinguished[j]
        if a.parent != b.parent:
            return Fraction(0)
        if refined and a.tilde_up != b.tilde_up:
            return Fraction(0)
        meet = sk.join(a.tilde_down, b.tilde_down)
        dist = sk.tube_distance(meet, a.parent)
        if dist == 0:
            return Fraction(0)
        return Fraction(self._shape(dist, m, n))

    def gram_entry_transvections(self, i: int, m: int, j: int, n: int) -> Fraction:
        total = Fraction(0)
        for d in self.plan:
            total += d.exponent * sum(chi(i, m) * chi(j, n) for chi in d.characters)
        return total

    def gram_entry(self, i, m, j, n, mode: str = "formula") -> Fraction:
        if mode == "formula":
            return self.gram_entry_formula(i, m, j, n)
        if mode == "transvections":
            return self.gram_entry_transvections(i, m, j, n)
        raise ValueError(f"unknown mode {mode!r}")

    def gram_matrix(self, mode: str = "formula") -> list[list[Fraction]]:
        if mode == "transvections":
            # sum of outer products, one per character in the plan
            g = len(self.basis)
            out = [[Fraction(0)] * g for _ in range(g)]
            for d in self.plan:
                for chi in d.characters:
                    nz = [(k, x) for k, x in enumerate(chi.values) if x]
                    for r, x in nz:
                        for c, y in nz:
                            out[r][c] += d.exponent * x * y
            return out
        return [[self.gram_entry(i, m, j, n, mode) for (j, n) in self.basis]
                for (i, m) in self.basis]

    def stated_condition_mismatches(self) -> list[tuple]:
        """Entries where dropping the equal-top requirement would change the value."""
        bad = []
        for i, m in self.basis:
            for j, n in self.basis:
                if (self.gram_entry_formula(i, m, j, n, refined=True)
                        != self.gram_entry_formula(i, m, j, n, refined=False)):
                    bad.append((i, m, j, n))
        return bad

    def chain_sums(self) -> dict[int, tuple[Fraction, Fraction]]:
        """Per index: (tube distance from the top of tube i to tube i', sum of exponents on its chain)."""
        out = {}
        for i in range(1, self.h + 1):
            pts = self.sk.all_distinguished[i]
            dist = self.sk.tube_distance(pts.tilde_down, pts.parent)
            total = sum((self.datum_for(c).exponent for c in self.sk.ubereven_chain(i)), Fraction(0))
            out[i] = (dist, total)
        return out


# ---------------------------------------------------------------------------
# Tate module vectors and transvections

@dataclass(frozen=True)
class TateVector:
    """Toric coordinates on ``zeta^n v_i`` (``n <= p-2``) plus a lattice part on the basis."""

    toric: tuple[int, ...]
    lattice: tuple[int, ...]

    def is_toric(self) -> bool:
        return not any(self.lattice)

    def __add__(self, other):
        return TateVector(tuple(a + b for a, b in zip(self.toric, other.toric)),
                          tuple(a + b for a, b in zip(self.lattice, other.lattice)))


class TateModule:
    def __init__(self, basis: GammaBasis):
        self.basis = basis
        self.p = basis.p
        self.h = basis.h
        self.g = len(basis)

    def toric_position(self, i: int, n: int) -> int:
        return (i - 1) * (self.p - 1) + n

    def toric_element(self, i: int, n: int = 0) -> TateVector:
        """``zeta^n v_i``, reduced by ``zeta^(p-1) v_i = -sum_{k<p-1} zeta^k v_i``."""
        vec = [0] * self.g
        n %= self.p
        if n == self.p - 1:
            for k in range(self.p - 1):
                vec[self.toric_position(i, k)] = -1
        else:
            vec[self.toric_position(i, n)] = 1
        return TateVector(tuple(vec), (0,) * self.g)

    def toric_of_support(self, support, n: int = 0) -> TateVector:
        out = TateVector((0,) * self.g, (0,) * self.g)
        for i in support:
            out = out + self.toric_element(i, n)
        return out

    def lattice_element(self, lattice) -> TateVector:
        return TateVector((0,) * self.g, tuple(lattice))

    def character(self, w: TateVector) -> Character:
        """``chi_w`` for a toric vector ``w``."""
        out = Character.zero(self.basis)
        for i in range(1, self.h + 1):
            for n in range(self.p - 1):
                c = w.toric[self.toric_position(i, n)]
                if c:
                    out = out + character_of_v(self.basis, i, n).scale(c)
        return out

    def weil_pairing(self, v: TateVector, w: TateVector) -> int:
        if not w.is_toric():
            raise ValueError("pairing is only implemented against toric vectors")
        return self.character(w).pair(v.lattice)

    def apply_transvection(self, w: TateVector, v: TateVector, times: int = 1) -> TateVector:
        """``t_w^times(v) = v + times * e(v, w) * w`` (``e(w, w) = 0`` makes powers linear)."""
        e = self.weil_pairing(v, w)
        if e == 0 or times == 0:
            return v
        return TateVector(tuple(a + times * e * b for a, b in zip(v.toric, w.toric)), v.lattice)

    def standard_basis(self) -> list[TateVector]:
        zero = (0,) * self.g
        out = []
        for k in range(self.g):
            out.append(TateVector(tuple(int(x == k) for x in range(self.g)), zero))
        for k in range(self.g):
            out.append(TateVector(zero, tuple(int(x == k) for x in range(self.g))))
        return out

    def transvection_matrix(self, w: TateVector) -> np.ndarray:
        cols = [self.apply_transvection(w, e) for e in self.standard_basis()]
        return np.array([[*c.toric, *c.lattice] for c in cols], dtype=np.int64).T

    def toric_to_character_coordinates(self) -> np.ndarray:
        """Columns: values of ``chi(zeta^n v_i)`` on the lattice basis."""
        cols = [self.character(self.toric_element(i, n)).values
                for i in range(1, self.h + 1) for n in range(self.p - 1)]
        return np.array(cols, dtype=np.int64).T


@dataclass
class MonodromyResult:
    gram: list[list[Fraction]]
    block: list[list[Fraction]]          # [[I, gram], [0, I]] in character coordinates
    factored: np.ndarray | None          # product of transvection powers, native coordinates
    factored_character: np.ndarray | None  # same, toric part in character coordinates
    factors: list[np.ndarray]


def block_form(gram) -> list[list[Fraction]]:
    g = len(gram)
    top = [[Fraction(int(r == c)) for c in range(g)] + list(gram[r]) for r in range(g)]
    bottom = [[Fraction(0)] * g + [Fraction(int(r == c)) for c in range(g)] for r in range(g)]
    return top + bottom


def monodromy_matrix(engine: InertiaEngine, laurent_mode: bool = False) -> MonodromyResult:
    gram = engine.gram_matrix("transvections")
    block = block_form(gram)
    integral = all(d.exponent.denominator == 1 for d in engine.plan)
    if not integral:
        if laurent_mode:
            raise VerdictFailure("Laurent-mode exponents must be integers")
        return MonodromyResult(gram, block, None, None, [])
    tate = TateModule(engine.basis)
    g = tate.g
    factors = []
    product = np.eye(2 * g, dtype=np.int64)
    for d in engine.plan:
        for n in range(engine.p):
            w = tate.toric_of_support(d.support, n)
            step = np.linalg.matrix_power(tate.transvection_matrix(w), int(d.exponent))
            factors.append(step)
            product = product @ step
    to_char = tate.toric_to_character_coordinates()
    converted = product.copy()
    converted[:g, g:] = to_char @ product[:g, g:]
    expected = np.array([[int(x) for x in row] for row in block], dtype=np.int64)
    if not np.array_equal(converted, expected):
        diff = np.argwhere(converted != expected)[0]
        raise VerdictFailure(f"factored product differs from block form at entry {tuple(diff)}")
    return MonodromyResult(gram, block, product, converted, factors)


def factors_commute(factors) -> bool:
    return all(np.array_equal(a @ b, b @ a)
               for k, a in enumerate(factors) for b in factors[k + 1:])
