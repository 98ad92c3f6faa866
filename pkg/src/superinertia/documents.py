"""JSON input documents and the random instance generator.

Document shape::

    {"p": 2, "vp": "0", "mode": "laurent",
     "branch": [{"alpha": "1", "beta": "inf", "m": 1},
                {"alpha": "0", "beta": "t^3", "m": 1}, ...],
     "matrix": [["inf", "0", ...], ...]}        # matrix mode only

In Laurent mode ``alpha``/``beta`` are Laurent polynomials.  In matrix mode
they are free-form point names and the matrix rows follow the order
alpha0, alpha1, beta1, ..., alphah, betah.  ``beta`` of the first entry is
always ``"inf"``.  Rationals are strings.
"""

from __future__ import annotations

import json
import random
from fractions import Fraction

from .errors import InputParseError, SplitDegeneracyViolation
from .valued import (BranchConfig, LaurentPoly, ValMatrix, as_rational, build_val_matrix,
                     format_laurent, format_value, parse_laurent, parse_value, point_labels,
                     tube_radius)


def parse_document(doc) -> BranchConfig:
    if isinstance(doc, (str, bytes)):
        try:
            doc = json.loads(doc)
        except json.JSONDecodeError as exc:
            raise InputParseError(f"invalid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise InputParseError("document must be a JSON object")
    try:
        p = doc["p"]
        mode = doc.get("mode", "laurent")
        branch = doc["branch"]
    except KeyError as exc:
        raise InputParseError(f"missing field {exc}") from exc
    if not isinstance(p, int) or isinstance(p, bool):
        raise InputParseError("p must be an integer")
    vp = as_rational(str(doc.get("vp", "0")))
    if not isinstance(branch, list) or len(branch) < 2:
        raise InputParseError("branch must list alpha0/beta0 and at least one further pair")
    try:
        exponents = tuple(int(entry["m"]) for entry in branch)
        alphas = [entry["alpha"] for entry in branch]
        betas = [entry["beta"] for entry in branch]
    except (KeyError, TypeError, ValueError) as exc:
        raise InputParseError(f"malformed branch entry: {exc}") from exc
    if str(betas[0]).strip().lower() != "inf":
        raise InputParseError('beta of the first branch entry must be "inf"')
    if mode == "laurent":
        if "matrix" in doc and doc["matrix"] is not None:
            raise InputParseError("Laurent mode takes roots, not a matrix")
        roots = [parse_laurent(str(alphas[0]))]
        for a, b in zip(alphas[1:], betas[1:]):
            roots += [parse_laurent(str(a)), parse_laurent(str(b))]
        if vp != 0:
            raise InputParseError("Laurent mode requires vp = 0")
        return BranchConfig.from_roots(p, roots, exponents)
    if mode == "matrix":
        rows = doc.get("matrix")
        if not isinstance(rows, list):
            raise InputParseError("matrix mode needs a matrix")
        h = len(branch) - 1
        names = [str(alphas[0])]
        for a, b in zip(alphas[1:], betas[1:]):
            names += [str(a), str(b)]
        if len(set(names)) != len(names):
            names = list(point_labels(h))
        try:
            values = tuple(tuple(parse_value(str(x)) for x in row) for row in rows)
        except (TypeError, ValueError) as exc:
            raise InputParseError(f"bad matrix entry: {exc}") from exc
        matrix = ValMatrix(tuple(names), values)
        return BranchConfig.from_matrix(p, vp, matrix, exponents)
    raise InputParseError(f"unknown mode {mode!r}")


def document_of(config: BranchConfig) -> dict:
    h = config.h
    doc: dict = {"p": config.p, "vp": format_value(config.vp), "mode": config.mode}
    if config.mode == "laurent":
        names = [format_laurent(r) for r in config.roots]
    else:
        names = list(config.matrix.labels)
        doc["matrix"] = config.matrix.rows_as_text()
    branch = [{"alpha": names[0], "beta": "inf", "m": config.exponents[0]}]
    for i in range(1, h + 1):
        branch.append({"alpha": names[2 * i - 1], "beta": names[2 * i], "m": config.exponents[i]})
    doc["branch"] = branch
    return doc


def dump_document(doc: dict) -> str:
    return json.dumps(doc, sort_keys=True, indent=2)


# ---------------------------------------------------------------------------
# Random instances

class _Builder:
    """Places pairs so that every axis hangs off its parent axis by a long enough edge."""

    def __init__(self, rng: random.Random, h: int, min_edge: int, max_edge: int):
        self.rng = rng
        self.h = h
        self.min_edge = min_edge
        self.max_edge = max_edge
        self.next_unit = 0
        self.alpha: dict[int, LaurentPoly] = {}
        self.beta: dict[int, LaurentPoly] = {}
        self.depth: dict[int, int] = {}

    def unit(self) -> int:
        # distinct powers of two: residues are subset sums, so they never collide
        u = 2 ** self.next_unit
        self.next_unit += 1
        return u

    def edge(self) -> int:
        return self.rng.randint(self.min_edge, self.max_edge)

    def place_group(self, center: LaurentPoly, radius: int, items: list[int], children) -> None:
        if len(items) == 1:
            self.place_pair(items[0], center, radius, children)
            return
        # a branching vertex away from every axis
        groups = self.split(items)
        for group in groups:
            sub = center + LaurentPoly.monomial(radius, self.unit())
            self.place_group(sub, radius + self.edge(), group, children)

    def split(self, items: list[int]) -> list[list[int]]:
        k = self.rng.randint(2, len(items))
        shuffled = items[:]
        self.rng.shuffle(shuffled)
        groups = [[x] for x in shuffled[:k]]
        for x in shuffled[k:]:
            self.rng.choice(groups).append(x)
        return groups

    def place_pair(self, i: int, center: LaurentPoly, radius: int, children) -> None:
        self.alpha[i] = center
        self.beta[i] = center + LaurentPoly.monomial(radius, self.unit())
        self.depth[i] = radius
        self.attach_children(i, children)

    def attach_children(self, k: int, children) -> None:
        kids = children.get(k, [])
        if not kids:
            return
        for group in self.bundle(kids):
            if k == 0:
                anchor, level = self.alpha[0], self.rng.randint(-2, 3)
            else:
                anchor = self.rng.choice([self.alpha[k], self.beta[k]])
                level = self.depth[k] + self.rng.randint(0, 2)
            start = anchor + LaurentPoly.monomial(level, self.unit())
            self.place_group(start, level + self.edge(), group, children)

    def bundle(self, kids: list[int]) -> list[list[int]]:
        if len(kids) == 1 or self.rng.random() < 0.4:
            return [[k] for k in kids]
        return self.split(kids) if self.rng.random() < 0.5 else [kids[:]]


def _random_layout(rng: random.Random, h: int, min_edge: int, max_edge: int) -> list[LaurentPoly]:
    children: dict[int, list[int]] = {}
    for i in range(1, h + 1):
        children.setdefault(rng.randrange(i), []).append(i)
    b = _Builder(rng, h, min_edge, max_edge)
    b.alpha[0] = LaurentPoly.constant(rng.randint(-3, 3))
    b.attach_children(0, children)
    roots = [b.alpha[0]]
    for i in range(1, h + 1):
        roots += [b.alpha[i], b.beta[i]]
    return roots


def generate_instance(p: int, h: int, vp=0, seed: int = 0) -> dict:
    """Deterministic random split degenerate instance as an input document.

    Edge lengths are first drawn from a range that includes short edges;
    if such a draw violates the tube margin, later draws fall back to edges
    longer than twice the tube radius, which always pass.
    """
    from .pipeline import Analysis

    vp = as_rational(vp)
    rng = random.Random(f"{p}:{h}:{vp}:{seed}")
    exponents = (rng.randint(1, p - 1),) + tuple(rng.randint(1, p // 2) for _ in range(h))
    safe = int(2 * tube_radius(p, vp)) + 1
    for attempt in range(8):
        low, high = (1, safe + 3) if attempt < 4 else (safe, safe + 3)
        roots = _random_layout(rng, h, low, high)
        if vp == 0:
            config = BranchConfig.from_roots(p, roots, exponents)
        else:
            matrix = build_val_matrix(roots, point_labels(h))
            config = BranchConfig.from_matrix(p, vp, matrix, exponents)
        try:
            Analysis(config)
        except SplitDegeneracyViolation:
            continue
        return document_of(config)
    raise RuntimeError("instance generator failed to meet the tube margin")  # pragma: no cover


def corpus(count: int, primes=(2, 3, 5), heights=range(1, 6), vps=("0", "1", "3/2")):
    """``count`` documents cycling through the parameter grid, seed = position."""
    grid = [(p, h, Fraction(v)) for p in primes for h in heights for v in vps]
    for k in range(count):
        p, h, vp = grid[k % len(grid)]
        yield (p, h, vp, k), generate_instance(p, h, vp, k)

