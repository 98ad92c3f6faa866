"""One-call construction of every object derived from a branch configuration."""

from __future__ import annotations

from functools import cached_property

from .checks import (diagonal_positive, first_difference, is_positive_definite, is_symmetric,
                     orbit_sums_vanish, zeta_has_order_p)
from .clusters import build_cluster_tree
from .errors import VerdictFailure
from .inertia import InertiaEngine, factors_commute, monodromy_matrix
from .oracle import PairingOracle
from .skeleton import Skeleton, validate_split_degenerate
from .torsion import TorsionData
from .valued import BranchConfig, validate_ultrametric


class Analysis:
    """Validated analysis of a configuration.

    Construction raises UltrametricViolation or SplitDegeneracyViolation;
    cross-check failures surface as VerdictFailure from ``verify``.
    """

    def __init__(self, config: BranchConfig):
        self.config = config
        validate_ultrametric(config.matrix)
        self.tree = build_cluster_tree(config.matrix)
        self.classes = self.tree.classify(config.tube, config.h)
        self.skeleton = Skeleton(config, self.tree, self.classes)
        validate_split_degenerate(self.skeleton)
        self.engine = InertiaEngine(self.skeleton)
        self.plan = self.engine.plan  # selecting partners validates the exponents
        self.oracle = PairingOracle(self.skeleton)
        self.torsion = TorsionData(self.skeleton)

    @property
    def basis(self):
        return self.engine.basis

    @cached_property
    def gram_formula(self):
        return self.engine.gram_matrix("formula")

    @cached_property
    def gram_transvections(self):
        return self.engine.gram_matrix("transvections")

    @cached_property
    def gram_oracle(self):
        return self.oracle.gram_matrix(self.basis)

    @cached_property
    def monodromy(self):
        return monodromy_matrix(self.engine, laurent_mode=self.config.mode == "laurent")

    def gram(self):
        """The Gram matrix, after insisting that both closed-form routes agree."""
        diff = first_difference(self.gram_formula, self.gram_transvections)
        if diff is not None:
            raise VerdictFailure(f"formula and transvection Gram matrices differ at {diff}")
        return self.gram_formula

    def verdicts(self, with_oracle: bool = True) -> dict[str, bool]:
        gram = self.gram_formula
        out = {
            "gram_formula_equals_transvections": self.gram_formula == self.gram_transvections,
            "gram_symmetric": is_symmetric(gram),
            "gram_positive_definite": is_positive_definite(gram),
            "gram_diagonal_positive": diagonal_positive(gram),
            "stated_condition_agrees": not self.engine.stated_condition_mismatches(),
            "chain_sums_match": all(a == b for a, b in self.engine.chain_sums().values()),
            "zeta_order_p": zeta_has_order_p(self.basis),
            "orbit_sums_vanish": orbit_sums_vanish(self.basis),
            "norm_relation": all(_norm_ok(d) for d in self.engine.plan),
        }
        if with_oracle:
            out["gram_oracle_agrees"] = self.gram_oracle == gram
        try:
            mono = self.monodromy
            out["monodromy_block_matches_product"] = True
            out["transvection_factors_commute"] = factors_commute(mono.factors)
        except VerdictFailure:
            out["monodromy_block_matches_product"] = False
        out["torsion_identities"] = self._torsion_ok()
        return out

    def containment_support_differences(self) -> list[dict]:
        """Clusters where the containment-only support rule would give another answer."""
        out = []
        for d in self.plan:
            literal = self.engine.support_by_containment(d.cluster)
            if literal != d.support:
                out.append({"cluster": sorted(d.cluster.members), "support": list(d.support),
                            "containment_rule": list(literal)})
        return out

    def _torsion_ok(self) -> bool:
        try:
            for i in range(1, self.config.h + 1):
                self.torsion.weighted_reduction(i)
        except VerdictFailure:
            return False
        total = self.torsion.zero()
        for i in range(self.config.h + 1):
            total = total + self.torsion.sigma_char(i)
        return total.is_zero()

    def verify(self, with_oracle: bool = True) -> dict[str, bool]:
        results = self.verdicts(with_oracle)
        failed = [k for k, ok in results.items() if not ok]
        if failed:
            raise VerdictFailure(f"failed checks: {', '.join(failed)}")
        return results


def _norm_ok(datum) -> bool:
    total = datum.characters[0]
    for chi in datum.characters[1:]:
        total = total + chi
    return total.is_zero()
