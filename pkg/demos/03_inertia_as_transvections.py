"""The inertia action as a product of transvection powers, and its Gram matrix."""

from superinertia.pipeline import Analysis
from superinertia.valued import BranchConfig, parse_laurent


def show(matrix):
    return [[str(x) for x in row] for row in matrix]


roots = [parse_laurent(x) for x in ["1", "0", "t^3", "t", "t + t^2"]]
a = Analysis(BranchConfig.from_roots(2, roots))

print("one transvection power per even cluster:")
for d in a.plan:
    print(f"  cluster {sorted(d.cluster.members)} -> partner {sorted(d.partner.members)}: "
          f"exponent {d.exponent}, support {d.support}, übereven {d.ubereven}")

# The pairing from the case formula, and from summing the transvection pairings.
print("Gram (case formula):        ", show(a.gram_formula))
print("Gram (sum of transvections):", show(a.gram_transvections))

mono = a.monodromy
print("product of all factor matrices, toric part in character coordinates:")
print(mono.factored_character)
print("factors pairwise commute:", all(
    (x @ y == y @ x).all() for k, x in enumerate(mono.factors) for y in mono.factors[k + 1:]))

# p = 3: neighbouring sheets pair negatively.
b = Analysis(BranchConfig.from_roots(3, [parse_laurent(x) for x in ["1", "0", "t^2"]]))
print("p = 3 Gram:", show(b.gram_formula))
