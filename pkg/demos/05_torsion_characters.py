"""Mod-p characters of ramification points and the subtree identity."""

from superinertia.documents import generate_instance, parse_document
from superinertia.pipeline import Analysis

a = Analysis(parse_document(generate_instance(3, 3, 0, seed=4)))
t = a.torsion
print("index tree:", a.skeleton.index_tree_edges())

for i in range(a.config.h + 1):
    print(f"sigma_{i} = {t.sigma_char(i).values}, Abel-Jacobi image {t.aj_ramification(i).values}")

for i in range(1, a.config.h + 1):
    subtree = sorted(t.subtree_indices(i))
    print(f"index {i}: subtree {subtree}, weighted reduction {t.weighted_reduction(i).values}")

total = t.zero()
for i in range(a.config.h + 1):
    total = total + t.sigma_char(i)
print("all sigma characters sum to zero:", total.is_zero())
