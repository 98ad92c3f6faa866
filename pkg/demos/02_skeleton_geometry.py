"""Discs as points of a metric tree: axes, tubes and the index tree."""

from superinertia.pipeline import Analysis
from superinertia.valued import BranchConfig, build_val_matrix, parse_laurent, point_labels

# Residue characteristic 2 with v(2) = 1: tubes of radius 2 around every axis.
roots = [parse_laurent(x) for x in ["1", "0", "t^8", "t^-4", "t^-4 + t^5"]]
matrix = build_val_matrix(roots, point_labels(2))
a = Analysis(BranchConfig.from_matrix(2, 1, matrix))
sk = a.skeleton

print("tube radius:", sk.tube)
for i in range(1, sk.h + 1):
    d = sk.distinguished(i)
    print(f"axis {i}: top vertex {d.vbar}, top of tube {d.vhat}, "
          f"parent index {d.parent}, nearest tube point above {d.tilde_up}")

print("distances between axes:")
for i in range(sk.h + 1):
    for j in range(i + 1, sk.h + 1):
        print(f"  axes {i} and {j}: {sk.axis_distance(i, j)}")

print("index tree edges:", sk.index_tree_edges())

# The closest point of an axis to an arbitrary disc.
x = sk.discs.point(1, 3)
proj = sk.axis_projection(x, 0)
print(f"disc {x} projects to {proj.closest} on axis 0 at distance {proj.distance}")
