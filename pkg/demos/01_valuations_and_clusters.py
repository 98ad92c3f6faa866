"""Branch points as Laurent polynomials, their valuation matrix and cluster tree."""

from superinertia.clusters import build_cluster_tree
from superinertia.valued import (build_val_matrix, format_value, moebius_to_infinity,
                                 parse_laurent, point_labels)

# Five finite branch points of y^2 = f(x); the sixth sits at infinity.
roots = [parse_laurent(x) for x in ["1", "0", "t^3", "t", "t + t^2"]]
labels = point_labels(2)
matrix = build_val_matrix(roots, labels)

print("pairwise valuations v(z_i - z_j):")
for label, row in zip(labels, matrix.rows_as_text()):
    print(f"  {label:>7} " + " ".join(f"{x:>4}" for x in row))

# Clusters are the sets cut out by discs; each has a depth.
tree = build_cluster_tree(matrix)
for s in tree.non_singletons():
    names = ", ".join(labels[k] for k in sorted(s.members))
    flags = []
    if tree.is_even_partitionable(s):
        flags.append("even-partitionable")
    if tree.is_ubereven(s, 0):
        flags.append("übereven")
    print(f"  {{{names}}} depth {format_value(s.depth)} {' '.join(flags)}")

# With a positive tube radius the four-point cluster is no longer übereven.
four = tree.node(frozenset({1, 2, 3, 4}))
print("übereven with tube radius 2:", tree.is_ubereven(four, 2))

# Moving beta1 to infinity changes valuations by v(i,b) + v(j,b).
moved = moebius_to_infinity(matrix, "beta1")
print("after sending beta1 to infinity:", moved.labels)
for row in moved.rows_as_text():
    print("  ", row)
