"""Recomputing the Gram matrix by overlapping paths on sheeted trees."""

from superinertia.oracle import signed_intersection
from superinertia.pipeline import Analysis
from superinertia.valued import BranchConfig, parse_laurent


def show(matrix):
    return [[str(x) for x in row] for row in matrix]


a = Analysis(BranchConfig.from_roots(2, [parse_laurent(x) for x in ["1", "0", "t^3", "t", "t + t^2"]]))
oracle = a.oracle

for key, members in oracle.classes.items():
    tree, sheets = oracle.build_sheeted_tree(members[0])
    print(f"class under index {key[0]} with top {tree.top}: indices {members}, {sheets} sheets")
    for node, (parent, length) in tree.up.items():
        print(f"  edge {node} -> {parent}, length {length}")

p11, p21 = oracle.fundamental_path(1, 1), oracle.fundamental_path(2, 1)
print("path lengths:", p11.length, p21.length)
print("overlap of the two paths:", signed_intersection(p11, p21))
print("overlap with one path reversed:", signed_intersection(p11, p21.reversed()))
print("oracle Gram:", show(oracle.gram_matrix(a.basis)))
print("agrees with the formula:", oracle.gram_matrix(a.basis) == a.gram_formula)
