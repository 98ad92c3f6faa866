from fractions import Fraction

from hypothesis import given, strategies as st

from superinertia.oracle import OrientedPath, signed_intersection
from superinertia.skeleton import SkeletonPoint as P


def test_example_a_base_tree(example_a):
    oracle = example_a.oracle
    assert list(oracle.classes.values()) == [[1, 2]]
    tree, sheets = oracle.build_sheeted_tree(1)
    assert sheets == 2
    assert tree.top == P(0, 0)
    assert set(tree.nodes) == {P(0, 0), P(1, 1), P(1, 3), P(3, 2)}
    assert tree.up[P(1, 3)] == (P(1, 1), 2)
    assert tree.up[P(3, 2)] == (P(1, 1), 1)
    assert tree.up[P(1, 1)] == (P(0, 0), 1)


def test_singleton_class_is_a_segment(p3_example):
    tree, sheets = p3_example.oracle.build_sheeted_tree(1)
    assert sheets == 3
    assert len(tree.nodes) == 2 and len(tree.up) == 1


def test_example_b_classes(example_b):
    classes = example_b.oracle.classes
    assert sorted(classes.values()) == [[1], [2]]
    assert example_b.oracle.class_of(1)[0] == 2
    assert example_b.oracle.class_of(2)[0] == 0


def test_fundamental_path_lengths(example_a, p3_example):
    assert example_a.oracle.fundamental_path(1, 1).length == 6
    for n in range(3):
        assert p3_example.oracle.fundamental_path(1, n).length == 4


def test_path_visits_top_once(example_a):
    oracle = example_a.oracle
    tree, _ = oracle.build_sheeted_tree(1)
    path = oracle.fundamental_path(1, 1)
    directions = [d for _, d, _ in path.steps]
    # climbs then descends: exactly one turn, at the top
    turns = sum(1 for a, b in zip(directions, directions[1:]) if a != b)
    assert turns == 1
    (_, _, last_up), _, _ = path.steps[directions.index(-1) - 1]
    assert tree.up[last_up][0] == tree.top


def test_path_edges_are_contiguous(small_corpus):
    for key, a in small_corpus[::4]:
        oracle = a.oracle
        for i in range(1, a.config.h + 1):
            tree, _ = oracle.build_sheeted_tree(i)
            path = oracle.fundamental_path(i, 1)
            half = len(path.steps) // 2
            nodes = [node for (_, _, node), _, _ in path.steps[:half]]
            for lower, upper in zip(nodes, nodes[1:]):
                assert tree.up[lower][0] == upper, key
            assert tree.up[nodes[-1]][0] == tree.top


def test_signed_intersection_examples(example_a, example_b):
    oa = example_a.oracle
    p11 = oa.fundamental_path(1, 1)
    assert signed_intersection(p11, p11) == p11.length
    assert signed_intersection(p11, oa.fundamental_path(2, 1)) == 2
    ob = example_b.oracle
    assert signed_intersection(ob.fundamental_path(1, 1), ob.fundamental_path(2, 1)) == 0


def test_oracle_entries(example_a, p3_example):
    assert example_a.oracle.gram_matrix(example_a.basis) == [[6, 2], [2, 4]]
    assert p3_example.oracle.gram_entry(1, 1, 1, 2) == -2
    # p = 2: both sheets shared and traversed in opposite directions
    delta = example_a.skeleton.delta(example_a.skeleton.vhat(1), example_a.skeleton.tilde_up(1))
    assert example_a.oracle.gram_entry(1, 1, 1, 2) == -2 * delta


@given(st.data())
def test_intersection_bilinear_and_antisymmetric(data):
    keys = st.tuples(st.integers(0, 3), st.integers(0, 2), st.integers(0, 4))
    # an edge key fixes the edge, and with it its length
    step = st.tuples(keys, st.sampled_from([1, -1])).map(
        lambda s: (s[0], s[1], Fraction(s[0][0] + 1, s[0][2] + 1)))
    path = st.lists(step, max_size=6).map(lambda s: OrientedPath(tuple(s)))
    a, b, c = data.draw(path), data.draw(path), data.draw(path)
    assert signed_intersection(a + b, c) == signed_intersection(a, c) + signed_intersection(b, c)
    assert signed_intersection(a, b.reversed()) == -signed_intersection(a, b)
    assert signed_intersection(a, b) == signed_intersection(b, a)


def test_three_way_agreement_on_corpus(small_corpus):
    for key, a in small_corpus:
        assert a.gram_oracle == a.gram_formula == a.gram_transvections, key
        for k, (i, n) in enumerate(a.basis):
            assert a.oracle.fundamental_path(i, n).length == a.gram_formula[k][k], key
