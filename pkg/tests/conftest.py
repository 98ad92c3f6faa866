from fractions import Fraction

import pytest

from superinertia.documents import parse_document
from superinertia.pipeline import Analysis
from superinertia.valued import BranchConfig, build_val_matrix, parse_laurent, point_labels


def roots_config(p, texts, exponents=None):
    return BranchConfig.from_roots(p, [parse_laurent(x) for x in texts], exponents)


def matrix_config(p, vp, texts, exponents=None):
    h = (len(texts) - 1) // 2
    matrix = build_val_matrix([parse_laurent(x) for x in texts], point_labels(h))
    return BranchConfig.from_matrix(p, Fraction(vp), matrix, exponents)


EXAMPLE_A = ["1", "0", "t^3", "t", "t + t^2"]
EXAMPLE_B = ["1", "0", "t^3", "-t", "t"]
P3_EXAMPLE = ["1", "0", "t^2"]


def laurent_doc(p, texts, exponents=None):
    h = (len(texts) - 1) // 2
    exponents = exponents or [1] * (h + 1)
    branch = [{"alpha": texts[0], "beta": "inf", "m": exponents[0]}]
    for i in range(1, h + 1):
        branch.append({"alpha": texts[2 * i - 1], "beta": texts[2 * i], "m": exponents[i]})
    return {"p": p, "vp": "0", "mode": "laurent", "branch": branch}


@pytest.fixture(scope="session")
def example_a():
    return Analysis(roots_config(2, EXAMPLE_A))


@pytest.fixture(scope="session")
def example_b():
    return Analysis(roots_config(2, EXAMPLE_B))


@pytest.fixture(scope="session")
def p3_example():
    return Analysis(roots_config(3, P3_EXAMPLE))


@pytest.fixture(scope="session")
def deep_matrix_example():
    """p = 2, vp = 1, s_1 = {0, t^8} below alpha0 = 1."""
    return Analysis(matrix_config(2, 1, ["1", "0", "t^8"]))


@pytest.fixture(scope="session")
def small_corpus():
    from superinertia.documents import corpus
    return [(key, Analysis(parse_document(doc))) for key, doc in corpus(90)]


def cluster_by_members(tree, members):
    return tree.node(frozenset(members))


def pytest_terminal_summary(terminalreporter):
    import sys
    module = sys.modules.get("test_acceptance")
    if module is None or not module.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(module.RESULTS):
        terminalreporter.write_line(module.RESULTS[n])
