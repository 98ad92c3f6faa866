from fractions import Fraction
from itertools import combinations

import pytest
from hypothesis import given, settings, strategies as st

from superinertia.errors import InputParseError, UltrametricViolation
from superinertia.valued import (INF, BranchConfig, LaurentPoly, ValMatrix, build_val_matrix,
                                 find_ultrametric_violation, format_laurent, format_value, genus,
                                 laurent_valuation, legendre_j_valuation, moebius_to_infinity,
                                 parse_laurent, parse_value, tube_radius, validate_ultrametric)

from conftest import EXAMPLE_A

L = parse_laurent

coefficients = st.fractions(min_value=-20, max_value=20, max_denominator=12)
polys = st.dictionaries(st.integers(-6, 8), coefficients, max_size=5).map(LaurentPoly)


def test_valuation_examples():
    assert laurent_valuation(L("t^3 + 2*t^5")) == 3
    assert laurent_valuation(LaurentPoly()) == INF
    assert laurent_valuation(L("1/2 - t")) == 0


def test_zero_coefficients_dropped():
    p = LaurentPoly({2: 0, 3: Fraction(1, 2)})
    assert p.terms == ((3, Fraction(1, 2)),)
    assert (L("t") - L("t")).terms == ()


@given(polys)
def test_print_parse_round_trip(f):
    assert parse_laurent(format_laurent(f)) == f


@given(polys)
def test_printing_is_canonical(f):
    text = format_laurent(f)
    assert format_laurent(parse_laurent(text)) == text


@pytest.mark.parametrize("text", ["t^", "2**t", "x", "1/0", "t^1.5", ""])
def test_parse_rejects_garbage(text):
    with pytest.raises(InputParseError):
        parse_laurent(text)


@given(polys, polys)
def test_valuation_of_product_adds(f, g):
    if f.is_zero() or g.is_zero():
        return
    assert laurent_valuation(f * g) == laurent_valuation(f) + laurent_valuation(g)


@given(polys.filter(lambda f: not f.is_zero()), st.integers(1, 8))
def test_truncated_inverse(f, extra):
    v = laurent_valuation(f)
    precision = extra - v
    assert (f * f.inverse(precision)).truncate(extra) == LaurentPoly.constant(1)


def test_value_text_round_trip():
    for x in [Fraction(3), Fraction(-7, 2), INF]:
        assert parse_value(format_value(x)) == x
    with pytest.raises(InputParseError):
        parse_value("abc")


def test_build_matrix_examples():
    m = build_val_matrix([L("0"), L("t^3")])
    assert m.v(0, 1) == 3
    assert build_val_matrix([L("t"), L("t + t^2")]).v(0, 1) == 2
    m = build_val_matrix([L(x) for x in ["0", "t^3", "t", "t + t^2"]])
    assert m.v(0, 2) == m.v(0, 3) == m.v(1, 2) == 1


def test_build_matrix_rejects_duplicates():
    with pytest.raises(InputParseError):
        build_val_matrix([L("t"), L("t"), L("0")])


def test_ultrametric_checks():
    validate_ultrametric(build_val_matrix([L(x) for x in EXAMPLE_A]))
    bad = ValMatrix.from_rows("abc", [["inf", "1", "2"], ["1", "inf", "3"], ["2", "3", "inf"]])
    with pytest.raises(UltrametricViolation) as info:
        validate_ultrametric(bad)
    assert info.value.triple == ("a", "b", "c")
    assert info.value.exit_code == 3
    ok = ValMatrix.from_rows("abc", [["inf", "1", "1"], ["1", "inf", "5"], ["1", "5", "inf"]])
    assert find_ultrametric_violation(ok) is None


@given(st.lists(polys, min_size=2, max_size=7, unique=True))
@settings(max_examples=60)
def test_generated_matrices_are_ultrametric(roots):
    assert find_ultrametric_violation(build_val_matrix(roots)) is None


def test_matrix_shape_validation():
    with pytest.raises(InputParseError):
        ValMatrix.from_rows("ab", [["inf", "1"], ["2", "inf"]])
    with pytest.raises(InputParseError):
        ValMatrix.from_rows("ab", [["0", "1"], ["1", "inf"]])


def _moebius_roots(roots, b):
    """Images under ``z -> 1/(z - z_b)`` as truncated Laurent series."""
    zb = roots[b]
    return [(z - zb).inverse(40) for k, z in enumerate(roots) if k != b]


def test_moebius_hand_example():
    m = build_val_matrix([L("0"), L("t"), L("t^-1")], ["a", "b", "c"])
    moved = moebius_to_infinity(m, "c")
    assert moved.labels == ("a", "b")
    assert moved.v(0, 1) == 3
    assert moved.infinity == "c"


def test_moebius_zero_shift_and_repeat():
    m = build_val_matrix([L("0"), L("1"), L("2"), L("3")], list("abcd"))
    moved = moebius_to_infinity(m, "d")
    assert all(moved.v(i, j) == m.v(i, j) for i, j in combinations(range(3), 2))
    with pytest.raises(ValueError):
        moebius_to_infinity(moved, "d")


@given(st.lists(polys, min_size=3, max_size=6, unique=True), st.data())
@settings(max_examples=60)
def test_moebius_matches_explicit_map(roots, data):
    b = data.draw(st.integers(0, len(roots) - 1))
    labels = [f"z{k}" for k in range(len(roots))]
    moved = moebius_to_infinity(build_val_matrix(roots, labels), labels[b])
    images = _moebius_roots(roots, b)
    # differences of the images have valuation well below the truncation point
    direct = build_val_matrix(images, [x for k, x in enumerate(labels) if k != b])
    assert moved.values == direct.values
    assert find_ultrametric_violation(moved) is None


@given(st.lists(polys, min_size=3, max_size=6, unique=True), st.data())
@settings(max_examples=60)
def test_moebius_is_involutive_on_valuations(roots, data):
    b = data.draw(st.integers(0, len(roots) - 1))
    labels = [f"z{k}" for k in range(len(roots))]
    original = build_val_matrix(roots, labels)
    original = ValMatrix(original.labels, original.values, "far")
    moved = moebius_to_infinity(original, labels[b])
    back = moebius_to_infinity(moved, "far")
    # z -> 1/(z - z_b) followed by w -> 1/w is a translation
    assert back.infinity == "far"
    for x in labels:
        for y in labels:
            assert back.v(back.index(x), back.index(y)) == original.v(original.index(x), original.index(y))


def test_genus():
    assert genus(2, 2) == 2
    assert genus(3, 1) == 2
    assert genus(2, 1) == 1
    with pytest.raises(ValueError):
        genus(4, 1)
    with pytest.raises(ValueError):
        genus(3, 0)


def test_legendre_j_valuation():
    assert legendre_j_valuation(L("1"), L("0"), L("t")) == -2
    assert legendre_j_valuation(L("1"), L("0"), L("1 + t")) == -2
    for n in range(1, 11):
        assert legendre_j_valuation(L("1"), L("0"), L(f"t^{n}")) == -2 * n
    with pytest.raises(ValueError):
        legendre_j_valuation(L("1"), L("0"), L("0"))


def test_legendre_against_lambda_form():
    # j = 256 (l^2 - l + 1)^3 / (l^2 (l - 1)^2) with l = t^n, written out directly
    for n in range(1, 6):
        lam = L(f"t^{n}")
        num = 256 * (lam * lam - lam + 1) ** 3
        den = lam * lam * (lam - 1) * (lam - 1)
        assert laurent_valuation(num) - laurent_valuation(den) == -2 * n


def test_branch_config_validation():
    roots = [L(x) for x in ["1", "0", "t"]]
    assert BranchConfig.from_roots(3, roots, (2, 1)).genus == 2
    with pytest.raises(InputParseError):
        BranchConfig.from_roots(3, roots, (1, 2))  # m1 > p - m1
    with pytest.raises(InputParseError):
        BranchConfig.from_roots(4, roots)
    with pytest.raises(InputParseError):
        BranchConfig.from_roots(2, roots[:2])
    with pytest.raises(InputParseError):
        BranchConfig(2, Fraction(1), (1, 1), build_val_matrix(roots), tuple(roots))


def test_tube_radius():
    assert tube_radius(2, 1) == 2
    assert tube_radius(3, Fraction(3, 2)) == Fraction(9, 4)
    assert tube_radius(5, 0) == 0
