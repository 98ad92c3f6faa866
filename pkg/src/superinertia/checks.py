"""Invariant checks shared by reports, the corpus runner and the tests."""

from __future__ import annotations

from fractions import Fraction

from .inertia import Character, GammaBasis, character_of_v, zeta_shift


def leading_principal_minors(matrix) -> list[Fraction]:
    """Exact leading minors by fraction-valued elimination without pivoting.

    Elimination stops (remaining minors reported as 0) once a pivot vanishes,
    since the matrix is then certainly not positive definite.
    """
    a = [[Fraction(x) for x in row] for row in matrix]
    n = len(a)
    minors = []
    det = Fraction(1)
    for k in range(n):
        pivot = a[k][k]
        det *= pivot
        minors.append(det)
        if pivot == 0:
            minors.extend([Fraction(0)] * (n - k - 1))
            break
        for r in range(k + 1, n):
            factor = a[r][k] / pivot
            if factor:
                for c in range(k, n):
                    a[r][c] -= factor * a[k][c]
    return minors


def is_symmetric(matrix) -> bool:
    n = len(matrix)
    return all(matrix[r][c] == matrix[c][r] for r in range(n) for c in range(r))


def is_positive_definite(matrix) -> bool:
    return all(m > 0 for m in leading_principal_minors(matrix))


def diagonal_positive(matrix) -> bool:
    return all(matrix[k][k] > 0 for k in range(len(matrix)))


def zeta_has_order_p(basis: GammaBasis) -> bool:
    """The shift is the identity after ``p`` steps and not before, on every ``chi(v_i)``."""
    for i in range(1, basis.h + 1):
        chi = character_of_v(basis, i)
        x = chi
        for step in range(1, basis.p + 1):
            x = zeta_shift(x)
            if (x == chi) != (step == basis.p):
                return False
            if x != character_of_v(basis, i, step % basis.p):
                return False
    return True


def orbit_sums_vanish(basis: GammaBasis) -> bool:
    for i in range(1, basis.h + 1):
        total = Character.zero(basis)
        x = character_of_v(basis, i)
        for _ in range(basis.p):
            total = total + x
            x = zeta_shift(x)
        if not total.is_zero():
            return False
    return True


def first_difference(left, right):
    for r, (row_l, row_r) in enumerate(zip(left, right)):
        for c, (x, y) in enumerate(zip(row_l, row_r)):
            if x != y:
                return (r, c, x, y)
    if len(left) != len(right):
        return ("shape", len(left), len(right))
    return None

