from fractions import Fraction

import pytest
import sympy
from hypothesis import given, strategies as st

from gcoherent.linalg import (Inconsistent, NotNilpotent, NotUnipotent, RingMatrix,
                              determinant, exp_apply, mat_exp_nilpotent,
                              mat_log_unipotent, rank, solve_linear)
from gcoherent.ring import Poly, Var

from oracles import poly_to_sympy

Z = Poly.monomial(Var("zeta", "a"))
W = Poly.monomial(Var("zeta", "b"))


@st.composite
def strictly_upper(draw, n=4):
    rows = []
    for i in range(n):
        row = []
        for j in range(n):
            if j > i:
                c = Fraction(draw(st.integers(-3, 3)), draw(st.integers(1, 3)))
                row.append(Poly(c) + draw(st.integers(-1, 1)) * Z)
            else:
                row.append(Poly())
        rows.append(row)
    return RingMatrix(rows)


@given(strictly_upper())
def test_log_inverts_exp(m):
    assert mat_log_unipotent(mat_exp_nilpotent(m)) == m


@given(strictly_upper(), strictly_upper())
def test_exp_of_negative_is_inverse(a, b):
    assert mat_exp_nilpotent(a).matmul(mat_exp_nilpotent(-a)) == RingMatrix.identity(4)


@given(strictly_upper())
def test_exp_apply_matches_full_exponential(m):
    v = [Poly(1), Z, Poly(0), W]
    assert exp_apply(m, v) == mat_exp_nilpotent(m).apply(v)


def test_nilpotency_order():
    m = RingMatrix([[0, 1, 0], [0, 0, 1], [0, 0, 0]])
    assert m.nilpotency_order() == 3


def test_not_nilpotent():
    with pytest.raises(NotNilpotent):
        mat_exp_nilpotent(RingMatrix([[1, 0], [0, 0]]))


def test_not_unipotent():
    with pytest.raises(NotUnipotent):
        mat_log_unipotent(RingMatrix([[2, 0], [0, 1]]))


def test_solve_with_polynomial_entries_matches_sympy():
    # unimodular, so the solution stays polynomial
    a = RingMatrix([[Z, Poly(1)], [Poly(1) + Z * W, W]])
    b = [Z * W + 1, 2 * Z + W * W]
    sol = solve_linear(a, b)
    assert sol.unique
    assert a.apply(list(sol.x)) == b
    syms = {}
    sa = sympy.Matrix(2, 2, lambda i, j: poly_to_sympy(a[i, j], syms))
    sb = sympy.Matrix([poly_to_sympy(x, syms) for x in b])
    expected = sa.LUsolve(sb).applyfunc(sympy.simplify)
    got = [poly_to_sympy(x, syms) for x in sol.x]
    assert all(sympy.simplify(g - e) == 0 for g, e in zip(got, expected))


def test_solution_outside_the_ring_is_an_error():
    from gcoherent.ring import RingError
    with pytest.raises(RingError):
        solve_linear(RingMatrix([[Z, Poly(1)], [Poly(2), W]]), [Poly(1), Poly(0)])


def test_solve_reports_kernel():
    a = RingMatrix([[1, 1, 0], [0, 0, 1]])
    sol = solve_linear(a, [Poly(2), Poly(3)])
    assert not sol.unique and len(sol.kernel) == 1
    k = sol.kernel[0]
    assert a.apply(list(k)) == [Poly(), Poly()]


def test_inconsistent_system():
    with pytest.raises(Inconsistent):
        solve_linear(RingMatrix([[1, 1], [1, 1]]), [Poly(1), Poly(2)])


def test_determinant_and_rank_against_sympy():
    m = RingMatrix([[Z, 1, 0], [W, Z, 1], [1, 0, W]])
    syms = {}
    sm = sympy.Matrix(3, 3, lambda i, j: poly_to_sympy(m[i, j], syms))
    assert sympy.expand(poly_to_sympy(determinant(m), syms) - sm.det()) == 0
    assert rank(m) == 3
    assert rank(RingMatrix([[1, 2], [2, 4]])) == 1
