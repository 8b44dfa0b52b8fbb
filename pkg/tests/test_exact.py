import sympy
import pytest
from hypothesis import given, strategies as st

from symplectify import (DimensionError, InconsistentSystemError, RatMatrix, Rational, SingularMatrixError,
                         UniPoly, as_rational, char_poly, mat_inverse, mat_mul, nullspace, solve_linear)
from symplectify.exact import poly_gcd, poly_lcm
from helpers import (dual_matrix, damped_matrix, invertible_matrices, rat_matrices, small_rationals,
                     to_sympy)

t = sympy.Symbol("t")


def sympy_char_poly(m: RatMatrix) -> UniPoly:
    coeffs = sympy.Poly(to_sympy(m).charpoly(t).as_expr(), t).all_coeffs()
    return UniPoly([Rational(str(c)) for c in reversed(coeffs)])


# -- scalars -----------------------------------------------------------------

@given(st.integers(-10**30, 10**30), st.integers(1, 10**30))
def test_rational_is_reduced(p, q):
    x = Rational(p, q)
    num, den = int(x.numerator), int(x.denominator)
    assert den > 0
    assert sympy.gcd(num, den) == 1 or num == 0
    if num == 0:
        assert den == 1


def test_as_rational_parses_strings():
    assert as_rational("3/4") == Rational(3, 4)
    assert as_rational("−2") == -2
    assert as_rational(" 7 ") == 7


# -- mat_mul -------------------------------------------------------------------

@given(rat_matrices(3))
def test_identity_is_neutral(m):
    assert mat_mul(RatMatrix.identity(3), m) == m
    assert RatMatrix.identity(3) @ m @ RatMatrix.identity(3) == m


def test_swap_is_an_involution():
    p = RatMatrix([[0, 1], [1, 0]])
    assert mat_mul(p, p) == RatMatrix.identity(2)


def test_mat_mul_rejects_bad_shapes():
    with pytest.raises(DimensionError):
        mat_mul(RatMatrix.zeros(2, 3), RatMatrix.zeros(2, 3))


@given(rat_matrices(3), rat_matrices(3), rat_matrices(3))
def test_mat_mul_associative(a, b, c):
    assert (a @ b) @ c == a @ (b @ c)


@given(rat_matrices(3, 2), rat_matrices(2, 4))
def test_mat_mul_matches_sympy(a, b):
    assert to_sympy(a @ b) == to_sympy(a) * to_sympy(b)


# -- inverse -----------------------------------------------------------------

def test_inverse_examples():
    assert mat_inverse(RatMatrix.identity(4)) == RatMatrix.identity(4)
    swap = RatMatrix([[0, 1], [1, 0]])
    assert mat_inverse(swap) == swap
    half = Rational(1, 2)
    m = RatMatrix([[1, half], [half, 1]])
    expected = RatMatrix([[1, -half], [-half, 1]]) * Rational(4, 3)
    assert mat_inverse(m) == expected
    assert m @ expected == RatMatrix.identity(2)


def test_inverse_of_singular_raises():
    with pytest.raises(SingularMatrixError):
        mat_inverse(RatMatrix([[1, 2], [2, 4]]))


@given(st.integers(1, 4).flatmap(invertible_matrices))
def test_inverse_is_exact(m):
    n = m.rows
    inv = m.inverse()
    assert inv @ m == RatMatrix.identity(n)
    assert m @ inv == RatMatrix.identity(n)
    assert to_sympy(inv) == to_sympy(m).inv()


@given(st.integers(1, 4).flatmap(lambda n: rat_matrices(n)))
def test_det_and_rank_match_sympy(m):
    sm = to_sympy(m)
    assert Rational(str(sm.det())) == m.det()
    assert sm.rank() == m.rank()


# -- characteristic polynomial --------------------------------------------------

def test_char_poly_examples():
    assert char_poly(damped_matrix(1)) == UniPoly([1, 1, 1])
    assert char_poly(damped_matrix(1)).render("t") == "t^2 + t + 1"
    assert char_poly(RatMatrix.identity(2)) == UniPoly([1, -2, 1])
    assert char_poly(dual_matrix(1, Rational(1, 2))) == UniPoly([Rational(3, 4), 0, 3, 0, 1])


@given(st.integers(1, 5).flatmap(lambda n: rat_matrices(n)))
def test_char_poly_matches_sympy(m):
    assert char_poly(m) == sympy_char_poly(m)


@given(st.integers(1, 4).flatmap(lambda n: st.tuples(rat_matrices(n), invertible_matrices(n))))
def test_char_poly_conjugation_invariant(pair):
    m, lam = pair
    assert char_poly(lam.inverse() @ m @ lam) == char_poly(m)


@given(st.integers(1, 5).flatmap(lambda n: rat_matrices(n)))
def test_char_poly_degree_and_constant_term(m):
    p = char_poly(m)
    assert p.degree == m.rows
    assert p.lead == 1
    assert p(0) == (-m).det()


@given(st.integers(1, 4).flatmap(lambda n: rat_matrices(n)))
def test_cayley_hamilton(m):
    assert char_poly(m).eval_matrix(m).is_zero()


# -- linear systems -------------------------------------------------------------

def test_solve_identity_system():
    b = RatMatrix.column([1, Rational(-2, 3), 5])
    sol = solve_linear(RatMatrix.identity(3), b)
    assert sol.particular == b
    assert sol.dimension == 0


def test_solve_zero_system():
    sol = solve_linear(RatMatrix.zeros(3), RatMatrix.column([0, 0, 0]))
    assert sol.dimension == 3
    assert RatMatrix.hstack(list(sol.nullspace)).rank() == 3


def test_inconsistent_system():
    with pytest.raises(InconsistentSystemError):
        solve_linear(RatMatrix([[1, 1], [1, 1]]), RatMatrix.column([0, 1]))


@given(rat_matrices(3, 4, elements=st.integers(-2, 2).map(Rational)),
       st.lists(small_rationals, min_size=4, max_size=4),
       st.lists(st.integers(-3, 3), min_size=4, max_size=4))
def test_every_solution_combination_solves(a, x_true, weights):
    rhs = a @ RatMatrix.column(x_true)
    sol = solve_linear(a, rhs)
    assert a @ sol.particular == rhs
    x = sol.particular
    for w, v in zip(weights, sol.nullspace):
        x = x + v * w
    assert a @ x == rhs
    assert sol.dimension == 4 - a.rank()


@given(st.integers(1, 4).flatmap(lambda n: rat_matrices(n, n + 1)))
def test_nullspace_spans_kernel(a):
    basis = nullspace(a)
    assert len(basis) == to_sympy(a).cols - to_sympy(a).rank()
    for v in basis:
        assert (a @ v).is_zero()


# -- univariate polynomials -------------------------------------------------------

polys = st.lists(small_rationals, min_size=1, max_size=6).map(UniPoly)


@given(polys, polys.filter(lambda p: not p.is_zero()))
def test_division_identity(a, b):
    q, r = divmod(a, b)
    assert q * b + r == a
    assert r.is_zero() or r.degree < b.degree


@given(polys.filter(lambda p: not p.is_zero()), polys.filter(lambda p: not p.is_zero()))
def test_gcd_lcm(a, b):
    g = poly_gcd(a, b)
    assert (a % g).is_zero() and (b % g).is_zero()
    assert poly_lcm(a, b) * g == (a * b).monic()


def test_render():
    assert UniPoly([Rational(3, 4), 0, 3, 0, 1]).render("t") == "t^4 + 3*t^2 + 3/4"
    assert UniPoly([-1, 0, 1]).render("t") == "t^2 - 1"
    assert UniPoly([]).render("t") == "0"
