import pytest
from hypothesis import given, strategies as st

from symplectify import (CanonicalNotFoundError, EquationsOfMotion, MultiPoly, PolyField, QuadraticLagrangian,
                         RatMatrix, Rational, check_conservative, add_gauge, build_canonical, build_lagrangian, canonical_j, canonical_omega,
                         euler_lagrange, factor, lagrangian_equivalent, s1_candidates, semicanonical_pair,
                         solve_linear, solve_s1)
from symplectify.factorization import _sym_from_vector, _sym_index
from helpers import (bateman_eom, bateman_h_can, canonical_eoms, dual_eom, dual_h_can, interaction_eom,
                     interaction_h_can, small_rationals, symmetric_matrices)

HALF = Rational(1, 2)
P, Q, X, Y = MultiPoly.variables(("p_x", "p_y", "x", "y"))
LX, LY, VX, VY = MultiPoly.variables(("x", "y", "x'", "y'"))


def check_result(eom, res):
    n = eom.n
    assert res.h_can_matrix.is_symmetric()
    assert canonical_j(n) @ res.h_can_matrix == res.m_can
    assert canonical_omega(n) @ res.m_can == res.h_can_matrix
    lam = res.p_link.matrix()
    assert lam.inverse() @ eom.standard_matrix() @ lam == res.m_can
    assert res.s2 == -(res.s1 @ eom.b2)
    assert res.x_mat == (res.s1 @ eom.b1) * HALF
    assert res.h_can.hessian() == res.h_can_matrix


# -- solve_s1 -----------------------------------------------------------------------

def test_dual_s1_is_identity():
    assert solve_s1(dual_eom(1, HALF)) == RatMatrix.identity(2)


def test_bateman_s1_family():
    eom = bateman_eom(1, HALF)
    basis = s1_candidates(eom)
    assert basis == [RatMatrix([[0, 1], [1, 0]])]
    assert solve_s1(eom) == RatMatrix([[0, 1], [1, 0]])


def test_bateman_constraint_system_by_hand():
    # unknowns (s11, s12, s22); S B1 + (S B1)^T = 0 and S B2 - (S B2)^T = 0
    eom = bateman_eom(1, HALF)
    idx = _sym_index(2)
    cols = []
    for k in range(3):
        s = _sym_from_vector(2, idx, [int(t == k) for t in range(3)])
        c1, c2 = s @ eom.b1, s @ eom.b2
        cols.append(list((c1 + c1.T).entries()) + list((c2 - c2.T).entries()))
    system = RatMatrix([list(r) for r in zip(*cols)])
    sol = solve_linear(system, RatMatrix.zeros(system.rows, 1))
    assert sol.dimension == 1
    v = sol.nullspace[0]
    assert v[0, 0] == 0 and v[2, 0] == 0 and v[1, 0] != 0


def test_scalar_damping_has_no_canonical_form():
    eom = EquationsOfMotion(RatMatrix([[-1]]), RatMatrix([[-1]]))
    with pytest.raises(CanonicalNotFoundError):
        solve_s1(eom)


@pytest.mark.parametrize("seed", range(5))
def test_force_aware_s1(seed):
    # every symmetric S1 is admissible for B2 = -I; only s11 = 0 makes S1 (y^2, 0) a gradient
    eom = EquationsOfMotion(RatMatrix.zeros(2), -RatMatrix.identity(2))
    x, y = MultiPoly.variables(("x", "y"))
    f = PolyField((y * y, MultiPoly.zero(("x", "y"))))
    s1 = solve_s1(eom, seed=seed, field=f)
    assert s1[0, 0] == 0 and s1.det() != 0
    assert check_conservative(f.transform(s1))
    with pytest.raises(CanonicalNotFoundError):
        solve_s1(eom, field=PolyField((x * y * y, MultiPoly.zero(("x", "y")))))


@given(canonical_eoms())
def test_solve_s1_meets_hypotheses(case):
    eom, _ = case
    s1 = solve_s1(eom)
    assert s1.is_symmetric() and s1.det() != 0
    assert (s1 @ eom.b1).is_alternating()
    assert (s1 @ eom.b2).is_symmetric()


@given(canonical_eoms())
def test_canonical_implies_factorizable(case):
    eom, _ = case
    solve_s1(eom)
    m = eom.standard_matrix()
    if m.det() != 0:
        assert factor(m).is_valid_for(m)


# -- build_canonical ------------------------------------------------------------------

@given(small_rationals, small_rationals)
def test_dual_h_can(g, l):
    eom = dual_eom(g, l)
    res = build_canonical(eom, RatMatrix.identity(2), ("x", "y"))
    check_result(eom, res)
    assert res.h_can == dual_h_can(Rational(g), Rational(l))


@given(small_rationals, small_rationals)
def test_bateman_h_can(g, l):
    eom = bateman_eom(g, l)
    res = build_canonical(eom, RatMatrix([[0, 1], [1, 0]]), ("x", "y"))
    check_result(eom, res)
    assert res.h_can == bateman_h_can(Rational(g), Rational(l))


def test_interaction_h_can():
    g1, g2, l1, l2 = Rational(1), HALF, Rational(1, 3), Rational(1, 4)
    eom = interaction_eom(g1, g2, l1, l2)
    s1 = solve_s1(eom)
    res = build_canonical(eom, s1, ("x1", "y1", "x2", "y2"))
    check_result(eom, res)
    assert res.h_can == interaction_h_can(g1, g2, l1, l2)


def test_isotropic_oscillator():
    eom = EquationsOfMotion(RatMatrix.zeros(3), -RatMatrix.identity(3))
    res = build_canonical(eom, RatMatrix.identity(3))
    assert res.x_mat.is_zero()
    assert res.s2 == RatMatrix.identity(3)
    assert res.h_can_matrix == RatMatrix.identity(6)


@given(canonical_eoms())
def test_canonical_invariants_random(case):
    eom, s1 = case
    check_result(eom, build_canonical(eom, s1))


@given(canonical_eoms())
def test_semicanonical_pair(case):
    eom, s1 = case
    pair = semicanonical_pair(eom, s1)
    assert pair.is_valid_for(eom.standard_matrix())


def test_build_canonical_checks_s1():
    with pytest.raises(ValueError):
        build_canonical(bateman_eom(1, HALF), RatMatrix.identity(2))


# -- Lagrangians -----------------------------------------------------------------------

def test_dual_lagrangian():
    g, l = Rational(1), HALF
    eom = dual_eom(g, l)
    ql = build_lagrangian(eom, RatMatrix.identity(2), ("x", "y"))
    expected = ((VX * VX + VY * VY) * HALF + (LY * VX - LX * VY) * (g / 2)
                - (LX * LX + LY * LY + LX * LY * (2 * l)) * HALF)
    assert ql.l == expected
    assert euler_lagrange(ql) == eom


def test_second_dual_lagrangian_is_equivalent():
    g, l = Rational(1), HALF
    eom = dual_eom(g, l)
    l2_poly = (VX * VX + VY * VY) * HALF - (LX * LX + LY * LY) * HALF - LX * VY * g - LX * LY * l
    l2 = QuadraticLagrangian.from_poly(l2_poly, 2, ("x", "y"))
    assert l2.l == l2_poly
    built = build_lagrangian(eom, RatMatrix.identity(2), ("x", "y"))
    assert lagrangian_equivalent(built, l2)
    assert euler_lagrange(l2) == eom


def test_symmetric_cross_term_is_pure_gauge():
    # -g/2 (x y' + y x') = -g/2 d/dt(x y) drops out of the equations of motion
    g, l = Rational(1), HALF
    poly = (VX * VX + VY * VY) * HALF - (LX * VY + LY * VX) * (g / 2) - (LX * LX + LY * LY + LX * LY * 2 * l) * HALF
    eom = euler_lagrange(QuadraticLagrangian.from_poly(poly, 2))
    assert eom.b1.is_zero()
    assert eom != dual_eom(g, l)


def test_trivial_lagrangian():
    eom = EquationsOfMotion(RatMatrix.zeros(1), -RatMatrix.identity(1))
    ql = build_lagrangian(eom, RatMatrix.identity(1))
    x, v = MultiPoly.variables(("x1", "x1'"))
    assert ql.l == (v * v - x * x) * HALF
    back = euler_lagrange(QuadraticLagrangian.from_poly((v * v - x * x) * HALF, 1))
    assert back.b1 == RatMatrix([[0]]) and back.b2 == RatMatrix([[-1]])


@given(canonical_eoms())
def test_euler_lagrange_round_trip(case):
    eom, s1 = case
    assert euler_lagrange(build_lagrangian(eom, s1)) == eom


@given(canonical_eoms(), st.data())
def test_gauge_invariance(case, data):
    eom, s1 = case
    ql = build_lagrangian(eom, s1)
    k = data.draw(symmetric_matrices(eom.n))
    gauged = add_gauge(ql, k)
    assert lagrangian_equivalent(ql, gauged)
    assert lagrangian_equivalent(gauged, ql)
    assert euler_lagrange(gauged) == eom


@given(canonical_eoms())
def test_scaling_is_not_equivalent(case):
    eom, s1 = case
    ql = build_lagrangian(eom, s1)
    doubled = QuadraticLagrangian(ql.kinetic * 2, ql.cross * 2, ql.potential * 2, ql.names)
    assert lagrangian_equivalent(ql, ql)
    assert not lagrangian_equivalent(ql, doubled)
    assert euler_lagrange(doubled) == eom


@given(canonical_eoms())
def test_from_poly_round_trip(case):
    eom, s1 = case
    ql = build_lagrangian(eom, s1)
    back = QuadraticLagrangian.from_poly(ql.l, eom.n)
    assert back.l == ql.l
    assert lagrangian_equivalent(back, ql)
