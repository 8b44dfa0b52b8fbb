import pytest
from hypothesis import given, strategies as st

from symplectify import (BlockSystem, DimensionError, EquationsOfMotion, PElement, RatMatrix, Rational,
                         SingularM21Error, extract_eom, is_admissible, p_conjugate, same_eom, standardize,
                         standardize_element)
from helpers import bateman_eom, damped_matrix, dual_eom, dual_matrix, invertible_matrices, rat_matrices


@st.composite
def eoms(draw, max_n=3):
    n = draw(st.integers(1, max_n))
    return EquationsOfMotion(draw(rat_matrices(n)), draw(rat_matrices(n)))


@st.composite
def p_elements(draw, n):
    return PElement(draw(invertible_matrices(n)), draw(rat_matrices(n)))


@st.composite
def admissible_systems(draw, max_n=3):
    eom = draw(eoms(max_n))
    p = draw(p_elements(eom.n))
    return eom, p_conjugate(eom.standard_matrix(), p).m


def test_block_views():
    sys = BlockSystem(dual_matrix(1, Rational(1, 2)))
    assert sys.n == 2
    assert sys.m21 == RatMatrix.identity(2)
    assert sys.m22 == RatMatrix.zeros(2)
    with pytest.raises(DimensionError):
        BlockSystem(RatMatrix.identity(3))


def test_admissibility_examples():
    assert is_admissible(bateman_eom(1, Rational(1, 2)).standard_matrix())
    assert is_admissible(damped_matrix(1))
    m = RatMatrix([[0, 1], [0, 0]]) + RatMatrix([[1, 0], [0, 1]])
    assert not is_admissible(m)  # M21 = 0
    assert not is_admissible(dual_matrix(1, 1))  # M singular at |l| = 1


def test_extract_standard_form_is_identity():
    eom = dual_eom(2, Rational(1, 3))
    assert extract_eom(eom.standard_matrix()) == eom


def test_extract_bateman():
    g, l = Rational(1), Rational(1, 2)
    m = RatMatrix([[-g, 0, -1, -l], [0, g, -l, -1], [1, 0, 0, 0], [0, 1, 0, 0]])
    eom = extract_eom(m)
    assert eom.b1 == RatMatrix.diag([-g, g])
    assert eom.b2 == RatMatrix([[-1, -l], [-l, -1]])


def test_extract_needs_invertible_m21():
    with pytest.raises(SingularM21Error):
        extract_eom(RatMatrix([[1, 0], [0, 1]]))
    with pytest.raises(SingularM21Error):
        standardize(RatMatrix([[1, 0], [0, 1]]))


@given(eoms())
def test_round_trip_through_standard_form(eom):
    assert extract_eom(eom.standard_matrix()) == eom


@given(admissible_systems())
def test_extract_invariant_under_p_conjugation(case):
    eom, m = case
    assert extract_eom(m) == eom


@given(admissible_systems())
def test_standardize_identity(case):
    eom, m = case
    m_std, lam = standardize(m)
    assert lam.inverse() @ m @ lam == m_std
    assert m_std == eom.standard_matrix()
    blocks = BlockSystem(m_std)
    assert blocks.m21 == RatMatrix.identity(eom.n)
    assert blocks.m22 == RatMatrix.zeros(eom.n)


def test_standardize_already_standard():
    m = dual_matrix(1, Rational(1, 2))
    m_std, lam = standardize(m)
    assert m_std == m
    assert lam == RatMatrix.identity(4)


def test_standardize_undoes_scaling():
    eom = dual_eom(1, Rational(1, 2))
    p = PElement(RatMatrix([[2, 0], [0, 1]]), RatMatrix.zeros(2))
    m = p_conjugate(eom.standard_matrix(), p).m
    assert m != eom.standard_matrix()
    assert standardize(m)[0] == eom.standard_matrix()


def test_p_conjugate_examples():
    m = dual_matrix(1, Rational(1, 2))
    assert p_conjugate(m, PElement.identity(2)).m == m
    out = p_conjugate(m, PElement(RatMatrix.identity(2) * 2, RatMatrix.zeros(2)))
    assert out.m21 == RatMatrix.identity(2) * 2
    assert same_eom(out.m, m)


def test_p_element_inverse():
    p = PElement(RatMatrix([[1, 2], [3, 4]]), RatMatrix([[0, 1], [1, 0]]))
    assert p.matrix() @ p.inverse_matrix() == RatMatrix.identity(4)


def test_same_eom_examples():
    bateman = bateman_eom(1, Rational(1, 2)).standard_matrix()
    dual = dual_matrix(1, Rational(1, 2))
    assert same_eom(dual, dual)
    assert not same_eom(bateman, dual)


@given(admissible_systems(), st.data())
def test_same_eom_matches_explicit_conjugacy(case, data):
    eom, m = case
    p = data.draw(p_elements(eom.n))
    assert same_eom(m, p_conjugate(m, p).m)
    # a different B2 breaks equivalence
    other = EquationsOfMotion(eom.b1, eom.b2 + RatMatrix.identity(eom.n))
    assert not same_eom(m, other.standard_matrix())


@given(admissible_systems(), admissible_systems())
def test_standard_forms_coincide_iff_same_eom(a, b):
    (_, ma), (_, mb) = a, b
    if ma.rows != mb.rows:
        return
    assert (standardize(ma)[0] == standardize(mb)[0]) == same_eom(ma, mb)


@given(admissible_systems())
def test_standardize_element_formula(case):
    _, m = case
    sys = BlockSystem(m)
    p = standardize_element(sys)
    assert p.t == sys.m21.inverse()
    assert p.x == -(sys.m21.inverse() @ sys.m22)
