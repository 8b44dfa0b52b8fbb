"""Shared strategies, generators and sympy conversions for the test suite."""
import random

import sympy
from hypothesis import strategies as st

from symplectify import EquationsOfMotion, MultiPoly, RatMatrix, Rational


# ---------------------------------------------------------------------------
# conversions for sympy oracles

def to_sympy(m: RatMatrix) -> sympy.Matrix:
    return sympy.Matrix([[sympy.Rational(str(m[i, j])) for j in range(m.cols)] for i in range(m.rows)])


def from_sympy(m: sympy.Matrix) -> RatMatrix:
    return RatMatrix([[Rational(str(m[i, j])) for j in range(m.cols)] for i in range(m.rows)])


# ---------------------------------------------------------------------------
# hypothesis strategies

small_rationals = st.builds(lambda p, q: Rational(p, q),
                            st.integers(-6, 6), st.integers(1, 4))


@st.composite
def rat_matrices(draw, rows, cols=None, elements=small_rationals):
    cols = rows if cols is None else cols
    return RatMatrix([[draw(elements) for _ in range(cols)] for _ in range(rows)])


@st.composite
def invertible_matrices(draw, n):
    m = draw(rat_matrices(n))
    # shift the diagonal until invertible; keeps the draw cheap
    shift = 0
    while m.det() == 0:
        shift += 1
        m = m + RatMatrix.identity(n) * shift
    return m


@st.composite
def symmetric_matrices(draw, n, invertible=False):
    m = draw(rat_matrices(n))
    s = m + m.T
    shift = 0
    while invertible and s.det() == 0:
        shift += 1
        s = s + RatMatrix.identity(n) * shift
    return s


@st.composite
def alternating_matrices(draw, n, invertible=False):
    m = draw(rat_matrices(n))
    a = m - m.T
    if invertible:
        # n even; add a fixed symplectic block until invertible
        j = RatMatrix.block([[RatMatrix.zeros(n // 2), -RatMatrix.identity(n // 2)],
                             [RatMatrix.identity(n // 2), RatMatrix.zeros(n // 2)]])
        shift = 0
        while a.det() == 0:
            shift += 1
            a = a + j * shift
    return a


@st.composite
def hamiltonian_matrices(draw, max_n=3):
    """M = A0 S0 with A0 alternating invertible and S0 symmetric invertible."""
    n = draw(st.integers(1, max_n))
    a0 = draw(alternating_matrices(2 * n, invertible=True))
    s0 = draw(symmetric_matrices(2 * n, invertible=True))
    return a0 @ s0


@st.composite
def canonical_eoms(draw, max_n=3):
    """(B1, B2) meeting the canonical-form hypotheses by construction."""
    n = draw(st.integers(1, max_n))
    s1 = draw(symmetric_matrices(n, invertible=True))
    a1 = draw(alternating_matrices(n))
    c2 = draw(symmetric_matrices(n))
    s1_inv = s1.inverse()
    return EquationsOfMotion(a1 @ s1, s1_inv @ c2), s1


# ---------------------------------------------------------------------------
# seeded generators (acceptance-style populations)

def random_int_matrix(rng: random.Random, n: int, lo=-5, hi=5) -> RatMatrix:
    return RatMatrix([[rng.randint(lo, hi) for _ in range(n)] for _ in range(n)])


def random_alternating(rng, n, lo=-5, hi=5) -> RatMatrix:
    while True:
        rows = [[0] * n for _ in range(n)]
        for i in range(n):
            for j in range(i + 1, n):
                v = rng.randint(lo, hi)
                rows[i][j], rows[j][i] = v, -v
        a = RatMatrix(rows)
        if a.det() != 0:
            return a


def random_symmetric(rng, n, lo=-5, hi=5) -> RatMatrix:
    while True:
        rows = [[0] * n for _ in range(n)]
        for i in range(n):
            for j in range(i, n):
                v = rng.randint(lo, hi)
                rows[i][j] = rows[j][i] = v
        s = RatMatrix(rows)
        if s.det() != 0:
            return s


def random_invertible(rng, n, lo=-5, hi=5) -> RatMatrix:
    while True:
        m = random_int_matrix(rng, n, lo, hi)
        if m.det() != 0:
            return m


# ---------------------------------------------------------------------------
# named systems

def bateman_eom(g, l) -> EquationsOfMotion:
    g, l = Rational(g), Rational(l)
    return EquationsOfMotion(RatMatrix.diag([-g, g]), RatMatrix([[-1, -l], [-l, -1]]))


def dual_eom(g, l) -> EquationsOfMotion:
    g, l = Rational(g), Rational(l)
    return EquationsOfMotion(RatMatrix([[0, -g], [g, 0]]), RatMatrix([[-1, -l], [-l, -1]]))


def dual_matrix(g, l) -> RatMatrix:
    g, l = Rational(g), Rational(l)
    return RatMatrix([[0, -g, -1, -l], [g, 0, -l, -1], [1, 0, 0, 0], [0, 1, 0, 0]])


def damped_matrix(g) -> RatMatrix:
    return RatMatrix([[-Rational(g), -1], [1, 0]])


# ---------------------------------------------------------------------------
# reference canonical Hamiltonians in (p_x, p_y, x, y)

HALF = Rational(1, 2)
_P, _Q, _X, _Y = MultiPoly.variables(("p_x", "p_y", "x", "y"))


def dual_h_can(g, l):
    return ((_P * _P + _Q * _Q) * HALF + (_Q * _X - _P * _Y) * (g / 2) + _X * _Y * l
            + (_X * _X + _Y * _Y) * (HALF * (1 + g * g / 4)))


def bateman_h_can(g, l):
    return _P * _Q + (_Y * _Q - _X * _P) * (g / 2) + _X * _Y * (1 - g * g / 4) + (_X * _X + _Y * _Y) * (l / 2)


def interaction_eom(g1, g2, l1, l2):
    b1 = RatMatrix.diag([-g1, g1, -g2, g2])
    b2 = -RatMatrix([[1, 0, l1, l2], [0, 1, l2, l1], [l1, l2, 1, 0], [l2, l1, 0, 1]])
    return EquationsOfMotion(b1, b2)


def interaction_h_can(g1, g2, l1, l2):
    v = MultiPoly.variables(("p_x1", "p_y1", "p_x2", "p_y2", "x1", "y1", "x2", "y2"))
    p, q, x, y = v[0:4:2], v[1:4:2], v[4::2], v[5::2]
    h = MultiPoly.zero(v[0].vars)
    for i, g in enumerate((g1, g2)):
        h = h + p[i] * q[i] + x[i] * y[i] * (1 - g * g / 4) - (p[i] * x[i] - q[i] * y[i]) * (g / 2)
    return h + (x[0] * y[1] + y[0] * x[1]) * l1 + (x[0] * x[1] + y[0] * y[1]) * l2
