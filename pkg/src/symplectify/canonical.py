"""Canonical-form Hamiltonians and quadratic Lagrangians for x'' = B1 x' + B2 x.

When some symmetric invertible S1 makes S1 B1 alternating and S1 B2
symmetric, the standard system is P-conjugate to J @ H_can with
J = [[0, -I], [I, 0]], i.e. it is generated by H_can under the canonical
two-form sum dp_i ^ dx_i.  The same S1 yields the Lagrangian

    L = 1/2 (x'^T S1 x' + x^T S1 B1 x' + x^T S1 B2 x).
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .errors import CanonicalNotFoundError, DimensionError, SingularMatrixError
from .exact import RatMatrix, Rational, nullspace
from .factorization import ASPair, invertible_member, phase_variables, symmetric_solutions
from .multipoly import MultiPoly
from .reduction import EquationsOfMotion, PElement

HALF = Rational(1, 2)


def canonical_j(n: int) -> RatMatrix:
    """J = [[0, -I], [I, 0]], the inverse of the canonical omega."""
    eye, zero = RatMatrix.identity(n), RatMatrix.zeros(n)
    return RatMatrix.block([[zero, -eye], [eye, zero]])


def canonical_omega(n: int) -> RatMatrix:
    eye, zero = RatMatrix.identity(n), RatMatrix.zeros(n)
    return RatMatrix.block([[zero, eye], [-eye, zero]])


@dataclass(frozen=True)
class CanonicalResult:
    s1: RatMatrix
    s2: RatMatrix
    x_mat: RatMatrix
    h_can_matrix: RatMatrix
    h_can: MultiPoly
    m_can: RatMatrix
    p_link: PElement


@dataclass(frozen=True)
class QuadraticLagrangian:
    """L = 1/2 (v^T kinetic v + x^T cross v + x^T potential x), v = x'."""

    kinetic: RatMatrix
    cross: RatMatrix
    potential: RatMatrix
    names: tuple[str, ...] = ()

    def __post_init__(self):
        n = self.kinetic.rows
        if not (self.kinetic.shape == self.cross.shape == self.potential.shape == (n, n)):
            raise DimensionError("Lagrangian coefficient matrices must be n x n")
        if not self.names:
            object.__setattr__(self, "names", tuple(f"x{i + 1}" for i in range(n)))

    @property
    def n(self) -> int:
        return self.kinetic.rows

    @property
    def variables(self) -> tuple[str, ...]:
        return tuple(self.names) + tuple(f"{v}'" for v in self.names)

    @property
    def l(self) -> MultiPoly:
        n = self.n
        vs = self.variables
        pos, vel = list(range(n)), list(range(n, 2 * n))
        poly = (MultiPoly.bilinear(vs, vel, self.kinetic, vel)
                + MultiPoly.bilinear(vs, pos, self.cross, vel)
                + MultiPoly.bilinear(vs, pos, self.potential, pos))
        return poly * HALF

    @classmethod
    def from_poly(cls, poly: MultiPoly, n: int, names: Sequence[str] | None = None) -> "QuadraticLagrangian":
        """Read coefficient matrices off a quadratic polynomial in (x, x').

        Variables must be ordered positions then velocities.  Cross and
        potential matrices come out upper-triangular; only their
        antisymmetric and symmetric parts matter.
        """
        if len(poly.vars) != 2 * n:
            raise DimensionError("expected 2n variables (positions, velocities)")
        if any(sum(e) != 2 for e in poly.terms):
            raise ValueError("Lagrangian must be a homogeneous quadratic")

        def coeff(i, j):
            e = [0] * (2 * n)
            e[i] += 1
            e[j] += 1
            return poly.coeff(e)

        kin = [[0] * n for _ in range(n)]
        cross = [[0] * n for _ in range(n)]
        pot = [[0] * n for _ in range(n)]
        for i in range(n):
            for j in range(n):
                c = coeff(n + i, n + j)
                kin[i][j] = 2 * c if i == j else c
                cross[i][j] = 2 * coeff(i, n + j)
                if i == j:
                    pot[i][j] = 2 * coeff(i, i)
                elif i < j:
                    pot[i][j] = 2 * coeff(i, j)
        names = tuple(names) if names else tuple(poly.vars[:n])
        return cls(RatMatrix(kin), RatMatrix(cross), RatMatrix(pot), names)


def _skew(c: RatMatrix) -> RatMatrix:
    return (c - c.T) * HALF


def _sym(d: RatMatrix) -> RatMatrix:
    return (d + d.T) * HALF


def s1_candidates(eom: EquationsOfMotion, field=None) -> list[RatMatrix]:
    """Basis of symmetric S1 with S1 B1 alternating and S1 B2 symmetric.

    With a force ``field`` the family is cut down to the S1 for which
    S1 f is a gradient, so that a potential exists.
    """
    b1, b2 = eom.b1, eom.b2

    def constraints(s):
        c1 = s @ b1
        c2 = s @ b2
        return [c1 + c1.T, c2 - c2.T]

    basis = symmetric_solutions(eom.n, constraints)
    if field is None or field.is_zero() or not basis:
        return basis
    return _conservative_subfamily(basis, field)


def _conservative_subfamily(basis: list[RatMatrix], field) -> list[RatMatrix]:
    # curl(S f) is linear in the coefficients of S over the basis
    n = field.n
    curls = []
    for b in basis:
        g = field.transform(b).components
        curls.append({(i, j): g[i].diff(j) - g[j].diff(i) for i in range(n) for j in range(i + 1, n)})
    keys = sorted({(ij, e) for c in curls for ij, poly in c.items() for e in poly.terms})
    if not keys:
        return basis
    rows = [[c[ij].coeff(e) for c in curls] for ij, e in keys]
    out = []
    for v in nullspace(RatMatrix(rows)):
        acc = RatMatrix.zeros(n)
        for k, b in enumerate(basis):
            if v[k, 0]:
                acc = acc + b * v[k, 0]
        out.append(acc)
    return out


def solve_s1(eom: EquationsOfMotion, seed: int = 0, field=None) -> RatMatrix:
    """An invertible member of :func:`s1_candidates` (force-aware when ``field`` is given)."""
    basis = s1_candidates(eom, field)
    s1 = invertible_member(basis, seed=seed)
    if s1 is None:
        extra = " and S1*f a gradient" if field is not None and not field.is_zero() else ""
        raise CanonicalNotFoundError(
            "no symmetric invertible S1 with S1*B1 alternating and S1*B2 symmetric" + extra)
    return s1


def _check_s1(eom: EquationsOfMotion, s1: RatMatrix):
    if not s1.is_symmetric() or s1.det() == 0:
        raise ValueError("S1 must be symmetric and invertible")
    if not (s1 @ eom.b1).is_alternating():
        raise ValueError("S1 @ B1 is not alternating")
    if not (s1 @ eom.b2).is_symmetric():
        raise ValueError("S1 @ B2 is not symmetric")


def semicanonical_pair(eom: EquationsOfMotion, s1: RatMatrix) -> ASPair:
    """M_std = [[A1, -S1^-1], [S1^-1, 0]] @ diag(S1, S2) with A1 = B1 S1^-1, S2 = -S1 B2."""
    _check_s1(eom, s1)
    s1_inv = s1.inverse()
    a1 = eom.b1 @ s1_inv
    n = eom.n
    a = RatMatrix.block([[a1, -s1_inv], [s1_inv, RatMatrix.zeros(n)]])
    s = RatMatrix.direct_sum([s1, -(s1 @ eom.b2)])
    pair = ASPair(a, s)
    if not pair.is_valid_for(eom.standard_matrix()):
        raise AssertionError("semi-canonical decomposition failed")
    return pair


def build_canonical(eom: EquationsOfMotion, s1: RatMatrix,
                    names: Sequence[str] | None = None) -> CanonicalResult:
    _check_s1(eom, s1)
    n = eom.n
    s1_inv = s1.inverse()
    s2 = -(s1 @ eom.b2)
    x_mat = (s1 @ eom.b1) * HALF
    upper_right = s1_inv @ x_mat
    h_mat = RatMatrix.block([[s1_inv, upper_right],
                             [x_mat.T @ s1_inv, x_mat.T @ s1_inv @ x_mat + s2]])
    m_can = canonical_j(n) @ h_mat
    link = PElement(s1_inv, s1_inv @ x_mat)
    if link.inverse_matrix() @ eom.standard_matrix() @ link.matrix() != m_can:
        raise AssertionError("P-conjugation to the canonical form failed")
    h_can = MultiPoly.quadratic_form(phase_variables(n, names), h_mat)
    return CanonicalResult(s1, s2, x_mat, h_mat, h_can, m_can, link)


def build_lagrangian(eom: EquationsOfMotion, s1: RatMatrix,
                     names: Sequence[str] | None = None) -> QuadraticLagrangian:
    _check_s1(eom, s1)
    names = tuple(names) if names else ()
    return QuadraticLagrangian(s1, s1 @ eom.b1, s1 @ eom.b2, names)


def euler_lagrange(ql: QuadraticLagrangian) -> EquationsOfMotion:
    """K x'' = skew(C) x' + sym(D) x  for L = 1/2 (v^T K v + x^T C v + x^T D x)."""
    try:
        k_inv = _sym(ql.kinetic).inverse()
    except SingularMatrixError as exc:
        raise SingularMatrixError("kinetic matrix is singular") from exc
    return EquationsOfMotion(k_inv @ _skew(ql.cross), k_inv @ _sym(ql.potential))


def lagrangian_equivalent(a: QuadraticLagrangian, b: QuadraticLagrangian) -> bool:
    """Equal up to a total time derivative d/dt(x^T K x)."""
    if a.n != b.n:
        raise DimensionError("Lagrangians of different dimension")
    return (_sym(a.kinetic) == _sym(b.kinetic)
            and _skew(a.cross) == _skew(b.cross)
            and _sym(a.potential) == _sym(b.potential))


def add_gauge(ql: QuadraticLagrangian, k: RatMatrix) -> QuadraticLagrangian:
    """L + d/dt(x^T K x) for symmetric K, i.e. cross += 4K."""
    if not k.is_symmetric():
        raise ValueError("gauge matrix must be symmetric")
    return QuadraticLagrangian(ql.kinetic, ql.cross + k * 4, ql.potential, ql.names)
