"""Block structure of evolution matrices and the second-order equations they encode.

For xi = (p, x) and M = [[M11, M12], [M21, M22]] with M21 invertible, the
system xi' = M xi is equivalent to

    x'' - B1 x' - B2 x = 0,
    B1 = M21 M11 M21^-1 + M22,
    B2 = M21 M12 - M21 M11 M21^-1 M22,

and (B1, B2) is invariant under conjugation by [[T, X], [0, I]].
"""
from __future__ import annotations

from dataclasses import dataclass

from .errors import DimensionError, SingularM21Error, SingularMatrixError
from .exact import RatMatrix


@dataclass(frozen=True)
class BlockSystem:
    m: RatMatrix

    def __post_init__(self):
        if not self.m.is_square() or self.m.rows % 2:
            raise DimensionError("evolution matrix must be square of even size")

    @property
    def n(self) -> int:
        return self.m.rows // 2

    @property
    def blocks(self) -> tuple[RatMatrix, RatMatrix, RatMatrix, RatMatrix]:
        return self.m.split_blocks()

    @property
    def m11(self) -> RatMatrix:
        return self.blocks[0]

    @property
    def m12(self) -> RatMatrix:
        return self.blocks[1]

    @property
    def m21(self) -> RatMatrix:
        return self.blocks[2]

    @property
    def m22(self) -> RatMatrix:
        return self.blocks[3]


@dataclass(frozen=True)
class EquationsOfMotion:
    """x'' - b1 x' - b2 x = 0, i.e. x'' = b1 x' + b2 x."""

    b1: RatMatrix
    b2: RatMatrix

    def __post_init__(self):
        if not self.b1.is_square() or self.b1.shape != self.b2.shape:
            raise DimensionError("B1 and B2 must be square of equal size")

    @property
    def n(self) -> int:
        return self.b1.rows

    def standard_matrix(self) -> RatMatrix:
        """M_std = [[B1, B2], [I, 0]] with momentum p = x'."""
        n = self.n
        return RatMatrix.block([[self.b1, self.b2],
                                [RatMatrix.identity(n), RatMatrix.zeros(n)]])


@dataclass(frozen=True)
class PElement:
    """The block matrix [[t, x], [0, I]]."""

    t: RatMatrix
    x: RatMatrix

    def __post_init__(self):
        if self.t.shape != self.x.shape or not self.t.is_square():
            raise DimensionError("T and X must be square of equal size")
        if self.t.det() == 0:
            raise SingularMatrixError("T must be invertible")

    @classmethod
    def identity(cls, n: int) -> "PElement":
        return cls(RatMatrix.identity(n), RatMatrix.zeros(n))

    def matrix(self) -> RatMatrix:
        n = self.t.rows
        return RatMatrix.block([[self.t, self.x], [RatMatrix.zeros(n), RatMatrix.identity(n)]])

    def inverse_matrix(self) -> RatMatrix:
        n = self.t.rows
        ti = self.t.inverse()
        return RatMatrix.block([[ti, -(ti @ self.x)], [RatMatrix.zeros(n), RatMatrix.identity(n)]])


def _as_system(sys) -> BlockSystem:
    return sys if isinstance(sys, BlockSystem) else BlockSystem(sys)


def is_admissible(sys) -> bool:
    sys = _as_system(sys)
    return sys.m.det() != 0 and sys.m21.det() != 0


def extract_eom(sys) -> EquationsOfMotion:
    sys = _as_system(sys)
    m11, m12, m21, m22 = sys.blocks
    try:
        m21_inv = m21.inverse()
    except SingularMatrixError as exc:
        raise SingularM21Error("lower-left block M21 is singular") from exc
    conj = m21 @ m11 @ m21_inv
    return EquationsOfMotion(conj + m22, m21 @ m12 - conj @ m22)


def standardize_element(sys) -> PElement:
    """The P-element L with L^-1 M L = M_std: T = M21^-1, X = -M21^-1 M22."""
    sys = _as_system(sys)
    try:
        t = sys.m21.inverse()
    except SingularMatrixError as exc:
        raise SingularM21Error("lower-left block M21 is singular") from exc
    return PElement(t, -(t @ sys.m22))


def standardize(sys) -> tuple[RatMatrix, RatMatrix]:
    """Return (M_std, L) with L^-1 @ M @ L == M_std exactly."""
    sys = _as_system(sys)
    p = standardize_element(sys)
    lam = p.matrix()
    m_std = p.inverse_matrix() @ sys.m @ lam
    if m_std != extract_eom(sys).standard_matrix():
        raise AssertionError("standardizing conjugation failed")
    return m_std, lam


def p_conjugate(sys, p: PElement) -> BlockSystem:
    sys = _as_system(sys)
    if p.t.rows != sys.n:
        raise DimensionError("P-element has the wrong size")
    return BlockSystem(p.inverse_matrix() @ sys.m @ p.matrix())


def same_eom(a, b) -> bool:
    return extract_eom(a) == extract_eom(b)
