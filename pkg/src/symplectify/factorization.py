"""Alternating x symmetric factorization M = A @ S and its Hamiltonian reading.

Convention used throughout the package: with ``omega[i, j] = w(d_i, d_j)``
and a quadratic Hamiltonian ``H = 1/2 xi^T S xi`` the flow is

    omega @ xi' = grad H,     i.e.  M = omega^-1 @ S,

so ``A = omega^-1`` is also the table of Poisson brackets {xi_i, xi_j}.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Sequence

from .criterion import companion, frobenius, is_hamiltonian_candidate
from .errors import DimensionError, NotHamiltonianError, SingularMatrixError, ZeroConstantTermError
from .exact import RatMatrix, Rational, UniPoly, nullspace
from .multipoly import MultiPoly

DEFAULT_RETRIES = 64


@dataclass(frozen=True)
class ASPair:
    a: RatMatrix
    s: RatMatrix
    # dimension of the space of symmetric S solving M^T S + S M = 0, when known
    solution_dim: int | None = None

    def product(self) -> RatMatrix:
        return self.a @ self.s

    def is_valid_for(self, m: RatMatrix) -> bool:
        return (self.a.is_alternating() and self.s.is_symmetric()
                and self.a.is_invertible() and self.a @ self.s == m)


@dataclass(frozen=True)
class HamiltonianStructure:
    omega: RatMatrix
    hessian: RatMatrix
    h: MultiPoly
    bracket_table: RatMatrix
    variables: tuple[str, ...]

    def bracket(self, u: str, v: str) -> "Rational":
        i, j = self.variables.index(u), self.variables.index(v)
        return self.bracket_table[i, j]

    def nonzero_brackets(self) -> dict:
        """Brackets {u, v} for u before v in the variable order."""
        out = {}
        n = len(self.variables)
        for i in range(n):
            for j in range(i + 1, n):
                c = self.bracket_table[i, j]
                if c:
                    out[(self.variables[i], self.variables[j])] = c
        return out

    def two_form(self) -> str:
        """Render omega as a sum of wedge products d u ^ d v."""
        terms = []
        n = len(self.variables)
        for i in range(n):
            for j in range(i + 1, n):
                c = self.omega[i, j]
                if c:
                    w = f"d{self.variables[i]}^d{self.variables[j]}"
                    mag = abs(c)
                    body = w if mag == 1 else f"{mag}*{w}"
                    if not terms:
                        terms.append(("-" if c < 0 else "") + body)
                    else:
                        terms.append(("- " if c < 0 else "+ ") + body)
        return " ".join(terms) if terms else "0"


# ---------------------------------------------------------------------------
# symmetric solution spaces

def _sym_index(n: int) -> list[tuple[int, int]]:
    return [(i, j) for i in range(n) for j in range(i, n)]


def _sym_from_vector(n: int, idx: list[tuple[int, int]], vec: Sequence) -> RatMatrix:
    rows = [[Rational(0)] * n for _ in range(n)]
    for (i, j), v in zip(idx, vec):
        rows[i][j] = v
        rows[j][i] = v
    return RatMatrix(rows)


def symmetric_solutions(n: int, constraints) -> list[RatMatrix]:
    """Basis of symmetric n x n matrices S satisfying linear constraints.

    ``constraints(S)`` maps a symmetric matrix to a matrix (or list of
    matrices) that must vanish; it must be linear in S.
    """
    idx = _sym_index(n)
    columns = []
    for k in range(len(idx)):
        e = [Rational(int(t == k)) for t in range(len(idx))]
        out = constraints(_sym_from_vector(n, idx, e))
        if isinstance(out, RatMatrix):
            out = [out]
        columns.append([x for mat in out for x in mat.entries()])
    system = RatMatrix([list(r) for r in zip(*columns)])
    basis = []
    for v in nullspace(system):
        vec = list(v.col(0))
        lead = next(x for x in vec if x)
        basis.append(_sym_from_vector(n, idx, [x / lead for x in vec]))
    return basis


def invertible_member(basis: Sequence[RatMatrix], seed: int = 0,
                      retries: int = DEFAULT_RETRIES) -> RatMatrix | None:
    """Find an invertible element of span(basis): basis vectors first, then
    seeded small-integer combinations."""
    if not basis:
        return None
    for b in basis:
        if b.det() != 0:
            return b
    total = basis[0]
    for b in basis[1:]:
        total = total + b
    if total.det() != 0:
        return total
    rng = random.Random(seed)
    for _ in range(retries):
        coeffs = [rng.randint(-3, 3) for _ in basis]
        cand = basis[0] * coeffs[0]
        for c, b in zip(coeffs[1:], basis[1:]):
            cand = cand + b * c
        if cand.det() != 0:
            return cand
    return None


# ---------------------------------------------------------------------------
# factorization

def factor(m: RatMatrix, seed: int = 0, retries: int = DEFAULT_RETRIES) -> ASPair:
    """Write m = A @ S with A alternating invertible and S symmetric.

    Solves M^T S + S M = 0 over symmetric S exactly, then picks an
    invertible member.  If the search comes up empty but the similarity
    criterion still accepts, the companion-block construction is used.
    """
    if not m.is_square() or m.rows % 2:
        raise DimensionError("need an even-dimensional square matrix")
    n = m.rows
    if m.det() == 0:
        raise NotHamiltonianError("singular evolution matrix")
    basis = symmetric_solutions(n, lambda s: m.T @ s + s @ m)
    s = invertible_member(basis, seed=seed, retries=retries)
    if s is None:
        if not is_hamiltonian_candidate(m):
            raise NotHamiltonianError("M is not similar to -M")
        pair = factor_via_frobenius(m)
        return ASPair(pair.a, pair.s, len(basis))
    return ASPair(m @ s.inverse(), s, len(basis))


def _block_coefficients(a: dict, r: int) -> tuple[list, list]:
    """Solve for b_0..b_{r-1} and y_0..y_{r-2} from the even coefficients a_{2i}.

    b_0 = a_0, y_0 b_0 = 1, b_0 y_m = sum_{l=1}^m b_l y_{m-l} (m <= r-2) and
    sum_{l=1}^m b_l y_{m-l} = -a_{2r-2m} (m <= r-1).
    """
    a0 = a[0]
    b = [a0] + [Rational(0)] * (r - 1)
    y = [Rational(0)] * max(r - 1, 0)
    if r > 1:
        y[0] = 1 / a0
    for m in range(1, r - 1):
        y[m] = -a[2 * r - 2 * m] / a0
    for m in range(1, r):
        partial = sum((b[l] * y[m - l] for l in range(1, m)), Rational(0))
        b[m] = (-a[2 * r - 2 * m] - partial) * a0
    return b, y


def factor_companion_block(char: UniPoly, r: int) -> ASPair:
    """Explicit factorization of the companion matrix of an even polynomial.

    ``char`` is t^(2r) - a_{2r-2} t^(2r-2) - ... - a_0.  A is
    [[0,-1],[1,0]] (+) an alternating Hankel-type block in the y_m, S is
    (1) (+) an anti-triangular symmetric block in the b_m.
    """
    char = char.monic()
    if char.degree != 2 * r:
        raise DimensionError(f"polynomial degree {char.degree} != 2r = {2 * r}")
    if not char.is_even():
        raise ValueError("companion block factorization needs an even polynomial")
    if char.coeff(0) == 0:
        raise ZeroConstantTermError("zero constant term: block is singular")
    a = {2 * i: -char.coeff(2 * i) for i in range(r)}
    b, y = _block_coefficients(a, r)
    size = 2 * r
    ap = [[Rational(0)] * (size - 2) for _ in range(size - 2)]
    for i in range(size - 2):
        for j in range(size - 2):
            s = i + j
            if s % 2 == 1 and s <= 2 * r - 3:
                ap[i][j] = (-1) ** (i + 1) * y[r - 2 - (s - 1) // 2]
    sp = [[Rational(0)] * (size - 1) for _ in range(size - 1)]
    for i in range(size - 1):
        for j in range(size - 1):
            s = i + j - (2 * r - 2)
            if s >= 0 and s % 2 == 0:
                k = s // 2
                sign = -(-1) ** i if k == 0 else (-1) ** i
                sp[i][j] = sign * b[k]
    rot = RatMatrix([[0, -1], [1, 0]])
    big_a = rot if r == 1 else RatMatrix.direct_sum([rot, RatMatrix(ap)])
    big_s = RatMatrix.direct_sum([RatMatrix([[1]]), RatMatrix(sp)])
    target = companion(char)
    pair = ASPair(big_a, big_s)
    if pair.is_valid_for(target):
        return pair
    # the explicit pattern must reproduce the block; fall back to the
    # linear solve restricted to this block if it ever does not
    return factor(target)


def conjugate_pair(pair: ASPair, lam: RatMatrix) -> ASPair:
    """(L^-1 A L^-T, L^T S L), a factorization of L^-1 (A S) L."""
    if lam.shape != pair.a.shape:
        raise DimensionError("conjugator has the wrong size")
    inv = lam.inverse()
    return ASPair(inv @ pair.a @ inv.T, lam.T @ pair.s @ lam, pair.solution_dim)


def factor_via_frobenius(m: RatMatrix) -> ASPair:
    """Factor m block by block on its rational canonical form."""
    fr = frobenius(m)
    pairs = []
    for p in fr.invariant_factors:
        if p.degree % 2 or not p.is_even():
            raise NotHamiltonianError(f"invariant factor {p} is not even")
        pairs.append(factor_companion_block(p, p.degree // 2))
    block = ASPair(RatMatrix.direct_sum([q.a for q in pairs]),
                   RatMatrix.direct_sum([q.s for q in pairs]))
    # form = T^-1 m T, so m = T form T^-1
    return conjugate_pair(block, fr.transform.inverse())


def phase_variables(n: int, names: Sequence[str] | None = None) -> tuple[str, ...]:
    """Momenta then positions: ('p_x1', ..., 'x1', ...)."""
    names = list(names) if names is not None else [f"x{i + 1}" for i in range(n)]
    return tuple([f"p_{v}" for v in names] + names)


def to_structure(pair: ASPair, m: RatMatrix, names: Sequence[str] | None = None) -> HamiltonianStructure:
    if pair.a @ pair.s != m:
        raise ValueError("pair does not factor m")
    try:
        omega = pair.a.inverse()
    except SingularMatrixError as exc:
        raise ValueError("alternating factor is singular") from exc
    if omega @ m != pair.s:
        raise AssertionError("omega @ M != Hess(H)")
    variables = phase_variables(m.rows // 2, names)
    h = MultiPoly.quadratic_form(variables, pair.s)
    return HamiltonianStructure(omega, pair.s, h, pair.a, variables)


def structure_from_form(omega: RatMatrix, h: MultiPoly) -> tuple[RatMatrix, RatMatrix]:
    """Evolution matrix and bracket table generated by (omega, H)."""
    hess = h.hessian()
    inv = omega.inverse()
    return inv @ hess, inv
