"""Rational canonical form and the Hamiltonian criterion.

A linear system xi' = M xi with M invertible admits a constant symplectic
form and quadratic Hamiltonian exactly when M is similar to -M.  Similarity
is decided by comparing invariant factors.
"""
from __future__ import annotations

import random
from dataclasses import dataclass

from .errors import DimensionError, SingularMError
from .exact import RatMatrix, Rational, UniPoly, char_poly, nullspace, solve_linear


@dataclass(frozen=True)
class FrobeniusForm:
    """``transform^-1 @ m @ transform == form``.

    ``invariant_factors`` are monic and ascending (each divides the next);
    ``form`` is the direct sum of their companion matrices in that order.
    """

    invariant_factors: tuple[UniPoly, ...]
    form: RatMatrix
    transform: RatMatrix


def companion(p: UniPoly) -> RatMatrix:
    """Companion matrix with ones on the subdiagonal and -coefficients in the last column."""
    p = p.monic()
    d = p.degree
    if d < 1:
        raise ValueError("companion matrix needs degree >= 1")
    rows = [[Rational(0)] * d for _ in range(d)]
    for i in range(1, d):
        rows[i][i - 1] = Rational(1)
    for i in range(d):
        rows[i][d - 1] = -p.coeff(i)
    return RatMatrix(rows)


def _unit(n: int, j: int) -> RatMatrix:
    return RatMatrix([[int(i == j)] for i in range(n)])


def _krylov(m: RatMatrix, v: RatMatrix) -> tuple[list[RatMatrix], UniPoly]:
    """Krylov vectors of v up to the first dependency and v's local minimal polynomial."""
    rows = [m.row(i) for i in range(m.rows)]
    vecs = [list(v.col(0))]
    reduced: list[tuple[int, list, list]] = []  # (pivot, echelon vector, combination)
    while True:
        k = len(vecs) - 1
        w = list(vecs[-1])
        combo = [Rational(0)] * k + [Rational(1)]
        for piv, r, c in reduced:
            if w[piv]:
                f = w[piv] / r[piv]
                w = [a - f * b for a, b in zip(w, r)]
                combo = [a - f * b for a, b in zip(combo, c + [Rational(0)] * (len(combo) - len(c)))]
        piv = next((i for i, x in enumerate(w) if x), None)
        if piv is None:
            krylov = [RatMatrix([[x] for x in vec]) for vec in vecs[:-1]]
            return krylov, UniPoly(combo)
        reduced.append((piv, w, combo))
        last = vecs[-1]
        vecs.append([sum((a * b for a, b in zip(row, last) if a), Rational(0)) for row in rows])


def _local_minpoly(m: RatMatrix, v: RatMatrix) -> UniPoly:
    return _krylov(m, v)[1]


def _max_vector(m: RatMatrix, rng: random.Random) -> tuple[list[RatMatrix], UniPoly]:
    """A vector whose local minimal polynomial annihilates m, with its Krylov data.

    Such a vector's polynomial is the minimal polynomial of m.  Random
    small-integer vectors succeed with probability close to one.
    """
    n = m.rows
    # e1 first: on a companion matrix it is cyclic with Krylov basis I
    candidates = [_unit(n, 0), RatMatrix([[1]] * n)] + [_unit(n, j) for j in range(1, n)]
    tries = 0
    while True:
        v = candidates[tries] if tries < len(candidates) else \
            RatMatrix([[rng.randint(-9, 9)] for _ in range(n)])
        tries += 1
        if v.is_zero():
            continue
        vecs, p = _krylov(m, v)
        if len(vecs) == n or p.eval_matrix(m).is_zero():
            return vecs, p


def minimal_polynomial(m: RatMatrix) -> UniPoly:
    return _max_vector(m, random.Random(0))[1]


def _cyclic_decomposition(m: RatMatrix, rng: random.Random) -> list[tuple[UniPoly, RatMatrix]]:
    """Split the space into cyclic subspaces, largest invariant factor first.

    Each entry is (polynomial, basis-columns) with the columns forming a
    Krylov basis v, Mv, ..., M^(d-1)v.
    """
    n = m.rows
    vecs, mu = _max_vector(m, rng)
    d = len(vecs)
    krylov = RatMatrix.hstack(vecs)
    if d == n:
        return [(mu, krylov)]
    # functional f with f(M^i v) = 0 for i < d-1 and f(M^(d-1) v) = 1; the
    # common kernel of f, fM, ..., fM^(d-1) is an invariant complement
    target = RatMatrix([[0]] * (d - 1) + [[1]])
    f = solve_linear(krylov.T, target).particular.T
    rows = [f]
    for _ in range(d - 1):
        rows.append(rows[-1] @ m)
    complement = RatMatrix.hstack(nullspace(RatMatrix.vstack(rows)))
    restricted = solve_linear(complement, m @ complement).particular
    rest = _cyclic_decomposition(restricted, rng)
    return [(mu, krylov)] + [(p, complement @ cols) for p, cols in rest]


def frobenius(m: RatMatrix, seed: int = 0) -> FrobeniusForm:
    if not m.is_square():
        raise DimensionError("Frobenius form of non-square matrix")
    rng = random.Random(seed)
    pieces = list(reversed(_cyclic_decomposition(m, rng)))
    factors = tuple(p for p, _ in pieces)
    form = RatMatrix.direct_sum([companion(p) for p in factors])
    transform = RatMatrix.hstack([cols for _, cols in pieces])
    return FrobeniusForm(factors, form, transform)


def invariant_factors(m: RatMatrix) -> tuple[UniPoly, ...]:
    return frobenius(m).invariant_factors


def similar(a: RatMatrix, b: RatMatrix) -> bool:
    if a.shape != b.shape:
        return False
    if char_poly(a) != char_poly(b):
        return False
    return invariant_factors(a) == invariant_factors(b)


def conjugator(a: RatMatrix, b: RatMatrix) -> RatMatrix:
    """Some L with L^-1 a L == b, assuming a and b are similar."""
    fa, fb = frobenius(a), frobenius(b)
    if fa.invariant_factors != fb.invariant_factors:
        raise ValueError("matrices are not similar")
    return fa.transform @ fb.transform.inverse()


def even_char_poly(m: RatMatrix) -> bool:
    if not m.is_square() or m.rows % 2:
        raise DimensionError("need an even-dimensional square matrix")
    return char_poly(m).is_even()


def is_hamiltonian_candidate(m: RatMatrix) -> bool:
    if not m.is_square() or m.rows % 2:
        raise DimensionError("need an even-dimensional square matrix")
    if m.det() == 0:
        raise SingularMError("the criterion needs an invertible evolution matrix")
    # cheap necessary condition first
    if not char_poly(m).is_even():
        return False
    return invariant_factors(m) == invariant_factors(-m)
