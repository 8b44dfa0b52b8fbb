"""Exact rational linear algebra.

Scalars are ``gmpy2.mpq`` when gmpy2 is importable and
:class:`fractions.Fraction` otherwise; the two compare and hash alike.
Matrices are small, dense and immutable.  Nothing in this module touches floating point except the
explicit ``to_numpy`` export.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .errors import DimensionError, InconsistentSystemError, SingularMatrixError

try:
    from gmpy2 import mpq as Rational
except ImportError:  # pragma: no cover
    Rational = Fraction

_RATIONAL_TYPE = type(Rational(0))


def as_rational(value):
    if isinstance(value, _RATIONAL_TYPE):
        return value
    if isinstance(value, str):
        return Rational(value.strip().replace("−", "-"))
    return Rational(value)


class RatMatrix:
    """Dense immutable matrix of rationals.

    >>> m = RatMatrix([[1, 2], [3, 4]])
    >>> m.det() == -2
    True
    >>> (m @ m.inverse()) == RatMatrix.identity(2)
    True
    """

    __slots__ = ("_rows", "_shape", "_hash")

    def __init__(self, rows: Iterable[Iterable]):
        data = tuple(tuple(as_rational(x) for x in row) for row in rows)
        if not data:
            raise DimensionError("matrix must have at least one row")
        ncols = len(data[0])
        if ncols == 0 or any(len(r) != ncols for r in data):
            raise DimensionError("ragged or empty rows")
        self._rows = data
        self._shape = (len(data), ncols)
        self._hash = None

    @classmethod
    def _raw(cls, rows: tuple) -> "RatMatrix":
        obj = cls.__new__(cls)
        obj._rows = rows
        obj._shape = (len(rows), len(rows[0]))
        obj._hash = None
        return obj

    # constructors -------------------------------------------------------
    @classmethod
    def identity(cls, n: int) -> "RatMatrix":
        one, zero = Rational(1), Rational(0)
        return cls._raw(tuple(tuple(one if i == j else zero for j in range(n)) for i in range(n)))

    @classmethod
    def zeros(cls, rows: int, cols: int | None = None) -> "RatMatrix":
        cols = rows if cols is None else cols
        return cls._raw(tuple((Rational(0),) * cols for _ in range(rows)))

    @classmethod
    def diag(cls, values: Sequence) -> "RatMatrix":
        n = len(values)
        return cls([[values[i] if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def column(cls, values: Sequence) -> "RatMatrix":
        return cls([[v] for v in values])

    @classmethod
    def block(cls, grid: Sequence[Sequence["RatMatrix"]]) -> "RatMatrix":
        rows = []
        for brow in grid:
            h = brow[0].rows
            if any(b.rows != h for b in brow):
                raise DimensionError("block row heights differ")
            for i in range(h):
                rows.append(sum((b._rows[i] for b in brow), ()))
        return cls._raw(tuple(rows))

    @classmethod
    def direct_sum(cls, blocks: Sequence["RatMatrix"]) -> "RatMatrix":
        n = sum(b.rows for b in blocks)
        m = sum(b.cols for b in blocks)
        out = [[Rational(0)] * m for _ in range(n)]
        r = c = 0
        for b in blocks:
            for i in range(b.rows):
                for j in range(b.cols):
                    out[r + i][c + j] = b._rows[i][j]
            r += b.rows
            c += b.cols
        return cls._raw(tuple(tuple(row) for row in out))

    @classmethod
    def hstack(cls, mats: Sequence["RatMatrix"]) -> "RatMatrix":
        return cls.block([list(mats)])

    @classmethod
    def vstack(cls, mats: Sequence["RatMatrix"]) -> "RatMatrix":
        return cls.block([[m] for m in mats])

    # basic protocol -----------------------------------------------------
    @property
    def shape(self) -> tuple[int, int]:
        return self._shape

    @property
    def rows(self) -> int:
        return self._shape[0]

    @property
    def cols(self) -> int:
        return self._shape[1]

    def is_square(self) -> bool:
        return self.rows == self.cols

    def __getitem__(self, idx):
        i, j = idx
        return self._rows[i][j]

    def row(self, i: int) -> tuple:
        return self._rows[i]

    def col(self, j: int) -> tuple:
        return tuple(r[j] for r in self._rows)

    def tolist(self) -> list[list]:
        return [list(r) for r in self._rows]

    def entries(self) -> tuple:
        return tuple(x for r in self._rows for x in r)

    def __iter__(self):
        return iter(self._rows)

    def __eq__(self, other) -> bool:
        if not isinstance(other, RatMatrix):
            return NotImplemented
        return self._rows == other._rows

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self._rows)
        return self._hash

    def __repr__(self) -> str:
        return "RatMatrix(%s)" % [[str(x) for x in r] for r in self._rows]

    def __str__(self) -> str:
        cells = [[str(x) for x in r] for r in self._rows]
        w = max(len(c) for r in cells for c in r)
        return "\n".join("[" + " ".join(c.rjust(w) for c in r) + "]" for r in cells)

    # arithmetic ---------------------------------------------------------
    def _check_same(self, other: "RatMatrix"):
        if self.shape != other.shape:
            raise DimensionError(f"shape mismatch {self.shape} vs {other.shape}")

    def __add__(self, other: "RatMatrix") -> "RatMatrix":
        self._check_same(other)
        return RatMatrix._raw(tuple(tuple(a + b for a, b in zip(r, s))
                                    for r, s in zip(self._rows, other._rows)))

    def __sub__(self, other: "RatMatrix") -> "RatMatrix":
        self._check_same(other)
        return RatMatrix._raw(tuple(tuple(a - b for a, b in zip(r, s))
                                    for r, s in zip(self._rows, other._rows)))

    def __neg__(self) -> "RatMatrix":
        return RatMatrix._raw(tuple(tuple(-a for a in r) for r in self._rows))

    def __mul__(self, scalar) -> "RatMatrix":
        if isinstance(scalar, RatMatrix):
            raise TypeError("use @ for matrix products")
        c = as_rational(scalar)
        return RatMatrix._raw(tuple(tuple(c * a for a in r) for r in self._rows))

    __rmul__ = __mul__

    def __matmul__(self, other: "RatMatrix") -> "RatMatrix":
        return mat_mul(self, other)

    @property
    def T(self) -> "RatMatrix":
        return RatMatrix._raw(tuple(zip(*self._rows)))

    def submatrix(self, r0: int, r1: int, c0: int, c1: int) -> "RatMatrix":
        return RatMatrix._raw(tuple(r[c0:c1] for r in self._rows[r0:r1]))

    def split_blocks(self) -> tuple["RatMatrix", "RatMatrix", "RatMatrix", "RatMatrix"]:
        """Return the four n x n blocks of a 2n x 2n matrix."""
        if not self.is_square() or self.rows % 2:
            raise DimensionError("need an even-dimensional square matrix")
        n = self.rows // 2
        return (self.submatrix(0, n, 0, n), self.submatrix(0, n, n, 2 * n),
                self.submatrix(n, 2 * n, 0, n), self.submatrix(n, 2 * n, n, 2 * n))

    def is_symmetric(self) -> bool:
        return self.is_square() and self == self.T

    def is_alternating(self) -> bool:
        if not self.is_square():
            return False
        n = self.rows
        return all(self._rows[i][j] == -self._rows[j][i] for i in range(n) for j in range(i, n))

    def is_zero(self) -> bool:
        return all(x == 0 for r in self._rows for x in r)

    def det(self) -> "Rational":
        if not self.is_square():
            raise DimensionError("determinant of non-square matrix")
        a = [list(r) for r in self._rows]
        n = self.rows
        det = Rational(1)
        for k in range(n):
            piv = next((i for i in range(k, n) if a[i][k] != 0), None)
            if piv is None:
                return Rational(0)
            if piv != k:
                a[k], a[piv] = a[piv], a[k]
                det = -det
            p = a[k][k]
            det *= p
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    f = a[i][k] / p
                    ai, ak = a[i], a[k]
                    for j in range(k, n):
                        ai[j] -= f * ak[j]
        return det

    def is_invertible(self) -> bool:
        return self.is_square() and self.det() != 0

    def inverse(self) -> "RatMatrix":
        return mat_inverse(self)

    def rank(self) -> int:
        return len(rref(self)[1])

    def to_numpy(self) -> np.ndarray:
        return np.array([[float(x) for x in r] for r in self._rows], dtype=float)

    def to_strings(self) -> list[list[str]]:
        return [[str(x) for x in r] for r in self._rows]

    @classmethod
    def from_strings(cls, rows) -> "RatMatrix":
        return cls([[Rational(str(x)) for x in r] for r in rows])


def mat_mul(a: RatMatrix, b: RatMatrix) -> RatMatrix:
    if a.cols != b.rows:
        raise DimensionError(f"cannot multiply {a.shape} by {b.shape}")
    bt = tuple(zip(*b._rows))
    zero = Rational(0)
    out = []
    for r in a._rows:
        nz = [(k, x) for k, x in enumerate(r) if x]
        out.append(tuple(sum((x * c[k] for k, x in nz), zero) for c in bt))
    return RatMatrix._raw(tuple(out))


def mat_inverse(a: RatMatrix) -> RatMatrix:
    """Gauss-Jordan inverse; raises SingularMatrixError."""
    if not a.is_square():
        raise DimensionError("inverse of non-square matrix")
    n = a.rows
    aug = [list(r) + [Rational(int(i == j)) for j in range(n)] for i, r in enumerate(a._rows)]
    for k in range(n):
        piv = next((i for i in range(k, n) if aug[i][k] != 0), None)
        if piv is None:
            raise SingularMatrixError("matrix is singular")
        aug[k], aug[piv] = aug[piv], aug[k]
        p = aug[k][k]
        aug[k] = [x / p for x in aug[k]]
        for i in range(n):
            if i != k and aug[i][k] != 0:
                f = aug[i][k]
                ak = aug[k]
                aug[i] = [x - f * y for x, y in zip(aug[i], ak)]
    return RatMatrix._raw(tuple(tuple(r[n:]) for r in aug))


def rref(a: RatMatrix) -> tuple[list[list], list[int]]:
    """Reduced row echelon form and pivot columns."""
    m = [list(r) for r in a._rows]
    nrows, ncols = a.shape
    pivots = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        piv = next((i for i in range(r, nrows) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        p = m[r][c]
        if p != 1:
            m[r] = [x / p for x in m[r]]
        for i in range(nrows):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                mr = m[r]
                m[i] = [x - f * y for x, y in zip(m[i], mr)]
        pivots.append(c)
        r += 1
    return m, pivots


@dataclass(frozen=True)
class LinearSolution:
    """All solutions of ``a @ x = rhs``: ``particular + span(nullspace)``.

    ``nullspace`` holds column vectors; adding any combination of them to
    each column of ``particular`` gives another solution.
    """

    particular: RatMatrix
    nullspace: tuple[RatMatrix, ...]

    @property
    def dimension(self) -> int:
        return len(self.nullspace)


def nullspace(a: RatMatrix) -> list[RatMatrix]:
    """Basis of the right kernel, one column vector per free variable."""
    m, pivots = rref(a)
    ncols = a.cols
    free = [c for c in range(ncols) if c not in set(pivots)]
    basis = []
    for f in free:
        v = [Rational(0)] * ncols
        v[f] = Rational(1)
        for i, pc in enumerate(pivots):
            v[pc] = -m[i][f]
        basis.append(RatMatrix._raw(tuple((x,) for x in v)))
    return basis


def solve_linear(a: RatMatrix, rhs: RatMatrix) -> LinearSolution:
    if rhs.rows != a.rows:
        raise DimensionError(f"rhs has {rhs.rows} rows, matrix has {a.rows}")
    aug = RatMatrix.hstack([a, rhs])
    m, pivots = rref(aug)
    ncols = a.cols
    if any(p >= ncols for p in pivots):
        raise InconsistentSystemError("linear system has no solution")
    part = [[Rational(0)] * rhs.cols for _ in range(ncols)]
    for i, pc in enumerate(pivots):
        for k in range(rhs.cols):
            part[pc][k] = m[i][ncols + k]
    return LinearSolution(RatMatrix._raw(tuple(tuple(r) for r in part)), tuple(nullspace(a)))


class UniPoly:
    """Univariate polynomial with rational coefficients, ascending degree.

    >>> str(UniPoly([1, 1, 1]))
    't^2 + t + 1'
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        c = [as_rational(x) for x in coeffs]
        while c and c[-1] == 0:
            c.pop()
        self.coeffs = tuple(c)

    @classmethod
    def monomial(cls, degree: int, coeff=1) -> "UniPoly":
        return cls([0] * degree + [coeff])

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def lead(self) -> "Rational":
        return self.coeffs[-1] if self.coeffs else Rational(0)

    def coeff(self, k: int) -> "Rational":
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else Rational(0)

    def monic(self) -> "UniPoly":
        if self.is_zero():
            return self
        return UniPoly([x / self.lead for x in self.coeffs])

    def is_even(self) -> bool:
        return all(c == 0 for c in self.coeffs[1::2])

    def reflect(self) -> "UniPoly":
        """p(-t)."""
        return UniPoly([c if k % 2 == 0 else -c for k, c in enumerate(self.coeffs)])

    def __eq__(self, other) -> bool:
        if isinstance(other, UniPoly):
            return self.coeffs == other.coeffs
        return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    def __add__(self, other: "UniPoly") -> "UniPoly":
        n = max(len(self.coeffs), len(other.coeffs))
        return UniPoly([self.coeff(k) + other.coeff(k) for k in range(n)])

    def __neg__(self) -> "UniPoly":
        return UniPoly([-c for c in self.coeffs])

    def __sub__(self, other: "UniPoly") -> "UniPoly":
        return self + (-other)

    def __mul__(self, other) -> "UniPoly":
        if not isinstance(other, UniPoly):
            c = as_rational(other)
            return UniPoly([c * x for x in self.coeffs])
        if self.is_zero() or other.is_zero():
            return UniPoly()
        out = [Rational(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return UniPoly(out)

    __rmul__ = __mul__

    def __divmod__(self, other: "UniPoly") -> tuple["UniPoly", "UniPoly"]:
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = other.degree
        q = [Rational(0)] * max(len(rem) - dq, 1)
        lead = other.lead
        for k in range(len(rem) - 1, dq - 1, -1):
            c = rem[k] / lead
            if c:
                q[k - dq] = c
                for j, b in enumerate(other.coeffs):
                    rem[k - dq + j] -= c * b
        return UniPoly(q), UniPoly(rem[:dq] if dq > 0 else [])

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def __call__(self, t):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * t + c
        return acc

    def eval_matrix(self, m: RatMatrix) -> RatMatrix:
        n = m.rows
        acc = RatMatrix.zeros(n)
        for c in reversed(self.coeffs):
            acc = acc @ m + RatMatrix.identity(n) * c
        return acc

    def __repr__(self):
        return f"UniPoly({[str(c) for c in self.coeffs]})"

    def __str__(self):
        return self.render("t")

    def render(self, var: str = "t") -> str:
        if self.is_zero():
            return "0"
        parts = []
        for k in range(self.degree, -1, -1):
            c = self.coeffs[k]
            if c == 0:
                continue
            sign = "-" if c < 0 else "+"
            mag = abs(c)
            if k == 0:
                body = str(mag)
            else:
                mono = var if k == 1 else f"{var}^{k}"
                body = mono if mag == 1 else f"{mag}*{mono}"
            parts.append((sign, body))
        first_sign, first = parts[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out


def poly_gcd(a: UniPoly, b: UniPoly) -> UniPoly:
    while not b.is_zero():
        a, b = b, a % b
    return a.monic()


def poly_lcm(a: UniPoly, b: UniPoly) -> UniPoly:
    if a.is_zero() or b.is_zero():
        return UniPoly()
    return ((a * b) // poly_gcd(a, b)).monic()


def char_poly(m: RatMatrix) -> UniPoly:
    """Monic characteristic polynomial det(t*I - m) by Faddeev-LeVerrier."""
    if not m.is_square():
        raise DimensionError("characteristic polynomial of non-square matrix")
    n = m.rows
    coeffs = [Rational(0)] * (n + 1)
    coeffs[n] = Rational(1)
    eye = RatMatrix.identity(n)
    mk = RatMatrix.zeros(n)
    c = Rational(1)
    for k in range(1, n + 1):
        mk = m @ (mk + eye * c)
        c = -sum((mk[i, i] for i in range(n)), Rational(0)) / k
        coeffs[n - k] = c
    return UniPoly(coeffs)
