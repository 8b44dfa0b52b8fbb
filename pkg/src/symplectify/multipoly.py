"""Sparse multivariate polynomials with rational coefficients.

Used to display Hamiltonians, Lagrangians and potentials, and for the
nonlinear force fields handled by :mod:`symplectify.dynamics`.
"""
from __future__ import annotations

import numbers
from typing import Mapping, Sequence

import numpy as np

from .errors import DimensionError
from .exact import RatMatrix, Rational, as_rational


class MultiPoly:
    """Polynomial over a fixed, ordered tuple of variable names.

    Terms map exponent tuples to nonzero rational coefficients.

    >>> x, y = MultiPoly.variables(["x", "y"])
    >>> str(y**2 * x - Rational(1, 3) * x**3)
    '-1/3*x^3 + x*y^2'
    """

    __slots__ = ("vars", "terms")

    def __init__(self, variables: Sequence[str], terms: Mapping[tuple, object] | None = None):
        self.vars = tuple(variables)
        clean = {}
        for exps, c in (terms or {}).items():
            exps = tuple(int(e) for e in exps)
            if len(exps) != len(self.vars):
                raise DimensionError("exponent length does not match variable count")
            c = as_rational(c)
            if c:
                clean[exps] = clean.get(exps, Rational(0)) + c
                if not clean[exps]:
                    del clean[exps]
        self.terms = clean

    # construction -------------------------------------------------------
    @classmethod
    def constant(cls, variables: Sequence[str], value) -> "MultiPoly":
        return cls(variables, {(0,) * len(variables): value})

    @classmethod
    def zero(cls, variables: Sequence[str]) -> "MultiPoly":
        return cls(variables)

    @classmethod
    def variables(cls, variables: Sequence[str]) -> list["MultiPoly"]:
        n = len(variables)
        return [cls(variables, {tuple(int(i == k) for i in range(n)): 1}) for k in range(n)]

    @classmethod
    def quadratic_form(cls, variables: Sequence[str], hessian: RatMatrix) -> "MultiPoly":
        """The polynomial ``1/2 * v^T hessian v``."""
        n = len(variables)
        if hessian.shape != (n, n):
            raise DimensionError("hessian size does not match variables")
        terms = {}
        half = Rational(1, 2)
        for i in range(n):
            for j in range(n):
                c = hessian[i, j]
                if c:
                    e = [0] * n
                    e[i] += 1
                    e[j] += 1
                    e = tuple(e)
                    terms[e] = terms.get(e, Rational(0)) + half * c
        return cls(variables, terms)

    @classmethod
    def bilinear(cls, variables: Sequence[str], left: Sequence[int], matrix: RatMatrix,
                 right: Sequence[int]) -> "MultiPoly":
        """``u^T matrix w`` with u, w the variables at the given indices."""
        n = len(variables)
        terms: dict = {}
        for a, i in enumerate(left):
            for b, j in enumerate(right):
                c = matrix[a, b]
                if c:
                    e = [0] * n
                    e[i] += 1
                    e[j] += 1
                    e = tuple(e)
                    terms[e] = terms.get(e, Rational(0)) + c
        return cls(variables, terms)

    # protocol -----------------------------------------------------------
    def _coerce(self, other) -> "MultiPoly":
        if isinstance(other, MultiPoly):
            if other.vars != self.vars:
                raise DimensionError(f"variable mismatch {self.vars} vs {other.vars}")
            return other
        return MultiPoly.constant(self.vars, other)

    def __eq__(self, other) -> bool:
        if isinstance(other, MultiPoly):
            return self.vars == other.vars and self.terms == other.terms
        if isinstance(other, numbers.Rational) or isinstance(other, type(Rational(0))):
            return self == MultiPoly.constant(self.vars, other)
        return NotImplemented

    def __hash__(self):
        return hash((self.vars, frozenset(self.terms.items())))

    def __add__(self, other) -> "MultiPoly":
        other = self._coerce(other)
        terms = dict(self.terms)
        for e, c in other.terms.items():
            terms[e] = terms.get(e, Rational(0)) + c
        return MultiPoly(self.vars, terms)

    __radd__ = __add__

    def __neg__(self) -> "MultiPoly":
        return MultiPoly(self.vars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other) -> "MultiPoly":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "MultiPoly":
        return self._coerce(other) - self

    def __mul__(self, other) -> "MultiPoly":
        if not isinstance(other, MultiPoly):
            c = as_rational(other)
            return MultiPoly(self.vars, {e: c * v for e, v in self.terms.items()})
        other = self._coerce(other)
        terms: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                terms[e] = terms.get(e, Rational(0)) + c1 * c2
        return MultiPoly(self.vars, terms)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "MultiPoly":
        if not isinstance(k, int) or k < 0:
            raise ValueError("only non-negative integer powers")
        out = MultiPoly.constant(self.vars, 1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __repr__(self) -> str:
        return f"MultiPoly({self.vars!r}, {str(self)!r})"

    # queries --------------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def coeff(self, exps: Sequence[int]) -> "Rational":
        return self.terms.get(tuple(exps), Rational(0))

    def monomial_coeff(self, **powers: int) -> "Rational":
        """Coefficient by variable name, e.g. ``h.monomial_coeff(x=1, p_y=1)``."""
        e = [0] * len(self.vars)
        for name, k in powers.items():
            e[self.vars.index(name)] = k
        return self.coeff(e)

    def homogeneous(self, degree: int) -> "MultiPoly":
        return MultiPoly(self.vars, {e: c for e, c in self.terms.items() if sum(e) == degree})

    def depends_on(self, index: int) -> bool:
        return any(e[index] for e in self.terms)

    # calculus -------------------------------------------------------------
    def diff(self, var: int | str) -> "MultiPoly":
        k = self.vars.index(var) if isinstance(var, str) else var
        terms = {}
        for e, c in self.terms.items():
            if e[k]:
                ne = list(e)
                ne[k] -= 1
                terms[tuple(ne)] = c * e[k]
        return MultiPoly(self.vars, terms)

    def gradient(self) -> list["MultiPoly"]:
        return [self.diff(k) for k in range(len(self.vars))]

    def hessian(self) -> RatMatrix:
        """Constant Hessian of the quadratic part (evaluated at the origin)."""
        n = len(self.vars)
        rows = []
        for i in range(n):
            di = self.diff(i)
            rows.append([di.diff(j).coeff((0,) * n) for j in range(n)])
        return RatMatrix(rows)

    def integrate(self, var: int | str) -> "MultiPoly":
        k = self.vars.index(var) if isinstance(var, str) else var
        terms = {}
        for e, c in self.terms.items():
            ne = list(e)
            ne[k] += 1
            terms[tuple(ne)] = c / ne[k]
        return MultiPoly(self.vars, terms)

    def substitute(self, var: int | str, value) -> "MultiPoly":
        """Replace one variable by a rational constant."""
        k = self.vars.index(var) if isinstance(var, str) else var
        v = as_rational(value)
        terms: dict = {}
        for e, c in self.terms.items():
            ne = list(e)
            p = ne[k]
            ne[k] = 0
            ne = tuple(ne)
            terms[ne] = terms.get(ne, Rational(0)) + c * v ** p
        return MultiPoly(self.vars, terms)

    def rename(self, variables: Sequence[str]) -> "MultiPoly":
        if len(variables) != len(self.vars):
            raise DimensionError("rename must keep the variable count")
        return MultiPoly(variables, self.terms)

    def embed(self, variables: Sequence[str]) -> "MultiPoly":
        """Re-express over a superset of variables (matched by name)."""
        index = [list(variables).index(v) for v in self.vars]
        terms = {}
        for e, c in self.terms.items():
            ne = [0] * len(variables)
            for i, k in zip(index, e):
                ne[i] = k
            terms[tuple(ne)] = c
        return MultiPoly(variables, terms)

    # evaluation -----------------------------------------------------------
    def evaluate(self, point: Sequence) -> "Rational":
        acc = Rational(0)
        for e, c in self.terms.items():
            term = c
            for v, k in zip(point, e):
                if k:
                    term *= as_rational(v) ** k
            acc += term
        return acc

    def compile(self):
        """Return a fast float evaluator ``f(x) -> float`` (vectorised over rows)."""
        if not self.terms:
            return lambda x: np.zeros(np.shape(x)[:-1]) if np.ndim(x) > 1 else 0.0
        exps = np.array(list(self.terms.keys()), dtype=float)
        coeffs = np.array([float(c) for c in self.terms.values()])

        def f(x):
            x = np.asarray(x, dtype=float)
            return np.prod(x[..., None, :] ** exps, axis=-1) @ coeffs

        return f

    # display --------------------------------------------------------------
    def __str__(self) -> str:
        if not self.terms:
            return "0"
        order = sorted(self.terms, key=lambda e: (-sum(e), tuple(-k for k in e)))
        out = ""
        for idx, e in enumerate(order):
            c = self.terms[e]
            mono = "*".join(v if k == 1 else f"{v}^{k}" for v, k in zip(self.vars, e) if k)
            mag = abs(c)
            if not mono:
                body = str(mag)
            elif mag == 1:
                body = mono
            else:
                body = f"{mag}*{mono}"
            if idx == 0:
                out = ("-" if c < 0 else "") + body
            else:
                out += (" - " if c < 0 else " + ") + body
        return out

    def to_json(self) -> dict:
        return {"vars": list(self.vars),
                "terms": [[list(e), str(c)] for e, c in sorted(self.terms.items())],
                "text": str(self)}

    @classmethod
    def from_json(cls, data: dict) -> "MultiPoly":
        return cls(data["vars"], {tuple(e): Rational(c) for e, c in data["terms"]})
