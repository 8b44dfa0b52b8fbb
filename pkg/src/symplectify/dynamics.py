"""Polynomial potentials and floating-point checks of the constructed structures.

Everything upstream is exact; rationals are converted to doubles once, when
a simulation starts.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .canonical import semicanonical_pair
from .errors import DimensionError, NotConservativeError, NumericFailure
from .exact import RatMatrix, Rational, UniPoly, char_poly
from .factorization import phase_variables
from .multipoly import MultiPoly
from .reduction import EquationsOfMotion

MAX_DEGREE = 6


@dataclass(frozen=True)
class PolyField:
    """Force f(x) added to the right-hand side of x'' = B1 x' + B2 x."""

    components: tuple[MultiPoly, ...]

    def __post_init__(self):
        comps = tuple(self.components)
        object.__setattr__(self, "components", comps)
        if comps:
            names = comps[0].vars
            if len(names) != len(comps) or any(c.vars != names for c in comps):
                raise DimensionError("force field needs one component per position variable")
            if any(c.degree() > MAX_DEGREE for c in comps):
                raise ValueError(f"force field degree exceeds {MAX_DEGREE}")

    @classmethod
    def zero(cls, names: Sequence[str]) -> "PolyField":
        return cls(tuple(MultiPoly.zero(names) for _ in names))

    @property
    def n(self) -> int:
        return len(self.components)

    @property
    def names(self) -> tuple[str, ...]:
        return self.components[0].vars if self.components else ()

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.components)

    def transform(self, mat: RatMatrix) -> "PolyField":
        """The field mat @ f."""
        out = []
        for i in range(self.n):
            acc = MultiPoly.zero(self.names)
            for j in range(self.n):
                if mat[i, j]:
                    acc = acc + self.components[j] * mat[i, j]
            out.append(acc)
        return PolyField(tuple(out))

    def compile(self):
        """Vectorised float evaluator x -> f(x) (shape (..., n))."""
        monos = sorted({e for c in self.components for e in c.terms})
        if not monos:
            return lambda x: np.zeros_like(np.asarray(x, dtype=float))
        exps = np.array(monos, dtype=float)
        coeffs = np.array([[float(c.coeff(e)) for c in self.components] for e in monos])

        def f(x):
            x = np.asarray(x, dtype=float)
            return np.prod(x[..., None, :] ** exps, axis=-1) @ coeffs

        return f

    def to_json(self) -> list:
        return [c.to_json() for c in self.components]


@dataclass
class Trajectory:
    times: np.ndarray
    states: np.ndarray
    h: float
    method: str = "rk4"
    variables: tuple[str, ...] = ()

    def write_csv(self, path, h_poly: MultiPoly | None = None):
        """Columns t, xi_1..xi_2n, H."""
        energy = _evaluate(h_poly, self.states) if h_poly is not None else None
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            names = list(self.variables) or [f"xi{i + 1}" for i in range(self.states.shape[1])]
            w.writerow(["t"] + names + (["H"] if energy is not None else []))
            for k, t in enumerate(self.times):
                row = [repr(float(t))] + [repr(float(v)) for v in self.states[k]]
                if energy is not None:
                    row.append(repr(float(energy[k])))
                w.writerow(row)


@dataclass
class StabilityReport:
    char_poly: UniPoly
    even: bool
    t_squared: list = field(default_factory=list)
    roots: list = field(default_factory=list)
    discriminant: Rational | None = None
    modes: list[str] = field(default_factory=list)

    @property
    def all_oscillatory(self) -> bool:
        return bool(self.modes) and all(m == "oscillatory" for m in self.modes)


def check_conservative(f: PolyField) -> bool:
    n = f.n
    for i in range(n):
        for j in range(i + 1, n):
            if f.components[i].diff(j) != f.components[j].diff(i):
                return False
    return True


def integrate_potential(f: PolyField, order: Sequence[int] | None = None) -> MultiPoly:
    """V with -grad V == f and V(0) == 0, integrating along coordinate axes.

    The path visits the axes in ``order`` (default x1, x2, ...); for a
    conservative field the result does not depend on it.
    """
    if not check_conservative(f):
        raise NotConservativeError("force field has a non-symmetric Jacobian")
    n = f.n
    order = list(range(n)) if order is None else list(order)
    v = MultiPoly.zero(f.names)
    for pos, k in enumerate(order):
        g = f.components[k]
        for later in order[pos + 1:]:
            g = g.substitute(later, 0)
        v = v - g.integrate(k)
    if [(-v).diff(k) for k in range(n)] != list(f.components):
        raise AssertionError("potential does not reproduce the force")
    return v


def nonlinear_hamiltonian(eom: EquationsOfMotion, f: PolyField, s1: RatMatrix,
                          names: Sequence[str] | None = None) -> tuple[MultiPoly, RatMatrix]:
    """Hamiltonian and omega for x'' = B1 x' + B2 x + f(x) on the standard form.

    Uses the semi-canonical pair, so H = 1/2 p^T S1 p + 1/2 x^T S2 x + W(x)
    where -grad W = S1 f.  Raises NotConservativeError if S1 f is not a
    gradient.
    """
    pair = semicanonical_pair(eom, s1)
    variables = phase_variables(eom.n, names or f.names or None)
    quad = MultiPoly.quadratic_form(variables, pair.s)
    if f.is_zero():
        return quad, pair.a.inverse()
    w = integrate_potential(f.transform(s1))
    return quad + w.embed(variables), pair.a.inverse()


def _evaluate(poly: MultiPoly, states: np.ndarray) -> np.ndarray:
    return np.asarray(poly.compile()(states), dtype=float)


def _poly_source(poly: MultiPoly, args: Sequence[str]) -> str:
    parts = []
    for e, c in poly.terms.items():
        factors = [repr(float(c))]
        for a, k in zip(args, e):
            factors.extend([a] * k)
        parts.append("*".join(factors))
    return " + ".join(parts) if parts else "0.0"


def _compile_rhs(mat: np.ndarray, f: PolyField | None):
    """Plain-float right-hand side; far cheaper than numpy for tiny states."""
    dim = mat.shape[0]
    n = dim // 2
    args = [f"s{i}" for i in range(dim)]
    lines = []
    for i in range(dim):
        terms = [f"{float(mat[i, j])!r}*{args[j]}" for j in range(dim) if mat[i, j] != 0.0]
        if f is not None and i < n and not f.components[i].is_zero():
            terms.append("(" + _poly_source(f.components[i], args[n:]) + ")")
        lines.append(" + ".join(terms) if terms else "0.0")
    src = "def rhs(%s):\n    return (%s,)\n" % (", ".join(args), ", ".join(lines))
    scope: dict = {}
    exec(compile(src, "<rhs>", "exec"), scope)
    return scope["rhs"]


def simulate(m: RatMatrix, f: PolyField | None, xi0: Sequence[float], h: float, t_end: float,
             variables: Sequence[str] = ()) -> Trajectory:
    """Classical RK4 on xi' = M xi + (f(x), 0) with xi = (p, x)."""
    if h <= 0 or t_end <= 0:
        raise ValueError("step and end time must be positive")
    dim = m.rows
    xi0 = np.array(xi0, dtype=float)
    if xi0.shape != (dim,):
        raise DimensionError(f"initial state has length {xi0.size}, expected {dim}")
    if f is not None and not f.is_zero() and f.n != dim // 2:
        raise DimensionError("force field dimension does not match the system")
    rhs = _compile_rhs(m.to_numpy(), f)
    steps = int(round(t_end / h))
    states = np.empty((steps + 1, dim))
    states[0] = xi0
    xi = tuple(float(v) for v in xi0)
    h2, h6 = 0.5 * h, h / 6.0
    isfinite = math.isfinite
    for k in range(steps):
        k1 = rhs(*xi)
        k2 = rhs(*[a + h2 * b for a, b in zip(xi, k1)])
        k3 = rhs(*[a + h2 * b for a, b in zip(xi, k2)])
        k4 = rhs(*[a + h * b for a, b in zip(xi, k3)])
        xi = tuple(a + h6 * (b + 2.0 * c + 2.0 * d + e)
                   for a, b, c, d, e in zip(xi, k1, k2, k3, k4))
        if not all(isfinite(v) for v in xi):
            t = (k + 1) * h
            raise NumericFailure(f"state became non-finite at t = {t:g}", time=t)
        states[k + 1] = xi
    times = np.arange(steps + 1) * h
    return Trajectory(times, states, h, "rk4", tuple(variables))


def observable_drift(traj: Trajectory, h_poly: MultiPoly) -> float:
    """max_t |H(t) - H(0)| / max(1, |H(0)|)."""
    if len(h_poly.vars) != traj.states.shape[1]:
        raise DimensionError("polynomial variables do not match the state layout")
    values = _evaluate(h_poly, traj.states)
    h0 = values[0]
    return float(np.max(np.abs(values - h0)) / max(1.0, abs(h0)))


def _classify_t_squared(s: complex, tol: float) -> str:
    if abs(s.imag) > tol * max(1.0, abs(s)):
        return "mixed"
    if s.real < -tol * max(1.0, abs(s)):
        return "oscillatory"
    if s.real > tol * max(1.0, abs(s)):
        return "growing"
    return "marginal"


def _classify_root(t: complex, tol: float) -> str:
    if t.real > tol:
        return "growing"
    if t.real < -tol:
        return "decaying"
    return "oscillatory"


def _quadratic_roots(a: float, b: float, c: float, disc: float) -> list[complex]:
    if disc >= 0:
        sq = math.sqrt(disc)
        q = -0.5 * (b + math.copysign(sq, b))
        if q == 0:
            return [0j, 0j]
        r1, r2 = q / a, c / q
        return sorted([complex(r1), complex(r2)], key=lambda z: z.real)
    sq = math.sqrt(-disc)
    return [complex(-b / (2 * a), -sq / (2 * a)), complex(-b / (2 * a), sq / (2 * a))]


def stability(m: RatMatrix, tol: float = 1e-12) -> StabilityReport:
    """Mode classification from the characteristic polynomial.

    For an even polynomial the roots are solved for in s = t^2: s < 0 is an
    oscillatory mode, s > 0 a growing/decaying pair, complex s a mixed
    (spiralling) quadruple.  Otherwise each root t is classified by the sign
    of its real part.
    """
    cp = char_poly(m)
    report = StabilityReport(cp, cp.is_even())
    if report.even:
        q = UniPoly(cp.coeffs[::2])
        if q.degree == 1:
            s_vals = [complex(float(-q.coeff(0) / q.coeff(1)))]
        elif q.degree == 2:
            a, b, c = q.coeff(2), q.coeff(1), q.coeff(0)
            disc = b * b - 4 * a * c
            report.discriminant = disc
            s_vals = _quadratic_roots(float(a), float(b), float(c), float(disc))
        else:
            s_vals = sorted((complex(z) for z in np.roots([float(x) for x in reversed(q.coeffs)])),
                            key=lambda z: (z.real, z.imag))
        report.t_squared = s_vals
        report.modes = [_classify_t_squared(s, tol) for s in s_vals]
        roots = []
        for s in s_vals:
            r = complex(np.sqrt(complex(s)))
            roots.extend([r, -r])
        report.roots = roots
    else:
        roots = [complex(z) for z in np.roots([float(x) for x in reversed(cp.coeffs)])]
        report.roots = roots
        report.modes = [_classify_root(t, tol) for t in roots]
    return report
