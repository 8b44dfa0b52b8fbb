"""End-to-end analysis of one system: criterion, factorization, reduction,
canonical form, Lagrangian, potential and numerical checks.

:func:`run` never raises on mathematical failures; it records them in the
report together with every result computed before the failing stage, and
sets ``exit_code`` accordingly.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from typing import Any, Mapping

import numpy as np

from .canonical import build_canonical, build_lagrangian, solve_s1
from .criterion import frobenius, is_hamiltonian_candidate
from .dynamics import (PolyField, integrate_potential, nonlinear_hamiltonian,
                       observable_drift, simulate, stability)
from .errors import (CanonicalNotFoundError, DimensionError, EomSyntaxError, NonlinearVelocityError,
                     NotConservativeError, NotHamiltonianError, NumericFailure, SingularM21Error,
                     SingularMError, UnboundParameterError)
from .exact import RatMatrix, Rational, UniPoly, char_poly
from .factorization import factor, phase_variables, to_structure
from .multipoly import MultiPoly
from .parsing import eval_scalar, normalize_name, parse_eom, render_eom
from .reduction import EquationsOfMotion, extract_eom, is_admissible, standardize

EXIT_OK = 0
EXIT_NOT_HAMILTONIAN = 2
EXIT_NOT_ADMISSIBLE = 3
EXIT_PARSE = 4
EXIT_NUMERIC = 5

STAGES = ("check", "factor", "standardize", "canonical", "lagrangian", "potential", "simulate")


@dataclass(frozen=True)
class SimulationConfig:
    xi0: tuple[float, ...] | None = None
    h: float = 1e-3
    t_end: float = 10.0


@dataclass(frozen=True)
class ProblemSpec:
    """One system to analyse, given as EOM text or as matrices.

    ``matrix`` holds the parsed matrix JSON ({"n", "M"} or {"n", "B1", "B2"});
    entries may be integers, "p/q" strings or expressions in the parameters.
    """

    eom_text: tuple[str, ...] | None = None
    matrix: Mapping[str, Any] | None = None
    params: Mapping[str, Any] = field(default_factory=dict)
    names: tuple[str, ...] | None = None
    upto: str = "potential"
    simulation: SimulationConfig | None = None
    seed: int = 0

    def __post_init__(self):
        if (self.eom_text is None) == (self.matrix is None):
            raise ValueError("give exactly one of eom_text or matrix")
        if self.upto not in STAGES:
            raise ValueError(f"unknown stage {self.upto!r}")

    def with_params(self, **updates) -> "ProblemSpec":
        params = dict(self.params)
        params.update(updates)
        return replace(self, params=params)

    @classmethod
    def from_matrix_json(cls, data: Mapping[str, Any], **kw) -> "ProblemSpec":
        params = dict(data.get("params", {}))
        params.update(kw.pop("params", {}) or {})
        return cls(matrix=dict(data), params=params, **kw)


@dataclass
class Report:
    spec: ProblemSpec
    names: tuple[str, ...] = ()
    m: RatMatrix | None = None
    force: PolyField | None = None
    char_poly: UniPoly | None = None
    invariant_factors: tuple[UniPoly, ...] = ()
    verdict: bool | None = None
    pair: Any = None
    structure: Any = None
    eom: EquationsOfMotion | None = None
    m_std: RatMatrix | None = None
    lam: RatMatrix | None = None
    canonical: Any = None
    lagrangian: Any = None
    potential: MultiPoly | None = None
    nonlinear_h: MultiPoly | None = None
    nonlinear_omega: RatMatrix | None = None
    stability: Any = None
    trajectory: Any = None
    drift: float | None = None
    notes: list[str] = field(default_factory=list)
    errors: list[tuple[str, str]] = field(default_factory=list)
    exit_code: int = EXIT_OK

    def fail(self, stage: str, exc: Exception, code: int) -> "Report":
        self.errors.append((stage, f"{type(exc).__name__}: {exc}"))
        if self.exit_code == EXIT_OK:
            self.exit_code = code
        return self

    @property
    def observable(self) -> MultiPoly | None:
        """The conserved quantity used for drift: nonlinear H if any, else the quadratic H."""
        if self.nonlinear_h is not None:
            return self.nonlinear_h
        return self.structure.h if self.structure is not None else None


def _matrix_from(entries, params) -> RatMatrix:
    return RatMatrix([[eval_scalar(x, params) for x in row] for row in entries])


def _load_input(spec: ProblemSpec) -> tuple[RatMatrix, PolyField | None, tuple[str, ...], EquationsOfMotion | None]:
    if spec.eom_text is not None:
        parsed = parse_eom(list(spec.eom_text), spec.params)
        names = tuple(spec.names) if spec.names else parsed.names
        f = parsed.field if not parsed.field.is_zero() else None
        return parsed.eom.standard_matrix(), f, names, parsed.eom
    data = spec.matrix
    if "M" in data:
        m = _matrix_from(data["M"], spec.params)
        eom = None
    elif "B1" in data and "B2" in data:
        eom = EquationsOfMotion(_matrix_from(data["B1"], spec.params), _matrix_from(data["B2"], spec.params))
        m = eom.standard_matrix()
    else:
        raise DimensionError("matrix input needs 'M' or both 'B1' and 'B2'")
    if not m.is_square() or m.rows % 2:
        raise DimensionError("evolution matrix must be square of even size")
    n = m.rows // 2
    if "n" in data and int(data["n"]) != n:
        raise DimensionError(f"declared n = {data['n']} but matrix is {m.rows} x {m.cols}")
    names = tuple(spec.names or data.get("names") or [f"x{i + 1}" for i in range(n)])
    return m, None, names, eom


def _reached(spec: ProblemSpec, stage: str) -> bool:
    return STAGES.index(spec.upto) >= STAGES.index(stage)


def run(spec: ProblemSpec) -> Report:
    report = Report(spec)
    try:
        m, f, names, _ = _load_input(spec)
    except (EomSyntaxError, UnboundParameterError, NonlinearVelocityError, DimensionError, ValueError) as exc:
        return report.fail("parse", exc, EXIT_PARSE)
    report.m, report.force, report.names = m, f, names
    report.char_poly = char_poly(m)

    # criterion
    try:
        report.verdict = is_hamiltonian_candidate(m)
    except SingularMError as exc:
        return report.fail("check", exc, EXIT_NOT_ADMISSIBLE)
    report.invariant_factors = frobenius(m, seed=spec.seed).invariant_factors
    if not report.verdict:
        report.exit_code = EXIT_NOT_HAMILTONIAN
        return report
    if not _reached(spec, "factor"):
        return report

    try:
        report.pair = factor(m, seed=spec.seed)
    except NotHamiltonianError as exc:  # pragma: no cover - criterion accepted
        return report.fail("factor", exc, EXIT_NOT_HAMILTONIAN)
    report.structure = to_structure(report.pair, m, names)
    report.stability = stability(m)
    if not _reached(spec, "standardize"):
        return report

    if not is_admissible(m):
        return report.fail("standardize", SingularM21Error("lower-left block M21 is singular"),
                           EXIT_NOT_ADMISSIBLE)
    report.eom = extract_eom(m)
    report.m_std, report.lam = standardize(m)
    if not _reached(spec, "canonical"):
        return report

    s1, force_ok = None, True
    try:
        s1 = solve_s1(report.eom, seed=spec.seed, field=f)
    except CanonicalNotFoundError as exc:
        if f is not None:
            # the linear part may still be canonical; the force is then the obstruction
            force_ok = False
            try:
                s1 = solve_s1(report.eom, seed=spec.seed)
            except CanonicalNotFoundError:
                pass
        if s1 is None:
            report.notes.append(f"no canonical form: {exc}; the (H, omega) pair above still applies")
    if s1 is not None:
        report.canonical = build_canonical(report.eom, s1, names)
        if _reached(spec, "lagrangian"):
            report.lagrangian = build_lagrangian(report.eom, s1, names)

    if f is not None and _reached(spec, "potential"):
        if s1 is None:
            return report.fail("potential", CanonicalNotFoundError(
                "a nonlinear force needs S1 to place the potential"), EXIT_NOT_HAMILTONIAN)
        if not force_ok:
            return report.fail("potential", NotConservativeError(
                "no admissible S1 makes S1 f the gradient of a potential"), EXIT_NOT_HAMILTONIAN)
        try:
            report.potential = integrate_potential(f.transform(s1))
            report.nonlinear_h, report.nonlinear_omega = nonlinear_hamiltonian(report.eom, f, s1, names)
        except NotConservativeError as exc:
            return report.fail("potential", exc, EXIT_NOT_HAMILTONIAN)

    if spec.simulation is not None:
        cfg = spec.simulation
        xi0 = cfg.xi0 if cfg.xi0 is not None else tuple([0.0] * len(names) + [0.1] * len(names))
        try:
            report.trajectory = simulate(m, f, xi0, cfg.h, cfg.t_end, phase_variables(len(names), names))
            report.drift = observable_drift(report.trajectory, report.observable)
        except NumericFailure as exc:
            return report.fail("simulate", exc, EXIT_NUMERIC)
        except DimensionError as exc:
            return report.fail("simulate", exc, EXIT_PARSE)
    return report


# ---------------------------------------------------------------------------
# built-in systems

DEMOS: dict[str, ProblemSpec] = {
    "damped": ProblemSpec(eom_text=("x'' + g*x' + x = 0",), params={"g": 1}),
    "bateman": ProblemSpec(
        eom_text=("x'' + g*x' + x = -l*y", "y'' - g*y' + y = -l*x"),
        params={"g": 1, "l": "1/2"}),
    "dual": ProblemSpec(
        eom_text=("x'' + g*y' + x = -l*y", "y'' - g*x' + y = -l*x"),
        params={"g": 1, "l": "1/2"}),
    "interaction": ProblemSpec(
        eom_text=("x1'' + g1*x1' + x1 = -l1*x2 - l2*y2",
                  "y1'' - g1*y1' + y1 = -l2*x2 - l1*y2",
                  "x2'' + g2*x2' + x2 = -l1*x1 - l2*y1",
                  "y2'' - g2*y2' + y2 = -l2*x1 - l1*y1"),
        params={"g1": 1, "g2": "1/2", "l1": "1/3", "l2": "1/4"}),
    "henon-heiles": ProblemSpec(
        eom_text=("x'' + g*y' + x = x^2 - y^2", "y'' - g*x' + y = -2*x*y"),
        params={"g": "1/10"},
        simulation=SimulationConfig(xi0=(0.0, 0.0, 0.1, 0.1), h=1e-3, t_end=100.0)),
}

DEMO_EXIT_CODES = {"damped": EXIT_NOT_HAMILTONIAN, "bateman": EXIT_OK, "dual": EXIT_OK,
                   "interaction": EXIT_OK, "henon-heiles": EXIT_OK}


def demo_spec(name: str, simulate_: bool = False, **overrides) -> ProblemSpec:
    """The named demo; without ``simulate_`` its simulation block is dropped."""
    if name not in DEMOS:
        raise KeyError(f"unknown demo {name!r}; choose from {', '.join(DEMOS)}")
    spec = DEMOS[name]
    if simulate_:
        spec = replace(spec, upto="simulate",
                       simulation=spec.simulation or SimulationConfig())
    else:
        spec = replace(spec, simulation=None)
    return replace(spec, **overrides) if overrides else spec


# ---------------------------------------------------------------------------
# serialization

def _rat(x) -> dict:
    x = Rational(x)
    return {"type": "rational", "exact": str(x), "float": float(x)}


def _mat(m: RatMatrix | None):
    if m is None:
        return None
    return {"type": "matrix", "exact": m.to_strings(), "float": m.to_numpy().tolist()}


def _uni(p: UniPoly | None, var: str = "t"):
    if p is None:
        return None
    return {"type": "unipoly", "coeffs": [str(c) for c in p.coeffs], "text": p.render(var),
            "float": [float(c) for c in p.coeffs]}


def _poly(p: MultiPoly | None):
    if p is None:
        return None
    out = p.to_json()
    out["type"] = "poly"
    return out


def _cplx(z: complex) -> list[float]:
    return [float(z.real), float(z.imag)]


def report_to_dict(report: Report) -> dict:
    spec = report.spec
    out: dict[str, Any] = {
        "input": {
            "eom": list(spec.eom_text) if spec.eom_text else None,
            "matrix": dict(spec.matrix) if spec.matrix else None,
            "params": {normalize_name(k): str(Rational(eval_scalar(v))) for k, v in spec.params.items()},
            "seed": spec.seed,
        },
        "exit_code": report.exit_code,
        "verdict": report.verdict,
        "names": list(report.names),
        "evolution_matrix": _mat(report.m),
        "char_poly": _uni(report.char_poly),
        "invariant_factors": [_uni(p) for p in report.invariant_factors],
        "errors": [{"stage": s, "message": msg} for s, msg in report.errors],
        "notes": list(report.notes),
    }
    if report.force is not None:
        out["force_field"] = [_poly(c) for c in report.force.components]
    if report.pair is not None:
        out["factorization"] = {"A": _mat(report.pair.a), "S": _mat(report.pair.s),
                                "solution_dim": report.pair.solution_dim}
    st = report.structure
    if st is not None:
        out["structure"] = {
            "variables": list(st.variables), "omega": _mat(st.omega), "hessian": _mat(st.hessian),
            "bracket_table": _mat(st.bracket_table), "H": _poly(st.h), "two_form": st.two_form(),
            "brackets": [{"u": u, "v": v, "value": _rat(c)} for (u, v), c in st.nonzero_brackets().items()],
        }
    if report.eom is not None:
        out["eom"] = {"B1": _mat(report.eom.b1), "B2": _mat(report.eom.b2),
                      "text": render_eom(report.eom, report.force, report.names)}
        out["standard"] = {"M_std": _mat(report.m_std), "Lambda": _mat(report.lam)}
    c = report.canonical
    if c is not None:
        out["canonical"] = {"S1": _mat(c.s1), "S2": _mat(c.s2), "X": _mat(c.x_mat),
                            "H_can_matrix": _mat(c.h_can_matrix), "H_can": _poly(c.h_can),
                            "M_can": _mat(c.m_can), "p_link": {"T": _mat(c.p_link.t), "X": _mat(c.p_link.x)}}
    lg = report.lagrangian
    if lg is not None:
        out["lagrangian"] = {"kinetic": _mat(lg.kinetic), "cross": _mat(lg.cross),
                             "potential": _mat(lg.potential), "L": _poly(lg.l)}
    if report.potential is not None:
        out["potential"] = {"V": _poly(report.potential), "H": _poly(report.nonlinear_h),
                            "omega": _mat(report.nonlinear_omega)}
    sr = report.stability
    if sr is not None:
        out["stability"] = {"even": sr.even, "t_squared": [_cplx(s) for s in sr.t_squared],
                            "roots": [_cplx(r) for r in sr.roots],
                            "discriminant": _rat(sr.discriminant) if sr.discriminant is not None else None,
                            "modes": list(sr.modes), "all_oscillatory": sr.all_oscillatory}
    if report.trajectory is not None:
        tr = report.trajectory
        out["simulation"] = {"method": tr.method, "h": tr.h, "t_end": float(tr.times[-1]),
                             "steps": int(len(tr.times) - 1), "drift": report.drift,
                             "final_state": tr.states[-1].tolist()}
    return out


def _decode(obj):
    if isinstance(obj, dict):
        kind = obj.get("type")
        if kind == "matrix":
            return RatMatrix.from_strings(obj["exact"])
        if kind == "rational":
            return Rational(obj["exact"])
        if kind == "unipoly":
            return UniPoly([Rational(c) for c in obj["coeffs"]])
        if kind == "poly":
            return MultiPoly.from_json(obj)
        return {k: _decode(v) for k, v in obj.items()}
    if isinstance(obj, list):
        return [_decode(v) for v in obj]
    return obj


def write_report_json(report: Report, path) -> None:
    with open(path, "w") as fh:
        json.dump(report_to_dict(report), fh, indent=2)


def load_report(path) -> dict:
    """Read a JSON report back with exact values (matrices, polynomials, rationals)."""
    with open(path) as fh:
        return _decode(json.load(fh))


# ---------------------------------------------------------------------------
# human-readable output

def _fmt_matrix(m: RatMatrix, indent: str = "    ") -> str:
    exact = m.to_strings()
    width = max(len(x) for r in exact for x in r)
    lines = [indent + "[" + "  ".join(x.rjust(width) for x in r) + "]" for r in exact]
    floats = m.to_numpy()
    lines.append(indent + "~ " + np.array2string(floats, precision=6, suppress_small=True,
                                                  separator=", ").replace("\n", "\n" + indent + "  "))
    return "\n".join(lines)


def format_report(report: Report) -> str:
    out = []
    add = out.append
    if report.m is not None:
        add(f"variables: {', '.join(phase_variables(len(report.names), report.names))}")
        add("evolution matrix M:")
        add(_fmt_matrix(report.m))
    if report.char_poly is not None:
        add(f"characteristic polynomial: {report.char_poly.render('t')}")
    if report.invariant_factors:
        add("invariant factors: " + ", ".join(p.render("t") for p in report.invariant_factors))
    if report.verdict is not None:
        add("verdict: " + ("Hamiltonian (M is similar to -M)" if report.verdict
                           else "NOT Hamiltonian (M is not similar to -M)"))
    if report.pair is not None:
        add(f"factorization M = A S (solution space dimension {report.pair.solution_dim}):")
        add("  A ="), add(_fmt_matrix(report.pair.a))
        add("  S ="), add(_fmt_matrix(report.pair.s))
    st = report.structure
    if st is not None:
        add(f"H = {st.h}")
        add(f"omega = {st.two_form()}")
        brackets = st.nonzero_brackets()
        add("Poisson brackets: " + ", ".join(f"{{{u}, {v}}} = {c}" for (u, v), c in brackets.items()))
    if report.eom is not None:
        add("equations of motion x'' = B1 x' + B2 x" + (" + f(x)" if report.force is not None else "") + ":")
        for line in render_eom(report.eom, report.force, report.names):
            add("    " + line)
        add("standard form M_std (L^-1 M L):"), add(_fmt_matrix(report.m_std))
    c = report.canonical
    if c is not None:
        add("canonical form (omega = sum dp_i ^ dx_i):")
        add("  S1 ="), add(_fmt_matrix(c.s1))
        add(f"  H_can = {c.h_can}")
    lg = report.lagrangian
    if lg is not None:
        add(f"Lagrangian L = {lg.l}")
    if report.potential is not None:
        add(f"potential V = {report.potential}")
        add(f"nonlinear H = {report.nonlinear_h}")
    sr = report.stability
    if sr is not None:
        if sr.even:
            vals = ", ".join(f"{s.real:.12g}" + (f"{s.imag:+.12g}j" if s.imag else "") for s in sr.t_squared)
            add(f"stability: t^2 = {vals}; modes: {', '.join(sr.modes)}")
            if sr.discriminant is not None:
                add(f"  discriminant in t^2: {sr.discriminant}")
        else:
            add(f"stability (odd char poly): modes {', '.join(sr.modes)}")
    if report.trajectory is not None:
        tr = report.trajectory
        add(f"simulation: RK4, h = {tr.h:g}, t_end = {tr.times[-1]:g}, relative drift of H = {report.drift:.3e}")
    for note in report.notes:
        add(f"note: {note}")
    for stage, msg in report.errors:
        add(f"error [{stage}]: {msg}")
    add(f"exit code: {report.exit_code}")
    return "\n".join(out)
