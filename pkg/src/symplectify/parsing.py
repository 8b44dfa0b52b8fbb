"""Parser for second-order equations of motion written as text.

One equation per line (or separated by ``;``)::

    x'' + g*y' + x = x^2 - y^2
    y'' - g*x' + y = -2*x*y

A name followed by ``''`` declares a coordinate; equations are ordered by
the coordinate each one accelerates.  ``'`` marks a velocity.  Any other
name is a parameter and must be bound.  Terms linear in positions and
velocities form (B1, B2); the remaining position polynomial is the force
field f in x'' = B1 x' + B2 x + f(x).
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Mapping, Sequence

from .dynamics import PolyField
from .errors import EomSyntaxError, NonlinearVelocityError, SingularMatrixError, UnboundParameterError
from .exact import RatMatrix, Rational, as_rational
from .multipoly import MultiPoly
from .reduction import EquationsOfMotion

_ALIASES = {"γ": "g", "λ": "l", "−": "-", "–": "-", "·": "*", "′": "'", "″": "''"}

_TOKEN = re.compile(r"""
    (?P<ws>\s+)
  | (?P<num>\d+)
  | (?P<name>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<primes>'{1,2})
  | (?P<op>[-+*/^()=])
""", re.VERBOSE)


def normalize_name(name: str) -> str:
    for src, dst in _ALIASES.items():
        name = name.replace(src, dst)
    return name


def _normalize_text(text: str) -> str:
    for src, dst in _ALIASES.items():
        text = text.replace(src, dst)
    return text


@dataclass(frozen=True)
class _Tok:
    kind: str
    text: str
    col: int


def _tokenize(line: str, lineno: int) -> list[_Tok]:
    toks = []
    pos = 0
    while pos < len(line):
        m = _TOKEN.match(line, pos)
        if not m:
            raise EomSyntaxError(f"unexpected character {line[pos]!r}", lineno, pos + 1)
        kind = m.lastgroup
        if kind != "ws":
            toks.append(_Tok(kind, m.group(), pos + 1))
        pos = m.end()
    toks.append(_Tok("end", "", len(line) + 1))
    return toks


class _Parser:
    """Recursive-descent evaluator producing MultiPoly values."""

    def __init__(self, toks, lineno, variables, coords, params):
        self.toks = toks
        self.i = 0
        self.lineno = lineno
        self.vars = variables
        self.coords = coords
        self.params = params

    def peek(self) -> _Tok:
        return self.toks[self.i]

    def take(self) -> _Tok:
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def error(self, msg, tok=None):
        tok = tok or self.peek()
        return EomSyntaxError(msg, self.lineno, tok.col)

    def expect(self, text):
        tok = self.take()
        if tok.text != text:
            raise self.error(f"expected {text!r}, found {tok.text or 'end of line'!r}", tok)

    def equation(self):
        lhs = self.expr()
        self.expect("=")
        rhs = self.expr()
        if self.peek().kind != "end":
            raise self.error(f"unexpected {self.peek().text!r}")
        return lhs - rhs

    def expr(self):
        val = self.term()
        while self.peek().text in ("+", "-"):
            op = self.take().text
            rhs = self.term()
            val = val + rhs if op == "+" else val - rhs
        return val

    def term(self):
        val = self.unary()
        while self.peek().text in ("*", "/"):
            op_tok = self.take()
            rhs = self.unary()
            if op_tok.text == "*":
                val = val * rhs
            else:
                if rhs.degree() > 0:
                    raise self.error("division by a non-constant expression", op_tok)
                c = rhs.coeff((0,) * len(self.vars))
                if c == 0:
                    raise self.error("division by zero", op_tok)
                val = val * (1 / c)
        return val

    def unary(self):
        if self.peek().text == "-":
            self.take()
            return -self.unary()
        if self.peek().text == "+":
            self.take()
            return self.unary()
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek().text == "^":
            self.take()
            tok = self.take()
            if tok.kind != "num":
                raise self.error("exponent must be a non-negative integer", tok)
            base = base ** int(tok.text)
        return base

    def atom(self):
        tok = self.take()
        if tok.kind == "num":
            return MultiPoly.constant(self.vars, int(tok.text))
        if tok.text == "(":
            val = self.expr()
            self.expect(")")
            return val
        if tok.kind == "name":
            order = 0
            if self.peek().kind == "primes":
                order = len(self.take().text)
            if tok.text in self.coords:
                name = tok.text + "'" * order
                return MultiPoly.variables(self.vars)[self.vars.index(name)]
            if order:
                raise self.error(f"{tok.text!r} has no equation of its own", tok)
            if tok.text not in self.params:
                raise UnboundParameterError(tok.text, self.lineno, tok.col)
            return MultiPoly.constant(self.vars, self.params[tok.text])
        raise self.error(f"unexpected {tok.text or 'end of line'!r}", tok)


def split_lines(text: str | Sequence[str]) -> list[str]:
    if isinstance(text, str):
        text = [text]
    out = []
    for chunk in text:
        for piece in re.split(r"[;\n]", chunk):
            if piece.strip() and not piece.strip().startswith("#"):
                out.append(piece)
    return out


@dataclass(frozen=True)
class ParsedSystem:
    eom: EquationsOfMotion
    field: PolyField
    names: tuple[str, ...]


def parse_eom(text: str | Sequence[str], bindings: Mapping[str, object] | None = None) -> ParsedSystem:
    lines = [_normalize_text(line) for line in split_lines(text)]
    params = {normalize_name(k): as_rational(v) for k, v in (bindings or {}).items()}
    if not lines:
        raise EomSyntaxError("no equations given")
    tokens = [_tokenize(line, k + 1) for k, line in enumerate(lines)]

    coords: list[str] = []
    owner: list[str] = []
    for k, toks in enumerate(tokens):
        first = None
        for a, b in zip(toks, toks[1:]):
            if a.kind == "name" and b.text == "''":
                if a.text not in coords:
                    coords.append(a.text)
                if first is None:
                    first = a.text
        if first is None:
            raise EomSyntaxError("equation has no second derivative", k + 1, 1)
        owner.append(first)
    if sorted(owner) != sorted(coords) or len(set(owner)) != len(owner):
        raise EomSyntaxError("need exactly one equation per accelerated coordinate")
    n = len(coords)
    variables = tuple(coords) + tuple(c + "'" for c in coords) + tuple(c + "''" for c in coords)

    exprs = {}
    for k, toks in enumerate(tokens):
        parser = _Parser(toks, k + 1, variables, set(coords), params)
        exprs[owner[k]] = parser.equation()

    # expr_i = K x'' + C x' + D x + R(x)
    kmat = [[Rational(0)] * n for _ in range(n)]
    cmat = [[Rational(0)] * n for _ in range(n)]
    dmat = [[Rational(0)] * n for _ in range(n)]
    rest = []
    pos_names = tuple(coords)
    for i, name in enumerate(coords):
        r_terms = {}
        for e, c in exprs[name].terms.items():
            pos, vel, acc = e[:n], e[n:2 * n], e[2 * n:]
            deg = sum(e)
            if any(acc):
                if deg != 1:
                    raise NonlinearVelocityError(f"equation for {name}: nonlinear acceleration term")
                kmat[i][acc.index(1)] += c
            elif any(vel):
                if deg != 1:
                    raise NonlinearVelocityError(
                        f"equation for {name}: velocity-dependent nonlinearity is not supported")
                cmat[i][vel.index(1)] += c
            elif deg == 1:
                dmat[i][pos.index(1)] += c
            else:
                r_terms[pos] = c
        rest.append(MultiPoly(pos_names, r_terms))
    try:
        k_inv = RatMatrix(kmat).inverse()
    except SingularMatrixError as exc:
        raise EomSyntaxError("second-derivative coefficients are singular") from exc
    b1 = -(k_inv @ RatMatrix(cmat))
    b2 = -(k_inv @ RatMatrix(dmat))
    comps = []
    for i in range(n):
        acc = MultiPoly.zero(pos_names)
        for j in range(n):
            if k_inv[i, j]:
                acc = acc - rest[j] * k_inv[i, j]
        comps.append(acc)
    return ParsedSystem(EquationsOfMotion(b1, b2), PolyField(tuple(comps)), pos_names)


def _signed(coeff, body: str, first: bool) -> str:
    mag = abs(coeff)
    text = body if mag == 1 else f"{mag}*{body}"
    if first:
        return ("-" if coeff < 0 else "") + text
    return (" - " if coeff < 0 else " + ") + text


def render_eom(eom: EquationsOfMotion, field: PolyField | None = None,
               names: Sequence[str] | None = None) -> list[str]:
    """Text lines that :func:`parse_eom` maps back to the same (B1, B2, f)."""
    n = eom.n
    names = list(names) if names else [f"x{i + 1}" for i in range(n)]
    lines = []
    for i in range(n):
        lhs = names[i] + "''"
        for j in range(n):
            c = -eom.b1[i, j]
            if c:
                lhs += _signed(c, names[j] + "'", False)
        for j in range(n):
            c = -eom.b2[i, j]
            if c:
                lhs += _signed(c, names[j], False)
        rhs = "0"
        if field is not None and not field.components[i].is_zero():
            rhs = str(field.components[i].rename(names))
        lines.append(f"{lhs} = {rhs}")
    return lines


def eval_scalar(text, bindings: Mapping[str, object] | None = None) -> Rational:
    """Evaluate a constant expression such as ``-g/2`` or ``1 - l^2``."""
    if not isinstance(text, str):
        return as_rational(text)
    params = {normalize_name(k): as_rational(v) for k, v in (bindings or {}).items()}
    toks = _tokenize(_normalize_text(text), 1)
    parser = _Parser(toks, 1, (), set(), params)
    val = parser.expr()
    if parser.peek().kind != "end":
        raise parser.error(f"unexpected {parser.peek().text!r}")
    return val.coeff(())
