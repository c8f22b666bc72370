"""Parsing of germ specifications.

The surface syntax covers rational literals, the imaginary unit i, the
symbol tau (2 pi i), variables, + - * / ^ with explicit multiplication
only, parenthesized subexpressions, map tuples like (x + y^2, y), vector
fields written as coefficient terms suffixed by d/dx style derivations,
and one-forms with dx style suffixes:

    -(x - (1/tau)*y^2*z^5) d/dx - 3*y d/dy + z d/dz
    (x + y^2, y)
    3*y dx - x dy

Parsing produces a small expression AST; render gives back a canonical
string that reparses to an equal AST.  Binding turns the AST into the
exact germ objects, inferring the coordinate frame from the variables
used.  Division is restricted to constant monomial divisors (rationals,
i, powers of tau), which keeps everything inside the exact rings.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .errors import ParseError, UnknownVariable
from .germs import VectorFieldGerm
from .integrability import OneFormGerm
from .scalars import GaussianRational, TauScalar
from .series import DiffeoGerm, TruncatedSeries

VARIABLES = ("x", "y", "z", "t", "s", "x1", "x2", "x3")

FRAMES = (
    ("x", "y", "z"),
    ("x1", "x2", "x3"),
    ("x", "y"),
    ("t", "x"),
    ("s", "y"),
    ("x1", "x2"),
)

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<dir>d/d(?:x[123]?|y|z|t|s))
  | (?P<num>\d+)
  | (?P<ident>[A-Za-z][A-Za-z0-9]*)
  | (?P<op>[-+*/^(),])
    """,
    re.VERBOSE,
)

_FORMDIRS = {"d" + v: v for v in VARIABLES}


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    column: int


def _tokenize(text: str):
    tokens = []
    line = 1
    line_start = 0
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError(
                "unexpected character %r" % text[pos],
                line,
                pos - line_start + 1,
            )
        kind = m.lastgroup
        chunk = m.group()
        if kind == "ws":
            for idx, ch in enumerate(chunk):
                if ch == "\n":
                    line += 1
                    line_start = pos + idx + 1
        else:
            column = pos - line_start + 1
            if kind == "dir":
                tokens.append(Token("dir", chunk[3:], line, column))
            elif kind == "num":
                tokens.append(Token("num", chunk, line, column))
            elif kind == "ident":
                tokens.append(Token("ident", chunk, line, column))
            else:
                tokens.append(Token(chunk, chunk, line, column))
        pos = m.end()
    tokens.append(Token("eof", "", line, len(text) - line_start + 1))
    return tokens


# AST nodes.  Positions ride along for bind-time errors but do not take
# part in equality, so round-trip comparisons stay structural.

@dataclass(frozen=True)
class Num:
    value: int
    pos: tuple = field(default=(0, 0), compare=False, repr=False)


@dataclass(frozen=True)
class ImagUnit:
    pos: tuple = field(default=(0, 0), compare=False, repr=False)


@dataclass(frozen=True)
class Tau:
    pos: tuple = field(default=(0, 0), compare=False, repr=False)


@dataclass(frozen=True)
class Var:
    name: str
    pos: tuple = field(default=(0, 0), compare=False, repr=False)


@dataclass(frozen=True)
class Neg:
    inner: object
    pos: tuple = field(default=(0, 0), compare=False, repr=False)


@dataclass(frozen=True)
class Add:
    items: tuple
    pos: tuple = field(default=(0, 0), compare=False, repr=False)


@dataclass(frozen=True)
class Mul:
    items: tuple
    pos: tuple = field(default=(0, 0), compare=False, repr=False)


@dataclass(frozen=True)
class Div:
    numerator: object
    denominator: object
    pos: tuple = field(default=(0, 0), compare=False, repr=False)


@dataclass(frozen=True)
class Pow:
    base: object
    exponent: int
    pos: tuple = field(default=(0, 0), compare=False, repr=False)


@dataclass(frozen=True)
class MapSpec:
    components: tuple
    pos: tuple = field(default=(0, 0), compare=False, repr=False)


@dataclass(frozen=True)
class FieldSpec:
    terms: tuple  # pairs (expr, variable name)
    pos: tuple = field(default=(0, 0), compare=False, repr=False)


@dataclass(frozen=True)
class FormSpec:
    terms: tuple  # pairs (expr, variable name)
    pos: tuple = field(default=(0, 0), compare=False, repr=False)


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.index = 0

    def peek(self) -> Token:
        return self.tokens[self.index]

    def advance(self) -> Token:
        tok = self.tokens[self.index]
        self.index += 1
        return tok

    def expect(self, kind: str) -> Token:
        tok = self.peek()
        if tok.kind != kind:
            raise ParseError(
                "unexpected %s" % (repr(tok.text) if tok.text else "end of input"),
                tok.line,
                tok.column,
                expected=(kind,),
            )
        return self.advance()

    def fail(self, message: str, expected=()):
        tok = self.peek()
        raise ParseError(message, tok.line, tok.column, expected=tuple(expected))

    # -- grammar ----------------------------------------------------------

    def parse_input(self):
        """Tuple, vector field, one-form, or plain expression."""
        if self._looks_like_tuple():
            node = self._tuple()
        else:
            node = self._suffixed_sum()
        tok = self.peek()
        if tok.kind != "eof":
            self.fail("trailing input %r" % tok.text, expected=("end of input",))
        return node

    def _looks_like_tuple(self) -> bool:
        if self.peek().kind != "(":
            return False
        depth = 0
        for tok in self.tokens[self.index:]:
            if tok.kind == "(":
                depth += 1
            elif tok.kind == ")":
                depth -= 1
                if depth == 0:
                    return False
            elif tok.kind == "," and depth == 1:
                return True
            elif tok.kind == "eof":
                return False
        return False

    def _tuple(self):
        start = self.expect("(")
        comps = [self._sum()]
        while self.peek().kind == ",":
            self.advance()
            comps.append(self._sum())
        self.expect(")")
        return MapSpec(tuple(comps), pos=(start.line, start.column))

    def _suffixed_sum(self):
        """A sum whose additive terms may each carry a derivation (d/dx)
        or differential (dx) suffix; all terms must agree on the kind."""
        first = self.peek()
        terms = []
        sign = 1
        if self.peek().kind in ("+", "-"):
            sign = -1 if self.advance().kind == "-" else 1
        while True:
            expr = self._product()
            suffix = self._maybe_suffix()
            if sign < 0:
                expr = Neg(expr, pos=expr.pos)
            terms.append((expr, suffix))
            tok = self.peek()
            if tok.kind in ("+", "-"):
                sign = -1 if tok.kind == "-" else 1
                self.advance()
                continue
            break
        kinds = {None if suffix is None else suffix[0] for _, suffix in terms}
        if kinds == {None}:
            exprs = [e for e, _ in terms]
            node = exprs[0] if len(exprs) == 1 else Add(tuple(exprs), pos=(first.line, first.column))
            return node
        if None in kinds:
            self.fail(
                "every additive term needs a derivation or differential suffix"
                " once any term has one"
            )
        if len(kinds) > 1:
            self.fail("cannot mix d/dx derivations with dx differentials")
        kind = kinds.pop()
        pairs = tuple((e, s[1]) for e, s in terms)
        if kind == "dir":
            return FieldSpec(pairs, pos=(first.line, first.column))
        return FormSpec(pairs, pos=(first.line, first.column))

    def _maybe_suffix(self):
        tok = self.peek()
        if tok.kind == "dir":
            self.advance()
            return ("dir", tok.text)
        if tok.kind == "ident" and tok.text in _FORMDIRS:
            self.advance()
            return ("form", _FORMDIRS[tok.text])
        return None

    def _sum(self):
        first = self.peek()
        items = []
        sign = 1
        if self.peek().kind in ("+", "-"):
            sign = -1 if self.advance().kind == "-" else 1
        while True:
            expr = self._product()
            if sign < 0:
                expr = Neg(expr, pos=expr.pos)
            items.append(expr)
            tok = self.peek()
            if tok.kind in ("+", "-"):
                sign = -1 if tok.kind == "-" else 1
                self.advance()
                continue
            break
        if len(items) == 1:
            return items[0]
        return Add(tuple(items), pos=(first.line, first.column))

    def _product(self):
        node = self._factor()
        while True:
            tok = self.peek()
            if tok.kind == "*":
                self.advance()
                rhs = self._factor()
                if isinstance(node, Mul):
                    node = Mul(node.items + (rhs,), pos=node.pos)
                else:
                    node = Mul((node, rhs), pos=node.pos)
            elif tok.kind == "/":
                self.advance()
                rhs = self._factor()
                node = Div(node, rhs, pos=(tok.line, tok.column))
            else:
                return node

    def _factor(self):
        tok = self.peek()
        if tok.kind == "-":
            self.advance()
            return Neg(self._factor(), pos=(tok.line, tok.column))
        return self._power()

    def _power(self):
        base = self._atom()
        tok = self.peek()
        if tok.kind != "^":
            return base
        self.advance()
        sign = 1
        tok = self.peek()
        if tok.kind == "-":
            self.advance()
            sign = -1
        num = self.expect("num")
        return Pow(base, sign * int(num.text), pos=(num.line, num.column))

    def _atom(self):
        tok = self.peek()
        if tok.kind == "num":
            self.advance()
            return Num(int(tok.text), pos=(tok.line, tok.column))
        if tok.kind == "ident":
            self.advance()
            name = tok.text
            if name == "i":
                return ImagUnit(pos=(tok.line, tok.column))
            if name == "tau":
                return Tau(pos=(tok.line, tok.column))
            if name in VARIABLES:
                return Var(name, pos=(tok.line, tok.column))
            raise UnknownVariable(
                "unknown name %r at line %d column %d" % (name, tok.line, tok.column)
            )
        if tok.kind == "(":
            self.advance()
            inner = self._sum()
            self.expect(")")
            return inner
        self.fail(
            "unexpected %s" % (repr(tok.text) if tok.text else "end of input"),
            expected=("number", "name", "("),
        )


def parse_germ(text: str):
    """Parse a germ specification into its AST: a MapSpec, FieldSpec,
    FormSpec, or a bare expression node."""
    return _Parser(text).parse_input()


# -- rendering -------------------------------------------------------------

def _prec(node) -> int:
    if isinstance(node, Add):
        return 1
    if isinstance(node, (Mul, Div)):
        return 2
    if isinstance(node, Neg):
        return 3
    if isinstance(node, Pow):
        return 4
    return 5


def _render_expr(node, parent_prec=0) -> str:
    if isinstance(node, Num):
        out = str(node.value)
    elif isinstance(node, ImagUnit):
        out = "i"
    elif isinstance(node, Tau):
        out = "tau"
    elif isinstance(node, Var):
        out = node.name
    elif isinstance(node, Neg):
        out = "-" + _render_expr(node.inner, 3)
    elif isinstance(node, Add):
        first = node.items[0]
        if isinstance(first, Neg):
            parts = ["-" + _render_expr(first.inner, 2)]
        else:
            parts = [_render_expr(first, 1)]
        for item in node.items[1:]:
            if isinstance(item, Neg):
                parts.append(" - " + _render_expr(item.inner, 2))
            else:
                parts.append(" + " + _render_expr(item, 1))
        out = "".join(parts)
    elif isinstance(node, Mul):
        out = "*".join(_render_expr(item, 4) for item in node.items)
    elif isinstance(node, Div):
        out = "%s/%s" % (
            _render_expr(node.numerator, 4),
            _render_expr(node.denominator, 4),
        )
    elif isinstance(node, Pow):
        exp = str(node.exponent)
        out = "%s^%s" % (_render_expr(node.base, 5), exp)
    else:
        raise TypeError("not an expression node: %r" % (node,))
    if _prec(node) < parent_prec:
        return "(" + out + ")"
    return out


def render_germ(node) -> str:
    """Canonical text for an AST; reparses to an equal AST."""
    if isinstance(node, MapSpec):
        return "(" + ", ".join(_render_expr(c) for c in node.components) + ")"
    if isinstance(node, (FieldSpec, FormSpec)):
        mark = "d/d%s" if isinstance(node, FieldSpec) else "d%s"
        parts = []
        for idx, (expr, var) in enumerate(node.terms):
            body = expr
            lead = ""
            if isinstance(expr, Neg):
                body, lead = expr.inner, "-" if idx == 0 else "- "
            text = _render_expr(body, 2) + " " + (mark % var)
            if idx == 0:
                parts.append(lead + text)
            else:
                parts.append((lead or "+ ") + text)
        return " ".join(parts)
    return _render_expr(node)


# -- binding ---------------------------------------------------------------

def _bind_scalar(node) -> TauScalar:
    """Evaluate a variable-free expression to an exact scalar."""
    if isinstance(node, Num):
        return TauScalar.from_rational(node.value)
    if isinstance(node, ImagUnit):
        return TauScalar.coerce(GaussianRational(0, 1))
    if isinstance(node, Tau):
        return TauScalar.tau()
    if isinstance(node, Var):
        raise ParseError(
            "variable %r where a constant is required" % node.name,
            node.pos[0],
            node.pos[1],
        )
    if isinstance(node, Neg):
        return -_bind_scalar(node.inner)
    if isinstance(node, Add):
        total = TauScalar.zero()
        for item in node.items:
            total = total + _bind_scalar(item)
        return total
    if isinstance(node, Mul):
        total = TauScalar.one()
        for item in node.items:
            total = total * _bind_scalar(item)
        return total
    if isinstance(node, Div):
        den = _bind_scalar(node.denominator)
        if not den.is_monomial():
            raise ParseError(
                "division is only defined by nonzero monomial constants",
                node.pos[0],
                node.pos[1],
            )
        return _bind_scalar(node.numerator) * den.inverse()
    if isinstance(node, Pow):
        base = _bind_scalar(node.base)
        if node.exponent >= 0:
            out = TauScalar.one()
            for _ in range(node.exponent):
                out = out * base
            return out
        if not base.is_monomial():
            raise ParseError(
                "negative powers are only defined for monomial constants",
                node.pos[0],
                node.pos[1],
            )
        inv = base.inverse()
        out = TauScalar.one()
        for _ in range(-node.exponent):
            out = out * inv
        return out
    raise TypeError("not an expression node: %r" % (node,))


def _collect_variables(node, out: set):
    if isinstance(node, Var):
        out.add(node.name)
    elif isinstance(node, Neg):
        _collect_variables(node.inner, out)
    elif isinstance(node, (Add, Mul)):
        for item in node.items:
            _collect_variables(item, out)
    elif isinstance(node, Div):
        _collect_variables(node.numerator, out)
        _collect_variables(node.denominator, out)
    elif isinstance(node, Pow):
        _collect_variables(node.base, out)
    elif isinstance(node, (MapSpec,)):
        for c in node.components:
            _collect_variables(c, out)
    elif isinstance(node, (FieldSpec, FormSpec)):
        for expr, var in node.terms:
            _collect_variables(expr, out)
            out.add(var)


def infer_frame(names, dim: Optional[int] = None) -> tuple:
    """Smallest known coordinate frame containing all used names; a dim
    hint widens or narrows within the same family."""
    names = set(names)
    candidates = [f for f in FRAMES if names <= set(f)]
    if dim is not None:
        candidates = [f for f in candidates if len(f) == dim]
    if not candidates:
        raise UnknownVariable(
            "no coordinate frame of %s covers the variables %s"
            % ("dimension %d" % dim if dim else "any dimension", sorted(names))
        )
    return min(candidates, key=len)


def _bind_series(node, frame, order: int) -> TruncatedSeries:
    dim = len(frame)
    if isinstance(node, Num):
        return TruncatedSeries.constant(node.value, dim, order)
    if isinstance(node, ImagUnit):
        return TruncatedSeries.constant(GaussianRational(0, 1), dim, order)
    if isinstance(node, Tau):
        return TruncatedSeries.constant(TauScalar.tau(), dim, order)
    if isinstance(node, Var):
        return TruncatedSeries.variable(frame.index(node.name), dim, order)
    if isinstance(node, Neg):
        return -_bind_series(node.inner, frame, order)
    if isinstance(node, Add):
        total = TruncatedSeries.zero(dim, order)
        for item in node.items:
            total = total + _bind_series(item, frame, order)
        return total
    if isinstance(node, Mul):
        total = TruncatedSeries.constant(1, dim, order)
        for item in node.items:
            total = total * _bind_series(item, frame, order)
        return total
    if isinstance(node, Div):
        den = _bind_scalar(node.denominator)
        if not den.is_monomial():
            raise ParseError(
                "division is only defined by nonzero monomial constants",
                node.pos[0],
                node.pos[1],
            )
        return _bind_series(node.numerator, frame, order).scale(den.inverse())
    if isinstance(node, Pow):
        if node.exponent >= 0:
            return _bind_series(node.base, frame, order) ** node.exponent
        return TruncatedSeries.constant(_bind_scalar(node), dim, order)
    raise TypeError("not an expression node: %r" % (node,))


def bind_series(node, order: int, frame=None, dim: Optional[int] = None) -> TruncatedSeries:
    if frame is None:
        used = set()
        _collect_variables(node, used)
        frame = infer_frame(used, dim)
    return _bind_series(node, frame, order)


def bind_map(spec: MapSpec, order: int, frame=None) -> DiffeoGerm:
    if frame is None:
        used = set()
        _collect_variables(spec, used)
        frame = infer_frame(used, len(spec.components))
    if len(spec.components) != len(frame):
        raise ParseError(
            "map has %d components in a frame of dimension %d"
            % (len(spec.components), len(frame)),
            spec.pos[0],
            spec.pos[1],
        )
    return DiffeoGerm([_bind_series(c, frame, order) for c in spec.components])


def bind_vector_field(spec: FieldSpec, order: int, frame=None, dim=None) -> VectorFieldGerm:
    used = set()
    _collect_variables(spec, used)
    if frame is None:
        frame = infer_frame(used, dim)
    comps = {v: TruncatedSeries.zero(len(frame), order) for v in frame}
    for expr, var in spec.terms:
        if var not in comps:
            raise UnknownVariable(
                "derivation d/d%s outside the frame %s" % (var, "".join(frame))
            )
        comps[var] = comps[var] + _bind_series(expr, frame, order)
    return VectorFieldGerm([comps[v] for v in frame])


def bind_one_form(spec: FormSpec, order: int, frame=None, dim=None) -> OneFormGerm:
    used = set()
    _collect_variables(spec, used)
    if frame is None:
        frame = infer_frame(used, dim)
    comps = {v: TruncatedSeries.zero(len(frame), order) for v in frame}
    for expr, var in spec.terms:
        if var not in comps:
            raise UnknownVariable(
                "differential d%s outside the frame %s" % (var, "".join(frame))
            )
        comps[var] = comps[var] + _bind_series(expr, frame, order)
    return OneFormGerm([comps[v] for v in frame])


def parse_map(text: str, order: int, frame=None) -> DiffeoGerm:
    node = parse_germ(text)
    if not isinstance(node, MapSpec):
        raise ParseError("expected a map tuple like (x + y^2, y)", 1, 1)
    return bind_map(node, order, frame)


def parse_vector_field(text: str, order: int, frame=None, dim=None) -> VectorFieldGerm:
    node = parse_germ(text)
    if not isinstance(node, FieldSpec):
        raise ParseError("expected a vector field with d/dx style terms", 1, 1)
    return bind_vector_field(node, order, frame, dim)


def parse_one_form(text: str, order: int, frame=None, dim=None) -> OneFormGerm:
    node = parse_germ(text)
    if not isinstance(node, FormSpec):
        raise ParseError("expected a one-form with dx style terms", 1, 1)
    return bind_one_form(node, order, frame, dim)


def parse_scalar(text: str) -> TauScalar:
    node = parse_germ(text)
    return _bind_scalar(node)


def parse_gaussian_point(text: str):
    """Comma-separated exact coordinates, each a constant expression free
    of tau, e.g. '1/2, i/3'."""
    parts = text.split(",")
    out = []
    for part in parts:
        s = _bind_scalar(parse_germ(part.strip()))
        if not s.is_gaussian():
            raise ParseError("point coordinates cannot involve tau", 1, 1)
        out.append(s.as_gaussian())
    return tuple(out)
