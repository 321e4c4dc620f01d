"""Pratt parser for the expression grammar.

Grammar summary: identifiers [a-zA-Z_][a-zA-Z0-9_]*; binary + - * / ^
with ^ right-associative at the highest precedence; unary minus;
parentheses; calls name(args).  `t` and `x` are the independent
variables, `u` and the spellings u_t, u_x, u_2x..u_10x, u_tx..u_t5x are
jet coordinates, calls like f(u) or alpha(t) are opaque function atoms,
diff(e, v[, k]) differentiates, exp/ln/sin/cos/arctan/sqrt are the
elementary functions, and any other identifier is a parameter.

pd(name, k1, ..., kn)(a1, ..., an) is the spelling for an atom with
partial-derivative tags whose arguments are not bare variables; the
printer only emits it in that case.
"""

import re
from fractions import Fraction

from .calculus import differentiate
from .exprs import Atom, ExprError, Jet, Rat, Sym, add, app, mul, pow_

_TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+(?:\.\d+)?)|(?P<name>[a-zA-Z_][a-zA-Z0-9_]*)|(?P<op>[-+*/^(),]))"
)

_JET = re.compile(r"u_(?:(t)|((?:[2-9]|10)?)x|t((?:[2-5])?)x)\Z")

ELEMENTARY = ("exp", "ln", "sin", "cos", "arctan", "sqrt")


class ParseError(ValueError):
    def __init__(self, message, offset):
        super().__init__(f"{message} (byte {offset})")
        self.offset = offset
        self.reason = message


def _tokenize(text):
    tokens = []
    pos = 0
    n = len(text)
    while pos < n:
        m = _TOKEN.match(text, pos)
        if not m or m.end() == m.start():
            stripped = text[pos:].lstrip()
            if not stripped:
                break
            raise ParseError(f"unexpected character {stripped[0]!r}", n - len(stripped))
        if m.lastgroup is None:
            pos = m.end()
            continue
        kind = m.lastgroup
        value = m.group(kind)
        tokens.append((kind, value, m.start(kind)))
        pos = m.end()
    tokens.append(("end", "", n))
    return tokens


def _jet_of(name):
    m = _JET.match(name)
    if not m:
        return None
    if m.group(1) is not None:
        return (1, 0)
    if m.group(2) is not None:
        return (0, int(m.group(2)) if m.group(2) else 1)
    return (1, int(m.group(3)) if m.group(3) else 1)


_BP_ADD = 10
_BP_MUL = 20
_BP_UNARY = 25
_BP_POW = 30


class _Parser:
    def __init__(self, text):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def next(self):
        t = self.tokens[self.i]
        self.i += 1
        return t

    def expect(self, op):
        kind, value, off = self.next()
        if kind != "op" or value != op:
            raise ParseError(f"expected {op!r}, found {value or 'end of input'!r}", off)

    def parse(self):
        e = self.expression(0)
        kind, value, off = self.peek()
        if kind != "end":
            raise ParseError(f"unexpected trailing {value!r}", off)
        return e

    def expression(self, min_bp):
        left = self.prefix()
        while True:
            kind, value, off = self.peek()
            if kind != "op" or value not in "+-*/^":
                break
            lbp = {"+": _BP_ADD, "-": _BP_ADD, "*": _BP_MUL, "/": _BP_MUL, "^": _BP_POW}[value]
            if lbp <= min_bp:
                break
            self.next()
            # ^ is right-associative, the rest left-associative
            right = self.expression(lbp - 1 if value == "^" else lbp)
            try:
                if value == "+":
                    left = add(left, right)
                elif value == "-":
                    left = add(left, mul(Rat(-1), right))
                elif value == "*":
                    left = mul(left, right)
                elif value == "/":
                    left = mul(left, pow_(right, Rat(-1)))
                else:
                    left = pow_(left, right)
            except ExprError as exc:
                raise ParseError(str(exc), off) from exc
        return left

    def prefix(self):
        kind, value, off = self.next()
        if kind == "num":
            return Rat(Fraction(value))
        if kind == "op" and value == "-":
            operand = self.expression(_BP_UNARY)
            return mul(Rat(-1), operand)
        if kind == "op" and value == "+":
            return self.expression(_BP_UNARY)
        if kind == "op" and value == "(":
            e = self.expression(0)
            self.expect(")")
            return e
        if kind == "name":
            nk, nv, noff = self.peek()
            if nk == "op" and nv == "(":
                return self.call(value, off)
            return self.name_expr(value, off)
        raise ParseError(f"unexpected {value or 'end of input'!r}", off)

    def name_expr(self, name, off):
        if name == "t" or name == "x":
            return Sym(name)
        jet = _jet_of(name) if name.startswith("u") else None
        if name == "u":
            return Jet(0, 0)
        if jet is not None:
            return Jet(*jet)
        return Sym(name)

    def call_args(self):
        self.expect("(")
        args = []
        kind, value, _ = self.peek()
        if kind == "op" and value == ")":
            self.next()
            return args
        while True:
            args.append(self.expression(0))
            kind, value, off = self.next()
            if kind == "op" and value == ")":
                return args
            if not (kind == "op" and value == ","):
                raise ParseError(f"expected ',' or ')', found {value or 'end of input'!r}", off)

    def call(self, name, off):
        if name == "diff":
            args = self.call_args()
            if len(args) not in (2, 3):
                raise ParseError("diff takes (expression, variable[, order])", off)
            target, var = args[0], args[1]
            if not isinstance(var, (Sym, Jet)):
                raise ParseError("diff variable must be t, x, u, a parameter or a jet coordinate", off)
            order = 1
            if len(args) == 3:
                if not isinstance(args[2], Rat) or args[2].value.denominator != 1 or args[2].value < 1:
                    raise ParseError("diff order must be a positive integer", off)
                order = int(args[2].value)
            return differentiate(target, var, order=order)
        if name == "pd":
            args = self.call_args()
            if len(args) < 2 or not isinstance(args[0], Sym):
                raise ParseError("pd takes (name, order, ...) followed by arguments", off)
            orders = []
            for a in args[1:]:
                if not isinstance(a, Rat) or a.value.denominator != 1 or a.value < 0:
                    raise ParseError("pd orders must be nonnegative integers", off)
                orders.append(int(a.value))
            fargs = self.call_args()
            if len(fargs) != len(orders):
                raise ParseError("pd argument count must match its orders", off)
            return Atom(args[0].name, tuple(fargs), tuple(orders))
        args = self.call_args()
        if name in ELEMENTARY:
            if len(args) != 1:
                raise ParseError(f"{name} takes one argument", off)
            return app(name, args[0])
        if not args:
            raise ParseError(f"function {name!r} needs at least one argument", off)
        return Atom(name, tuple(args))


def parse(text):
    """Parse an expression; raises ParseError with a byte offset."""
    if not isinstance(text, str):
        raise ParseError("input is not a string", 0)
    try:
        return _Parser(text).parse()
    except ExprError as exc:
        raise ParseError(str(exc), 0) from exc
