"""Scalar expression language: parsing, evaluation, symbolic differentiation.

Grammar (whitespace insensitive, left-associative binaries):

    expr   := term (('+'|'-') term)*
    term   := unary (('*'|'/') unary)*
    unary  := '-' unary | power
    power  := atom ('^' exponent)*        # '^' binds tighter than unary '-'
    atom   := NUMBER | VARIABLE | FUNC '(' expr ')' | '(' expr ')'

The exponent of '^' must fold to a numeric constant, so differentiation stays
inside the grammar. Supported functions: sin cos sinh cosh tan tanh exp log
sqrt. The public contract is a single variable ``s``; internally the parser
accepts a caller-specified variable tuple (used for the null-cone direction
functions of (s, t, w)).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError, ExprSyntaxError, UnknownFunctionError

FUNCTIONS = {
    "sin": math.sin,
    "cos": math.cos,
    "sinh": math.sinh,
    "cosh": math.cosh,
    "tan": math.tan,
    "tanh": math.tanh,
    "exp": math.exp,
    "log": math.log,
    "sqrt": math.sqrt,
}


class Expr:
    """Immutable expression tree node."""

    __slots__ = ()

    def __str__(self) -> str:
        return _to_str(self, 0)

    def __call__(self, **env: float) -> float:
        return evaluate(self, **env)


@dataclass(frozen=True, slots=True)
class Const(Expr):
    value: float


@dataclass(frozen=True, slots=True)
class Var(Expr):
    name: str


@dataclass(frozen=True, slots=True)
class Neg(Expr):
    arg: Expr


@dataclass(frozen=True, slots=True)
class Add(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True, slots=True)
class Sub(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True, slots=True)
class Mul(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True, slots=True)
class Div(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True, slots=True)
class Pow(Expr):
    """base ^ exponent with a constant exponent."""

    base: Expr
    exponent: float


@dataclass(frozen=True, slots=True)
class Call(Expr):
    func: str
    arg: Expr


# ---------------------------------------------------------------------------
# tokenizer / parser

_OPS = set("+-*/^()")


def _tokenize(text):
    tokens = []  # (kind, value, offset)
    i, n = 0, len(text)
    while i < n:
        c = text[i]
        if c.isspace():
            i += 1
            continue
        if c in _OPS:
            tokens.append(("op", c, i))
            i += 1
            continue
        if c.isdigit() or c == ".":
            j = i
            seen_dot = False
            while j < n and (text[j].isdigit() or (text[j] == "." and not seen_dot)):
                seen_dot = seen_dot or text[j] == "."
                j += 1
            # exponent part like 1.5e-3
            if j < n and text[j] in "eE":
                k = j + 1
                if k < n and text[k] in "+-":
                    k += 1
                if k < n and text[k].isdigit():
                    while k < n and text[k].isdigit():
                        k += 1
                    j = k
            try:
                value = float(text[i:j])
            except ValueError:
                raise ExprSyntaxError(f"bad number {text[i:j]!r}", i)
            tokens.append(("num", value, i))
            i = j
            continue
        if c.isalpha() or c == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            tokens.append(("name", text[i:j], i))
            i = j
            continue
        raise ExprSyntaxError(f"unexpected character {c!r}", i)
    tokens.append(("end", "", n))
    return tokens


class _Parser:
    def __init__(self, tokens, variables):
        self.tokens = tokens
        self.pos = 0
        self.variables = variables

    def peek(self):
        return self.tokens[self.pos]

    def advance(self):
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect_op(self, op):
        kind, value, offset = self.peek()
        if kind != "op" or value != op:
            raise ExprSyntaxError(f"expected {op!r}", offset)
        return self.advance()

    def parse_expr(self):
        node = self.parse_term()
        while True:
            kind, value, _ = self.peek()
            if kind == "op" and value in "+-":
                self.advance()
                rhs = self.parse_term()
                node = Add(node, rhs) if value == "+" else Sub(node, rhs)
            else:
                return node

    def parse_term(self):
        node = self.parse_unary()
        while True:
            kind, value, _ = self.peek()
            if kind == "op" and value in "*/":
                self.advance()
                rhs = self.parse_unary()
                node = Mul(node, rhs) if value == "*" else Div(node, rhs)
            else:
                return node

    def parse_unary(self):
        kind, value, _ = self.peek()
        if kind == "op" and value == "-":
            self.advance()
            return Neg(self.parse_unary())
        return self.parse_power()

    def parse_power(self):
        node = self.parse_atom()
        while True:
            kind, value, offset = self.peek()
            if kind == "op" and value == "^":
                self.advance()
                # allow a leading sign on the exponent atom
                sign = 1.0
                k, v, _ = self.peek()
                while k == "op" and v == "-":
                    self.advance()
                    sign = -sign
                    k, v, _ = self.peek()
                exp_node = fold(self.parse_atom())
                if not isinstance(exp_node, Const):
                    raise ExprSyntaxError("exponent must be a constant", offset)
                node = Pow(node, sign * exp_node.value)
            else:
                return node

    def parse_atom(self):
        kind, value, offset = self.advance()
        if kind == "num":
            return Const(value)
        if kind == "name":
            k, v, _ = self.peek()
            if k == "op" and v == "(":
                if value not in FUNCTIONS:
                    raise UnknownFunctionError(f"unknown function {value!r}")
                self.advance()
                arg = self.parse_expr()
                self.expect_op(")")
                return Call(value, arg)
            if value in self.variables:
                return Var(value)
            raise ExprSyntaxError(f"unknown variable {value!r}", offset)
        if kind == "op" and value == "(":
            node = self.parse_expr()
            self.expect_op(")")
            return node
        raise ExprSyntaxError(f"unexpected token {value!r}" if value else "unexpected end of input", offset)


def parse(text: str, variables: tuple[str, ...] = ("s",)) -> Expr:
    """Parse expression text into a tree. Raises ExprSyntaxError/UnknownFunctionError."""
    parser = _Parser(_tokenize(text), variables)
    node = parser.parse_expr()
    kind, value, offset = parser.peek()
    if kind != "end":
        raise ExprSyntaxError(f"trailing input {value!r}", offset)
    return fold(node)


# ---------------------------------------------------------------------------
# evaluation

def _eval(node, env):
    if isinstance(node, Const):
        return node.value
    if isinstance(node, Var):
        try:
            return env[node.name]
        except KeyError:
            raise DomainError(f"no value supplied for variable {node.name!r}")
    if isinstance(node, Neg):
        return -_eval(node.arg, env)
    if isinstance(node, Add):
        return _eval(node.left, env) + _eval(node.right, env)
    if isinstance(node, Sub):
        return _eval(node.left, env) - _eval(node.right, env)
    if isinstance(node, Mul):
        return _eval(node.left, env) * _eval(node.right, env)
    if isinstance(node, Div):
        denom = _eval(node.right, env)
        if denom == 0.0:
            raise DomainError("division by zero")
        return _eval(node.left, env) / denom
    if isinstance(node, Pow):
        return math.pow(_eval(node.base, env), node.exponent)
    if isinstance(node, Call):
        return FUNCTIONS[node.func](_eval(node.arg, env))
    raise TypeError(f"not an Expr node: {node!r}")


def evaluate(expr: Expr, **env: float) -> float:
    """IEEE evaluation; raises DomainError instead of returning NaN/Inf."""
    try:
        value = _eval(expr, env)
    except (ValueError, OverflowError, ZeroDivisionError) as exc:
        raise DomainError(str(exc)) from exc
    if not math.isfinite(value):
        raise DomainError(f"non-finite value {value!r}")
    return value


def compile_expr(expr: Expr, variables: tuple[str, ...] = ("s",)):
    """Compile to a fast positional callable. Math errors propagate raw."""
    src = _to_python(expr)
    namespace = {f"_{name}": fn for name, fn in FUNCTIONS.items()}
    namespace["_pow"] = math.pow
    code = f"lambda {', '.join(variables)}: {src}"
    return eval(code, namespace)  # code generated from our own AST


def _to_python(node):
    if isinstance(node, Const):
        return repr(node.value)
    if isinstance(node, Var):
        return node.name
    if isinstance(node, Neg):
        return f"(-{_to_python(node.arg)})"
    if isinstance(node, Add):
        return f"({_to_python(node.left)} + {_to_python(node.right)})"
    if isinstance(node, Sub):
        return f"({_to_python(node.left)} - {_to_python(node.right)})"
    if isinstance(node, Mul):
        return f"({_to_python(node.left)} * {_to_python(node.right)})"
    if isinstance(node, Div):
        return f"({_to_python(node.left)} / {_to_python(node.right)})"
    if isinstance(node, Pow):
        return f"_pow({_to_python(node.base)}, {node.exponent!r})"
    if isinstance(node, Call):
        return f"_{node.func}({_to_python(node.arg)})"
    raise TypeError(f"not an Expr node: {node!r}")


# ---------------------------------------------------------------------------
# differentiation and constant folding

def differentiate(expr: Expr, var: str = "s") -> Expr:
    """Exact symbolic derivative, constant-folded."""
    return fold(_diff(expr, var))


_CHAIN = {
    "sin": lambda u: Call("cos", u),
    "cos": lambda u: Neg(Call("sin", u)),
    "sinh": lambda u: Call("cosh", u),
    "cosh": lambda u: Call("sinh", u),
    "tan": lambda u: Div(Const(1.0), Pow(Call("cos", u), 2.0)),
    "tanh": lambda u: Sub(Const(1.0), Pow(Call("tanh", u), 2.0)),
    "exp": lambda u: Call("exp", u),
    "log": lambda u: Div(Const(1.0), u),
    "sqrt": lambda u: Div(Const(1.0), Mul(Const(2.0), Call("sqrt", u))),
}


def _diff(node, var):
    if isinstance(node, Const):
        return Const(0.0)
    if isinstance(node, Var):
        return Const(1.0 if node.name == var else 0.0)
    if isinstance(node, Neg):
        return Neg(_diff(node.arg, var))
    if isinstance(node, Add):
        return Add(_diff(node.left, var), _diff(node.right, var))
    if isinstance(node, Sub):
        return Sub(_diff(node.left, var), _diff(node.right, var))
    if isinstance(node, Mul):
        return Add(Mul(_diff(node.left, var), node.right),
                   Mul(node.left, _diff(node.right, var)))
    if isinstance(node, Div):
        return Div(Sub(Mul(_diff(node.left, var), node.right),
                       Mul(node.left, _diff(node.right, var))),
                   Pow(node.right, 2.0))
    if isinstance(node, Pow):
        c = node.exponent
        if c == 0.0:
            return Const(0.0)
        return Mul(Mul(Const(c), Pow(node.base, c - 1.0)), _diff(node.base, var))
    if isinstance(node, Call):
        return Mul(_CHAIN[node.func](node.arg), _diff(node.arg, var))
    raise TypeError(f"not an Expr node: {node!r}")


def fold(node: Expr) -> Expr:
    """Constant folding plus trivial 0/1 identities; no other simplification."""
    if isinstance(node, (Const, Var)):
        return node
    if isinstance(node, Neg):
        a = fold(node.arg)
        if isinstance(a, Const):
            return Const(-a.value)
        if isinstance(a, Neg):
            return a.arg
        return Neg(a)
    if isinstance(node, (Add, Sub, Mul, Div)):
        a, b = fold(node.left), fold(node.right)
        if isinstance(a, Const) and isinstance(b, Const):
            if isinstance(node, Add):
                return Const(a.value + b.value)
            if isinstance(node, Sub):
                return Const(a.value - b.value)
            if isinstance(node, Mul):
                return Const(a.value * b.value)
            if b.value != 0.0:
                return Const(a.value / b.value)
            return Div(a, b)  # keep; evaluation reports the division by zero
        if isinstance(node, Add):
            if isinstance(a, Const) and a.value == 0.0:
                return b
            if isinstance(b, Const) and b.value == 0.0:
                return a
            return Add(a, b)
        if isinstance(node, Sub):
            if isinstance(b, Const) and b.value == 0.0:
                return a
            if isinstance(a, Const) and a.value == 0.0:
                return Neg(b)
            return Sub(a, b)
        if isinstance(node, Mul):
            for u, v in ((a, b), (b, a)):
                if isinstance(u, Const):
                    if u.value == 0.0:
                        return Const(0.0)
                    if u.value == 1.0:
                        return v
                    if u.value == -1.0:
                        return fold(Neg(v))
            return Mul(a, b)
        if isinstance(b, Const) and b.value == 1.0:
            return a
        if isinstance(a, Const) and a.value == 0.0 and not (isinstance(b, Const) and b.value == 0.0):
            return Const(0.0)
        return Div(a, b)
    if isinstance(node, Pow):
        base = fold(node.base)
        if node.exponent == 1.0:
            return base
        if node.exponent == 0.0:
            return Const(1.0)
        if isinstance(base, Const):
            try:
                return Const(math.pow(base.value, node.exponent))
            except (ValueError, OverflowError):
                return Pow(base, node.exponent)
        return Pow(base, node.exponent)
    if isinstance(node, Call):
        arg = fold(node.arg)
        if isinstance(arg, Const):
            try:
                return Const(FUNCTIONS[node.func](arg.value))
            except (ValueError, OverflowError):
                return Call(node.func, arg)
        return Call(node.func, arg)
    raise TypeError(f"not an Expr node: {node!r}")


def variables_of(expr: Expr) -> frozenset[str]:
    if isinstance(expr, Var):
        return frozenset((expr.name,))
    if isinstance(expr, Const):
        return frozenset()
    if isinstance(expr, Neg):
        return variables_of(expr.arg)
    if isinstance(expr, (Add, Sub, Mul, Div)):
        return variables_of(expr.left) | variables_of(expr.right)
    if isinstance(expr, Pow):
        return variables_of(expr.base)
    if isinstance(expr, Call):
        return variables_of(expr.arg)
    raise TypeError(f"not an Expr node: {expr!r}")


# precedence levels for printing: + - (1), * / (2), unary - (3), ^ (4)
def _to_str(node, parent_prec):
    if isinstance(node, Const):
        v = node.value
        text = repr(int(v)) if v == int(v) and abs(v) < 1e15 else repr(v)
        return f"({text})" if v < 0 and parent_prec > 1 else text
    if isinstance(node, Var):
        return node.name
    if isinstance(node, Neg):
        inner = f"-{_to_str(node.arg, 3)}"
        return f"({inner})" if parent_prec > 2 else inner
    if isinstance(node, (Add, Sub)):
        op = "+" if isinstance(node, Add) else "-"
        inner = f"{_to_str(node.left, 1)} {op} {_to_str(node.right, 2)}"
        return f"({inner})" if parent_prec > 1 else inner
    if isinstance(node, (Mul, Div)):
        op = "*" if isinstance(node, Mul) else "/"
        inner = f"{_to_str(node.left, 2)}{op}{_to_str(node.right, 3)}"
        return f"({inner})" if parent_prec > 2 else inner
    if isinstance(node, Pow):
        e = node.exponent
        e_text = repr(int(e)) if e == int(e) and abs(e) < 1e15 else repr(e)
        if e < 0:
            e_text = f"({e_text})"
        inner = f"{_to_str(node.base, 5)}^{e_text}"
        return f"({inner})" if parent_prec > 4 else inner
    if isinstance(node, Call):
        return f"{node.func}({_to_str(node.arg, 0)})"
    raise TypeError(f"not an Expr node: {node!r}")
