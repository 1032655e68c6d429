"""Scalar expressions in x, y with exact first and second derivatives.

Differentiation is second-order forward mode: every node evaluates to a
``Jet2`` carrying value, gradient and symmetric Hessian, so derivatives are
exact up to rounding (no symbolic rewriting, no finite differences).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping, Sequence

from .errors import DomainError, ExprSyntaxError, UnknownIdentifier

FUNCTIONS = {
    "sin": 1,
    "cos": 1,
    "exp": 1,
    "log": 1,
    "sqrt": 1,
    "abs": 1,
    "min": 2,
    "max": 2,
    "select": 3,
}

COMPARISON_OPS = ("<=", ">=", "==", "!=", "<", ">")


# --- AST -------------------------------------------------------------------

@dataclass(frozen=True)
class Num:
    value: float


@dataclass(frozen=True)
class Name:
    name: str  # variable or the built-in constant "pi"


@dataclass(frozen=True)
class Neg:
    arg: "Expr"


@dataclass(frozen=True)
class BinOp:
    op: str  # one of + - * /
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Pow:
    base: "Expr"
    exponent: int  # non-negative integer literal


@dataclass(frozen=True)
class Call:
    func: str
    args: tuple


@dataclass(frozen=True)
class Compare:
    op: str
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Select:
    cond: Compare
    then: "Expr"
    other: "Expr"


Expr = object  # union of the node classes above (Compare only inside Select)


# --- second-order jets -----------------------------------------------------

class Jet2:
    """Value, gradient and symmetric Hessian of a function of (x, y)."""

    __slots__ = ("f", "fx", "fy", "fxx", "fxy", "fyy")

    def __init__(self, f, fx=0.0, fy=0.0, fxx=0.0, fxy=0.0, fyy=0.0):
        self.f = f
        self.fx = fx
        self.fy = fy
        self.fxx = fxx
        self.fxy = fxy
        self.fyy = fyy

    @property
    def value(self) -> float:
        return self.f

    @property
    def grad(self) -> tuple:
        return (self.fx, self.fy)

    @property
    def hess(self) -> tuple:
        return ((self.fxx, self.fxy), (self.fxy, self.fyy))

    def __repr__(self):
        return (f"Jet2({self.f!r}, grad=({self.fx!r}, {self.fy!r}), "
                f"hess=({self.fxx!r}, {self.fxy!r}, {self.fyy!r}))")

    def __add__(self, o):
        return Jet2(self.f + o.f, self.fx + o.fx, self.fy + o.fy,
                    self.fxx + o.fxx, self.fxy + o.fxy, self.fyy + o.fyy)

    def __sub__(self, o):
        return Jet2(self.f - o.f, self.fx - o.fx, self.fy - o.fy,
                    self.fxx - o.fxx, self.fxy - o.fxy, self.fyy - o.fyy)

    def __neg__(self):
        return Jet2(-self.f, -self.fx, -self.fy, -self.fxx, -self.fxy, -self.fyy)

    def __mul__(self, o):
        return Jet2(
            self.f * o.f,
            self.fx * o.f + self.f * o.fx,
            self.fy * o.f + self.f * o.fy,
            self.fxx * o.f + 2.0 * self.fx * o.fx + self.f * o.fxx,
            self.fxy * o.f + self.fx * o.fy + self.fy * o.fx + self.f * o.fxy,
            self.fyy * o.f + 2.0 * self.fy * o.fy + self.f * o.fyy,
        )

    def chain(self, g0, g1, g2):
        """Compose with a scalar function given by g(u), g'(u), g''(u)."""
        return Jet2(
            g0,
            g1 * self.fx,
            g1 * self.fy,
            g1 * self.fxx + g2 * self.fx * self.fx,
            g1 * self.fxy + g2 * self.fx * self.fy,
            g1 * self.fyy + g2 * self.fy * self.fy,
        )


def const_jet(c: float) -> Jet2:
    return Jet2(float(c))


# --- tokenizer -------------------------------------------------------------

_TOK_NUM = "num"
_TOK_IDENT = "ident"
_TOK_OP = "op"
_TOK_EOF = "eof"


def _tokenize(text: str):
    tokens = []
    i = 0
    n = len(text)
    while i < n:
        c = text[i]
        if c in " \t\r\n":
            i += 1
            continue
        if c.isdigit() or (c == "." and i + 1 < n and text[i + 1].isdigit()):
            j = i
            while j < n and (text[j].isdigit() or text[j] == "."):
                j += 1
            if j < n and text[j] in "eE":
                k = j + 1
                if k < n and text[k] in "+-":
                    k += 1
                if k < n and text[k].isdigit():
                    while k < n and text[k].isdigit():
                        k += 1
                    j = k
            lit = text[i:j]
            try:
                value = float(lit)
            except ValueError:
                raise ExprSyntaxError(f"bad number literal '{lit}'", i)
            tokens.append((_TOK_NUM, lit, i, value))
            i = j
            continue
        if c.isalpha() or c == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            tokens.append((_TOK_IDENT, text[i:j], i, None))
            i = j
            continue
        for op in COMPARISON_OPS:
            if text.startswith(op, i):
                tokens.append((_TOK_OP, op, i, None))
                i += len(op)
                break
        else:
            if c in "+-*/^(),":
                tokens.append((_TOK_OP, c, i, None))
                i += 1
            else:
                raise ExprSyntaxError(f"unexpected character '{c}'", i)
    tokens.append((_TOK_EOF, "", n, None))
    return tokens


# --- parser ----------------------------------------------------------------

class _Parser:
    """Recursive descent; precedence: comparison < +- < */ < unary - < ^."""

    def __init__(self, text: str, variables: Sequence[str]):
        self.text = text
        self.tokens = _tokenize(text)
        self.pos = 0
        self.variables = tuple(variables)

    def peek(self):
        return self.tokens[self.pos]

    def advance(self):
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect_op(self, op: str):
        kind, val, off, _ = self.peek()
        if kind != _TOK_OP or val != op:
            raise ExprSyntaxError(f"expected '{op}'", off)
        return self.advance()

    def parse(self):
        node = self.comparison()
        kind, val, off, _ = self.peek()
        if kind != _TOK_EOF:
            raise ExprSyntaxError(f"unexpected trailing input '{val}'", off)
        if isinstance(node, Compare):
            raise ExprSyntaxError(
                "comparisons are only allowed inside select(...)", 0)
        return node

    def comparison(self):
        left = self.sum()
        kind, val, off, _ = self.peek()
        if kind == _TOK_OP and val in COMPARISON_OPS:
            self.advance()
            right = self.sum()
            return Compare(val, left, right)
        return left

    def sum(self):
        node = self.product()
        while True:
            kind, val, _, _ = self.peek()
            if kind == _TOK_OP and val in "+-":
                self.advance()
                node = BinOp(val, node, self.product())
            else:
                return node

    def product(self):
        node = self.unary()
        while True:
            kind, val, _, _ = self.peek()
            if kind == _TOK_OP and val in "*/":
                self.advance()
                node = BinOp(val, node, self.unary())
            else:
                return node

    def unary(self):
        kind, val, _, _ = self.peek()
        if kind == _TOK_OP and val == "-":
            self.advance()
            return Neg(self.unary())
        return self.power()

    def power(self):
        base = self.atom()
        kind, val, off, _ = self.peek()
        if kind == _TOK_OP and val == "^":
            self.advance()
            kind, lit, off, value = self.peek()
            if kind != _TOK_NUM or value is None or value != int(value):
                raise ExprSyntaxError("exponent must be an integer literal", off)
            self.advance()
            return Pow(base, int(value))
        return base

    def atom(self):
        kind, val, off, value = self.advance()
        if kind == _TOK_NUM:
            return Num(value)
        if kind == _TOK_OP and val == "(":
            node = self.comparison()
            self.expect_op(")")
            return node
        if kind == _TOK_IDENT:
            nkind, nval, _, _ = self.peek()
            if nkind == _TOK_OP and nval == "(":
                return self.call(val, off)
            if val == "pi":
                return Name("pi")
            if val in self.variables:
                return Name(val)
            raise UnknownIdentifier(val, off)
        raise ExprSyntaxError(
            "unexpected end of input" if kind == _TOK_EOF else f"unexpected '{val}'",
            off)

    def call(self, func: str, off: int):
        if func not in FUNCTIONS:
            raise UnknownIdentifier(func, off)
        self.expect_op("(")
        args = [self.comparison()]
        while True:
            kind, val, o2, _ = self.peek()
            if kind == _TOK_OP and val == ",":
                self.advance()
                args.append(self.comparison())
            else:
                break
        self.expect_op(")")
        arity = FUNCTIONS[func]
        if len(args) != arity:
            raise ExprSyntaxError(
                f"{func} takes {arity} argument(s), got {len(args)}", off)
        if func == "select":
            cond, then, other = args
            if not isinstance(cond, Compare):
                raise ExprSyntaxError(
                    "select condition must be a comparison", off)
            if isinstance(then, Compare) or isinstance(other, Compare):
                raise ExprSyntaxError(
                    "select branches must be numeric expressions", off)
            return Select(cond, then, other)
        for a in args:
            if isinstance(a, Compare):
                raise ExprSyntaxError(
                    "comparisons are only allowed inside select(...)", off)
        return Call(func, tuple(args))


def parse_expr(text: str, variables: Sequence[str] = ("x", "y")):
    """Parse expression text over the given variables (default x, y)."""
    if not text or not text.strip():
        raise ExprSyntaxError("empty expression", 0)
    return _Parser(text, variables).parse()


# --- pretty printer --------------------------------------------------------

_PREC = {"cmp": 0, "+": 1, "-": 1, "*": 2, "/": 2, "neg": 3, "^": 4, "atom": 5}


def _fmt_num(v: float) -> str:
    if v == int(v) and abs(v) < 1e16:
        return str(int(v))
    return repr(v)


def to_text(node) -> str:
    """Render a tree so that re-parsing gives a structurally identical tree."""
    text, _ = _render(node)
    return text


def _paren(child_text, child_prec, min_prec):
    return f"({child_text})" if child_prec < min_prec else child_text


def _render(node):
    if isinstance(node, Num):
        return _fmt_num(node.value), _PREC["atom"]
    if isinstance(node, Name):
        return node.name, _PREC["atom"]
    if isinstance(node, Neg):
        t, p = _render(node.arg)
        return "-" + _paren(t, p, _PREC["neg"]), _PREC["neg"]
    if isinstance(node, BinOp):
        lt, lp = _render(node.left)
        rt, rp = _render(node.right)
        prec = _PREC[node.op]
        # left associative: right operand needs strictly higher precedence
        left = _paren(lt, lp, prec)
        right = _paren(rt, rp, prec + 1)
        return f"{left}{node.op}{right}", prec
    if isinstance(node, Pow):
        bt, bp = _render(node.base)
        return f"{_paren(bt, bp, _PREC['atom'])}^{node.exponent}", _PREC["^"]
    if isinstance(node, Call):
        args = ",".join(_render(a)[0] for a in node.args)
        return f"{node.func}({args})", _PREC["atom"]
    if isinstance(node, Select):
        c = f"{_render(node.cond.left)[0]}{node.cond.op}{_render(node.cond.right)[0]}"
        return (f"select({c},{_render(node.then)[0]},{_render(node.other)[0]})",
                _PREC["atom"])
    if isinstance(node, Compare):
        return (f"{_render(node.left)[0]}{node.op}{_render(node.right)[0]}",
                _PREC["cmp"])
    raise TypeError(f"not an expression node: {node!r}")


def free_variables(node) -> frozenset:
    out = set()
    _collect_names(node, out)
    out.discard("pi")
    return frozenset(out)


def _collect_names(node, out):
    if isinstance(node, Name):
        out.add(node.name)
    elif isinstance(node, Neg):
        _collect_names(node.arg, out)
    elif isinstance(node, (BinOp, Compare)):
        _collect_names(node.left, out)
        _collect_names(node.right, out)
    elif isinstance(node, Pow):
        _collect_names(node.base, out)
    elif isinstance(node, Call):
        for a in node.args:
            _collect_names(a, out)
    elif isinstance(node, Select):
        _collect_names(node.cond, out)
        _collect_names(node.then, out)
        _collect_names(node.other, out)


# --- evaluation ------------------------------------------------------------

def _domain(node, point, reason):
    raise DomainError(f"{reason} in '{to_text(node)}' at {point}")


def eval_jet2(node, x: float, y: float) -> Jet2:
    """Evaluate with exact value, gradient and Hessian at (x, y)."""
    return _jet(node, float(x), float(y))


def _jet(node, x, y):
    if isinstance(node, Num):
        return const_jet(node.value)
    if isinstance(node, Name):
        if node.name == "x":
            return Jet2(x, 1.0, 0.0)
        if node.name == "y":
            return Jet2(y, 0.0, 1.0)
        if node.name == "pi":
            return const_jet(math.pi)
        raise DomainError(f"variable '{node.name}' has no jet value")
    if isinstance(node, Neg):
        return -_jet(node.arg, x, y)
    if isinstance(node, BinOp):
        a = _jet(node.left, x, y)
        b = _jet(node.right, x, y)
        if node.op == "+":
            return a + b
        if node.op == "-":
            return a - b
        if node.op == "*":
            return a * b
        if b.f == 0.0:
            _domain(node, (x, y), "division by zero")
        inv = b.chain(1.0 / b.f, -1.0 / (b.f * b.f), 2.0 / (b.f ** 3))
        return a * inv
    if isinstance(node, Pow):
        u = _jet(node.base, x, y)
        n = node.exponent
        if n == 0:
            return const_jet(1.0)
        if n == 1:
            return u
        g1 = n * u.f ** (n - 1)
        g2 = n * (n - 1) * u.f ** (n - 2) if n >= 2 else 0.0
        return u.chain(u.f ** n, g1, g2)
    if isinstance(node, Call):
        return _jet_call(node, x, y)
    if isinstance(node, Select):
        take_then = _cond(node.cond, x, y)
        return _jet(node.then if take_then else node.other, x, y)
    raise TypeError(f"cannot evaluate node {node!r}")


def _jet_call(node, x, y):
    name = node.func
    if name in ("min", "max"):
        a = _jet(node.args[0], x, y)
        b = _jet(node.args[1], x, y)
        # on a tie the first argument wins (documented branch convention)
        if name == "min":
            return a if a.f <= b.f else b
        return a if a.f >= b.f else b
    u = _jet(node.args[0], x, y)
    v = u.f
    if name == "sin":
        return u.chain(math.sin(v), math.cos(v), -math.sin(v))
    if name == "cos":
        return u.chain(math.cos(v), -math.sin(v), -math.cos(v))
    if name == "exp":
        e = math.exp(v)
        return u.chain(e, e, e)
    if name == "log":
        if v <= 0.0:
            _domain(node, (x, y), f"log of non-positive value {v!r}")
        return u.chain(math.log(v), 1.0 / v, -1.0 / (v * v))
    if name == "sqrt":
        if v < 0.0:
            _domain(node, (x, y), f"sqrt of negative value {v!r}")
        if v == 0.0:
            _domain(node, (x, y), "sqrt not differentiable at 0")
        s = math.sqrt(v)
        return u.chain(s, 0.5 / s, -0.25 / (s * v))
    if name == "abs":
        # sign taken as +1 at 0 (first-branch convention, as for select)
        sgn = -1.0 if v < 0.0 else 1.0
        return u.chain(abs(v), sgn, 0.0)
    raise DomainError(f"unknown function '{name}'")


def _cond(cond: Compare, x, y) -> bool:
    lhs = _jet(cond.left, x, y).f
    rhs = _jet(cond.right, x, y).f
    if lhs == rhs:
        return True  # exact branch boundary: first branch wins
    return {
        "<": lhs < rhs,
        "<=": lhs <= rhs,
        ">": lhs > rhs,
        ">=": lhs >= rhs,
        "==": lhs == rhs,
        "!=": lhs != rhs,
    }[cond.op]


def eval_value(node, env: Mapping[str, float]) -> float:
    """Plain numeric evaluation with an arbitrary variable environment."""
    if isinstance(node, Num):
        return node.value
    if isinstance(node, Name):
        if node.name == "pi":
            return math.pi
        try:
            return float(env[node.name])
        except KeyError:
            raise DomainError(f"variable '{node.name}' not bound")
    if isinstance(node, Neg):
        return -eval_value(node.arg, env)
    if isinstance(node, BinOp):
        a = eval_value(node.left, env)
        b = eval_value(node.right, env)
        if node.op == "+":
            return a + b
        if node.op == "-":
            return a - b
        if node.op == "*":
            return a * b
        if b == 0.0:
            _domain(node, dict(env), "division by zero")
        return a / b
    if isinstance(node, Pow):
        return eval_value(node.base, env) ** node.exponent
    if isinstance(node, Call):
        name = node.func
        args = [eval_value(a, env) for a in node.args]
        if name == "min":
            return args[0] if args[0] <= args[1] else args[1]
        if name == "max":
            return args[0] if args[0] >= args[1] else args[1]
        v = args[0]
        if name == "log" and v <= 0.0:
            _domain(node, dict(env), f"log of non-positive value {v!r}")
        if name == "sqrt" and v < 0.0:
            _domain(node, dict(env), f"sqrt of negative value {v!r}")
        return getattr(math, name)(v) if name != "abs" else abs(v)
    if isinstance(node, Select):
        lhs = eval_value(node.cond.left, env)
        rhs = eval_value(node.cond.right, env)
        if lhs == rhs:
            take = True
        else:
            take = {
                "<": lhs < rhs, "<=": lhs <= rhs, ">": lhs > rhs,
                ">=": lhs >= rhs, "==": lhs == rhs, "!=": lhs != rhs,
            }[node.cond.op]
        return eval_value(node.then if take else node.other, env)
    raise TypeError(f"cannot evaluate node {node!r}")


# --- scalar fields ---------------------------------------------------------

class ExprField:
    """Expression-backed scalar field exposing second-order jets."""

    def __init__(self, expr, text: str | None = None):
        if isinstance(expr, str):
            text = expr
            expr = parse_expr(expr)
        self.expr = expr
        self.text = text if text is not None else to_text(expr)
        extra = free_variables(expr) - {"x", "y"}
        if extra:
            raise DomainError(
                f"scalar field may only use x and y, found {sorted(extra)}")

    def jet2(self, x: float, y: float) -> Jet2:
        return eval_jet2(self.expr, x, y)

    def __repr__(self):
        return f"ExprField({self.text!r})"
