"""Reader and writer for ``.geo`` construction files.

A file holds one declaration per line::

    # inversion maps a line to a circle
    A = Point()
    c = Circle(A, B)
    X' = Rotate(X, 45, O)
    ProveDetails(Incident(D', d))

Equations use ``Equation(lhs = rhs)`` with ``Dist2``, ``Length`` and
``SignedArea2`` terms, rational constants, ``+ - *`` and ``^``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from .geomodel import (
    EQUATION, STATEMENTS, TOOLS, BinOp, Const, Construction, ConstructionError, Dist2, Length,
    Neg, Pow, SignedArea2, Statement, step_text, validate_statement,
)

MODES = ("Prove", "ProveDetails")
FUNCTIONS = {"Dist2": Dist2, "Length": Length, "SignedArea2": SignedArea2}

_TOKEN = re.compile(r"\s*(?:(?P<name>[A-Za-z][A-Za-z0-9']*)|(?P<int>\d+)|(?P<op>[()=,+\-*^/]))")


class DSLError(ValueError):
    def __init__(self, msg: str, line: int, column: int):
        super().__init__(f"{msg} at line {line}, column {column}")
        self.msg = msg
        self.line = line
        self.column = column


@dataclass
class Token:
    kind: str  # name, int, op, end
    text: str
    line: int
    column: int


def tokenize(text: str, lineno: int) -> list:
    code = text.split("#", 1)[0].rstrip()
    out = []
    pos = 0
    while pos < len(code):
        if code[pos:].strip() == "":
            break
        m = _TOKEN.match(code, pos)
        if not m or m.end() == pos:
            col = pos + 1 + (len(code[pos:]) - len(code[pos:].lstrip()))
            raise DSLError(f"unexpected character {code[col - 1]!r}", lineno, col)
        kind = m.lastgroup
        out.append(Token(kind, m.group(kind), lineno, m.start(kind) + 1))
        pos = m.end()
    out.append(Token("end", "", lineno, len(code) + 1))
    return out


class _Parser:
    def __init__(self, tokens):
        self.toks = tokens
        self.i = 0
        self.refs = []  # name tokens used inside formulas

    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def next(self) -> Token:
        t = self.toks[self.i]
        self.i += 1
        return t

    def fail(self, msg, tok=None):
        tok = tok or self.tok
        raise DSLError(msg, tok.line, tok.column)

    def expect(self, kind, text=None) -> Token:
        t = self.tok
        if t.kind != kind or (text is not None and t.text != text):
            want = text or kind
            got = t.text or "end of line"
            self.fail(f"expected {want!r}, found {got!r}")
        return self.next()

    def accept(self, text) -> bool:
        if self.tok.kind == "op" and self.tok.text == text:
            self.i += 1
            return True
        return False

    def arguments(self) -> list:
        """Comma separated names or (signed) integers inside parentheses."""
        self.expect("op", "(")
        args = []
        if self.accept(")"):
            return args
        while True:
            t = self.tok
            if t.kind == "name":
                args.append(self.next())
            elif t.kind == "int" or (t.kind == "op" and t.text == "-"):
                neg = self.accept("-")
                num = self.expect("int")
                args.append(Token("int", ("-" if neg else "") + num.text, t.line, t.column))
            else:
                self.fail(f"expected an argument, found {t.text or 'end of line'!r}")
            if self.accept(")"):
                return args
            self.expect("op", ",")

    # formulas

    def expr(self):
        node = self.term()
        while self.tok.kind == "op" and self.tok.text in "+-":
            op = self.next().text
            node = BinOp(op, node, self.term())
        return node

    def term(self):
        node = self.factor()
        while self.tok.kind == "op" and self.tok.text == "*":
            self.next()
            node = BinOp("*", node, self.factor())
        return node

    def factor(self):
        if self.accept("-"):
            if self.tok.kind == "int":
                c = self.number()
                if self.tok.kind == "op" and self.tok.text == "^":
                    return Neg(self.power(c))
                return Const(-c.value)
            return Neg(self.factor())
        return self.power(self.atom())

    def power(self, base):
        if self.accept("^"):
            n = self.expect("int")
            return Pow(base, int(n.text))
        return base

    def number(self) -> Const:
        n = self.expect("int")
        value = Fraction(int(n.text))
        if self.accept("/"):
            d = self.expect("int")
            if int(d.text) == 0:
                self.fail("division by zero", d)
            value /= int(d.text)
        return Const(value)

    def atom(self):
        t = self.tok
        if t.kind == "int":
            return self.number()
        if self.accept("("):
            node = self.expr()
            self.expect("op", ")")
            return node
        if t.kind == "name":
            if t.text not in FUNCTIONS:
                self.fail(f"unknown function {t.text}; expected one of {', '.join(FUNCTIONS)}")
            self.next()
            args = self.arguments()
            names = []
            for a in args:
                if a.kind != "name":
                    self.fail("expected an object name", a)
                names.append(a)
            self.refs.extend(names)
            if t.text == "SignedArea2":
                if not names:
                    self.fail("SignedArea2 needs a polygon or points", t)
                return SignedArea2(tuple(a.text for a in names))
            if len(names) != 2:
                self.fail(f"{t.text} takes 2 points, got {len(names)}", t)
            return FUNCTIONS[t.text](names[0].text, names[1].text)
        self.fail(f"unexpected {t.text or 'end of line'!r} in formula")


def _check_refs(c: Construction, tokens) -> None:
    for a in tokens:
        if a.kind == "name" and a.text not in c:
            raise DSLError(f"unknown object {a.text}", a.line, a.column)


def parse_construction(text: str) -> tuple:
    """Parse a source file into (Construction, Statement, mode)."""
    c = Construction()
    statement = None
    mode = None
    lines = text.splitlines()
    for lineno, raw in enumerate(lines, 1):
        toks = tokenize(raw, lineno)
        if toks[0].kind == "end":
            continue
        p = _Parser(toks)
        head = p.expect("name")
        if head.text in MODES and p.tok.text == "(":
            if statement is not None:
                raise DSLError("only one Prove directive is allowed", head.line, head.column)
            mode = head.text
            p.next()
            kind = p.expect("name")
            if kind.text not in STATEMENTS:
                raise DSLError(f"unknown statement {kind.text}; known: {', '.join(STATEMENTS)}",
                               kind.line, kind.column)
            if kind.text == EQUATION:
                p.expect("op", "(")
                lhs = p.expr()
                p.expect("op", "=")
                rhs = p.expr()
                p.expect("op", ")")
                _check_refs(c, p.refs)
                statement = Statement(EQUATION, (lhs, rhs))
            else:
                args = p.arguments()
                for a in args:
                    if a.kind != "name":
                        raise DSLError("expected an object name", a.line, a.column)
                _check_refs(c, args)
                statement = Statement(kind.text, tuple(a.text for a in args))
            p.expect("op", ")")
            p.expect("end")
            try:
                validate_statement(c, statement)
            except ConstructionError as exc:
                raise DSLError(str(exc), kind.line, kind.column) from None
            continue
        if statement is not None:
            raise DSLError("declarations must precede the Prove directive", head.line, head.column)
        p.expect("op", "=")
        tool = p.expect("name")
        if tool.text not in TOOLS:
            raise DSLError(f"unknown tool {tool.text}; known tools: {', '.join(TOOLS)}",
                           tool.line, tool.column)
        args = p.arguments()
        p.expect("end")
        _check_refs(c, args)
        inputs = [int(a.text) if a.kind == "int" else a.text for a in args]
        try:
            c.append_step(head.text, tool.text, inputs)
        except ConstructionError as exc:
            where = head if "duplicate" in str(exc) else tool
            raise DSLError(str(exc), where.line, where.column) from None
    if statement is None:
        raise DSLError("missing Prove directive", len(lines) + 1, 1)
    return c, statement, mode


def parse_file(path) -> tuple:
    with open(path, encoding="utf-8") as fh:
        return parse_construction(fh.read())


# -- formatting --------------------------------------------------------------------

_PREC = {"+": 1, "-": 1, "*": 2}


def format_formula(node, prec: int = 0) -> str:
    if isinstance(node, Const):
        v = node.value
        s = str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"
        return f"({s})" if prec >= 3 and v < 0 else s
    if isinstance(node, (Dist2, Length)):
        return f"{type(node).__name__}({node.p}, {node.q})"
    if isinstance(node, SignedArea2):
        return f"SignedArea2({', '.join(node.points)})"
    if isinstance(node, BinOp):
        p = _PREC[node.op]
        # right operands of equal precedence keep their parentheses
        s = f"{format_formula(node.left, p)} {node.op} {format_formula(node.right, p + 1)}"
        return f"({s})" if p < prec else s
    if isinstance(node, Neg):
        s = "-" + format_formula(node.arg, 3)
        return f"({s})" if prec >= 3 else s
    if isinstance(node, Pow):
        return f"{format_formula(node.base, 4)}^{node.exponent}"
    raise TypeError(f"cannot format {node!r}")


def format_statement(s: Statement) -> str:
    if s.kind == EQUATION:
        return f"Equation({format_formula(s.args[0])} = {format_formula(s.args[1])})"
    return f"{s.kind}({', '.join(s.args)})"


def format_construction(c: Construction, s: Statement | None, mode: str = "Prove") -> str:
    """Canonical source text; parsing it gives back the same model."""
    if s is None:
        raise DSLError("missing Prove directive", len(c.steps) + 1, 1)
    lines = [step_text(step) for step in c.steps]
    lines.append(f"{mode}({format_statement(s)})")
    return "\n".join(lines) + "\n"
