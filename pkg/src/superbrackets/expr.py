"""Expression language: tokenizer, recursive-descent parser, AST.

Grammar (EBNF)::

    expr    = term { ("+" | "-") term } ;
    term    = unary { ("*" | "/") unary } ;
    unary   = "-" unary | "+" unary | power ;
    power   = atom [ "^" INTEGER ] ;
    atom    = INTEGER | IDENT | "(" expr ")" | call ;
    call    = "d/d" IDENT "(" expr ")"              (* partial derivative *)
            | "d" "(" expr ")"                      (* de Rham differential *)
            | ("pb" | "sb" | "sbs") "(" expr "," expr ")"
            | "hb" "[" INTEGER "]" "(" expr ";" [ args ] ")"
            | "koszul" "(" expr ";" args ")"
            | "shift" "(" expr ";" expr [ "," IDENT ] ")"
            | "alpha" "(" expr ")" ;
    args    = expr { "," expr } ;

``pb`` is the even canonical bracket, ``sb`` the antisymmetric Schouten
bracket and ``sbs`` its symmetric variant.  Division is only allowed by a
nonzero constant.  Comments start with ``#`` and run to the end of the line.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from .errors import SuperBracketsError

RESERVED = frozenset({"d", "pb", "sb", "sbs", "hb", "koszul", "shift", "alpha"})
BINARY_CALLS = ("pb", "sb", "sbs")


class ParseError(SuperBracketsError):
    """Malformed input; carries a 1-based line and column."""

    def __init__(self, message: str, line: int = 0, col: int = 0):
        self.message = message
        self.line = line
        self.col = col
        super().__init__(f"{line}:{col}: {message}" if line else message)


# ----------------------------------------------------------------------
# AST


@dataclass(frozen=True)
class Num:
    value: Fraction
    pos: tuple[int, int] = (0, 0)


@dataclass(frozen=True)
class Var:
    name: str
    pos: tuple[int, int] = (0, 0)


@dataclass(frozen=True)
class Neg:
    arg: "Node"
    pos: tuple[int, int] = (0, 0)


@dataclass(frozen=True)
class BinOp:
    op: str  # one of + - * /
    left: "Node"
    right: "Node"
    pos: tuple[int, int] = (0, 0)


@dataclass(frozen=True)
class Pow:
    base: "Node"
    exponent: int
    pos: tuple[int, int] = (0, 0)


@dataclass(frozen=True)
class Call:
    """Operator application.  ``kind`` is one of: partial, d, pb, sb, sbs, hb,
    koszul, shift, alpha.  ``head`` holds the arguments before ``;`` (or all
    of them when there is no ``;``), ``tail`` the ones after it."""

    kind: str
    head: tuple
    tail: tuple = ()
    index: Union[int, str, None] = None
    pos: tuple[int, int] = (0, 0)


Node = Union[Num, Var, Neg, BinOp, Pow, Call]


# ----------------------------------------------------------------------
# tokenizer


@dataclass(frozen=True)
class Token:
    kind: str  # INT, IDENT, OP, EOF
    text: str
    line: int
    col: int


_PUNCT = set("+-*/^(),;[]")


def tokenize(text: str) -> list[Token]:
    toks = []
    i, line, col = 0, 1, 1
    n = len(text)
    while i < n:
        ch = text[i]
        if ch == "\n":
            i += 1
            line += 1
            col = 1
            continue
        if ch.isspace():
            i += 1
            col += 1
            continue
        if ch == "#":
            while i < n and text[i] != "\n":
                i += 1
            continue
        if ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            toks.append(Token("INT", text[i:j], line, col))
            col += j - i
            i = j
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            toks.append(Token("IDENT", text[i:j], line, col))
            col += j - i
            i = j
            continue
        if ch in _PUNCT:
            toks.append(Token("OP", ch, line, col))
            i += 1
            col += 1
            continue
        raise ParseError(f"unexpected character {ch!r}", line, col)
    toks.append(Token("EOF", "", line, col))
    return toks


# ----------------------------------------------------------------------
# parser


class _Parser:
    def __init__(self, text: str):
        self.toks = tokenize(text)
        self.i = 0

    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def peek(self, k: int = 1) -> Token:
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def error(self, msg: str, tok: Token | None = None):
        t = tok or self.tok
        raise ParseError(msg, t.line, t.col)

    def accept(self, text: str) -> bool:
        if self.tok.kind == "OP" and self.tok.text == text:
            self.i += 1
            return True
        return False

    def expect(self, text: str) -> Token:
        t = self.tok
        if not self.accept(text):
            found = "end of input" if t.kind == "EOF" else repr(t.text)
            self.error(f"expected {text!r}, found {found}")
        return t

    def parse(self) -> Node:
        if self.tok.kind == "EOF":
            self.error("empty expression")
        node = self.expr()
        if self.tok.kind != "EOF":
            self.error(f"unexpected {self.tok.text!r}")
        return node

    def expr(self) -> Node:
        node = self.term()
        while self.tok.kind == "OP" and self.tok.text in "+-":
            t = self.tok
            self.i += 1
            node = BinOp(t.text, node, self.term(), (t.line, t.col))
        return node

    def term(self) -> Node:
        node = self.unary()
        while self.tok.kind == "OP" and self.tok.text in "*/":
            t = self.tok
            self.i += 1
            node = BinOp(t.text, node, self.unary(), (t.line, t.col))
        return node

    def unary(self) -> Node:
        t = self.tok
        if self.accept("-"):
            return Neg(self.unary(), (t.line, t.col))
        if self.accept("+"):
            return self.unary()
        return self.power()

    def power(self) -> Node:
        node = self.atom()
        t = self.tok
        if self.accept("^"):
            e = self.tok
            if e.kind != "INT":
                self.error("exponent must be a non-negative integer")
            self.i += 1
            node = Pow(node, int(e.text), (t.line, t.col))
        return node

    def args(self, stop: str) -> list[Node]:
        out = []
        if self.tok.kind == "OP" and self.tok.text == stop:
            return out
        out.append(self.expr())
        while self.accept(","):
            out.append(self.expr())
        return out

    def atom(self) -> Node:
        t = self.tok
        pos = (t.line, t.col)
        if t.kind == "INT":
            self.i += 1
            return Num(Fraction(int(t.text)), pos)
        if self.accept("("):
            node = self.expr()
            self.expect(")")
            return node
        if t.kind != "IDENT":
            self.error("expected an expression" if t.kind != "EOF" else "unexpected end of input")
        name = t.text
        nxt = self.peek()
        if name == "d" and nxt.kind == "OP" and nxt.text == "/":
            return self.partial_node(pos)
        if name in RESERVED:
            return self.call(name, pos)
        self.i += 1
        return Var(name, pos)

    def partial_node(self, pos) -> Node:
        self.i += 2  # 'd' '/'
        t = self.tok
        if t.kind != "IDENT" or not t.text.startswith("d") or len(t.text) < 2:
            self.error("expected d/d<variable>")
        self.i += 1
        var = t.text[1:]
        self.expect("(")
        arg = self.expr()
        self.expect(")")
        return Call("partial", (arg,), (), var, pos)

    def call(self, name: str, pos) -> Node:
        self.i += 1
        index = None
        if name == "hb":
            self.expect("[")
            t = self.tok
            if t.kind != "INT":
                self.error("expected the arity of hb")
            self.i += 1
            index = int(t.text)
            self.expect("]")
        open_tok = self.expect("(")
        if name in ("d", "alpha"):
            a = self.expr()
            self.expect(")")
            return Call(name, (a,), (), None, pos)
        if name in BINARY_CALLS:
            a = self.args(")")
            if len(a) != 2:
                self.error(f"{name} takes 2 arguments, got {len(a)}", open_tok)
            self.expect(")")
            return Call(name, tuple(a), (), None, pos)
        master = self.expr()
        self.expect(";")
        rest = self.args(")")
        self.expect(")")
        if name == "hb":
            if len(rest) != index:
                self.error(f"hb[{index}] takes {index} arguments after ';', got {len(rest)}", open_tok)
        elif name == "koszul":
            if not rest:
                self.error("koszul needs at least one form", open_tok)
        elif name == "shift":
            if len(rest) == 2:
                if not isinstance(rest[1], Var):
                    self.error("shift parameter must be a name", open_tok)
                index = rest[1].name
                rest = rest[:1]
            elif len(rest) != 1:
                self.error("shift takes (H; r) or (H; r, t)", open_tok)
        return Call(name, (master,), tuple(rest), index, pos)


def parse(text: str) -> Node:
    """Parse one expression."""
    return _Parser(text).parse()


def parse_list(text: str) -> list[Node]:
    """Parse a comma-separated list of expressions (e.g. ``"x1, d(x2)"``)."""
    p = _Parser(text)
    if p.tok.kind == "EOF":
        return []
    out = p.args("")
    if p.tok.kind != "EOF":
        p.error(f"unexpected {p.tok.text!r}")
    return out


# ----------------------------------------------------------------------
# source form of an AST (for diagnostics and round trips)

_PREC = {"+": 1, "-": 1, "*": 2, "/": 2}


def to_source(node: Node) -> str:
    return _src(node, 0)


def _src(node: Node, prec: int) -> str:
    if isinstance(node, Num):
        # print literals the way the parser would read them back
        v = node.value
        if v < 0:
            return _src(Neg(Num(-v)), prec)
        if v.denominator != 1:
            return _src(BinOp("/", Num(Fraction(v.numerator)), Num(Fraction(v.denominator))), prec)
        return str(v.numerator)
    if isinstance(node, Var):
        return node.name
    if isinstance(node, Neg):
        s = "-" + _src(node.arg, 3)
        return f"({s})" if prec >= 1 else s
    if isinstance(node, BinOp):
        p = _PREC[node.op]
        s = f"{_src(node.left, p)} {node.op} {_src(node.right, p + 1)}" if p == 1 else (
            f"{_src(node.left, p)}{node.op}{_src(node.right, p + 1)}"
        )
        return f"({s})" if p < prec else s
    if isinstance(node, Pow):
        s = f"{_src(node.base, 5)}^{node.exponent}"
        return f"({s})" if prec >= 5 else s
    if isinstance(node, Call):
        if node.kind == "partial":
            return f"d/d{node.index}({to_source(node.head[0])})"
        head = ", ".join(to_source(a) for a in node.head)
        name = f"hb[{node.index}]" if node.kind == "hb" else node.kind
        if node.kind in ("d", "alpha") or node.kind in BINARY_CALLS:
            return f"{name}({head})"
        tail = [to_source(a) for a in node.tail]
        if node.kind == "shift" and node.index:
            tail.append(str(node.index))
        return f"{name}({head}; {', '.join(tail)})"
    raise TypeError(node)
