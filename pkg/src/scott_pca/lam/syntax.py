"""Abstract syntax and a small parser for lambda-terms over the graph model.

Grammar::

    term  := ('\\' | 'λ') ident+ '.' term | app
    app   := atom+                  (left associative; a trailing lambda is allowed)
    atom  := ident | '#' digits | '{' digits,* '}' | '[' term (',' term)* ']' | '(' term ')'

Identifiers bound by an enclosing abstraction become ``Var``; free identifiers
naming a known combinator become ``Const``; any other free identifier is a
``Var`` to be supplied by the environment.
"""
from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from typing import Iterable, Optional, Union

STD_NAMES = frozenset({"p", "p0", "p1", "t", "f", "q", "k", "i", "len", "proj", "concat"})


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Lam:
    name: str
    body: "Term"


@dataclass(frozen=True)
class App:
    fun: "Term"
    arg: "Term"


@dataclass(frozen=True)
class Const:
    name: str


@dataclass(frozen=True)
class NumLit:
    value: int


@dataclass(frozen=True)
class SetLit:
    elements: frozenset


@dataclass(frozen=True)
class TupleLit:
    items: tuple


Term = Union[Var, Lam, App, Const, NumLit, SetLit, TupleLit]


class TermSyntaxError(SyntaxError):
    def __init__(self, position: int, expected: str, text: str = ""):
        self.position = position
        self.expected = expected
        super().__init__(f"at position {position}: expected {expected}")


_TOKEN = re.compile(r"\s*(?:(?P<num>#\d+)|(?P<int>\d+)|(?P<ident>[A-Za-z_][A-Za-z0-9_']*)"
                    r"|(?P<sym>[\\λ.(){}\[\],]))")


def tokenize(text: str):
    pos = 0
    out = []
    while True:
        while pos < len(text) and text[pos].isspace():
            pos += 1
        if pos >= len(text):
            break
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            raise TermSyntaxError(pos, "a token", text)
        kind = m.lastgroup
        start = m.start(kind)
        out.append((kind, m.group(kind), start))
        pos = m.end()
    out.append(("eof", "", len(text)))
    return out


class _Parser:
    def __init__(self, text: str, constants: Iterable[str]):
        self.toks = tokenize(text)
        self.i = 0
        self.constants = frozenset(constants)
        self.bound: list[str] = []

    def peek(self):
        return self.toks[self.i]

    def take(self, value: Optional[str] = None, kind: Optional[str] = None):
        tok = self.peek()
        if (value is not None and tok[1] != value) or (kind is not None and tok[0] != kind):
            raise TermSyntaxError(tok[2], repr(value) if value else kind)
        self.i += 1
        return tok

    def term(self) -> Term:
        tok = self.peek()
        if tok[1] in ("\\", "λ"):
            return self.lam()
        return self.app()

    def lam(self) -> Term:
        self.take()
        names = [self.take(kind="ident")[1]]
        while self.peek()[0] == "ident":
            names.append(self.take()[1])
        self.take(".")
        self.bound.extend(names)
        body = self.term()
        del self.bound[len(self.bound) - len(names):]
        for n in reversed(names):
            body = Lam(n, body)
        return body

    def starts_atom(self, tok) -> bool:
        return tok[0] in ("num", "ident") or tok[1] in ("{", "[", "(", "\\", "λ")

    def app(self) -> Term:
        if not self.starts_atom(self.peek()):
            raise TermSyntaxError(self.peek()[2], "a term")
        out = self.atom()
        while self.starts_atom(self.peek()):
            if self.peek()[1] in ("\\", "λ"):
                out = App(out, self.lam())
                break
            out = App(out, self.atom())
        return out

    def atom(self) -> Term:
        kind, val, pos = self.peek()
        if kind == "num":
            self.i += 1
            return NumLit(int(val[1:]))
        if kind == "ident":
            self.i += 1
            if val not in self.bound and val in self.constants:
                return Const(val)
            return Var(val)
        if val == "(":
            self.i += 1
            inner = self.term()
            self.take(")")
            return inner
        if val == "{":
            self.i += 1
            elems = []
            if self.peek()[1] != "}":
                elems.append(int(self.take(kind="int")[1]))
                while self.peek()[1] == ",":
                    self.i += 1
                    elems.append(int(self.take(kind="int")[1]))
            self.take("}")
            return SetLit(frozenset(elems))
        if val == "[":
            self.i += 1
            items = [self.term()]
            while self.peek()[1] == ",":
                self.i += 1
                items.append(self.term())
            self.take("]")
            return TupleLit(tuple(items))
        raise TermSyntaxError(pos, "a term")


def parse_term(text: str, constants: Iterable[str] = STD_NAMES) -> Term:
    p = _Parser(text, constants)
    t = p.term()
    tok = p.peek()
    if tok[0] != "eof":
        raise TermSyntaxError(tok[2], "end of input")
    return t


def free_vars(t: Term) -> frozenset:
    if isinstance(t, Var):
        return frozenset({t.name})
    if isinstance(t, Lam):
        return free_vars(t.body) - {t.name}
    if isinstance(t, App):
        return free_vars(t.fun) | free_vars(t.arg)
    if isinstance(t, TupleLit):
        return frozenset().union(*(free_vars(i) for i in t.items))
    return frozenset()


_fresh = itertools.count()


def fresh_name(base: str, avoid: frozenset) -> str:
    while True:
        cand = f"{base.rstrip('0123456789_')}_{next(_fresh)}"
        if cand not in avoid:
            return cand


def substitute(t: Term, x: str, n: Term) -> Term:
    """Capture-avoiding ``t[n/x]``."""
    if isinstance(t, Var):
        return n if t.name == x else t
    if isinstance(t, App):
        return App(substitute(t.fun, x, n), substitute(t.arg, x, n))
    if isinstance(t, TupleLit):
        return TupleLit(tuple(substitute(i, x, n) for i in t.items))
    if isinstance(t, Lam):
        if t.name == x or x not in free_vars(t.body):
            return t
        fv = free_vars(n)
        if t.name in fv:
            new = fresh_name(t.name, fv | free_vars(t.body) | {x})
            body = substitute(t.body, t.name, Var(new))
            return Lam(new, substitute(body, x, n))
        return Lam(t.name, substitute(t.body, x, n))
    return t


def beta_step(t: Term) -> Term:
    """Contract the head redex ``(\\x.M) N`` to ``M[N/x]``."""
    if isinstance(t, App) and isinstance(t.fun, Lam):
        return substitute(t.fun.body, t.fun.name, t.arg)
    raise ValueError("term is not a beta-redex")


def show(t: Term) -> str:
    if isinstance(t, Var) or isinstance(t, Const):
        return t.name
    if isinstance(t, NumLit):
        return f"#{t.value}"
    if isinstance(t, SetLit):
        return "{" + ",".join(str(e) for e in sorted(t.elements)) + "}"
    if isinstance(t, TupleLit):
        return "[" + ", ".join(show(i) for i in t.items) + "]"
    if isinstance(t, Lam):
        return f"\\{t.name}. {show(t.body)}"
    fun = show(t.fun)
    if isinstance(t.fun, Lam):
        fun = f"({fun})"
    arg = show(t.arg)
    if isinstance(t.arg, (App, Lam)):
        arg = f"({arg})"
    return f"{fun} {arg}"


def term_to_json(t: Term):
    if isinstance(t, Var):
        return {"var": t.name}
    if isinstance(t, Const):
        return {"const": t.name}
    if isinstance(t, NumLit):
        return {"num": str(t.value)}
    if isinstance(t, SetLit):
        return {"set": [str(e) for e in sorted(t.elements)]}
    if isinstance(t, TupleLit):
        return {"tuple": [term_to_json(i) for i in t.items]}
    if isinstance(t, Lam):
        return {"lam": t.name, "body": term_to_json(t.body)}
    return {"app": [term_to_json(t.fun), term_to_json(t.arg)]}


def term_from_json(obj) -> Term:
    if "var" in obj:
        return Var(obj["var"])
    if "const" in obj:
        return Const(obj["const"])
    if "num" in obj:
        return NumLit(int(obj["num"]))
    if "set" in obj:
        return SetLit(frozenset(int(e) for e in obj["set"]))
    if "tuple" in obj:
        return TupleLit(tuple(term_from_json(i) for i in obj["tuple"]))
    if "lam" in obj:
        return Lam(obj["lam"], term_from_json(obj["body"]))
    if "app" in obj:
        f, a = obj["app"]
        return App(term_from_json(f), term_from_json(a))
    raise ValueError(f"not a term: {obj!r}")
