"""Denotational interpretation of lambda-terms as graph-model values."""
from __future__ import annotations

from typing import Mapping, Optional

from ..enumset import EnumSet, Graph, Literal, apply, current_jmax, set_eq_upto
from .syntax import App, Const, Lam, NumLit, SetLit, Term, TupleLit, Var, parse_term, show


class UnboundVariable(NameError):
    def __init__(self, name: str):
        super().__init__(f"unbound variable {name!r}")
        self.name = name


_default_constants: dict = {}


def default_constants(jmax: Optional[int] = None) -> dict:
    from .combinators import std_combinators

    jmax = current_jmax() if jmax is None else jmax
    if jmax not in _default_constants:
        _default_constants[jmax] = std_combinators(jmax)
    return _default_constants[jmax]


def interpret(t: Term, env: Optional[Mapping[str, EnumSet]] = None,
              constants: Optional[Mapping[str, EnumSet]] = None,
              jmax: Optional[int] = None) -> EnumSet:
    """Compile a term into an EnumSet.

    Abstractions become graphs whose function re-interprets the body with the
    bound variable set to a finite literal; graphs use ``jmax`` (default: the
    current graph cap).
    """
    jmax = current_jmax() if jmax is None else jmax
    env = dict(env or {})
    if constants is None:
        constants = default_constants(jmax)

    def go(t, env):
        if isinstance(t, Var):
            if t.name in env:
                return env[t.name]
            if t.name in constants:
                return constants[t.name]
            raise UnboundVariable(t.name)
        if isinstance(t, Const):
            if t.name in env:
                return env[t.name]
            try:
                return constants[t.name]
            except KeyError:
                raise UnboundVariable(t.name) from None
        if isinstance(t, NumLit):
            return Literal({t.value})
        if isinstance(t, SetLit):
            return Literal(t.elements)
        if isinstance(t, App):
            return apply(go(t.fun, env), go(t.arg, env))
        if isinstance(t, TupleLit):
            from .combinators import tuple_code
            return tuple_code([go(i, env) for i in t.items])
        if isinstance(t, Lam):
            name, body = t.name, t.body

            def fn(p, env=env):
                inner = dict(env)
                inner[name] = Literal(p)
                return go(body, inner)

            return Graph(fn, 1, jmax, name=show(t), tag="interpreted-term")
        raise TypeError(f"not a term: {t!r}")

    return go(t, env)


def evaluate(text: str, env=None, jmax: Optional[int] = None) -> EnumSet:
    return interpret(parse_term(text), env, jmax=jmax)


def beta_equiv_check(m: Term, n: Term, probe: int, budget: int, env=None,
                     jmax: Optional[int] = None):
    if isinstance(m, str):
        m = parse_term(m)
    if isinstance(n, str):
        n = parse_term(n)
    return set_eq_upto(interpret(m, env, jmax=jmax), interpret(n, env, jmax=jmax), probe, budget)
