"""Fuel-indexed enumerable subsets of the naturals and the application of the graph model.

Every value is an :class:`EnumSet`: a node whose ``stage(k)`` is a finite set,
monotone in ``k``.  The denotation of a node is the union of its stages; no
operation here ever claims more than agreement through some fuel.

Stage equations
---------------
* literal: ``stage(k) = elements``
* apply(U, V): ``{n | c in stage_U(k), (m, n) = unpair(c), e_m <= stage_V(k)}``
* graph(F) of arity a: nested codes ``<e(p1), ... <e(pa), n>>`` with every
  ``pi`` a subset of ``{0..min(k, jmax)}`` and ``n in stage_{F(p1..pa)}(k)``

Applying a graph to an argument is computed through :meth:`EnumSet.view`: for
a stage-monotone ``F`` the union over all ``p <= stage_V(k)`` collapses to the
single value ``F(stage_V(k) & {0..cap})``, which yields the same stage as the
generic equation without enumerating subsets.
"""
from __future__ import annotations

import contextlib
import contextvars
from dataclasses import dataclass
from typing import Callable, Iterable, Optional, Sequence, Union

from .coding import decode_finite, finset, pair, unpair

DEFAULT_JMAX = 12
ENUMERATION_LIMIT = 1 << 16

_jmax: contextvars.ContextVar[int] = contextvars.ContextVar("jmax", default=DEFAULT_JMAX)


def current_jmax() -> int:
    return _jmax.get()


@contextlib.contextmanager
def graph_cap(jmax: int):
    """Temporarily change the cap used by graphs constructed inside the block."""
    if jmax < 0:
        raise ValueError("jmax must be a natural number")
    token = _jmax.set(jmax)
    try:
        yield jmax
    finally:
        _jmax.reset(token)


class EnumerationLimit(RuntimeError):
    """Raised instead of enumerating an astronomically large graph stage."""


def _bounded(elems: Iterable[int], bound: Optional[int]) -> frozenset:
    if bound is None:
        return frozenset(elems)
    return frozenset(e for e in elems if e <= bound)


class EnumSet:
    """Base class of all graph-model values."""

    tag = "abstract"
    exact = False          # True when every stage equals the denotation

    def __init__(self):
        self._cache: dict = {}

    def stage(self, k: int, bound: Optional[int] = None) -> frozenset:
        """``stage(k)``, optionally intersected with ``{0..bound}``."""
        if k < 0:
            raise ValueError("fuel must be a natural number")
        key = (k, bound)
        try:
            return self._cache[key]
        except KeyError:
            pass
        full = self._cache.get((k, None))
        if full is not None:
            out = _bounded(full, bound)
        else:
            out = self._stage(k, bound)
        self._cache[key] = out
        return out

    def _stage(self, k: int, bound: Optional[int]) -> frozenset:
        raise NotImplementedError

    def view(self, k: int) -> "EnumSet":
        """A node with the same stage ``k`` that exposes more structure."""
        return self

    def faithful(self, k: int) -> bool:
        """Whether ``view(k)`` also has the same denotation."""
        return True

    def exact_at(self, k: int) -> bool:
        """Whether stage ``k`` is already the whole denotation."""
        return self.exact

    def to_json(self):
        raise NotImplementedError

    def __call__(self, *args: "EnumSet") -> "EnumSet":
        out = self
        for a in args:
            out = apply(out, a)
        return out


class Literal(EnumSet):
    tag = "literal"
    exact = True

    def __init__(self, elements: Iterable[int]):
        super().__init__()
        self.elements = finset(elements)

    def _stage(self, k, bound):
        return _bounded(self.elements, bound)

    def to_json(self):
        return {"lit": [str(e) for e in sorted(self.elements)]}

    def __repr__(self):
        return f"Literal({sorted(self.elements)})"


class Staged(EnumSet):
    """A set given by a monotone stage function ``k -> iterable of naturals``.

    ``bounded(k, bound)`` may be supplied to enumerate only elements up to a
    bound, which matters for infinite sets with large codes.
    """

    tag = "staged"

    def __init__(self, fn: Callable[[int], Iterable[int]], name: str = "staged",
                 bounded: Optional[Callable[[int, int], Iterable[int]]] = None):
        super().__init__()
        self.fn = fn
        self.name = name
        self.bounded = bounded

    def _stage(self, k, bound):
        if bound is not None and self.bounded is not None:
            return _bounded(self.bounded(k, bound), bound)
        return _bounded(self.fn(k), bound)

    def to_json(self):
        return {"staged": self.name}

    def __repr__(self):
        return f"Staged({self.name})"


def staged_literal(appearance: dict[int, int], name: str = "staged-literal") -> Staged:
    """Finite set whose element ``n`` shows up from stage ``appearance[n]`` on."""
    table = dict(appearance)

    def fn(k):
        return [n for n, s in table.items() if s <= k]

    return Staged(fn, name)


class Apply(EnumSet):
    tag = "apply"

    def __init__(self, fun: EnumSet, arg: EnumSet):
        super().__init__()
        self.fun = fun
        self.arg = arg
        self.exact = fun.exact and arg.exact
        self._views: dict = {}

    def view(self, k):
        try:
            return self._views[k]
        except KeyError:
            pass
        u = self.fun.view(k)
        out: EnumSet = self
        if isinstance(u, Graph) and u.monotone:
            p = self.arg.stage(k, u.cap(k))
            out = u.bind(p).view(k)
        self._views[k] = out
        return out

    def faithful(self, k):
        u = self.fun.view(k)
        if not (isinstance(u, Graph) and u.monotone):
            return True
        # the binding saw the whole argument, and what it produced is faithful too
        p = self.arg.stage(k, u.cap(k))
        if not (self.fun.faithful(k) and settled(self.arg, k) and self.arg.stage(k) == p):
            return False
        return u.bind(p).faithful(k)

    def _stage(self, k, bound):
        v = self.view(k)
        if v is not self:
            return v.stage(k, bound)
        return generic_apply_stage(self.fun, self.arg, k, bound)

    def to_json(self):
        return {"apply": [self.fun.to_json(), self.arg.to_json()]}

    def __repr__(self):
        return f"Apply({self.fun!r}, {self.arg!r})"


def generic_apply_stage(fun: EnumSet, arg: EnumSet, k: int, bound: Optional[int] = None) -> frozenset:
    """The application stage equation, decoding the codes of ``fun``."""
    candidates = []
    need = -1
    for c in fun.stage(k):
        m, n = unpair(c)
        if bound is not None and n > bound:
            continue
        em = decode_finite(m)
        if em:
            need = max(need, max(em))
        candidates.append((em, n))
    if not candidates:
        return frozenset()
    vk = arg.stage(k, need) if need >= 0 else frozenset()
    return frozenset(n for em, n in candidates if em <= vk)


class Graph(EnumSet):
    """``graph(F)`` for ``F`` of the given arity, possibly with leading arguments fixed.

    ``fn`` receives ``arity`` frozensets and returns an EnumSet (or an iterable
    of naturals, read as a literal).  ``monotone`` declares that ``fn`` is
    monotone at stage level, enabling the view shortcut for application.
    """

    tag = "graph"

    def __init__(self, fn: Callable[..., Union[EnumSet, Iterable[int]]], arity: int = 1,
                 jmax: Optional[int] = None, monotone: bool = True, name: str = "graph",
                 bound_args: Sequence[frozenset] = (), memo: Optional[dict] = None,
                 tag: Optional[str] = None):
        super().__init__()
        if arity < 1:
            raise ValueError("graph arity must be at least 1")
        self.fn = fn
        self.arity = arity
        self.jmax = current_jmax() if jmax is None else jmax
        self.monotone = monotone
        self.name = name
        self.bound_args = tuple(frozenset(a) for a in bound_args)
        self._memo = {} if memo is None else memo
        if tag is not None:
            self.tag = tag

    @property
    def remaining(self) -> int:
        return self.arity - len(self.bound_args)

    def cap(self, k: int) -> int:
        return min(k, self.jmax)

    def evaluate(self, *args: frozenset) -> EnumSet:
        key = self.bound_args + tuple(frozenset(a) for a in args)
        try:
            return self._memo[key]
        except KeyError:
            pass
        out = self.fn(*key)
        if not isinstance(out, EnumSet):
            out = Literal(out)
        self._memo[key] = out
        return out

    def bind(self, p: frozenset) -> EnumSet:
        if self.remaining == 1:
            return self.evaluate(p)
        return Graph(self.fn, self.arity, self.jmax, self.monotone, self.name,
                     self.bound_args + (frozenset(p),), self._memo, tag=self.tag)

    def _stage(self, k, bound):
        top = (1 << (self.cap(k) + 1)) - 1
        if bound is None and (top + 1) ** self.remaining > ENUMERATION_LIMIT:
            raise EnumerationLimit(
                f"stage {k} of {self.name} needs {(top + 1) ** self.remaining} "
                f"finite arguments; lower the fuel or the graph cap")
        out = set()

        def walk(args, left, b):
            if left == 0:
                yield from self.evaluate(*args).stage(k, b)
                return
            hi = top if b is None else min(top, b)
            for m in range(hi + 1):
                inner = None if b is None else b - m
                for x in walk(args + (decode_finite(m),), left - 1, inner):
                    c = pair(m, x)
                    if b is None or c <= b:
                        yield c

        out.update(walk((), self.remaining, bound))
        return frozenset(out)

    def to_json(self):
        out = {"graph": self.name, "arity": self.arity, "jmax": self.jmax}
        if self.bound_args:
            out["bound"] = [[str(e) for e in sorted(a)] for a in self.bound_args]
        return out

    def __repr__(self):
        return f"Graph({self.name}, arity={self.arity}, bound={len(self.bound_args)})"


class Derived(EnumSet):
    """A set computed stagewise from the stages of other sets.

    ``fn(k, *stages)`` must be monotone in ``k`` and in each stage; it should
    not look at ``k`` beyond what it needs when ``exact`` is requested.
    """

    tag = "derived"

    def __init__(self, fn: Callable[..., Iterable[int]], sources: Sequence[EnumSet],
                 name: str = "derived", exact: Optional[bool] = None):
        super().__init__()
        self.fn = fn
        self.sources = tuple(sources)
        self.name = name
        self.exact = all(s.exact for s in self.sources) if exact is None else exact

    def _stage(self, k, bound):
        return _bounded(self.fn(k, *(s.stage(k) for s in self.sources)), bound)

    def exact_at(self, k):
        return self.exact or all(settled(s, k) for s in self.sources)

    def to_json(self):
        return {"derived": self.name, "args": [s.to_json() for s in self.sources]}


def literal(elements: Iterable[int] = ()) -> Literal:
    return Literal(elements)


def apply(fun: EnumSet, arg: EnumSet) -> EnumSet:
    return Apply(as_enumset(fun), as_enumset(arg))


def graph_of(fn, arity: int = 1, jmax: Optional[int] = None, monotone: bool = True,
             name: str = "graph") -> Graph:
    return Graph(fn, arity, jmax=jmax, monotone=monotone, name=name)


def as_enumset(x) -> EnumSet:
    if isinstance(x, EnumSet):
        return x
    return Literal(x)


def approx(u: EnumSet, k: int) -> frozenset:
    return as_enumset(u).stage(k)


def settled(u: EnumSet, k: int) -> bool:
    """True when stage ``k`` of ``u`` is known to be its whole denotation."""
    u = as_enumset(u)
    return u.faithful(k) and u.view(k).exact_at(k)


# -- verdicts ---------------------------------------------------------------

@dataclass(frozen=True)
class AgreeThrough:
    probe: int

    def __bool__(self):
        return True


@dataclass(frozen=True)
class MissingWitness:
    """``element`` of side ``side`` was not located on the other side within budget.

    ``definitive`` is set when the other side is settled at the budget, so the
    element can never show up there.
    """
    side: str
    element: int
    definitive: bool = False

    def __bool__(self):
        return False


def set_eq_upto(u: EnumSet, v: EnumSet, probe: int, budget: int):
    if probe > budget:
        raise ValueError("probe must not exceed budget")
    u, v = as_enumset(u), as_enumset(v)
    for side, a, b in (("left", u, v), ("right", v, u)):
        far = b.stage(budget)
        for n in sorted(a.stage(probe)):
            if n not in far:
                return MissingWitness(side, n, definitive=settled(b, budget))
    return AgreeThrough(probe)


# -- opens ------------------------------------------------------------------

@dataclass(frozen=True)
class OpenSet:
    """Finite union of basic opens ``up(p) = {U | p <= U}``."""
    basics: tuple

    def __init__(self, basics: Iterable[Iterable[int]] = ()):
        object.__setattr__(self, "basics", tuple(finset(p) for p in basics))

    def contains_finite(self, p: Iterable[int]) -> bool:
        p = frozenset(p)
        return any(b <= p for b in self.basics)

    def to_json(self):
        return [[str(e) for e in sorted(b)] for b in self.basics]


@dataclass(frozen=True)
class Yes:
    witness: object
    fuel: int

    def __bool__(self):
        return True


@dataclass(frozen=True)
class Unknown:
    budget: int

    def __bool__(self):
        return False


def open_member(opens: OpenSet, u: EnumSet, budget: int):
    u = as_enumset(u)
    for k in range(budget + 1):
        for p in opens.basics:
            if not p or p <= u.stage(k, max(p)):
                return Yes(p, k)
    return Unknown(budget)


# -- serialization ----------------------------------------------------------

def finset_to_json(p: Iterable[int]) -> list[str]:
    return [str(e) for e in sorted(p)]


def finset_from_json(items) -> frozenset:
    return finset(int(x) for x in items)


def from_json(obj, resolve: Optional[Callable[[str], EnumSet]] = None) -> EnumSet:
    """Rebuild literals, applications and named constants from JSON trees."""
    if isinstance(obj, list):
        return Literal(finset_from_json(obj))
    if "lit" in obj:
        return Literal(finset_from_json(obj["lit"]))
    if "apply" in obj:
        f, a = obj["apply"]
        return apply(from_json(f, resolve), from_json(a, resolve))
    for key in ("const", "graph", "staged"):
        if key in obj and resolve is not None:
            return resolve(obj[key])
    raise ValueError(f"cannot rebuild EnumSet from {obj!r}")
