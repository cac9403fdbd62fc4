"""The standard combinators of the graph model and the tuple coding.

Tuples use the marker format ``[U0, ..., Un] = {<0, n>} | {<i+1, m> | m in Ui}``:
the length marker and every component are readable from single elements,
so length, projection and concatenation are all continuous.
"""
from __future__ import annotations

from typing import Optional, Sequence

from ..coding import pair, unpair
from ..enumset import (
    Derived, EnumSet, Graph, Literal, Staged, as_enumset, current_jmax, settled,
)

TRUE = Literal({1})
FALSE = Literal({0})


def numeral(n: int) -> Literal:
    return Literal({n})


def _p_stage(k):
    out = []
    for n in range(k + 1):
        out.append(pair(1 << n, pair(0, 2 * n)))
        out.append(pair(0, pair(1 << n, 2 * n + 1)))
    return out


def pairing() -> Staged:
    """``p`` as the explicit set ``{<2^n,<0,2n>>} | {<0,<2^n,2n+1>>}``, stage ``k`` holding ``n <= k``."""
    return Staged(_p_stage, "p")


def pair_values(u, v) -> frozenset:
    """``pUV = {2n | n in U} | {2n+1 | n in V}`` on finite sets."""
    return frozenset(2 * n for n in u) | frozenset(2 * n + 1 for n in v)


# -- tuples ------------------------------------------------------------------

def _tuple_elems(stages):
    out = {pair(0, len(stages) - 1)}
    for i, s in enumerate(stages):
        out.update(pair(i + 1, m) for m in s)
    return out


class TupleCode(EnumSet):
    """``[U0, ..., Un]`` built from component sets."""

    tag = "tuple"

    def __init__(self, parts: Sequence[EnumSet]):
        super().__init__()
        if not parts:
            raise ValueError("tuples have at least one component")
        self.parts = tuple(as_enumset(p) for p in parts)
        self.exact = all(p.exact for p in self.parts)

    def _stage(self, k, bound):
        out = set()
        if bound is None or pair(0, len(self.parts) - 1) <= bound:
            out.add(pair(0, len(self.parts) - 1))
        for i, part in enumerate(self.parts):
            # pair(i+1, m) >= i+1+m
            inner = None if bound is None else bound - i - 1
            if inner is not None and inner < 0:
                continue
            for m in part.stage(k, inner):
                c = pair(i + 1, m)
                if bound is None or c <= bound:
                    out.add(c)
        return frozenset(out)

    def exact_at(self, k):
        return all(settled(p, k) for p in self.parts)

    def to_json(self):
        return {"tuple": [p.to_json() for p in self.parts]}


def tuple_code(parts: Sequence) -> TupleCode:
    return TupleCode(parts)


def tuple_value(parts: Sequence) -> frozenset:
    """The coded tuple of finite sets, as a finite set."""
    return frozenset(_tuple_elems([frozenset(p) for p in parts]))


def decode_tuple(w) -> tuple[frozenset, dict[int, frozenset]]:
    """Length markers and components present in a finite set."""
    markers = set()
    comps: dict[int, set] = {}
    for c in w:
        i, m = unpair(c)
        if i == 0:
            markers.add(m)
        else:
            comps.setdefault(i - 1, set()).add(m)
    return frozenset(markers), {i: frozenset(s) for i, s in comps.items()}


def _len_of(w):
    return decode_tuple(w)[0]


def _proj_of(w, idx):
    comps = decode_tuple(w)[1]
    out = set()
    for i in idx:
        out |= comps.get(i, frozenset())
    return out


def _concat_of(a, b):
    la, ca = decode_tuple(a)
    lb, cb = decode_tuple(b)
    out = set()
    for n in la:
        for n2 in lb:
            out.add(pair(0, n + n2 + 1))
            out.update(pair(n + 1 + i + 1, m) for i, s in cb.items() for m in s)
    out.update(pair(i + 1, m) for i, s in ca.items() for m in s)
    return out


class _TupleOp(Derived):
    """Tuple operator computed by decoding; short-circuits on literal tuple codes."""

    def __init__(self, fn, sources, name, shortcut):
        super().__init__(fn, sources, name=name)
        self._shortcut = shortcut

    def view(self, k):
        out = self._shortcut(k, *(s.view(k) for s in self.sources))
        return self if out is None else out.view(k)

    def faithful(self, k):
        v = self.view(k)
        if v is self:
            return True
        if not all(s.faithful(k) for s in self.sources):
            return False
        # a projection picked its part from the index seen so far
        if self.name == "proj" and not settled(self.sources[1], k):
            return False
        return v.faithful(k)

    def _stage(self, k, bound):
        v = self.view(k)
        if v is not self:
            return v.stage(k, bound)
        return super()._stage(k, bound)


def _len_short(k, t):
    if isinstance(t, TupleCode):
        return Literal({len(t.parts) - 1})
    return None


def _proj_short(k, t, idx):
    if isinstance(t, TupleCode):
        ids = idx.stage(k)
        if not ids:
            return Literal(())
        if len(ids) == 1:
            (i,) = ids
            return t.parts[i] if i < len(t.parts) else Literal(())
    return None


def _concat_short(k, a, b):
    if isinstance(a, TupleCode) and isinstance(b, TupleCode):
        return TupleCode(a.parts + b.parts)
    return None


def tuple_len(t) -> EnumSet:
    return _TupleOp(lambda k, w: _len_of(w), [as_enumset(t)], "len", _len_short)


def tuple_proj(t, i) -> EnumSet:
    if isinstance(i, int):
        i = numeral(i)
    return _TupleOp(lambda k, w, idx: _proj_of(w, idx), [as_enumset(t), as_enumset(i)], "proj",
                    _proj_short)


def tuple_concat(a, b) -> EnumSet:
    return _TupleOp(lambda k, x, y: _concat_of(x, y), [as_enumset(a), as_enumset(b)], "concat",
                    _concat_short)


# -- the environment ---------------------------------------------------------

def _q(b, u, v):
    out = set()
    if 1 in b:
        out |= u
    if 0 in b:
        out |= v
    return out


def std_combinators(jmax: Optional[int] = None) -> dict[str, EnumSet]:
    """Fresh combinators ``p, p0, p1, t, f, q, k, i, len, proj, concat``.

    Graphs are built with ``jmax`` (default: the current graph cap).
    """
    from .semantics import interpret
    from .syntax import parse_term

    jmax = current_jmax() if jmax is None else jmax
    env: dict[str, EnumSet] = {
        "p": pairing(),
        "p0": Graph(lambda w: {n // 2 for n in w if n % 2 == 0}, 1, jmax, name="p0"),
        "p1": Graph(lambda w: {n // 2 for n in w if n % 2 == 1}, 1, jmax, name="p1"),
        "t": TRUE,
        "f": FALSE,
        "q": Graph(_q, 3, jmax, name="q"),
        "len": Graph(_len_of, 1, jmax, name="len"),
        "proj": Graph(_proj_of, 2, jmax, name="proj"),
        "concat": Graph(_concat_of, 2, jmax, name="concat"),
    }
    env["k"] = interpret(parse_term(r"\x y. x"), {}, env, jmax=jmax)
    env["i"] = interpret(parse_term(r"\x. x"), {}, env, jmax=jmax)
    return env
