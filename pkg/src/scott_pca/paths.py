"""Generic intervals, path witnesses and path components; finite T0 spaces."""
from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional, Sequence

from .assembly import (
    Accepted, FiniteAssembly, MalformedTuple, Rejected, classify_assembly, lands_in,
    make_finite_assembly,
)
from .coding import EMPTY, finset
from .enumset import EnumSet, Graph, Literal, current_jmax
from .lam.combinators import TupleCode, pair_values, tuple_code, tuple_concat, tuple_len, tuple_proj
from .partition import Partition
from .sierpinski import is_order_discrete

ONE = frozenset({1})


class LengthMismatch(ValueError):
    pass


class IndexOutOfRange(ValueError):
    pass


class EndpointMismatch(ValueError):
    pass


class NoMonotoneTracker(ValueError):
    pass


class NotT0(ValueError):
    def __init__(self, x, y):
        self.pair = (x, y)
        super().__init__(f"points {x!r} and {y!r} have the same neighbourhoods")


def bit_sequence(bits: Iterable[int]) -> tuple:
    bits = tuple(int(b) for b in bits)
    if not bits or any(b not in (0, 1) for b in bits):
        raise ValueError("a bit sequence is a nonempty sequence of 0/1")
    return bits


# -- generic intervals ------------------------------------------------------------------

@dataclass(frozen=True)
class GenericInterval:
    n: int
    sigma: tuple
    assembly: FiniteAssembly
    alpha: tuple
    beta: tuple


def _p(k: int, second: frozenset) -> frozenset:
    return pair_values({k}, second)


def generic_interval(n: int, sigma: Sequence[int]) -> GenericInterval:
    """``I_{n,sigma}`` on ``{0..n}`` with ``E(k) = {alpha_k, beta_k}``.

    ``alpha_k = p k X`` and ``beta_k = p (k+1) Y``, where the second
    components are chosen so that ``beta_k`` is below ``alpha_{k+1}`` when
    ``sigma_k = 0`` and above it when ``sigma_k = 1``.
    """
    sigma = bit_sequence(sigma)
    if n < 1 or len(sigma) != n:
        raise LengthMismatch(f"interval of length {n} needs {n} bits, got {len(sigma)}")
    alpha = [_p(0, ONE)]
    for k in range(1, n + 1):
        alpha.append(_p(k, ONE if sigma[k - 1] == 0 else EMPTY))
    beta = [_p(k + 1, EMPTY if sigma[k] == 0 else ONE) for k in range(n)]
    beta.append(_p(n + 1, EMPTY))
    X = make_finite_assembly(range(n + 1), {k: [alpha[k], beta[k]] for k in range(n + 1)},
                             f"I_{n},{''.join(map(str, sigma))}")
    gi = GenericInterval(n, sigma, X, tuple(alpha), tuple(beta))
    _check_interval(gi)
    return gi


def _check_interval(gi: GenericInterval):
    for k in range(gi.n):
        below = gi.beta[k] < gi.alpha[k + 1]
        above = gi.beta[k] > gi.alpha[k + 1]
        if not (below if gi.sigma[k] == 0 else above):
            raise AssertionError(f"inclusion pattern broken at {k}")
    for k in range(gi.n + 1):
        if {e // 2 for e in gi.alpha[k] if e % 2 == 0} != {k}:
            raise AssertionError(f"first projection of alpha_{k}")
        if {e // 2 for e in gi.beta[k] if e % 2 == 0} != {k + 1}:
            raise AssertionError(f"first projection of beta_{k}")


def is_oepp(f: Mapping[int, int], n: int, m: int) -> bool:
    """Order and end-point preserving ``{0..n} -> {0..m}``."""
    vals = [f[i] for i in range(n + 1)]
    return vals[0] == 0 and vals[-1] == m and all(a <= b for a, b in zip(vals, vals[1:]))


# -- tracker search -------------------------------------------------------------------------

def monotone_tracker_search(spec: Mapping, jmax: Optional[int] = None) -> Graph:
    """Find a monotone choice of outputs and return the graph of its canonical extension.

    ``spec`` maps explicit finite inputs to the allowed outputs.  The extension
    sends ``p`` to the union of the chosen outputs of all inputs below ``p``.
    """
    dom = sorted((frozenset(r) for r in spec), key=lambda r: (len(r), sorted(r)))
    allowed = {frozenset(r): [frozenset(w) for w in spec[r]] for r in spec}
    choice: dict = {}

    def search(i):
        if i == len(dom):
            return True
        r = dom[i]
        below = frozenset().union(*(choice[s] for s in dom[:i] if s <= r))
        for w in allowed[r]:
            if below <= w:
                # the extension at r is below | w, which must be exactly w
                choice[r] = w
                if search(i + 1):
                    return True
                del choice[r]
        return False

    if not search(0):
        raise NoMonotoneTracker("no monotone choice of outputs exists")
    table = tuple(choice.items())

    def ext(p):
        return frozenset().union(*(w for r, w in table if r <= p))

    top = max([current_jmax() if jmax is None else jmax] + [max(r) for r in dom if r])
    g = Graph(ext, 1, top, name="monotone-extension")
    g.choice = dict(choice)
    return g


# -- path witnesses -------------------------------------------------------------------------

@dataclass(frozen=True)
class PathWitness:
    X: FiniteAssembly
    points: tuple
    sigma: tuple
    realizer: EnumSet = field(compare=False)
    components: tuple = ()

    @property
    def length(self) -> int:
        return len(self.sigma)


def _components(tup: EnumSet, count: int) -> list:
    return [tuple_proj(tup, i) for i in range(count)]


def path_realizer_check(X: FiniteAssembly, points: Sequence, sigma: Sequence[int],
                        tup: EnumSet, probe: int, budget: int):
    """Check a coded tuple ``[U0, V0, W0, ..., U_n]`` against points ``(x0, y0, ..., x_n, y_n)``."""
    sigma = bit_sequence(sigma)
    n = len(sigma)
    points = tuple(points)
    if len(points) != 2 * n + 2:
        raise IndexOutOfRange(f"{len(points)} points for a path of length {n}")
    for x in points:
        if x not in X.E:
            raise IndexOutOfRange(f"{x!r} is not in the carrier")
    markers = tuple_len(tup).stage(budget)
    if markers != {3 * n}:
        raise MalformedTuple(f"expected {3 * n + 1} components, length markers {sorted(markers)}")
    comps = _components(tup, 3 * n + 1)
    xs, ys = points[0::2], points[1::2]
    unsure = None

    def land(comp, x, what):
        nonlocal unsure
        out = lands_in(comp, X.E[x], probe, budget)
        if out:
            return out.witness
        if out.definitive:
            raise _Reject(Rejected(what[0], what[1:], out.evidence))
        if unsure is None:
            unsure = Rejected(what[0], what[1:], out.evidence, definitive=False)
        return None

    try:
        for k in range(n + 1):
            if xs[k] != ys[k]:
                return Rejected(1, ("U", k), f"{xs[k]!r} and {ys[k]!r} differ")
            land(comps[3 * k], xs[k], (1, "U", k))
        for k in range(n):
            v = land(comps[3 * k + 1], ys[k], (2, "V", k))
            w = land(comps[3 * k + 2], xs[k + 1], (2, "W", k))
            if v is None or w is None:
                continue
            if not (v <= w if sigma[k] == 0 else w <= v):
                return Rejected(3, ("inclusion", k), (sorted(v), sorted(w), sigma[k]))
    except _Reject as r:
        return r.verdict
    return unsure if unsure is not None else Accepted(probe)


class _Reject(Exception):
    def __init__(self, verdict):
        self.verdict = verdict


def make_path(X: FiniteAssembly, points: Sequence, sigma: Sequence[int],
              components: Sequence[Iterable[int]]) -> PathWitness:
    comps = tuple(finset(c) for c in components)
    return PathWitness(X, tuple(points), bit_sequence(sigma),
                       tuple_code([Literal(c) for c in comps]), comps)


def const(X: FiniteAssembly, x, U: Optional[Iterable[int]] = None) -> PathWitness:
    u = finset(X.realizers(x)[0] if U is None else U)
    return make_path(X, (x, x, x, x), (0,), (u, u, u, u))


def source(p: PathWitness):
    return p.points[0]


def target(p: PathWitness):
    return p.points[-1]


def _parts(p: PathWitness) -> list:
    if isinstance(p.realizer, TupleCode):
        return list(p.realizer.parts)
    return _components(p.realizer, 3 * p.length + 1)


def compose(p: PathWitness, q: PathWitness) -> PathWitness:
    """``p * q``: glue at the shared end point, keeping ``p``'s realizer there."""
    if target(p) != source(q):
        raise EndpointMismatch(f"{target(p)!r} != {source(q)!r}")
    realizer = tuple_concat(p.realizer, tuple_code(_parts(q)[1:]))
    comps = p.components + q.components[1:] if p.components and q.components else ()
    return PathWitness(p.X, p.points[:-1] + q.points[1:], p.sigma + q.sigma, realizer, comps)


def reverse(p: PathWitness) -> PathWitness:
    n = p.length
    parts = _parts(p)
    order = [0] * (3 * n + 1)
    # new U_k = U_{n-k}; new V_k = W_{n-1-k}; new W_k = V_{n-1-k}
    for k in range(n + 1):
        order[3 * k] = 3 * (n - k)
    for k in range(n):
        order[3 * k + 1] = 3 * (n - 1 - k) + 2
        order[3 * k + 2] = 3 * (n - 1 - k) + 1
    comps = tuple(p.components[i] for i in order) if p.components else ()
    sigma = tuple(1 - b for b in reversed(p.sigma))
    return PathWitness(p.X, p.points[::-1], sigma, tuple_code([parts[i] for i in order]), comps)


def check_path(p: PathWitness, probe: int, budget: int):
    return path_realizer_check(p.X, p.points, p.sigma, p.realizer, probe, budget)


def step_paths(X: FiniteAssembly, x, y):
    """Length-one path witnesses from ``x`` to ``y`` through comparable realizers."""
    for u in X.realizers(x):
        for v in X.realizers(y):
            if u <= v:
                yield make_path(X, (x, x, y, y), (0,), (u, u, v, v))
            if v <= u:
                yield make_path(X, (x, x, y, y), (1,), (u, u, v, v))


def path_components(X: FiniteAssembly, probe: int = 8, budget: int = 16) -> Partition:
    """Blocks of the relation "some accepted path joins x and y"."""
    links = []
    adj: dict = {x: set() for x in X.carrier}
    top = X.max_code()
    # the reverse of an accepted path is accepted, so one direction per pair suffices
    for x, y in itertools.combinations(X.carrier, 2):
        for p in step_paths(X, x, y):
            if check_path(p, max(probe, top), max(budget, top)):
                adj[x].add(y)
                adj[y].add(x)
                links.append((x, y, p.components[1], p.components[2]))
                break
    seen: dict = {}
    blocks = []
    for x in X.carrier:
        if x in seen:
            continue
        block = {x}
        todo = deque([x])
        while todo:
            a = todo.popleft()
            for b in adj[a]:
                if b not in block:
                    block.add(b)
                    todo.append(b)
        for b in block:
            seen[b] = True
        blocks.append(frozenset(block))
    return Partition(tuple(blocks), tuple(links))


# -- finite T0 spaces -------------------------------------------------------------------

@dataclass(frozen=True)
class FiniteT0Space:
    points: tuple
    subbasis: tuple

    def __init__(self, points: Iterable, subbasis: Iterable[Iterable]):
        object.__setattr__(self, "points", tuple(points))
        object.__setattr__(self, "subbasis", tuple(frozenset(s) for s in subbasis))
        for s in self.subbasis:
            if not s <= set(self.points):
                raise ValueError(f"subbasic set {sorted(map(str, s))} leaves the space")

    def code(self, x) -> frozenset:
        return frozenset(n for n, s in enumerate(self.subbasis) if x in s)


@dataclass(frozen=True)
class SpaceReport:
    assembly: FiniteAssembly
    order: frozenset          # pairs (x, y) with x <= y
    t1: bool
    order_discrete: bool
    components: Partition
    partitioned: bool
    modest: bool


def space_from_json(obj) -> FiniteT0Space:
    return FiniteT0Space(obj["points"], obj["subbasis"])


def embed_finite_t0(space: FiniteT0Space) -> SpaceReport:
    codes = {x: space.code(x) for x in space.points}
    for x, y in itertools.combinations(space.points, 2):
        if codes[x] == codes[y]:
            raise NotT0(x, y)
    X = make_finite_assembly(space.points, {x: [codes[x]] for x in space.points}, "space")
    order = frozenset((x, y) for x in space.points for y in space.points if codes[x] <= codes[y])
    t1 = all((x, y) not in order for x, y in itertools.permutations(space.points, 2))
    flags = classify_assembly(X)
    return SpaceReport(X, order, t1, bool(is_order_discrete(X)), path_components(X),
                       flags.partitioned, flags.modest)
