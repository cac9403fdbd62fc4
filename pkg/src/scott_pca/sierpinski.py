"""The Sierpinski object: realizers as Sigma^N, order-discreteness, Sigma-subobjects and the lift monad."""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Mapping, Optional

from .assembly import (
    FiniteAssembly, Morphism, check_tracker, make_finite_assembly, sigma, terminal,
)
from .coding import EMPTY, pair, unpair
from .enumset import (
    EnumSet, Graph, Literal, OpenSet, Staged, Unknown, Yes, apply, as_enumset, current_jmax,
    settled,
)
from .lam import interpret, parse_term, tuple_code, tuple_value
from .lam.combinators import TRUE, decode_tuple, numeral, pairing
from .partition import Partition

ONE = frozenset({1})


# -- S = Sigma^N ---------------------------------------------------------------------

def _chi_forward(u):
    return {pair(1 << n, 1) for n in u}


def _chi_backward(w):
    # {n | 1 in W n}: the codes <0, 1> and <2^n, 1> of W are the only ones that matter
    always = any(unpair(c) == (0, 1) for c in w)
    hits = set()
    for c in w:
        m, j = unpair(c)
        if j == 1 and m and m & (m - 1) == 0:
            hits.add(m.bit_length() - 1)

    def stage(k):
        return range(k + 1) if always else [n for n in hits if n <= k]

    return Staged(stage, "chi-inverse-image")


def chi_iso_trackers(jmax: Optional[int] = None) -> tuple[Graph, Graph]:
    """Trackers of ``chi: S -> Sigma^N`` and of its inverse."""
    jmax = current_jmax() if jmax is None else jmax
    forward = Graph(_chi_forward, 1, jmax, name="chi")
    backward = Graph(_chi_backward, 1, jmax, name="chi-inverse")
    return forward, backward


# -- membership realizer ------------------------------------------------------------

def elementhood_realizer(n: int, U: EnumSet, budget: int):
    """``Yes(p n U)`` once ``n`` shows up in ``U`` within the budget."""
    U = as_enumset(U)
    for k in range(budget + 1):
        if n in U.stage(k, n):
            return Yes(apply(apply(pairing(), numeral(n)), U), k)
    return Unknown(budget)


# -- order-discreteness ---------------------------------------------------------------

class NotOrderDiscrete(ValueError):
    def __init__(self, witness):
        self.witness = witness
        super().__init__(f"comparable realizers across distinct elements: {witness!r}")


@dataclass(frozen=True)
class ODResult:
    order_discrete: bool
    witness: Optional[tuple] = None

    def __bool__(self):
        return self.order_discrete


def is_order_discrete(X: FiniteAssembly) -> ODResult:
    for x in X.carrier:
        for y in X.carrier:
            if x == y:
                continue
            for u in X.realizers(x):
                for v in X.realizers(y):
                    if u <= v:
                        return ODResult(False, (x, y, u, v))
    return ODResult(True)


@dataclass(frozen=True)
class ODWitness:
    A: EnumSet
    provenance: str = "\\u v. u, valid for assemblies"

    def section(self, F: EnumSet, jmax: Optional[int] = None) -> Graph:
        """Graph of ``0 -> A(F0)(F0)``, ``W != 0 -> A(F0)(F1)`` for ``F`` realizing ``f ~ f`` in ``X^Sigma``."""
        F = as_enumset(F)
        at_bottom = apply(apply(self.A, apply(F, Literal(EMPTY))), apply(F, Literal(EMPTY)))
        at_top = apply(apply(self.A, apply(F, Literal(EMPTY))), apply(F, TRUE))
        return Graph(lambda w: at_top if w else at_bottom, 1, jmax, name="od-section")


def od_witness(X: FiniteAssembly) -> ODWitness:
    res = is_order_discrete(X)
    if not res:
        raise NotOrderDiscrete(res.witness)
    return ODWitness(interpret(parse_term(r"\u v. u")))


def check_od_witness(X: FiniteAssembly, w: ODWitness, probe: int, budget: int):
    """For comparable ``U in E(x)``, ``V in E(x')``, require ``x = x'`` and ``AUV in E(x)``."""
    from .assembly import Accepted, Rejected, lands_in

    for x in X.carrier:
        for y in X.carrier:
            for u in X.realizers(x):
                for v in X.realizers(y):
                    if not u <= v:
                        continue
                    if x != y:
                        return Rejected(0, (x, y, u, v), "distinct elements")
                    out = lands_in(apply(apply(w.A, Literal(u)), Literal(v)), X.E[x], probe, budget)
                    if not out:
                        return Rejected(1, (x, y, u, v), out.evidence, out.definitive)
    return Accepted(probe)


def comparable_links(X: FiniteAssembly):
    """Edges ``(x, y, U, V)`` for distinct ``x, y`` with ``U <= V`` or ``V <= U``."""
    for x, y in itertools.combinations(X.carrier, 2):
        for u in X.realizers(x):
            for v in X.realizers(y):
                if u <= v or v <= u:
                    yield (x, y, u, v)
                    break
            else:
                continue
            break


def od_reflection(X: FiniteAssembly) -> tuple[Partition, FiniteAssembly]:
    """Collapse zigzags of comparable realizers; the quotient is order-discrete."""
    part = Partition.from_links(X.carrier, comparable_links(X))
    E = {}
    for b in part.blocks:
        sets = []
        for x in X.carrier:
            if x in b:
                sets.extend(u for u in X.realizers(x) if u not in sets)
        E[b] = sets
    return part, make_finite_assembly(part.blocks, E, f"od({X.name})")


# -- Sigma-subobjects ---------------------------------------------------------------

class NotCrisp(ValueError):
    def __init__(self, x):
        self.x = x
        super().__init__(f"realizers of {x!r} straddle the open")


def _indicator(opens: OpenSet):
    def fn(p):
        return ONE if opens.contains_finite(p) else EMPTY
    return fn


def open_jmax(opens: OpenSet) -> int:
    return max([current_jmax()] + [max(b) for b in opens.basics if b])


def sigma_sub_from_open(X: FiniteAssembly, opens: OpenSet, probe: int = 8, budget: int = 16):
    """The subset cut out by ``opens`` and its classifying morphism ``X -> Sigma``."""
    inside = []
    for x in X.carrier:
        flags = {opens.contains_finite(u) for u in X.realizers(x)}
        if len(flags) > 1:
            raise NotCrisp(x)
        if flags == {True}:
            inside.append(x)
    tracker = Graph(_indicator(opens), 1, open_jmax(opens), name="open-indicator")
    S = sigma()
    f = Morphism(X, S, {x: int(x in inside) for x in X.carrier}, tracker)
    return tuple(inside), check_tracker(f, probe, budget)


@dataclass(frozen=True)
class SigmaTrace:
    subset: tuple
    trace: Mapping            # (x, V) -> True | None (1 seen / not seen within budget)


def sigma_sub_classify(f: Morphism, budget: int) -> SigmaTrace:
    """Trace of the open ``{V | UV = 1}`` on the explicit realizers of the source."""
    trace = {}
    for x, v in f.source.pairs():
        out = apply(f.tracker, Literal(v)).stage(budget, 1)
        trace[x, v] = True if 1 in out else None
    subset = tuple(x for x in f.source.carrier if f.map[x] == 1)
    return SigmaTrace(subset, trace)


def subassembly(X: FiniteAssembly, labels: Iterable) -> FiniteAssembly:
    labels = [x for x in X.carrier if x in set(labels)]
    return make_finite_assembly(labels, {x: X.E[x] for x in labels}, f"sub({X.name})")


# -- the lift monad -------------------------------------------------------------------

@dataclass(frozen=True)
class Bottom:
    depth: int

    def __str__(self):
        return "_|_" + "'" * self.depth


def _bottom_depth(x) -> int:
    return x.depth + 1 if isinstance(x, Bottom) else 0


@dataclass(frozen=True)
class LiftAssembly(FiniteAssembly):
    base: Optional[FiniteAssembly] = None
    bottom: Optional[Bottom] = None


def lift_object(X: FiniteAssembly) -> LiftAssembly:
    bot = Bottom(max((_bottom_depth(x) for x in X.carrier), default=0))
    E = {x: [tuple_value([u, ONE]) for u in X.realizers(x)] for x in X.carrier}
    E[bot] = [EMPTY]
    base = make_finite_assembly(X.carrier + (bot,), E)
    return LiftAssembly(base.carrier, base.E, f"L({X.name})", base=X, bottom=bot)


def lift_jmax(*assemblies: FiniteAssembly) -> int:
    return max([current_jmax()] + [A.max_code() for A in assemblies])


def _lift_tracker(uf: EnumSet, name: str, jmax: int) -> Graph:
    def fn(w):
        markers, comps = decode_tuple(w)
        if 1 not in comps.get(1, EMPTY):
            return EMPTY
        return tuple_code([apply(uf, Literal(comps.get(0, EMPTY))), TRUE])

    return Graph(fn, 1, jmax, name=name)


def lift_morphism(f: Morphism, probe: int, budget: int) -> Morphism:
    LX, LY = lift_object(f.source), lift_object(f.target)
    m = dict(f.map)
    m[LX.bottom] = LY.bottom
    tracker = _lift_tracker(f.tracker, "L(f)", lift_jmax(LX, LY))
    return check_tracker(Morphism(LX, LY, m, tracker), probe, budget)


def eta(X: FiniteAssembly, probe: int, budget: int) -> Morphism:
    LX = lift_object(X)
    tracker = interpret(parse_term(r"\u. [u, #1]"), jmax=lift_jmax(X))
    return check_tracker(Morphism(X, LX, {x: x for x in X.carrier}, tracker), probe, budget)


def mu(X: FiniteAssembly, probe: int, budget: int) -> Morphism:
    LX = lift_object(X)
    LLX = lift_object(LX)

    def fn(w):
        markers, comps = decode_tuple(w)
        return comps.get(0, EMPTY) if 1 in comps.get(1, EMPTY) else EMPTY

    m = {x: x for x in X.carrier}
    m[LX.bottom] = LX.bottom
    m[LLX.bottom] = LX.bottom
    tracker = Graph(fn, 1, lift_jmax(LLX), name="mu")
    return check_tracker(Morphism(LLX, LX, m, tracker), probe, budget)


def chi_classifier(X: FiniteAssembly, probe: int, budget: int) -> Morphism:
    """``L(X) -> Sigma`` sending ``X`` to 1 and the bottom to 0."""
    LX = lift_object(X)

    def fn(w):
        return ONE if 1 in decode_tuple(w)[1].get(1, EMPTY) else EMPTY

    m = {x: 1 for x in X.carrier}
    m[LX.bottom] = 0
    tracker = Graph(fn, 1, lift_jmax(LX), name="chi_X")
    return check_tracker(Morphism(LX, sigma(), m, tracker), probe, budget)


def tilde(f: Morphism, X: FiniteAssembly, opens: OpenSet, probe: int, budget: int) -> Morphism:
    """Extend ``f: U -> Y`` (``U`` cut out of ``X`` by ``opens``) to ``X -> L(Y)``."""
    inside, _ = sigma_sub_from_open(X, opens, probe, budget)
    if set(inside) != set(f.source.carrier):
        raise ValueError("the open does not cut out the domain of f")
    LY = lift_object(f.target)

    def fn(w):
        if not opens.contains_finite(w):
            return EMPTY
        return tuple_code([apply(f.tracker, Literal(w)), TRUE])

    m = {x: (f.map[x] if x in inside else LY.bottom) for x in X.carrier}
    tracker = Graph(fn, 1, max(lift_jmax(X), open_jmax(opens)), name="tilde")
    return check_tracker(Morphism(X, LY, m, tracker), probe, budget)


def is_pullback_square(h: Mapping, U_labels: Iterable, f_map: Mapping, bottom) -> bool:
    """Carrier-level pullback of ``eta_Y`` along ``h``: ``h`` agrees with ``f`` exactly on ``U``."""
    U_labels = set(U_labels)
    for x, y in h.items():
        if x in U_labels:
            if y != f_map[x]:
                return False
        elif y != bottom:
            return False
    return True


def lift_one_iso(probe: int, budget: int) -> tuple[Morphism, Morphism]:
    """``L(1) -> Sigma`` and back; ``[0, 1]`` corresponds to ``{1}`` and the bottom to the empty set."""
    L1 = lift_object(terminal())
    S = sigma()
    jmax = lift_jmax(L1)
    to_s = {L1.carrier[0]: 1, L1.bottom: 0}
    there = interpret(parse_term(r"\u. proj u #1"), jmax=jmax)
    back = interpret(parse_term(r"\s. q s [{}, #1] {}"), jmax=jmax)
    f = check_tracker(Morphism(L1, S, to_s, there), probe, budget)
    g = check_tracker(Morphism(S, L1, {v: k for k, v in to_s.items()}, back), probe, budget)
    return f, g


# -- intuitionistic-principle realizer -----------------------------------------------

IP_TERM = r"\u. p (p0 (u k)) (\v. p1 (u k))"


def ip_realizer(jmax: Optional[int] = None) -> EnumSet:
    return interpret(parse_term(IP_TERM), jmax=jmax)


# -- failure of unions ---------------------------------------------------------------

@dataclass(frozen=True)
class Violation:
    condition: int
    U: frozenset
    V: frozenset
    observed: tuple
    fuel: int

    def __bool__(self):
        return False


@dataclass(frozen=True)
class Inconclusive:
    budget: int

    def __bool__(self):
        return False


FALSIFIER_ORDER = ((ONE, ONE), (EMPTY, ONE), (ONE, EMPTY), (EMPTY, EMPTY))


def union_failure_falsifier(F: EnumSet, G: EnumSet, budget: int):
    """Look for an instance where ``F, G`` fail to realize ``1 in Z <-> 1 in X or 1 in Y``.

    Condition 1: if ``1 in U`` or ``1 in V`` then ``1 in F(U,V)``.
    Condition 2: if ``1 in F(U,V)`` then ``G(F(U,V))`` is ``{0}`` with ``1 in U``
    or ``{1}`` with ``1 in V``.  Judged at ``budget``; a failure counts only once
    later stages cannot repair it.
    """
    for u, v in FALSIFIER_ORDER:
        w = apply(apply(F, Literal(u)), Literal(v))
        wk = w.stage(budget)
        if (1 in u or 1 in v) and 1 not in wk and settled(w, budget):
            return Violation(1, u, v, (tuple(sorted(wk)),), budget)
        if 1 in wk:
            gw = apply(G, w)
            g = gw.stage(budget)
            done = settled(gw, budget)
            # each disjunct is lost for good once g holds a stray element
            left = 1 in u and g <= {0} and (not done or g == {0})
            right = 1 in v and g <= {1} and (not done or g == {1})
            if not (left or right):
                return Violation(2, u, v, (tuple(sorted(wk)), tuple(sorted(g))), budget)
    return Inconclusive(budget)


def falsifier_candidates(jmax: Optional[int] = None) -> dict:
    """Named continuous candidates for the falsifier."""
    union = Graph(lambda a, b: a | b, 2, jmax, name="union")
    return {
        "union": union,
        "empty": Graph(lambda a, b: EMPTY, 2, jmax, name="empty"),
        "tagged-union": Graph(
            lambda a, b: a | b | ({2} if 1 in a else set()) | ({3} if 1 in b else set()),
            2, jmax, name="tagged-union"),
        "const0": Graph(lambda w: {0}, 1, jmax, name="const0"),
        "const1": Graph(lambda w: {1}, 1, jmax, name="const1"),
        "identity": Graph(lambda w: w, 1, jmax, name="identity"),
        "shift-down": Graph(lambda w: {n - 1 for n in w if n}, 1, jmax, name="shift-down"),
        "left-on-marker": Graph(lambda w: {0} if 1 in w else EMPTY, 1, jmax, name="left-on-marker"),
        "marker-sides": Graph(
            lambda w: ({0} if 2 in w else set()) | ({1} if 3 in w else set()),
            1, jmax, name="marker-sides"),
    }
