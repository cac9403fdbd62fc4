"""Finite assemblies over the graph model, morphisms and their trackers."""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field, replace
from typing import Callable, Hashable, Iterable, Mapping, Optional, Sequence, Union

from .coding import EMPTY, finset
from .enumset import (
    EnumSet, Literal, MissingWitness, apply, as_enumset, finset_from_json, finset_to_json,
    set_eq_upto,
)
from .lam.combinators import pair_values, tuple_len, tuple_proj

Label = Hashable


# -- realizer specifications ----------------------------------------------------

@dataclass(frozen=True)
class ExplicitFinite:
    sets: tuple

    def __init__(self, sets: Iterable[Iterable[int]]):
        seen = []
        for s in sets:
            s = finset(s)
            if s not in seen:
                seen.append(s)
        object.__setattr__(self, "sets", tuple(seen))

    def __iter__(self):
        return iter(self.sets)

    def __len__(self):
        return len(self.sets)


@dataclass(frozen=True)
class Predicate:
    """Realizers described by a fuel-bounded test ``test(U, probe, budget) -> verdict``."""
    test: Callable
    description: str = "predicate"


RealizerSpec = Union[ExplicitFinite, Predicate]


class EmptyRealizerSet(ValueError):
    def __init__(self, x):
        self.x = x
        super().__init__(f"element {x!r} has no realizers")


class PredicateSpecUnsupported(TypeError):
    pass


class NotPartitioned(ValueError):
    pass


class MalformedTuple(ValueError):
    pass


@dataclass(frozen=True)
class FiniteAssembly:
    carrier: tuple
    E: Mapping
    name: str = ""

    def realizers(self, x) -> tuple:
        spec = self.E[x]
        if not isinstance(spec, ExplicitFinite):
            raise PredicateSpecUnsupported(f"realizers of {x!r} are given by a predicate")
        return spec.sets

    @property
    def explicit(self) -> bool:
        return all(isinstance(self.E[x], ExplicitFinite) for x in self.carrier)

    def __len__(self):
        return len(self.carrier)

    def pairs(self):
        """All ``(x, U)`` with ``U`` an explicit realizer of ``x``."""
        for x in self.carrier:
            for u in self.realizers(x):
                yield x, u

    def max_code(self) -> int:
        """Largest natural occurring in any explicit realizer (-1 if none)."""
        return max((max(u) for _, u in self.pairs() if u), default=-1)

    def to_json(self):
        return {
            "carrier": [str(x) for x in self.carrier],
            "E": {str(x): [finset_to_json(u) for u in self.realizers(x)] for x in self.carrier},
        }


def make_finite_assembly(carrier: Iterable, E: Mapping, name: str = "") -> FiniteAssembly:
    carrier = tuple(carrier)
    if len(set(carrier)) != len(carrier):
        raise ValueError("carrier labels must be distinct")
    specs = {}
    for x in carrier:
        if x not in E:
            raise EmptyRealizerSet(x)
        spec = E[x]
        if not isinstance(spec, (ExplicitFinite, Predicate)):
            spec = ExplicitFinite(spec)
        if isinstance(spec, ExplicitFinite) and not spec.sets:
            raise EmptyRealizerSet(x)
        specs[x] = spec
    return FiniteAssembly(carrier, specs, name)


def assembly_from_json(obj) -> FiniteAssembly:
    carrier = list(obj["carrier"])
    E = {x: [finset_from_json(u) for u in obj["E"][x]] for x in carrier if x in obj["E"]}
    return make_finite_assembly(carrier, E)


# -- canonical assemblies ---------------------------------------------------------

def sigma() -> FiniteAssembly:
    return make_finite_assembly((0, 1), {0: [EMPTY], 1: [{1}]}, "Sigma")


def terminal() -> FiniteAssembly:
    return make_finite_assembly(("*",), {"*": [EMPTY]}, "1")


def nabla(labels: Iterable) -> FiniteAssembly:
    labels = tuple(labels)
    return make_finite_assembly(labels, {y: [EMPTY] for y in labels}, "nabla")


def nat_upto(k: int) -> FiniteAssembly:
    """The truncation ``{0..k}`` of the natural numbers object."""
    return make_finite_assembly(range(k + 1), {n: [{n}] for n in range(k + 1)}, f"N<={k}")


def integral(X: FiniteAssembly) -> FiniteAssembly:
    """``(x, U)`` for ``U`` realizing ``x``, realized by ``U`` alone."""
    carrier = [(x, u) for x, u in X.pairs()]
    return make_finite_assembly(carrier, {c: [c[1]] for c in carrier}, f"int({X.name})")


def double_integral(X: FiniteAssembly) -> FiniteAssembly:
    """``(x, U, V)`` for ``U, V`` realizing ``x``, realized by ``pUV``."""
    carrier = [(x, u, v) for x in X.carrier for u in X.realizers(x) for v in X.realizers(x)]
    return make_finite_assembly(carrier, {c: [pair_values(c[1], c[2])] for c in carrier},
                                f"intint({X.name})")


def binary_product(X: FiniteAssembly, Y: FiniteAssembly) -> FiniteAssembly:
    carrier = [(x, y) for x in X.carrier for y in Y.carrier]
    E = {(x, y): [pair_values(u, v) for u in X.realizers(x) for v in Y.realizers(y)]
         for x, y in carrier}
    return make_finite_assembly(carrier, E, f"{X.name}x{Y.name}")


# -- classification ---------------------------------------------------------------

@dataclass(frozen=True)
class Classification:
    partitioned: bool
    modest: bool
    discrete: bool
    join_property: bool


def classify_assembly(X: FiniteAssembly) -> Classification:
    if not X.explicit:
        raise PredicateSpecUnsupported("classification needs explicit realizers")
    partitioned = all(len(X.realizers(x)) == 1 for x in X.carrier)
    modest = all(not set(X.realizers(x)) & set(X.realizers(y))
                 for x, y in itertools.combinations(X.carrier, 2))
    joins = all(u | v in X.realizers(x)
                for x in X.carrier for u in X.realizers(x) for v in X.realizers(x))
    return Classification(partitioned, modest, modest, joins)


# -- membership of a computed realizer ---------------------------------------------

@dataclass(frozen=True)
class Lands:
    witness: object
    fuel: int

    def __bool__(self):
        return True


@dataclass(frozen=True)
class Misses:
    evidence: object
    definitive: bool

    def __bool__(self):
        return False


def lands_in(result: EnumSet, spec: RealizerSpec, probe: int, budget: int):
    """Does ``result`` belong to the realizer set ``spec``, judged at fuel?

    For explicit specs this asks for agreement with some candidate; a miss is
    definitive only if every candidate is ruled out beyond any fuel.
    """
    if isinstance(spec, Predicate):
        v = spec.test(result, probe, budget)
        if v:
            return Lands(v, probe)
        return Misses(v, bool(getattr(v, "definitive", False)))
    evidence = []
    definitive = True
    for w in spec.sets:
        v = set_eq_upto(result, Literal(w), probe, budget)
        if v:
            return Lands(w, probe)
        evidence.append((sorted(w), v))
        definitive = definitive and v.definitive
    return Misses(tuple(evidence), definitive)


# -- morphisms --------------------------------------------------------------------

@dataclass(frozen=True)
class Unverified:
    pass


@dataclass(frozen=True)
class Verified:
    fuel: int

    def __bool__(self):
        return True


@dataclass(frozen=True)
class Refuted:
    x: object
    V: frozenset
    evidence: object

    def __bool__(self):
        return False


@dataclass(frozen=True)
class Inconclusive:
    x: object
    V: frozenset
    evidence: object

    def __bool__(self):
        return False


@dataclass(frozen=True)
class Morphism:
    source: FiniteAssembly
    target: FiniteAssembly
    map: Mapping
    tracker: EnumSet
    verdict: object = field(default=Unverified(), compare=False)

    def __post_init__(self):
        missing = [x for x in self.source.carrier if x not in self.map]
        if missing:
            raise ValueError(f"map undefined on {missing!r}")
        bad = [x for x in self.source.carrier if self.map[x] not in self.target.E]
        if bad:
            raise ValueError(f"map leaves the target carrier at {bad!r}")

    def __call__(self, x):
        return self.map[x]

    def same_function(self, other: "Morphism") -> bool:
        """Morphisms of assemblies are equal when their functions agree."""
        return all(self.map[x] == other.map[x] for x in self.source.carrier)


def make_morphism(source, target, fn, tracker) -> Morphism:
    m = fn if isinstance(fn, Mapping) else {x: fn(x) for x in source.carrier}
    return Morphism(source, target, dict(m), as_enumset(tracker))


def check_tracker(f: Morphism, probe: int, budget: int) -> Morphism:
    """Check ``tracker . V`` lands in ``E(f(x))`` for every explicit ``V`` in ``E(x)``."""
    unsure = None
    for x, v in f.source.pairs():
        res = lands_in(apply(f.tracker, Literal(v)), f.target.E[f.map[x]], probe, budget)
        if isinstance(res, Lands):
            continue
        if res.definitive:
            return replace(f, verdict=Refuted(x, v, res.evidence))
        if unsure is None:
            unsure = Inconclusive(x, v, res.evidence)
    return replace(f, verdict=unsure if unsure is not None else Verified(probe))


def compose(g: Morphism, f: Morphism, tracker: Optional[EnumSet] = None) -> Morphism:
    """``g . f`` tracked by ``\\x. T_g (T_f x)`` unless another tracker is given."""
    if tracker is None:
        from .lam import interpret, parse_term
        tracker = interpret(parse_term(r"\x. tg (tf x)"), {"tg": g.tracker, "tf": f.tracker})
    return Morphism(f.source, g.target, {x: g.map[f.map[x]] for x in f.source.carrier}, tracker)


def identity(X: FiniteAssembly, tracker: Optional[EnumSet] = None) -> Morphism:
    if tracker is None:
        from .lam import interpret, parse_term
        tracker = interpret(parse_term(r"\x. x"))
    return Morphism(X, X, {x: x for x in X.carrier}, tracker)


# -- exponentials -------------------------------------------------------------------

def functions(A: Sequence, B: Sequence):
    """All functions from ``A`` to ``B`` as tuples of ``(a, b)`` pairs in ``A`` order."""
    for image in itertools.product(B, repeat=len(A)):
        yield tuple(zip(A, image))


def exp_over_partitioned(P: FiniteAssembly, X: FiniteAssembly) -> FiniteAssembly:
    """``X^P`` for partitioned ``P``: all functions, realized by whatever tracks them."""
    if not P.explicit or not X.explicit:
        raise PredicateSpecUnsupported("exponential needs explicit realizers")
    if not classify_assembly(P).partitioned:
        raise NotPartitioned(P.name or "P")

    def spec_for(fn):
        table = dict(fn)

        def test(t, probe, budget):
            for p in P.carrier:
                (v,) = P.realizers(p)
                res = lands_in(apply(t, Literal(v)), X.E[table[p]], probe, budget)
                if not isinstance(res, Lands):
                    return res
            return Lands(fn, probe)

        return Predicate(test, f"tracks {fn!r}")

    carrier = list(functions(P.carrier, X.carrier))
    return make_finite_assembly(carrier, {fn: spec_for(fn) for fn in carrier}, f"{X.name}^{P.name}")


@dataclass(frozen=True)
class Accepted:
    fuel: int

    def __bool__(self):
        return True


@dataclass(frozen=True)
class Rejected:
    condition: int
    instance: tuple
    evidence: object
    definitive: bool = True

    def __bool__(self):
        return False


def _eq_spec(Y, y1, y2):
    if callable(Y) and not isinstance(Y, FiniteAssembly):
        return Y(y1, y2)
    if y1 != y2:
        return ExplicitFinite(())
    return Y.E[y1]


def rt_exp_eq_witness_check(X: FiniteAssembly, Y, f: Mapping, g: Mapping, triple: EnumSet,
                            probe: int, budget: int):
    """Check that a coded triple ``[P, Q, R]`` realizes ``f ~ g`` in ``Y^X``.

    ``f`` and ``g`` map the carrier of ``integral(X)`` (pairs ``(x, U)``) into
    ``Y``; ``Y`` is an assembly or an equality callable ``(y, y') -> RealizerSpec``.
    """
    triple = as_enumset(triple)
    markers = tuple_len(triple).stage(budget)
    if markers != {2}:
        raise MalformedTuple(f"expected a coded 3-tuple, length markers {sorted(markers)}")
    P, Q, R = (tuple_proj(triple, i) for i in range(3))
    checks = []
    for x in X.carrier:
        for u in X.realizers(x):
            checks.append((1, (x, u), apply(P, Literal(u)), _eq_spec(Y, f[x, u], f[x, u])))
            for u2 in X.realizers(x):
                checks.append((2, (x, u, u2), apply(apply(Q, Literal(u)), Literal(u2)),
                               _eq_spec(Y, f[x, u], f[x, u2])))
            checks.append((3, (x, u), apply(R, Literal(u)), _eq_spec(Y, f[x, u], g[x, u])))
    unsure = None
    for cond, inst, res, spec in checks:
        out = lands_in(res, spec, probe, budget)
        if isinstance(out, Lands):
            continue
        if out.definitive:
            return Rejected(cond, inst, out.evidence)
        if unsure is None:
            unsure = Rejected(cond, inst, out.evidence, definitive=False)
    return unsure if unsure is not None else Accepted(probe)
