import itertools
import random

import pytest
from hypothesis import assume, given, strategies as st

from scott_pca.assembly import (
    Accepted, EmptyRealizerSet, ExplicitFinite, Inconclusive, Lands, MalformedTuple, Morphism,
    NotPartitioned, Predicate, PredicateSpecUnsupported, Refuted, Rejected, Verified,
    assembly_from_json, binary_product, check_tracker, classify_assembly, compose,
    double_integral, exp_over_partitioned, identity, integral, lands_in, make_finite_assembly,
    make_morphism, nabla, nat_upto, rt_exp_eq_witness_check, sigma, terminal,
)
from scott_pca.enumset import Graph, Literal
from scott_pca.lam import evaluate, tuple_code, tuple_value
from scott_pca.paths import NoMonotoneTracker, monotone_tracker_search

from conftest import FAMILIES_3, finite_assemblies, trackable


def test_sigma():
    S = sigma()
    assert S.carrier == (0, 1)
    assert S.realizers(0) == (frozenset(),) and S.realizers(1) == (frozenset({1}),)
    c = classify_assembly(S)
    assert c.partitioned and c.modest


def test_nabla():
    N = nabla("ab")
    assert N.realizers("a") == N.realizers("b") == (frozenset(),)
    c = classify_assembly(N)
    assert c.partitioned and not c.modest


def test_nat_flags():
    c = classify_assembly(nat_upto(5))
    assert c.partitioned and c.modest and c.discrete and c.join_property


def test_integral_sigma():
    X = integral(sigma())
    assert X.carrier == ((0, frozenset()), (1, frozenset({1})))
    assert classify_assembly(X).partitioned


def test_empty_realizer_set():
    with pytest.raises(EmptyRealizerSet):
        make_finite_assembly(["a"], {"a": []})
    with pytest.raises(EmptyRealizerSet):
        make_finite_assembly(["a"], {})


def test_duplicates_removed():
    X = make_finite_assembly(["a"], {"a": [{1}, {1}, ()]})
    assert X.realizers("a") == (frozenset({1}), frozenset())


def test_json_roundtrip():
    obj = {"carrier": ["a", "b"], "E": {"a": [[0]], "b": [[0, 1]]}}
    X = assembly_from_json(obj)
    assert X.realizers("b") == (frozenset({0, 1}),)
    assert X.to_json() == {"carrier": ["a", "b"], "E": {"a": [["0"]], "b": [["0", "1"]]}}
    assert assembly_from_json(X.to_json()).E == X.E


def oracle_flags(families):
    fams = [set(f) for f in families]
    part = all(len(f) == 1 for f in fams)
    modest = all(not (a & b) for a, b in itertools.combinations(fams, 2))
    joins = all(u | v in f for f in fams for u in f for v in f)
    return part, modest, joins


def test_classify_exhaustive_two_points():
    for a in FAMILIES_3:
        X = make_finite_assembly(["x"], {"x": a})
        c = classify_assembly(X)
        assert (c.partitioned, c.modest, c.join_property) == oracle_flags([a])
        for b in FAMILIES_3:
            c = classify_assembly(make_finite_assembly(["x", "y"], {"x": a, "y": b}))
            assert (c.partitioned, c.modest, c.join_property) == oracle_flags([a, b])
            assert c.discrete == c.modest


def test_classify_sampled_three_points():
    rng = random.Random(7)
    for _ in range(5000):
        fams = [rng.choice(FAMILIES_3) for _ in range(3)]
        c = classify_assembly(make_finite_assembly("xyz", dict(zip("xyz", fams))))
        assert (c.partitioned, c.modest, c.join_property) == oracle_flags(fams)


def test_classify_rejects_predicates():
    X = make_finite_assembly(["a"], {"a": Predicate(lambda u, p, b: True)})
    with pytest.raises(PredicateSpecUnsupported):
        classify_assembly(X)


def test_identity_verified():
    assert isinstance(check_tracker(identity(sigma()), 8, 16).verdict, Verified)
    f = make_morphism(sigma(), sigma(), lambda x: x, evaluate("i"))
    assert check_tracker(f, 8, 16).verdict == Verified(8)


def test_constant_one():
    f = make_morphism(sigma(), sigma(), lambda x: 1, evaluate(r"\x. #1"))
    assert check_tracker(f, 8, 16).verdict == Verified(8)


TRACKER_POOL = [
    evaluate("i"), evaluate(r"\x. #1"), evaluate(r"\x. {}"), evaluate(r"\x. p x x"),
    evaluate(r"\x. p1 x"), evaluate(r"\x. q x {} #1"), Literal(()), Literal({0}),
    Graph(lambda w: {1} - w, 1, monotone=False, name="complement-on-finite"),
    Graph(lambda w: {1} if 1 in w else set(), 1, name="copy-1"),
    Graph(lambda w: {1, 2}, 1, name="const-12"),
]


def test_swap_refuted_for_tracker_pool():
    # a tracker would send {} to {1} and the larger {1} to {}
    swap = {0: 1, 1: 0}
    for fuel in (4, 8, 16):
        for t in TRACKER_POOL:
            v = check_tracker(Morphism(sigma(), sigma(), swap, t), fuel, 2 * fuel).verdict
            assert isinstance(v, Refuted), (t, v)
    with pytest.raises(NoMonotoneTracker):
        monotone_tracker_search({frozenset(): [{1}], frozenset({1}): [frozenset()]})


def test_verified_stable_under_fuel():
    X = nat_upto(3)
    f = make_morphism(X, X, lambda n: n, evaluate(r"\x. p1 (p x x)"))
    verdicts = [check_tracker(f, k, 2 * k).verdict for k in range(4, 14)]
    first = next(i for i, v in enumerate(verdicts) if isinstance(v, Verified))
    assert all(isinstance(v, Verified) for v in verdicts[first:])


@given(finite_assemblies(3), finite_assemblies(3), finite_assemblies(2), st.randoms())
def test_composition_verified(X, Y, Z, rnd):
    f_map = {x: rnd.choice(Y.carrier) for x in X.carrier}
    g_map = {y: rnd.choice(Z.carrier) for y in Y.carrier}
    tf, tg = trackable(X, Y, f_map), trackable(Y, Z, g_map)
    assume(tf is not None and tg is not None)
    f = check_tracker(Morphism(X, Y, f_map, tf), 8, 16)
    g = check_tracker(Morphism(Y, Z, g_map, tg), 8, 16)
    assert f.verdict and g.verdict
    gf = check_tracker(compose(g, f), 8, 16)
    assert gf.verdict, gf.verdict
    assert gf.map == {x: g_map[f_map[x]] for x in X.carrier}


@given(finite_assemblies(3, universe=4))
def test_integrals_partitioned(X):
    assert classify_assembly(integral(X)).partitioned
    assert classify_assembly(double_integral(X)).partitioned
    assert len(integral(X)) == sum(len(X.realizers(x)) for x in X.carrier)


def test_product():
    P = binary_product(sigma(), sigma())
    assert len(P) == 4
    assert P.realizers((1, 1)) == (frozenset({2, 3}),)
    X = nat_upto(2)
    Q = binary_product(X, terminal())
    assert [c[0] for c in Q.carrier] == list(X.carrier)


def test_morphism_equality_is_functional():
    a = Morphism(sigma(), sigma(), {0: 0, 1: 1}, evaluate("i"))
    b = Morphism(sigma(), sigma(), {0: 0, 1: 1}, evaluate(r"\x. p1 (p x x)"))
    assert a.same_function(b)
    assert not a.same_function(Morphism(sigma(), sigma(), {0: 1, 1: 1}, evaluate("i")))


def test_lands_in_explicit_and_predicate():
    assert isinstance(lands_in(Literal({1}), ExplicitFinite([(), {1}]), 4, 8), Lands)
    miss = lands_in(Literal({2}), ExplicitFinite([(), {1}]), 4, 8)
    assert not miss and miss.definitive
    spec = Predicate(lambda u, p, b: 3 in u.stage(b))
    assert lands_in(Literal({3}), spec, 4, 8)


def test_exp_sigma_sigma_contains_identity():
    E = exp_over_partitioned(sigma(), sigma())
    ident = ((0, 0), (1, 1))
    assert lands_in(evaluate("i"), E.E[ident], 8, 16)
    assert not lands_in(evaluate("i"), E.E[((0, 1), (1, 1))], 8, 16)


def test_exp_over_one():
    X = nat_upto(3)
    E = exp_over_partitioned(terminal(), X)
    assert len(E) == len(X)
    for fn in E.carrier:
        (_, x), = fn
        assert lands_in(evaluate(r"\u. #%d" % x), E.E[fn], 8, 16)


def test_exp_needs_partitioned():
    with pytest.raises(NotPartitioned):
        exp_over_partitioned(make_finite_assembly(["a"], {"a": [(), {1}]}), sigma())


def test_exp_over_integral_sigma():
    P, X = integral(sigma()), sigma()
    E = exp_over_partitioned(P, X)
    realized = []
    for fn in E.carrier:
        spec = {P.realizers(p)[0]: X.realizers(x) for p, x in fn}
        try:
            t = monotone_tracker_search(spec)
        except NoMonotoneTracker:
            continue
        assert lands_in(t, E.E[fn], 8, 16)
        realized.append(fn)
    values = [tuple(x for _, x in fn) for fn in realized]
    assert sorted(values) == [(0, 0), (0, 1), (1, 1)]


def test_rt_triple_constant():
    X, Y = sigma(), sigma()
    f = {(x, u): 1 for x, u in X.pairs()}
    triple = tuple_code([evaluate(r"\u. #1"), evaluate(r"\u v. #1"), evaluate(r"\u. #1")])
    assert rt_exp_eq_witness_check(X, Y, f, f, triple, 8, 16) == Accepted(8)


def test_rt_triple_over_integral_sigma():
    X, Y = integral(sigma()), sigma()
    f = {(c, u): c[0] for c, u in X.pairs()}
    triple = tuple_code([evaluate("i"), evaluate(r"\u v. u"), evaluate("i")])
    assert rt_exp_eq_witness_check(X, Y, f, f, triple, 8, 16)
    bad = tuple_code([evaluate("i"), evaluate(r"\u v. u"), evaluate(r"\u. #1")])
    out = rt_exp_eq_witness_check(X, Y, f, f, bad, 8, 16)
    assert isinstance(out, Rejected) and out.condition == 3
    assert out.instance == ((0, frozenset()), frozenset())


def test_rt_triple_malformed():
    with pytest.raises(MalformedTuple):
        rt_exp_eq_witness_check(sigma(), sigma(), {}, {}, Literal(tuple_value([(), ()])), 8, 16)


def test_unsettled_tracker_is_inconclusive():
    from scott_pca.coding import pair
    from scott_pca.enumset import staged_literal

    # the tracker's codes keep arriving, so a missing element is not yet a refutation
    t = staged_literal({pair(0, 1): 50})
    f = Morphism(sigma(), sigma(), {0: 1, 1: 1}, t)
    v = check_tracker(f, 8, 16).verdict
    assert isinstance(v, Inconclusive)
    assert isinstance(check_tracker(f, 50, 50).verdict, Verified)
