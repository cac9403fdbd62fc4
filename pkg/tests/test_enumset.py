import threading

import pytest
from hypothesis import given, strategies as st

from scott_pca.coding import pair
from scott_pca.enumset import (
    AgreeThrough, Apply, EnumerationLimit, Graph, Literal, MissingWitness, OpenSet, Staged,
    Unknown, Yes, apply, approx, from_json, graph_cap, graph_of, open_member, set_eq_upto,
    staged_literal,
)

from conftest import small_sets

# codes up to 120 through an explicit diagonal table, and e_m through the binary string
PAIRS = {}
_c = 0
for _s in range(16):
    for _n in range(_s + 1):
        PAIRS[_c] = (_s - _n, _n)
        _c += 1


def e(m):
    return {i for i, bit in enumerate(reversed(bin(m)[2:])) if bit == "1"}


def brute_apply(U, V):
    return {PAIRS[c][1] for c in U if e(PAIRS[c][0]) <= set(V)}


codes = st.frozensets(st.integers(0, 119), max_size=12)


def test_literal_stage_constant():
    assert approx(Literal({1, 5}), 0) == {1, 5}
    assert approx(Literal({1, 5}), 30) == {1, 5}


def test_apply_example():
    U = Literal({pair(2, 5)})
    assert approx(apply(U, Literal({1, 7})), 0) == {5}
    assert approx(apply(U, Literal({7})), 5) == frozenset()


@given(small_sets, st.integers(0, 20))
def test_apply_empty_function(V, k):
    assert approx(apply(Literal(()), Literal(V)), k) == frozenset()


@given(codes, st.frozensets(st.integers(0, 6), max_size=7))
def test_apply_exact_on_literals(U, V):
    out = apply(Literal(U), Literal(V))
    assert out.exact
    assert approx(out, 0) == brute_apply(U, V)


@given(codes, st.frozensets(st.integers(0, 6), max_size=7), st.frozensets(st.integers(0, 6)))
def test_apply_monotone_in_argument(U, V, extra):
    small = approx(apply(Literal(U), Literal(V)), 3)
    big = approx(apply(Literal(U), Literal(V | extra)), 3)
    assert small <= big


def _values():
    s = Staged(lambda k: range(0, 2 * k + 1, 2), "evens")
    g = graph_of(lambda w: {n + 1 for n in w}, jmax=5)
    h = graph_of(lambda a, b: a | b, 2, jmax=3)
    return [
        Literal({3, 9}), s, staged_literal({4: 2, 9: 7}), g,
        apply(g, s), apply(apply(h, s), Literal({1})), apply(Literal({pair(1, 3)}), s),
    ]


def test_stage_monotone():
    for v in _values():
        prev = frozenset()
        for k in range(20):
            cur = approx(v, k)
            assert prev <= cur, (v, k)
            prev = cur


def test_stage_deterministic_across_instances():
    a, b = _values(), _values()
    for k in (7, 3, 11):
        assert [approx(x, k) for x in a] == [approx(x, k) for x in b]


def test_bounded_stage_is_intersection():
    for v in _values():
        for k in (4, 9):
            full = approx(v, k)
            for bound in (0, 3, 10, 40):
                assert v.stage(k, bound) == {n for n in full if n <= bound}


def test_continuity_in_both_arguments():
    # stage k of an application only looks at stage k of its operands
    s = Staged(lambda k: [pair(1, 0)] + ([pair(2, 1)] if k >= 5 else []), "late")
    v = staged_literal({0: 0, 1: 6})
    cut_s = Literal(approx(s, 5))
    cut_v = Literal(approx(v, 5))
    assert approx(apply(s, v), 5) == approx(apply(cut_s, cut_v), 5)


@given(st.frozensets(st.integers(0, 4), max_size=5), st.integers(0, 8))
def test_graph_fast_path_matches_generic(V, k):
    fn = lambda w: {n + 1 for n in w} | ({0} if 2 in w else set())
    fast = apply(graph_of(fn, jmax=4), Literal(V))
    slow = apply(graph_of(fn, jmax=4, monotone=False), Literal(V))
    assert isinstance(fast.view(k), Literal)
    assert slow.view(k) is slow
    assert approx(fast, k) == approx(slow, k)


@given(small_sets, small_sets, st.integers(0, 7))
def test_binary_graph_fast_path_matches_generic(U, V, k):
    fn = lambda a, b: {pair(0, n) for n in a} | {pair(2, n) for n in b}
    fast = graph_of(fn, 2, jmax=3)(Literal(U), Literal(V))
    slow = graph_of(fn, 2, jmax=3, monotone=False)(Literal(U), Literal(V))
    assert approx(fast, k) == approx(slow, k)


@given(small_sets)
def test_graph_identity(V):
    assert set_eq_upto(graph_of(lambda w: w)(Literal(V)), Literal(V), 6, 12)


def test_graph_constant_empty():
    g = graph_of(lambda w: ())
    for V in ({1}, {0, 4}, ()):
        assert approx(g(Literal(V)), 10) == frozenset()


def test_binary_graph_sides():
    # H(W, W') = {<0,n> | n in W} | {<2,n> | n in W'}; H U V applied to {} and {1}
    H = graph_of(lambda a, b: {pair(0, n) for n in a} | {pair(2, n) for n in b}, 2)
    U, V = Literal({0, 3}), Literal({2})
    G = H(U, V)
    assert set_eq_upto(G(Literal(())), U, 8, 16)
    assert set_eq_upto(G(Literal({1})), Literal({0, 2, 3}), 8, 16)


def test_graph_stage_elements():
    g = graph_of(lambda w: {7} if 1 in w else {3}, jmax=1)
    # subsets of {0,1}: codes m = 0..3
    assert approx(g, 5) == {pair(0, 3), pair(1, 3), pair(2, 7), pair(3, 7)}


def test_graph_cap_contextvar():
    with graph_cap(2):
        g = graph_of(lambda w: w)
    assert g.jmax == 2
    assert graph_of(lambda w: w).jmax == 12


def test_enumeration_limit():
    g = graph_of(lambda a, b: a, 2, jmax=12)
    with pytest.raises(EnumerationLimit):
        approx(g, 12)
    # bounded requests stay cheap
    assert g.stage(12, 10) <= set(range(11))


def test_set_eq_upto_examples():
    assert set_eq_upto(Literal({1}), Literal({1}), 4, 8) == AgreeThrough(4)
    miss = set_eq_upto(Literal({1}), Literal(()), 4, 8)
    assert isinstance(miss, MissingWitness) and (miss.side, miss.element) == ("left", 1)
    assert miss.definitive
    assert set_eq_upto(Literal(()), Literal({2}), 4, 8).side == "right"


def test_set_eq_upto_waits_for_late_elements():
    late = staged_literal({5: 10})
    assert set_eq_upto(Literal({5}), late, 4, 12)
    miss = set_eq_upto(Literal({5}), late, 4, 8)
    assert not miss and not miss.definitive


def test_set_eq_upto_probe_le_budget():
    with pytest.raises(ValueError):
        set_eq_upto(Literal(()), Literal(()), 5, 4)


def test_open_member_examples():
    assert open_member(OpenSet([{1}]), Literal({1}), 5) == Yes(frozenset({1}), 0)
    assert open_member(OpenSet([{1}]), Literal(()), 5) == Unknown(5)
    for U in (Literal(()), Literal({4})):
        assert open_member(OpenSet([()]), U, 0)
    assert open_member(OpenSet([{4}]), staged_literal({4: 3}), 5).fuel == 3


def test_json_roundtrip():
    g = graph_of(lambda w: w, name="id")
    tree = apply(g, Literal({3, 1})).to_json()
    assert tree == {"apply": [{"graph": "id", "arity": 1, "jmax": 12}, {"lit": ["1", "3"]}]}
    back = from_json(tree, {"id": g}.__getitem__)
    assert isinstance(back, Apply) and approx(back, 4) == {1, 3}
    assert approx(from_json(["2", "10"]), 0) == {2, 10}


def test_concurrent_stage_evaluation():
    v = apply(graph_of(lambda w: {n * 2 for n in w}, jmax=10),
              Staged(lambda k: range(k + 1), "upto"))
    want = approx(apply(graph_of(lambda w: {n * 2 for n in w}, jmax=10),
                        Staged(lambda k: range(k + 1), "upto")), 9)
    results = []

    def run():
        results.append(approx(v, 9))

    threads = [threading.Thread(target=run) for _ in range(8)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    assert all(r == want for r in results)
