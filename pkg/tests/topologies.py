"""Brute-force enumeration of finite topologies."""
import itertools


def powerset(points):
    pts = list(points)
    return [frozenset(c) for r in range(len(pts) + 1) for c in itertools.combinations(pts, r)]


def topologies(points):
    """Every family of subsets containing the empty set and the whole space, closed under
    binary unions and intersections."""
    full = frozenset(points)
    middle = [s for s in powerset(points) if s and s != full]
    for r in range(len(middle) + 1):
        for chosen in itertools.combinations(middle, r):
            opens = set(chosen) | {frozenset(), full}
            if all(a | b in opens and a & b in opens for a in opens for b in opens):
                yield frozenset(opens)


def is_t0(points, opens):
    return all(any((x in o) != (y in o) for o in opens)
               for x, y in itertools.combinations(points, 2))


def is_t1(points, opens):
    return all(any(x in o and y not in o for o in opens)
               for x, y in itertools.permutations(points, 2))
