import itertools

import pytest
from hypothesis import HealthCheck, settings, strategies as st

from scott_pca.assembly import make_finite_assembly
from scott_pca.paths import NoMonotoneTracker, monotone_tracker_search

settings.register_profile("default", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

SMALL = range(6)
SUBSETS_6 = [frozenset(i for i in SMALL if c >> i & 1) for c in range(64)]
SUBSETS_3 = [frozenset(i for i in range(3) if c >> i & 1) for c in range(8)]
# nonempty families of subsets of {0,1,2}, in code order
FAMILIES_3 = [tuple(SUBSETS_3[i] for i in range(8) if f >> i & 1) for f in range(1, 256)]

small_sets = st.frozensets(st.integers(0, 5), max_size=6)


def finite_assemblies(max_points=3, universe=3, max_realizers=3):
    subsets = st.frozensets(st.integers(0, universe - 1), max_size=universe)
    fam = st.lists(subsets, min_size=1, max_size=max_realizers, unique=True)

    @st.composite
    def build(draw):
        n = draw(st.integers(1, max_points))
        labels = [f"x{i}" for i in range(n)]
        return make_finite_assembly(labels, {x: draw(fam) for x in labels})

    return build()


def assembly_of(*families):
    labels = [f"x{i}" for i in range(len(families))]
    return make_finite_assembly(labels, dict(zip(labels, families)))


def all_maps(A, B):
    for values in itertools.product(B, repeat=len(A)):
        yield dict(zip(A, values))


@pytest.fixture
def write_json(tmp_path):
    import json

    def write(name, obj):
        path = tmp_path / name
        path.write_text(json.dumps(obj))
        return str(path)

    return write


def trackable(X, Y, h):
    """A tracker for the carrier map ``h: X -> Y`` by monotone search, or None."""
    allowed = {}
    for x, u in X.pairs():
        options = set(Y.realizers(h[x]))
        # a realizer shared by several points must land in all their targets
        allowed[u] = options if u not in allowed else allowed[u] & options
        if not allowed[u]:
            return None
    try:
        return monotone_tracker_search({u: sorted(o, key=sorted) for u, o in allowed.items()},
                                       jmax=max(12, Y.max_code()))
    except NoMonotoneTracker:
        return None


# acceptance verdicts, echoed once more at the end of the run
ACCEPTANCE: list = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
