"""The ten acceptance criteria, each at its stated tolerance.

Every criterion records one PASS/FAIL line; the lines are printed in the
pytest terminal summary, and also when this file is run as a script.
"""

import functools
import os
import random
import time
from itertools import combinations

import pytest

from shapeloci import (
    Matroid,
    SetSystem,
    is_noncrossing,
    is_positroid,
    is_transversal,
    locus_dimension,
    nmd,
    reduce_to_minimal,
    transversal_matroid,
    uniform,
)
from shapeloci.conjecture import minimal_systems, verify_conjecture
from shapeloci.oracle import amplified_matroid
from shapeloci.pivot import (
    apply_pivot,
    first_crossing,
    gale_minimal,
    maximal_exact_subsystem,
    pivot_targets,
    union_closure_holds,
    valid_pivots,
)
from shapeloci.positroid import interval_envelope, interval_rank_matrix
from shapeloci.transversal import max_matching
from shapeloci.wilson import (
    WilsonLoopDiagram,
    admissible_diagrams,
    interleaving_pairs,
    is_admissible,
    noncrossing_exact_count,
    satisfies_count,
    to_set_system,
    uncross,
    wld_equivalent,
    wld_properties,
)

from acceptance_log import RESULTS

import oracles


def criterion(number, title):
    def wrap(fn):
        @functools.wraps(fn)
        def run(*args, **kwargs):
            start = time.perf_counter()
            try:
                detail = fn(*args, **kwargs)
            except BaseException as err:
                RESULTS[number] = f"[{number:2d}] FAIL {title}: {type(err).__name__}: {err}"
                raise
            took = time.perf_counter() - start
            RESULTS[number] = f"[{number:2d}] PASS {title} ({took:.2f}s{'; ' + detail if detail else ''})"

        return run

    return wrap


def within(seconds, fn):
    start = time.perf_counter()
    value = fn()
    took = time.perf_counter() - start
    assert took < seconds, f"took {took:.2f}s, limit {seconds}s"
    return value


@pytest.fixture(scope="module")
def desk_sweep():
    start = time.perf_counter()
    summary = verify_conjecture(7, 3, workers=os.cpu_count() or 1)
    return summary, time.perf_counter() - start


@criterion(1, "example reproduction")
def test_01_example_reproduction():
    def work():
        sys = SetSystem(4, [[1, 3, 4], [1, 2], [2, 3]])
        red = reduce_to_minimal(sys)
        return nmd(sys), locus_dimension(sys), red, transversal_matroid(red)

    n, dim, red, m = within(1.0, work)
    assert n == 4 and dim == 3
    assert red == SetSystem(4, [[3, 4], [1, 2], [2, 3]])
    assert red.size_vector() == (2, 2, 2)
    assert m == uniform(3, 4)


@criterion(2, "interval rank matrix and envelope")
def test_02_interval_rank_matrix():
    want_rows = [
        [1, 2, 2, 2, 3, 3],
        [0, 1, 2, 2, 3, 3],
        [0, 0, 1, 2, 3, 3],
        [0, 0, 0, 1, 2, 2],
        [0, 0, 0, 0, 1, 2],
        [0, 0, 0, 0, 0, 1],
    ]
    want_bases = set("125 126 135 136 145 146 156 235 236 245 246 256 345 346 356".split())

    def work():
        r = interval_rank_matrix(SetSystem(6, [[1, 2, 4, 5], [2, 3], [5, 6]]))
        return r, interval_envelope(r, 3)

    r, env = within(1.0, work)
    assert r.full() == want_rows
    got = {"".join(map(str, b)) for b in env.bases}
    assert got == want_bases and "145" in got
    for c in combinations(range(1, 7), 3):
        violates = any(
            len(set(c) & set(range(i, j + 1))) > r(i, j) for i in range(1, 7) for j in range(i, 7)
        )
        assert violates == ("".join(map(str, c)) not in got)


@criterion(3, "non-transversal positroid")
def test_03_non_transversal_positroid():
    m = Matroid(6, [c for c in combinations(range(1, 7), 2) if c not in [(1, 2), (3, 4), (5, 6)]])
    pos, trans = within(5.0, lambda: (is_positroid(m), is_transversal(m)))
    assert pos is True
    assert trans.transversal is False


@criterion(4, "Gale example")
def test_04_gale_example():
    sys = SetSystem(6, [[1, 2, 3, 4], [1, 2, 3, 5], [4, 5, 6]])
    assert gale_minimal(sys, 1) == sys
    w = first_crossing(sys)
    assert (w.a, w.b, w.c, w.d) == (6, 1, 4, 5)
    g = gale_minimal(sys, 4)
    assert g == SetSystem(6, [[1, 2, 4, 5], [1, 3, 4, 5], [4, 5, 6]])
    assert is_noncrossing(g)


@criterion(5, "desk sweep k <= 3, n <= 7: zero counterexamples")
def test_05_desk_sweep(desk_sweep):
    summary, took = desk_sweep
    assert summary["tested"] > 20000
    assert summary["counterexamples"] == []
    assert took < 600
    return f"{summary['tested']} systems, {summary['positroids']} positroids, sweep {took:.1f}s"


@criterion(6, "ec consistency")
def test_06_ec_consistency(desk_sweep):
    summary, _ = desk_sweep
    assert summary["ec_mismatches"] == []
    return f"{summary['tested']} systems"


@criterion(7, "oracle equivalence on 1000 random systems")
def test_07_oracle_equivalence():
    rng = random.Random(20240607)
    checked = 0
    while checked < 1000:
        n = rng.randint(1, 8)
        k = rng.randint(1, min(4, n))
        sets = [rng.sample(range(1, n + 1), rng.randint(1, n)) for _ in range(k)]
        sys = SetSystem(n, sets)
        if max_matching(sys) < k:
            continue
        assert amplified_matroid(sys, seeds=(0, 1, 2)) == transversal_matroid(sys), sys
        checked += 1
    return f"{checked} systems"


def _all_minimal(n, k):
    return minimal_systems(n, k, canonical=False)


@criterion(8, "pivot suite k <= 3, support <= 7")
def test_08_pivot_suite():
    systems = pivots = 0
    for n in range(1, 8):
        for k in range(1, min(3, n) + 1):
            for masks in _all_minimal(n, k):
                sys = SetSystem.from_masks(n, masks)
                m = transversal_matroid(sys)
                systems += 1
                for p in valid_pivots(sys):
                    assert transversal_matroid(apply_pivot(sys, p)) == m
                    pivots += 1
                assert union_closure_holds(sys), sys
                for i in range(k):
                    T = maximal_exact_subsystem(sys, i).indices
                    # raises ConsistencyError if the dual and direct routes differ
                    pivot_targets(sys.subsystem(T), T.index(i), check=True)
    return f"{systems} systems, {pivots} pivots"


@criterion(9, "Wilson loop suite")
def test_09_wilson_suite():
    admissible = 0
    for n in range(4, 9):
        for k in range(1, 4):
            for w in admissible_diagrams(n, k):
                assert wld_properties(w) == {"dimension": 3 * k, "positroid": True}
                admissible += 1
    assert [noncrossing_exact_count(v) for v in range(4, 8)] == [1, 2, 5, 14]
    uncrossed = 0
    for n in range(4, 9):
        props = [
            (i, j)
            for i, j in combinations(range(1, n + 1), 2)
            if j != i + 1 and not (i == 1 and j == n)
        ]
        for k in range(2, 4):
            for combo in combinations(props, k):
                w = WilsonLoopDiagram(n, combo)
                if not satisfies_count(w) or not interleaving_pairs(w):
                    continue
                if not is_positroid(transversal_matroid(to_set_system(w))):
                    continue
                u = uncross(w)
                assert is_admissible(u) and wld_equivalent(w, u)
                uncrossed += 1
    assert uncrossed > 0
    return f"{admissible} admissible, {uncrossed} uncrossed"


@criterion(10, "noncrossing implies positroid")
def test_10_noncrossing_positroid(desk_sweep):
    summary, _ = desk_sweep
    assert summary["theorem_violations"] == []
    # spot-check the sweep's positroid flags on the smallest cases with the brute-force oracle
    for n in range(1, 6):
        for k in range(1, min(3, n) + 1):
            for masks in minimal_systems(n, k):
                sys = SetSystem.from_masks(n, masks)
                if is_noncrossing(sys):
                    m = transversal_matroid(sys)
                    assert oracles.is_positroid(n, {frozenset(b) for b in m.bases})
    return f"{summary['tested']} systems"


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q"]))
