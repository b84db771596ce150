"""Exhaustive and random sweeps over minimal presentations.

For each system the sweep records whether its matroid is a positroid and the
first a for which the a-Gale minimal presentation is noncrossing.  Alongside,
it checks that noncrossing minimal systems present positroids and that the
three routes to the expected codimension agree.  Optionally it also asks, for
every crossing in a positroid presentation, for an exact subsystem holding
both sets with the crossed one largest; such subsystems do not always exist,
so that check is off by default.
"""

import json
import random
import time
from concurrent.futures import ProcessPoolExecutor
from itertools import combinations

from ._bits import full_mask, rotate
from .errors import AnomalyError
from .pivot import find_uncrossing_exact, gale_minimal
from .positroid import (
    crossings,
    ec_closed_form,
    ec_by_components,
    expected_codimension,
    is_noncrossing,
    is_positroid,
)
from .transversal import (
    SetSystem,
    _transversal_masks,
    _union,
    reduce_to_minimal,
    transversal_matroid,
)


def canonical_key(n, masks):
    """Least sorted mask tuple over all cyclic rotations of [n]."""
    return min(tuple(sorted(rotate(m, n, r) for m in masks)) for r in range(max(n, 1)))


def _extends_minimally(chosen, new):
    # only subfamilies containing the new set need checking
    for size in range(1, len(chosen) + 1):
        for T in combinations(chosen, size):
            ms = T + (new,)
            if _union(ms).bit_count() < max(m.bit_count() for m in ms) + size:
                return False
    return True


def minimal_systems(n, k, canonical=True):
    """Minimal presentations of rank k on [n] as increasing mask tuples.

    Sets of a minimal presentation are distinct, so each family is produced
    once; with ``canonical`` only the rotation-least representative is kept.
    """
    universe = list(range(1, full_mask(n) + 1))

    def grow(prefix, start):
        if len(prefix) == k:
            if not canonical or canonical_key(n, prefix) == prefix:
                yield prefix
            return
        for idx in range(start, len(universe)):
            s = universe[idx]
            if _extends_minimally(prefix, s):
                yield from grow(prefix + (s,), idx + 1)

    if k == 0:
        return
    yield from grow((), 0)


def check_system(n, masks, ec=True, lemma=False):
    """Run every sweep check on one minimal system.

    Returns (record, findings) where findings maps a kind of failure to a
    description, empty when everything holds.
    """
    sys = SetSystem.from_masks(n, masks)
    m = transversal_matroid(sys)
    positroid = is_positroid(m)
    noncrossing = is_noncrossing(sys)
    record = {"system": sys.to_json(), "positroid": positroid, "noncrossing_a": None}
    findings = {}
    if noncrossing and not positroid:
        findings["theorem_violation"] = sys.to_json()
    if positroid:
        for a in range(1, n + 1):
            if is_noncrossing(gale_minimal(sys, a)):
                record["noncrossing_a"] = a
                break
        else:
            findings["counterexample"] = sys.to_json()
        for w in crossings(sys) if lemma else ():
            try:
                find_uncrossing_exact(sys, w)
            except AnomalyError as err:
                findings["lemma_anomaly"] = err.details
                break
    if ec:
        sweep = expected_codimension(m)
        closed = ec_closed_form(sys)
        restricted = ec_by_components(sys)
        if not sweep == closed == restricted:
            findings["ec_mismatch"] = {
                "system": sys.to_json(),
                "sweep": sweep,
                "closed_form": closed,
                "restricted": restricted,
            }
    return record, findings


def _check_chunk(args):
    chunk, ec, lemma = args
    return [check_system(n, masks, ec, lemma) for n, masks in chunk]


def _random_minimal(rng, max_n, max_k):
    while True:
        n = rng.randint(1, max_n)
        k = rng.randint(1, min(max_k, n))
        masks = [rng.randint(1, full_mask(n)) for _ in range(k)]
        if not _transversal_masks(masks):
            continue
        red = reduce_to_minimal(SetSystem.from_masks(n, masks))
        return n, tuple(sorted(red.masks))


def _chunks(items, size):
    for i in range(0, len(items), size):
        yield items[i : i + size]


def verify_conjecture(
    max_n,
    max_k,
    mode="exhaustive",
    seed=0,
    trials=1000,
    workers=1,
    out=None,
    skip=(),
    ec=True,
    lemma=False,
    budget=None,
):
    """Sweep minimal systems and collect findings.

    ``out`` receives one JSON line per tested system followed by the summary
    line.  Keys in ``skip`` (as produced by :func:`canonical_key`, paired with
    n) are not retested, which lets an interrupted run resume.
    """
    start = time.perf_counter()
    skip = set(skip)
    if mode == "exhaustive":
        if max_n > 10:
            raise ValueError("exhaustive sweeps are limited to n <= 10")
        todo = [
            (n, masks)
            for n in range(1, max_n + 1)
            for k in range(1, min(max_k, n) + 1)
            for masks in minimal_systems(n, k)
            if (n, masks) not in skip
        ]
    elif mode == "random":
        rng = random.Random(seed)
        todo = [_random_minimal(rng, max_n, max_k) for _ in range(trials)]
    else:
        raise ValueError(f"unknown mode {mode!r}")
    exhausted = budget is not None and len(todo) > budget
    if exhausted:
        todo = todo[:budget]

    chunks = [(c, ec, lemma) for c in _chunks(todo, 200)]
    if workers > 1 and len(chunks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = [r for part in pool.map(_check_chunk, chunks) for r in part]
    else:
        results = [r for c in chunks for r in _check_chunk(c)]

    summary = {
        "summary": True,
        "mode": mode,
        "max_n": max_n,
        "max_k": max_k,
        "tested": len(results),
        "skipped": len(skip),
        "positroids": 0,
        "counterexamples": [],
        "theorem_violations": [],
        "lemma_anomalies": [],
        "ec_mismatches": [],
        "budget_exhausted": exhausted,
    }
    kinds = {
        "counterexample": "counterexamples",
        "theorem_violation": "theorem_violations",
        "lemma_anomaly": "lemma_anomalies",
        "ec_mismatch": "ec_mismatches",
    }
    for record, findings in results:
        summary["positroids"] += record["positroid"]
        for kind, value in findings.items():
            summary[kinds[kind]].append(value)
        if out is not None:
            out.write(json.dumps(record) + "\n")
    summary["wall_time"] = round(time.perf_counter() - start, 3)
    if out is not None:
        out.write(json.dumps(summary) + "\n")
    return summary


def has_findings(summary):
    return any(
        summary[key]
        for key in ("counterexamples", "theorem_violations", "lemma_anomalies", "ec_mismatches")
    )


def load_tested(lines):
    """Keys of systems already recorded in a previous report."""
    keys = set()
    for line in lines:
        line = line.strip()
        if not line:
            continue
        rec = json.loads(line)
        if "system" in rec:
            sys = SetSystem.from_json(rec["system"])
            keys.add((sys.n, canonical_key(sys.n, sys.masks)))
    return keys
