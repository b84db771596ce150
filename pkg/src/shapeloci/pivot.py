"""Exact subsystems, pivots between minimal presentations, and a-Gale minimisation."""

from collections import deque
from dataclasses import dataclass
from itertools import combinations

from ._bits import bits, cyclic_order, k_subsets, to_mask, to_tuple
from .errors import AnomalyError, ConsistencyError, DomainError, PreconditionError
from .matroid import _cocircuit_masks
from .positroid import CrossingWitness, _least_witness, is_positroid
from .transversal import (
    SetSystem,
    _hall_ok,
    _matching_size,
    _transversal_masks,
    _union,
    transversal_matroid,
)


@dataclass(frozen=True)
class ExactSubsystem:
    indices: tuple
    support: tuple

    def to_json(self):
        return {"indices": [i + 1 for i in self.indices], "support": list(self.support)}


@dataclass(frozen=True)
class Pivot:
    """Replace set ``set_index`` by S - remove + add, justified by ``via``."""

    set_index: int
    remove: int
    add: int
    via: ExactSubsystem


def _is_exact(masks, T):
    ms = [masks[i] for i in T]
    return _union(ms).bit_count() == len(T) + max(m.bit_count() for m in ms) - 1


def _require_minimal(sys):
    if not _hall_ok(sys.masks):
        raise PreconditionError(f"{sys} is not a minimal presentation")


def _exact_index_sets(masks, containing=None):
    k = len(masks)
    for size in range(1, k + 1):
        for T in combinations(range(k), size):
            if containing is not None:
                if containing not in T:
                    continue
                if masks[containing].bit_count() < max(masks[i].bit_count() for i in T):
                    continue
            if _is_exact(masks, T):
                yield T


def exact_subsystems(sys, containing=None):
    """All exact subsystems, by size then lexicographically.

    With ``containing`` only those having that set as a largest member.
    """
    _require_minimal(sys)
    return [
        ExactSubsystem(T, to_tuple(_union(sys.masks[i] for i in T)))
        for T in _exact_index_sets(sys.masks, containing)
    ]


def union_closure_holds(sys):
    """Exact subsystems sharing a set that is largest in their union union to an exact one."""
    masks = sys.masks
    exact = list(_exact_index_sets(masks))
    exact_set = set(exact)
    for T1, T2 in combinations(exact, 2):
        U = tuple(sorted(set(T1) | set(T2)))
        top = max(masks[i].bit_count() for i in U)
        if any(masks[s].bit_count() == top for s in set(T1) & set(T2)):
            if U not in exact_set:
                return False
    return True


def _maximal_exact(masks, i):
    # the union of all exact subsystems having S_i as a largest member is exact
    out = set()
    for T in _exact_index_sets(masks, containing=i):
        out.update(T)
    return tuple(sorted(out))


def maximal_exact_subsystem(sys, i):
    _require_minimal(sys)
    T = _maximal_exact(sys.masks, i)
    return ExactSubsystem(T, to_tuple(_union(sys.masks[j] for j in T)))


def apply_pivot(sys, p):
    masks = list(sys.masks)
    i = p.set_index
    if p.remove == p.add:
        return sys
    T = p.via.indices
    if i not in T or not _is_exact(masks, T):
        raise DomainError(f"{p.via} is not an exact subsystem containing set {i}")
    if masks[i].bit_count() != max(masks[j].bit_count() for j in T):
        raise DomainError("pivoted set must have maximal size in the exact subsystem")
    a, b = 1 << (p.remove - 1), 1 << (p.add - 1)
    S = masks[i]
    if not (S & a) or S & b:
        raise DomainError("pivot must remove an element of S and add one outside S")
    if not any(masks[j] & a and masks[j] & b for j in T if j != i):
        raise DomainError("no member of the exact subsystem contains both pivot elements")
    before = _transversal_masks(masks)
    masks[i] = S ^ a | b
    if not _hall_ok(masks):
        raise DomainError("pivot result violates the minimality inequalities")
    if _transversal_masks(masks) != before:
        raise ConsistencyError(f"pivot {p} changed the matroid of {sys}")
    return SetSystem.from_masks(sys.n, masks)


def valid_pivots(sys):
    """Every pivot allowed on a minimal presentation."""
    _require_minimal(sys)
    masks = sys.masks
    out = []
    seen = set()
    for T in _exact_index_sets(masks):
        top = max(masks[j].bit_count() for j in T)
        via = ExactSubsystem(T, to_tuple(_union(masks[j] for j in T)))
        for i in T:
            S = masks[i]
            if S.bit_count() != top:
                continue
            for j in T:
                if j == i:
                    continue
                for a in bits(S & masks[j]):
                    for b in bits(masks[j] & ~S):
                        key = (i, a, b)
                        if key in seen:
                            continue
                        trial = list(masks)
                        trial[i] = S ^ a | b
                        if _hall_ok(trial):
                            seen.add(key)
                            out.append(Pivot(i, a.bit_length(), b.bit_length(), via))
    return out


def pivot_targets(sys, set_index, check=True):
    """Replacements for a largest set of an exact system that keep the matroid.

    Computed as the dual of the matroid of the other sets on the support; with
    ``check`` the direct search over all same-size sets must agree.
    """
    _require_minimal(sys)
    masks = sys.masks
    k = len(masks)
    S = masks[set_index]
    if not _is_exact(masks, range(k)):
        raise PreconditionError(f"{sys} is not an exact system")
    if S.bit_count() != max(m.bit_count() for m in masks):
        raise PreconditionError("the set to pivot must have maximal size")
    support = _union(masks)
    others = [m for j, m in enumerate(masks) if j != set_index]
    dual_route = {support & ~b for b in _transversal_masks(others)}
    if check:
        target = _transversal_masks(masks)
        direct = set()
        for cand in k_subsets(sys.n, S.bit_count()):
            if _transversal_masks(others + [cand]) == target:
                direct.add(cand)
        if direct != dual_route:
            raise ConsistencyError(f"pivot target routes disagree on {sys}, set {set_index}")
    return sorted((to_tuple(x) for x in dual_route))


def _least_dual_basis(others, support, order):
    """Greedy least basis (in ``order``) of the dual of B(others) on ``support``."""
    need = len(others)
    size = support.bit_count() - need
    chosen = 0
    for e in order:
        bit = 1 << (e - 1)
        if not support & bit:
            continue
        rest = support & ~(chosen | bit)
        if _matching_size([o & rest for o in others]) == need:
            chosen |= bit
            if chosen.bit_count() == size:
                break
    return chosen


def gale_minimal(sys, a=1):
    """Minimal presentation that is least in the a-th cyclic Gale order.

    Sets are treated by increasing size; each is replaced by the least basis
    of the dual matroid of the rest of its maximal exact subsystem.
    """
    _require_minimal(sys)
    n = sys.n
    if not 1 <= a <= max(n, 1):
        raise DomainError(f"a = {a} outside [1, {n}]")
    order = cyclic_order(n, a)
    masks = list(sys.masks)
    target = _transversal_masks(masks)
    for i in sorted(range(len(masks)), key=lambda i: (masks[i].bit_count(), i)):
        T = _maximal_exact(masks, i)
        support = _union(masks[j] for j in T)
        others = [masks[j] for j in T if j != i]
        masks[i] = _least_dual_basis(others, support, order)
        if _transversal_masks(masks) != target or not _hall_ok(masks):
            raise ConsistencyError(f"gale_minimal broke the presentation {sys} (a={a})")
    return SetSystem.from_masks(n, masks)


def _valid_witness(sys, w):
    si, sj = sys.masks[w.i], sys.masks[w.j]
    n = sys.n
    A = si & ~sj
    pos = [(x - w.a) % n for x in (w.a, w.b, w.c, w.d)]
    return (
        w.i != w.j
        and A >> (w.a - 1) & 1
        and A >> (w.c - 1) & 1
        and sj >> (w.b - 1) & 1
        and not si >> (w.b - 1) & 1
        and sj >> (w.d - 1) & 1
        and pos[0] < pos[1] < pos[2] < pos[3]
    )


def find_uncrossing_exact(sys, witness):
    """An exact subsystem holding both crossing sets with the crossed set largest."""
    _require_minimal(sys)
    if not _valid_witness(sys, witness):
        raise PreconditionError(f"{witness} does not witness a crossing in {sys}")
    if not is_positroid(transversal_matroid(sys)):
        raise PreconditionError(f"the matroid of {sys} is not a positroid")
    for T in _exact_index_sets(sys.masks, containing=witness.j):
        if witness.i in T:
            return ExactSubsystem(T, to_tuple(_union(sys.masks[j] for j in T)))
    raise AnomalyError(
        "no exact subsystem uncrosses this crossing",
        {"system": sys.to_json(), "witness": witness.to_json()},
    )


def first_crossing(sys):
    for i, si in enumerate(sys.masks):
        for j, sj in enumerate(sys.masks):
            if i != j:
                w = _least_witness(si, sj, sys.n)
                if w:
                    return CrossingWitness(i, j, *w)
    return None


def pivot_closure(sys, limit=100_000):
    """Presentations reachable from ``sys`` by pivots (as multiset keys)."""
    start = SetSystem.from_masks(sys.n, sys.masks)
    seen = {start.key(): start}
    queue = deque([start])
    while queue and len(seen) < limit:
        cur = queue.popleft()
        for p in valid_pivots(cur):
            nxt = apply_pivot(cur, p)
            if nxt.key() not in seen:
                seen[nxt.key()] = nxt
                queue.append(nxt)
    return list(seen.values())


def all_minimal_presentations(m):
    """Every k-set of distinct cocircuits presenting ``m``."""
    cocirc = sorted(_cocircuit_masks(m))
    return [
        SetSystem.from_masks(m.n, combo)
        for combo in combinations(cocirc, m.k)
        if _hall_ok(combo) and _transversal_masks(combo) == m.masks
    ]


def probe_pivot_connectivity(sys):
    """Compare the pivot closure of ``sys`` with all minimal presentations.

    Returns (reachable, total); equality means every minimal presentation of
    the matroid is pivot-reachable from ``sys``.
    """
    reach = {s.key() for s in pivot_closure(sys)}
    total = {s.key() for s in all_minimal_presentations(transversal_matroid(sys))}
    return len(reach & total), len(total)


def gale_leq(I, J, a=1, n=None):
    """I <= J in the a-th cyclic Gale order."""
    if len(I) != len(J):
        return False
    n = n or max(list(I) + list(J) + [1])
    pos = {e: t for t, e in enumerate(cyclic_order(n, a))}
    return all(
        x <= y for x, y in zip(sorted(pos[e] for e in I), sorted(pos[e] for e in J))
    )


def mask_of(elements):
    return to_mask(elements)
