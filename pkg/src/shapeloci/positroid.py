"""Positroid recognition, crossings, interval ranks and expected codimension."""

from dataclasses import dataclass
from itertools import combinations
from math import comb

from ._bits import (
    bits,
    cyclic_intervals,
    full_mask,
    is_cyclic_interval,
    k_subsets,
    to_mask,
    to_tuple,
)
from .errors import CapabilityError, DomainError
from .matroid import (
    MAX_SWEEP_N,
    Matroid,
    _cocircuit_masks,
    _components_masks,
    _compress,
    _flacet_masks,
    _table,
    minor,
)
from .transversal import (
    SetSystem,
    _hall_ok,
    _transversal_masks,
    locus_dimension,
    max_matching,
    reduce_to_minimal,
    transversal_matroid,
)


@dataclass(frozen=True)
class CrossingWitness:
    """S_i crosses S_j: a, c in S_i - S_j and b, d in S_j with b not in S_i,
    appearing in the cyclic order a, b, c, d.  Set indices are 0-based."""

    i: int
    j: int
    a: int
    b: int
    c: int
    d: int

    def to_json(self):
        return {"i": self.i + 1, "j": self.j + 1, "witness": [self.a, self.b, self.c, self.d]}


def _least_witness(si, sj, n):
    A = to_tuple(si & ~sj)
    B = to_tuple(sj & ~si)
    D = to_tuple(sj)
    for a in A:
        for b in B:
            pb = (b - a) % n
            for c in A:
                pc = (c - a) % n
                if pc <= pb:
                    continue
                for d in D:
                    if (d - a) % n > pc:
                        return a, b, c, d
    return None


def crossings(sys):
    """Every ordered pair (i, j) with S_i crossing S_j, each with its
    lexicographically least witness."""
    out = []
    for i, si in enumerate(sys.masks):
        for j, sj in enumerate(sys.masks):
            if i == j:
                continue
            w = _least_witness(si, sj, sys.n)
            if w:
                out.append(CrossingWitness(i, j, *w))
    return out


def _arc(n, x, y):
    """Mask of the elements strictly between x and y going forward from x."""
    out = 0
    e = x % n + 1
    while e != y:
        out |= 1 << (e - 1)
        e = e % n + 1
    return out


def _crosses(si, sj, n):
    A = si & ~sj
    if A.bit_count() < 2:
        return False
    B = sj & ~si
    for b in bits(B):
        bl = b.bit_length()
        for d in bits(sj):
            if d == b:
                continue
            dl = d.bit_length()
            if A & _arc(n, bl, dl) and A & _arc(n, dl, bl):
                return True
    return False


def is_noncrossing(sys):
    m = sys.masks
    return not any(
        _crosses(m[i], m[j], sys.n) for i in range(len(m)) for j in range(len(m)) if i != j
    )


def _blocks_cross(p, q, n):
    # a < b < c < d linearly with a, c in p and b, d in q
    seq = [1 if p >> i & 1 else 2 for i in range(n) if (p | q) >> i & 1]
    alternations = sum(1 for x, y in zip(seq, seq[1:]) if x != y)
    # alternations of the two-letter word: pqpq needs 3 switches in either order
    return alternations >= 3


def is_noncrossing_partition(blocks, n):
    masks = [to_mask(b) if not isinstance(b, int) else b for b in blocks]
    return not any(
        _blocks_cross(p, q, n) for p, q in combinations(masks, 2)
    )


def is_positroid(m):
    """Flacet route: each component has only cyclic-interval flacets (in the
    inherited cyclic order) and the components form a noncrossing partition."""
    r = _table(m)
    comps = _components_masks(full_mask(m.n), r.__getitem__)
    if not is_noncrossing_partition(comps, m.n):
        return False
    for c in comps:
        if c.bit_count() < 3:
            # on at most two elements every subset is a cyclic interval
            continue
        sub = minor(m, delete=to_tuple(full_mask(m.n) & ~c))
        if not all(is_cyclic_interval(f, sub.n) for f in _flacet_masks(sub)):
            return False
    return True


def cyclic_interval_ranks(m):
    return {c: m.rank_mask(c) for c in cyclic_intervals(m.n)}


def positroid_envelope(m):
    """k-subsets obeying every cyclic-interval rank bound of ``m``."""
    bounds = list(cyclic_interval_ranks(m).items())
    masks = [
        b
        for b in k_subsets(m.n, m.k)
        if all((b & c).bit_count() <= rc for c, rc in bounds)
    ]
    return Matroid.from_masks(m.n, masks, k=m.k)


def is_positroid_by_envelope(m):
    return positroid_envelope(m) == m


class IntervalRankMatrix:
    """Ranks r(i, j) of the ordinary intervals [i, j], 1 <= i <= j <= n."""

    def __init__(self, n, rows):
        rows = [list(map(int, row)) for row in rows]
        if len(rows) != n or any(len(rows[i]) != n - i for i in range(n)):
            raise DomainError("row i must list r(i, i), ..., r(i, n)")
        self.n = n
        self.rows = rows

    def __call__(self, i, j):
        if not 1 <= i <= j <= self.n:
            raise DomainError(f"no interval [{i}, {j}] in [1, {self.n}]")
        return self.rows[i - 1][j - i]

    def full(self):
        """Square upper-triangular layout with zeros below the diagonal."""
        return [[self(i, j) if j >= i else 0 for j in range(1, self.n + 1)] for i in range(1, self.n + 1)]

    def __eq__(self, other):
        return isinstance(other, IntervalRankMatrix) and self.rows == other.rows

    def __repr__(self):
        return f"IntervalRankMatrix(n={self.n}, rows={self.rows})"

    def check(self, k=None):
        """Raise DomainError unless the table looks like an interval rank function."""
        n = self.n
        for i in range(1, n + 1):
            for j in range(i, n + 1):
                v = self(i, j)
                cap = j - i + 1 if k is None else min(j - i + 1, k)
                if not 0 <= v <= cap:
                    raise DomainError(f"r({i},{j}) = {v} out of range")
                if j < n and not v <= self(i, j + 1) <= v + 1:
                    raise DomainError(f"r({i},{j}) -> r({i},{j + 1}) not a unit step")
                if i > 1 and not v <= self(i - 1, j) <= v + 1:
                    raise DomainError(f"r({i},{j}) -> r({i - 1},{j}) not a unit step")

    def to_json(self):
        return {"n": self.n, "rows": self.rows}

    @classmethod
    def from_json(cls, data):
        return cls(int(data["n"]), data["rows"])


def _interval_mask(i, j):
    return ((1 << j) - 1) & ~((1 << (i - 1)) - 1)


def interval_rank_matrix(sys):
    """Generic-point interval ranks, computed as matching numbers."""
    n = sys.n
    rows = [
        [max_matching(sys, cols=range(i, j + 1)) for j in range(i, n + 1)]
        for i in range(1, n + 1)
    ]
    return IntervalRankMatrix(n, rows)


def interval_rank_matrix_of_matroid(m):
    n = m.n
    return IntervalRankMatrix(
        n, [[m.rank_mask(_interval_mask(i, j)) for j in range(i, n + 1)] for i in range(1, n + 1)]
    )


def interval_envelope(r, k):
    """k-subsets B with |B & [i, j]| <= r(i, j) for every ordinary interval."""
    n = r.n
    r.check(k)
    if r(1, n) != k:
        raise DomainError(f"r(1, n) = {r(1, n)} but k = {k}")
    bounds = [(_interval_mask(i, j), r(i, j)) for i in range(1, n + 1) for j in range(i, n + 1)]
    masks = [b for b in k_subsets(n, k) if all((b & c).bit_count() <= v for c, v in bounds)]
    if not masks:
        raise DomainError("interval rank matrix admits no basis")
    return Matroid.from_masks(n, masks, k=k)


def _mobius_b(m):
    """b(I) = sum over J containing I of (k - rk J) * (-1)^|J - I|, for all I."""
    r = _table(m)
    n = m.n
    g = [m.k - x for x in r]
    for i in range(n):
        bit = 1 << i
        for mask in range(1 << n):
            if not mask & bit:
                g[mask] -= g[mask | bit]
    return g


def expected_codimension(m, presentation=None):
    """Mobius-weighted excess over the boolean lattice.

    Beyond the sweep limit a presentation of ``m`` must be supplied; the
    transversal closed form k(n-k) - dim L is then used.
    """
    if m.n <= MAX_SWEEP_N:
        r = _table(m)
        b = _mobius_b(m)
        return sum((mask.bit_count() - r[mask]) * b[mask] for mask in range(1 << m.n))
    if presentation is None:
        raise CapabilityError(
            f"n={m.n} exceeds the power-set sweep limit and no presentation was given"
        )
    if transversal_matroid(presentation) != m:
        raise DomainError("presentation does not present the given matroid")
    return m.k * (m.n - m.k) - locus_dimension(presentation)


def direct_sum_ec(m1, m2, ec1, ec2):
    """ec of m1 + m2 from the parts: dimensions add inside Gr(k1 + k2, n1 + n2)."""
    k, n = m1.k + m2.k, m1.n + m2.n
    return k * (n - k) - (m1.k * (m1.n - m1.k) - ec1) - (m2.k * (m2.n - m2.k) - ec2)


def ec_closed_form(sys):
    """k(n - k) - dim L(S) for a presentation S."""
    return sys.k * (sys.n - sys.k) - locus_dimension(sys)


def _check_collection(m, coll):
    r = _table(m)
    full = full_mask(m.n)
    comps = _components_masks(full, r.__getitem__)
    for comp in comps:
        if comp.bit_count() < 2:
            continue
        sub = minor(m, delete=to_tuple(full & ~comp))
        kept = list(bits(comp))
        for f in _flacet_masks(sub):
            lifted = 0
            for b in bits(f):
                lifted |= kept[b.bit_length() - 1]
            if lifted not in coll:
                raise DomainError(f"collection is missing the flacet {to_tuple(lifted)}")
    for i in coll:
        for c in _components_masks(i, r.__getitem__):
            if c not in coll:
                raise DomainError(
                    f"collection is missing {to_tuple(c)}, a component of the restriction to {to_tuple(i)}"
                )


def _restricted_b(m, coll):
    # Mobius inversion on the containment poset, solved top-down:
    # the b-values of members containing I sum to k - rk(I)
    b = {}
    for i in sorted(coll, key=lambda x: -x.bit_count()):
        b[i] = m.k - m.rank_mask(i) - sum(v for j, v in b.items() if j & i == i)
    return b


def restricted_b_values(m, collection):
    """b over the containment poset of ``collection``, keyed by sorted tuples."""
    b = _restricted_b(m, {to_mask(c) for c in collection})
    return {to_tuple(i): v for i, v in b.items()}


def expected_codimension_restricted(m, collection, check=True):
    coll = {to_mask(c) for c in collection}
    if check:
        _check_collection(m, coll)
    b = _restricted_b(m, coll)
    return sum((i.bit_count() - m.rank_mask(i)) * v for i, v in b.items())


def transversal_collection(sys):
    """Singletons together with every F(T) whose rank equals |T|."""
    m = transversal_matroid(sys)
    full = full_mask(sys.n)
    out = {1 << i for i in range(sys.n)}
    for size in range(sys.k + 1):
        for T in combinations(range(sys.k), size):
            outside = 0
            for i, s in enumerate(sys.masks):
                if i not in T:
                    outside |= s
            f = full & ~outside
            if m.rank_mask(f) == size:
                out.add(f)
    return sorted((to_tuple(x) for x in out), key=lambda t: (len(t), t))


def ec_by_components(sys):
    """Restricted-collection expected codimension, summed over components.

    The transversal collection only meets the closure hypothesis for a
    connected matroid, so each component is presented on its own ground set.
    Components combine through dimension: a direct sum has dimension equal to
    the sum of the component dimensions inside the full Grassmannian.
    """
    sys = reduce_to_minimal(sys)
    m = transversal_matroid(sys)
    dim = 0
    for comp in _components_masks(full_mask(m.n), _table(m).__getitem__):
        kept = list(bits(comp))
        sets = [_compress(s & comp, kept) for s in sys.masks if s & comp]
        sub = SetSystem.from_masks(len(kept), sets)
        ec = expected_codimension_restricted(transversal_matroid(sub), transversal_collection(sub))
        dim += sub.k * (sub.n - sub.k) - ec
    return m.k * (m.n - m.k) - dim


@dataclass(frozen=True)
class TransversalTest:
    transversal: bool
    presentation: SetSystem = None

    def __bool__(self):
        return self.transversal


def is_transversal(m, budget=2_000_000):
    """Search k-sets of distinct cocircuits for a presentation of ``m``.

    Complete, since a minimal presentation consists of distinct cocircuits.
    """
    m._require_bases()
    if m.k == 0:
        return TransversalTest(True, SetSystem(m.n, []))
    cocirc = sorted(_cocircuit_masks(m))
    if comb(len(cocirc), m.k) > budget:
        raise CapabilityError(
            f"{comb(len(cocirc), m.k)} cocircuit combinations exceed the budget {budget}"
        )
    target = m.masks
    nonloops = 0
    for b in target:
        nonloops |= b

    def extend(start, chosen):
        if len(chosen) == m.k:
            cover = 0
            for c in chosen:
                cover |= c
            if cover == nonloops and _transversal_masks(chosen) == target:
                return list(chosen)
            return None
        for idx in range(start, len(cocirc)):
            chosen.append(cocirc[idx])
            if _hall_ok(chosen):
                found = extend(idx + 1, chosen)
                if found:
                    return found
            chosen.pop()
        return None

    found = extend(0, [])
    if found is None:
        return TransversalTest(False)
    return TransversalTest(True, SetSystem.from_masks(m.n, found))


def _gale_leq(I, J):
    return len(I) == len(J) and all(x <= y for x, y in zip(sorted(I), sorted(J)))


def lattice_path_presentation(I, J, n=None):
    """Interval presentation [i_l, j_l] of the lattice path matroid between I and J."""
    I, J = sorted(I), sorted(J)
    if len(I) != len(J):
        raise DomainError("I and J must have the same size")
    if not _gale_leq(I, J):
        raise DomainError(f"{tuple(I)} is not below {tuple(J)} in Gale order")
    n = max(J, default=0) if n is None else n
    return SetSystem(n, [range(i, j + 1) for i, j in zip(I, J)])


def lattice_path_matroid(I, J, n):
    """Oracle: all k-subsets B with I <= B <= J in Gale order."""
    I, J = sorted(I), sorted(J)
    masks = [
        b
        for b in k_subsets(n, len(I))
        if _gale_leq(I, to_tuple(b)) and _gale_leq(to_tuple(b), J)
    ]
    return Matroid.from_masks(n, masks, k=len(I))
