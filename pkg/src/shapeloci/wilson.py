"""Wilson loop diagrams, domino systems and the domino sign rule.

A propagator {i, j} stands for the chord between polygon edges (i, i+1) and
(j, j+1); its derived set is {i, i+1, j, j+1} with n + 1 read as 1.
"""

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from ._bits import to_mask
from .errors import AnomalyError, DomainError, PreconditionError
from .oracle import det_fraction
from .positroid import is_positroid
from .transversal import SetSystem, _hall_violator, locus_dimension, transversal_matroid


def _succ(i, n):
    return i % n + 1


class WilsonLoopDiagram:
    """A multiset of propagators on the n-gon.

    Repeated propagators are kept (they are valid diagrams that simply fail
    the admissibility count).
    """

    def __init__(self, n, propagators):
        n = int(n)
        props = []
        for p in propagators:
            p = tuple(sorted(int(e) for e in p))
            if len(p) != 2:
                raise DomainError(f"propagator {p} must be a pair")
            i, j = p
            if not (1 <= i <= n and 1 <= j <= n):
                raise DomainError(f"propagator {p} outside [1, {n}]")
            if i == j or _succ(i, n) == j or _succ(j, n) == i:
                raise DomainError(f"propagator {p} joins adjacent or equal vertices")
            props.append(p)
        self.n = n
        self.propagators = tuple(props)

    @property
    def k(self):
        return len(self.propagators)

    def key(self):
        return (self.n, tuple(sorted(self.propagators)))

    def __eq__(self, other):
        if not isinstance(other, WilsonLoopDiagram):
            return NotImplemented
        return self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        body = ", ".join(f"{i}{j}" if self.n < 10 else f"{i},{j}" for i, j in self.propagators)
        return f"WilsonLoopDiagram(n={self.n}, {{{body}}})"

    def to_json(self):
        return {"n": self.n, "propagators": [list(p) for p in self.propagators]}

    @classmethod
    def from_json(cls, data):
        if not isinstance(data, dict) or "n" not in data or "propagators" not in data:
            raise DomainError('diagram JSON needs keys "n" and "propagators"')
        return cls(data["n"], data["propagators"])


def _prop_mask(p, n):
    i, j = p
    return to_mask({i, _succ(i, n), j, _succ(j, n)})


def to_set_system(w):
    return SetSystem.from_masks(w.n, [_prop_mask(p, w.n) for p in w.propagators])


def _between(x, a, b, n):
    """x lies strictly inside the forward arc from a to b."""
    return 0 < (x - a) % n < (b - a) % n


def interleave(p, q, n):
    """Chords p and q cross strictly; a shared endpoint does not count."""
    a, b = p
    c, d = q
    if len({a, b, c, d}) < 4:
        return False
    return _between(c, a, b, n) != _between(d, a, b, n)


def interleaving_pairs(w):
    return [
        (s, t)
        for s, t in combinations(range(w.k), 2)
        if interleave(w.propagators[s], w.propagators[t], w.n)
    ]


@dataclass(frozen=True)
class Admissibility:
    admissible: bool
    violating_subset: tuple = None
    interleaving_pair: tuple = None

    def __bool__(self):
        return self.admissible

    def to_json(self):
        out = {"admissible": self.admissible}
        if self.violating_subset is not None:
            out["violating_subset"] = [i + 1 for i in self.violating_subset]
        if self.interleaving_pair is not None:
            out["interleaving_pair"] = [i + 1 for i in self.interleaving_pair]
        return out


def _count_violator(w):
    # |union Q'| >= |Q| + 3 is the minimality inequality for sets of size 4;
    # singletons always pass
    return _hall_violator(to_set_system(w).masks)


def satisfies_count(w):
    return _count_violator(w) is None


def is_admissible(w):
    bad = _count_violator(w)
    if bad is not None:
        return Admissibility(False, violating_subset=bad)
    pairs = interleaving_pairs(w)
    if pairs:
        return Admissibility(False, interleaving_pair=pairs[0])
    return Admissibility(True)


def wld_properties(w):
    """Dimension of the cell and positroid-ness of its matroid."""
    if not is_admissible(w):
        raise PreconditionError(f"{w} is not admissible")
    sys = to_set_system(w)
    dim = locus_dimension(sys)
    pos = is_positroid(transversal_matroid(sys))
    if dim != 3 * w.k or not pos:
        raise AnomalyError(
            "admissible diagram without dimension 3k or positroid matroid",
            {"diagram": w.to_json(), "dimension": dim, "positroid": pos},
        )
    return {"dimension": dim, "positroid": pos}


def _exact(masks, Q):
    u = 0
    for i in Q:
        u |= masks[i]
    return u.bit_count() == len(Q) + 3


def exact_subdiagrams(w):
    """Index tuples of the exact subdiagrams, by size then lexicographically."""
    if not satisfies_count(w):
        raise PreconditionError(f"{w} fails the admissibility count")
    masks = to_set_system(w).masks
    return [
        Q
        for size in range(1, w.k + 1)
        for Q in combinations(range(w.k), size)
        if _exact(masks, Q)
    ]


def wld_equivalent(w1, w2):
    for w in (w1, w2):
        if not satisfies_count(w):
            raise PreconditionError(f"{w} fails the admissibility count")
    if w1.n != w2.n:
        return False
    return transversal_matroid(to_set_system(w1)) == transversal_matroid(to_set_system(w2))


def _propagators_within(support, n):
    out = []
    for i, j in combinations(range(1, n + 1), 2):
        if _succ(i, n) == j or _succ(j, n) == i:
            continue
        if _prop_mask((i, j), n) & ~support == 0:
            out.append((i, j))
    return out


def noncrossing_arrangements(support, count, n):
    """Noncrossing sets of ``count`` propagators covering exactly ``support``
    and meeting the admissibility count, in lexicographic order."""
    cands = _propagators_within(support, n)
    out = []
    for combo in combinations(cands, count):
        u = 0
        for p in combo:
            u |= _prop_mask(p, n)
        if u != support:
            continue
        if any(interleave(p, q, n) for p, q in combinations(combo, 2)):
            continue
        if _hall_violator([_prop_mask(p, n) for p in combo]) is None:
            out.append(combo)
    return out


def _replace(w, Q, combo):
    keep = [p for idx, p in enumerate(w.propagators) if idx not in Q]
    return WilsonLoopDiagram(w.n, keep + list(combo))


def _swap_step(w, target, subdiagrams):
    before = len(interleaving_pairs(w))
    masks = to_set_system(w).masks
    for Q in subdiagrams:
        support = 0
        for i in Q:
            support |= masks[i]
        for combo in noncrossing_arrangements(support, len(Q), w.n):
            new = _replace(w, Q, combo)
            if not satisfies_count(new) or len(interleaving_pairs(new)) >= before:
                continue
            if transversal_matroid(to_set_system(new)) == target:
                return new
    return None


def _search_admissible(n, k, target):
    for combo in combinations(_propagators_within((1 << n) - 1, n), k):
        w = WilsonLoopDiagram(n, combo)
        if is_admissible(w) and transversal_matroid(to_set_system(w)) == target:
            return w
    return None


def uncross(w):
    """An equivalent admissible diagram.

    Each round takes the first interleaving pair, then swaps an exact
    subdiagram containing it (smallest first) for the first noncrossing
    arrangement on the same vertices that keeps the matroid and lowers the
    number of interleaving pairs.  If no such swap exists, any exact
    subdiagram is tried, and finally all admissible diagrams are searched.
    """
    if not satisfies_count(w):
        raise PreconditionError(f"{w} fails the admissibility count")
    target = transversal_matroid(to_set_system(w))
    if not is_positroid(target):
        raise DomainError(f"the matroid of {w} is not a positroid")
    cur = w
    while True:
        pairs = interleaving_pairs(cur)
        if not pairs:
            return cur
        s, t = pairs[0]
        subs = exact_subdiagrams(cur)
        containing = [Q for Q in subs if s in Q and t in Q]
        nxt = _swap_step(cur, target, containing) or _swap_step(cur, target, subs)
        if nxt is None:
            nxt = _search_admissible(cur.n, cur.k, target)
            if nxt is None:
                raise AnomalyError(
                    "positroid diagram with no admissible equivalent",
                    {"diagram": w.to_json()},
                )
        cur = nxt


def noncrossing_exact_count(vertices):
    """Admissible arrangements of vertices - 3 propagators covering a segment.

    The segment 1..vertices sits inside a cycle with one spare vertex, so no
    propagator wraps around.
    """
    if vertices < 4:
        raise DomainError("need at least 4 vertices")
    n = vertices + 1
    support = (1 << vertices) - 1
    return len(noncrossing_arrangements(support, vertices - 3, n))


def admissible_diagrams(n, k):
    """All admissible diagrams with k distinct propagators on the n-gon."""
    props = _propagators_within((1 << n) - 1, n)
    for combo in combinations(props, k):
        w = WilsonLoopDiagram(n, combo)
        if is_admissible(w):
            yield w


class DominoSystem:
    """Anchor sets I_1..I_k; each I gives the vectors summing i-dominos, i in I."""

    def __init__(self, n, supports):
        n = int(n)
        clean = []
        for s in supports:
            s = tuple(sorted(set(int(e) for e in s)))
            if not s:
                raise DomainError("empty domino anchor set")
            for e in s:
                if not 1 <= e <= n:
                    raise DomainError(f"anchor {e} outside [1, {n}]")
                if n > 2 and _succ(e, n) in s:
                    raise DomainError(f"anchors {e} and {_succ(e, n)} give overlapping dominos")
            clean.append(s)
        self.n = n
        self.supports = tuple(clean)

    def to_json(self):
        return {"n": self.n, "supports": [list(s) for s in self.supports]}


def domino_to_system(d):
    return SetSystem(
        d.n, [sorted(set(s) | {_succ(i, d.n) for i in s}) for s in d.supports]
    )


def _sign(x):
    return (x > 0) - (x < 0)


def _row_mask(row):
    return sum(1 << j for j, x in enumerate(row) if x != 0)


def domino_sign_check(matrix, sys):
    """Check the adjacent-sign rule on every row of a totally nonnegative point.

    Adjacent nonzero entries must agree in sign, except across the wrap from
    n to 1 where the sign changes by (-1)^(k-1).  The Plücker condition is
    tested up to a global sign, since the rows span the same plane after
    negating one of them.
    """
    rows = [[Fraction(x) for x in r] for r in matrix]
    k, n = len(rows), sys.n
    if k != sys.k or any(len(r) != n for r in rows):
        raise PreconditionError(f"matrix must be {sys.k} x {n}")
    if sorted(_row_mask(r) for r in rows) != sorted(sys.masks):
        raise PreconditionError("row supports do not match the set system")
    bad = _hall_violator(sys.masks)
    if bad is not None:
        raise PreconditionError(f"set system is not minimal; violator {[i + 1 for i in bad]}")
    seen = 0
    for I in combinations(range(n), k):
        s = _sign(det_fraction([[r[j] for j in I] for r in rows]))
        if s and seen and s != seen:
            raise PreconditionError(
                f"Plücker coordinates of both signs; I = {[j + 1 for j in I]}"
            )
        seen = seen or s
    if not seen:
        raise PreconditionError("matrix does not have full rank")
    wrap = (-1) ** (k - 1)
    for r in rows:
        for i in range(n):
            a, b = r[i], r[(i + 1) % n]
            if a and b:
                expected = _sign(a) * (wrap if i == n - 1 else 1)
                if _sign(b) != expected:
                    return False
    return True
