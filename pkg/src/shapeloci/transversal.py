"""Set systems, their bipartite graphs, and the transversal matroids they present."""

from dataclasses import dataclass
from itertools import combinations

from ._bits import bits, full_mask, to_mask, to_tuple
from .errors import ConsistencyError, DomainError, RankDeficientError
from .matroid import Matroid, _cocircuit_masks


class SetSystem:
    """A multiset of k subsets of [n], i.e. a presentation.

    The order of ``sets`` is kept so that indices are meaningful, but equality
    and hashing treat the family as an unordered multiset.
    """

    def __init__(self, n, sets, allow_empty=False):
        n = int(n)
        if n < 0:
            raise DomainError("n must be nonnegative")
        clean = []
        for s in sets:
            s = tuple(sorted(set(int(e) for e in s)))
            for e in s:
                if not 1 <= e <= n:
                    raise DomainError(f"set element {e} outside [1, {n}]")
            if not s and not allow_empty:
                raise DomainError("empty set in set system")
            clean.append(s)
        self.n = n
        self.sets = tuple(clean)
        self.masks = tuple(to_mask(s) for s in clean)

    @classmethod
    def from_masks(cls, n, masks):
        self = cls.__new__(cls)
        self.n = n
        self.masks = tuple(masks)
        self.sets = tuple(to_tuple(m) for m in self.masks)
        return self

    @property
    def k(self):
        return len(self.sets)

    def __len__(self):
        return len(self.sets)

    def __iter__(self):
        return iter(self.sets)

    def __getitem__(self, i):
        return self.sets[i]

    def key(self):
        return (self.n, tuple(sorted(self.masks)))

    def __eq__(self, other):
        if not isinstance(other, SetSystem):
            return NotImplemented
        return self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        sep = "" if self.n < 10 else ","
        body = ", ".join(sep.join(map(str, s)) for s in self.sets)
        return f"SetSystem(n={self.n}, {{{body}}})"

    def support(self):
        out = 0
        for m in self.masks:
            out |= m
        return to_tuple(out)

    def size_vector(self):
        return tuple(sorted(len(s) for s in self.sets))

    def replace(self, index, new_set):
        masks = list(self.masks)
        masks[index] = to_mask(new_set)
        return SetSystem.from_masks(self.n, masks)

    def subsystem(self, indices):
        return SetSystem.from_masks(self.n, [self.masks[i] for i in indices])

    def to_json(self):
        return {"n": self.n, "sets": [list(s) for s in self.sets]}

    @classmethod
    def from_json(cls, data):
        if not isinstance(data, dict) or "n" not in data or "sets" not in data:
            raise DomainError('set system JSON needs keys "n" and "sets"')
        for s in data["sets"]:
            if list(s) != sorted(set(s)):
                raise DomainError(f"set {s} is not strictly increasing")
        return cls(data["n"], data["sets"])


def _union(masks):
    u = 0
    for m in masks:
        u |= m
    return u


def _matching_size(row_masks):
    """Maximum matching between rows (given as column masks) and columns."""
    match_col = {}

    def augment(r, seen):
        for col in bits(row_masks[r]):
            if col in seen:
                continue
            seen.add(col)
            if col not in match_col or augment(match_col[col], seen):
                match_col[col] = r
                return True
        return False

    return sum(1 for r in range(len(row_masks)) if augment(r, set()))


def max_matching(sys, rows=None, cols=None):
    """Size of a maximum matching in the bipartite graph of ``sys``.

    ``rows`` are 0-based set indices, ``cols`` ground elements (1-based).
    """
    if rows is None:
        rows = range(sys.k)
    colmask = full_mask(sys.n) if cols is None else to_mask(cols)
    return _matching_size([sys.masks[i] & colmask for i in rows])


def _transversal_masks(masks):
    """All full transversals of the family: each set contributes one distinct element."""
    states = {0}
    for s in masks:
        states = {u | b for u in states for b in bits(s & ~u)}
        if not states:
            break
    return states


def transversal_matroid(sys):
    bases = _transversal_masks(sys.masks)
    if not bases:
        achieved = max_matching(sys)
        raise RankDeficientError(
            f"no matching saturates all {sys.k} sets (rank {achieved})", achieved
        )
    return Matroid.from_masks(sys.n, bases, k=sys.k)


def _same_matroid(masks_a, masks_b):
    return _transversal_masks(masks_a) == _transversal_masks(masks_b)


def nmd(sys):
    """Naive maximal dimension: total set size minus the number of sets."""
    return sum(len(s) for s in sys.sets) - sys.k


def _hall_violator(masks):
    """First index subset breaking |union| >= max size + |T| - 1, by increasing size."""
    k = len(masks)
    for size in range(2, k + 1):
        for T in combinations(range(k), size):
            ms = [masks[i] for i in T]
            if _union(ms).bit_count() < max(m.bit_count() for m in ms) + size - 1:
                return T
    return None


def _hall_ok(masks):
    return _hall_violator(masks) is None


@dataclass(frozen=True)
class Minimality:
    minimal: bool
    violator: tuple = None

    def __bool__(self):
        return self.minimal


def is_minimal_by_cocircuits(sys):
    """Each set is a cocircuit of the presented matroid, and no two coincide."""
    m = transversal_matroid(sys)
    cocirc = set(_cocircuit_masks(m))
    return len(set(sys.masks)) == sys.k and all(s in cocirc for s in sys.masks)


def is_minimal_presentation(sys, crosscheck=True):
    """Test the union-size inequalities; on failure report the first violator.

    With ``crosscheck`` the cocircuit characterisation is evaluated too and
    any disagreement is raised as a bug.
    """
    transversal_matroid(sys)  # raises on rank deficiency
    violator = _hall_violator(sys.masks)
    result = Minimality(violator is None, violator)
    if crosscheck and bool(result) != is_minimal_by_cocircuits(sys):
        raise ConsistencyError(f"minimality tests disagree on {sys}")
    return result


def _eliminate(masks, T):
    """Support of the row produced by clearing |T|-1 coordinates inside T.

    Starts from a largest set of T and, at each step, clears the smallest
    coordinate shared with a not-yet-used set of T.
    """
    first = min(T, key=lambda i: (-masks[i].bit_count(), i))
    rest = [j for j in T if j != first]
    used = masks[first]
    cleared = 0
    while rest:
        cand = used & ~cleared & _union(masks[j] for j in rest)
        if not cand:
            return first, None
        x = cand & -cand
        j = next(j for j in rest if masks[j] & x)
        rest.remove(j)
        used |= masks[j]
        cleared |= x
    return first, used & ~cleared


def _removal_step(masks, target):
    order = sorted(range(len(masks)), key=lambda i: (-masks[i].bit_count(), i))
    for i in order:
        for b in sorted(bits(masks[i]), reverse=True):
            trial = list(masks)
            trial[i] = masks[i] ^ b
            if trial[i] and _transversal_masks(trial) == target:
                return trial
    return None


def reduce_to_minimal(sys):
    """A minimal presentation of the same matroid.

    Each round takes the first violating subsystem and replaces its largest
    set by the support obtained from row elimination; if that candidate
    changes the matroid, single-element removals are tried instead.
    """
    target = _transversal_masks(sys.masks)
    if not target:
        transversal_matroid(sys)
    masks = list(sys.masks)
    while True:
        T = _hall_violator(masks)
        if T is None:
            return SetSystem.from_masks(sys.n, masks)
        i, new = _eliminate(masks, T)
        trial = None
        if new:
            trial = list(masks)
            trial[i] = new
            if _transversal_masks(trial) != target:
                trial = None
        if trial is None:
            trial = _removal_step(masks, target)
        if trial is None:
            raise ConsistencyError(f"no matroid-preserving reduction found for {sys}")
        masks = trial


def maximal_presentation(sys):
    """Grow every set by each element whose addition leaves the matroid unchanged."""
    target = _transversal_masks(sys.masks)
    if not target:
        transversal_matroid(sys)
    masks = list(sys.masks)
    changed = True
    while changed:
        changed = False
        for i in range(len(masks)):
            for b in bits(full_mask(sys.n) & ~masks[i]):
                trial = list(masks)
                trial[i] |= b
                if _transversal_masks(trial) == target:
                    masks = trial
                    changed = True
    return SetSystem.from_masks(sys.n, masks)


def flat_of_subsystem(sys, indices):
    """Elements lying in no set outside the chosen subsystem."""
    chosen = set(indices)
    outside = _union(m for i, m in enumerate(sys.masks) if i not in chosen)
    return to_tuple(full_mask(sys.n) & ~outside)


def locus_dimension(sys):
    return nmd(reduce_to_minimal(sys))


def restrict(sys, elements):
    """Presentation of the restriction to ``elements``; empty sets are dropped."""
    keep = to_mask(elements)
    return SetSystem.from_masks(sys.n, [m & keep for m in sys.masks if m & keep])
