"""Explicit-basis matroids on the ordered ground set [n].

Bases are held as a frozenset of bitmasks.  Every rank query goes through a
lazily built table over all 2**n subsets, which is what makes the power-set
sweeps (flats, circuits, Mobius sums) affordable for n <= 16.
"""

from itertools import combinations

from ._bits import bits, full_mask, k_subsets, submasks, to_mask, to_tuple
from .errors import DomainError, EmptyMatroidError

MAX_SWEEP_N = 16


class Matroid:
    """A matroid given by its list of bases.

    ``labels`` records, for a minor, which element of the parent ground set
    each of 1..n came from.  It does not take part in equality.
    """

    def __init__(self, n, bases, k=None, labels=None):
        masks = set()
        for b in bases:
            b = tuple(b)
            for e in b:
                if not 1 <= e <= n:
                    raise DomainError(f"basis element {e} outside [1, {n}]")
            if len(set(b)) != len(b):
                raise DomainError(f"repeated element in basis {b}")
            masks.add(to_mask(b))
        self._init(n, frozenset(masks), k, labels)

    @classmethod
    def from_masks(cls, n, masks, k=None, labels=None):
        self = cls.__new__(cls)
        self._init(n, frozenset(masks), k, labels)
        return self

    def _init(self, n, masks, k, labels):
        if n < 0:
            raise DomainError("ground set size must be nonnegative")
        sizes = {b.bit_count() for b in masks}
        if len(sizes) > 1:
            raise DomainError(f"bases of differing sizes {sorted(sizes)}")
        if masks:
            (size,) = sizes
            if k is not None and k != size:
                raise DomainError(f"declared rank {k} but bases have size {size}")
            k = size
        elif k is None:
            k = 0
        if labels is not None:
            labels = tuple(labels)
            if len(labels) != n:
                raise DomainError("labels must have one entry per ground element")
        self.n = n
        self.k = k
        self.masks = masks
        self.labels = labels
        self._ranks = None

    @property
    def bases(self):
        return sorted(to_tuple(b) for b in self.masks)

    @property
    def is_empty(self):
        """True for the error value with no bases at all."""
        return not self.masks

    def _require_bases(self):
        if not self.masks:
            raise EmptyMatroidError("matroid has no bases")

    def rank_table(self):
        """List indexed by mask giving the rank of every subset of [n]."""
        if self._ranks is None:
            self._require_bases()
            if self.n > MAX_SWEEP_N:
                # fall back to a dict-free direct computation per query
                return None
            size = 1 << self.n
            indep = bytearray(size)
            for b in self.masks:
                indep[b] = 1
            for mask in range(size - 1, -1, -1):
                if indep[mask]:
                    for bit in bits(mask):
                        indep[mask ^ bit] = 1
            ranks = [0] * size
            for mask in range(1, size):
                if indep[mask]:
                    ranks[mask] = mask.bit_count()
                else:
                    ranks[mask] = max(ranks[mask ^ bit] for bit in bits(mask))
            self._ranks = ranks
        return self._ranks

    def rank_mask(self, mask):
        table = self.rank_table()
        if table is not None:
            return table[mask]
        return max((mask & b).bit_count() for b in self.masks)

    def rank(self, elements=None):
        if elements is None:
            return self.k
        elements = tuple(elements)
        for e in elements:
            if not 1 <= e <= self.n:
                raise DomainError(f"element {e} outside [1, {self.n}]")
        return self.rank_mask(to_mask(elements))

    def __eq__(self, other):
        if not isinstance(other, Matroid):
            return NotImplemented
        return self.n == other.n and self.k == other.k and self.masks == other.masks

    def __hash__(self):
        return hash((self.n, self.k, self.masks))

    def __repr__(self):
        shown = ["".join(map(str, b)) if self.n < 10 else str(b) for b in self.bases[:6]]
        more = "" if len(self.masks) <= 6 else f", ... ({len(self.masks)} bases)"
        return f"Matroid(n={self.n}, k={self.k}, bases=[{', '.join(shown)}{more}])"

    def to_json(self):
        return {"n": self.n, "k": self.k, "bases": [list(b) for b in self.bases]}

    @classmethod
    def from_json(cls, data):
        return cls(int(data["n"]), data["bases"], k=data.get("k"))


def uniform(k, n):
    return Matroid.from_masks(n, k_subsets(n, k), k=k)


def rank(m, elements):
    return m.rank(elements)


def is_basis_exchange_valid(m):
    """Check the symmetric exchange axiom over every ordered pair of bases."""
    masks = m.masks
    if not masks:
        return False
    for s in masks:
        for t in masks:
            for i in bits(s & ~t):
                if not any(
                    (s ^ i | j) in masks and (t ^ j | i) in masks for j in bits(t & ~s)
                ):
                    return False
    return True


def _table(m):
    m._require_bases()
    if m.n > MAX_SWEEP_N:
        raise DomainError(f"power-set sweep refused for n={m.n} > {MAX_SWEEP_N}")
    return m.rank_table()


def _flat_masks(m):
    r = _table(m)
    full = full_mask(m.n)
    out = []
    for f in range(full + 1):
        rf = r[f]
        if all(r[f | x] > rf for x in bits(full & ~f)):
            out.append(f)
    return out


def _sorted_tuples(masks):
    return sorted((to_tuple(x) for x in masks), key=lambda t: (len(t), t))


def flats(m):
    return _sorted_tuples(_flat_masks(m))


def _circuit_masks(ground, rank):
    """Circuits of the matroid on ``ground`` whose rank function is ``rank``."""
    out = []
    for x in submasks(ground):
        if x and rank(x) < x.bit_count():
            if all(rank(x ^ b) == x.bit_count() - 1 for b in bits(x)):
                out.append(x)
    return out


def circuits(m):
    r = _table(m)
    return _sorted_tuples(_circuit_masks(full_mask(m.n), r.__getitem__))


def _cocircuit_masks(m):
    full = full_mask(m.n)
    r = _table(m)
    return [full & ~h for h in _flat_masks(m) if r[h] == m.k - 1]


def cocircuits(m):
    """Minimal sets meeting every basis: complements of hyperplanes."""
    return _sorted_tuples(_cocircuit_masks(m))


def _is_cyclic_mask(f, rank):
    # a set is a union of circuits iff no element is a coloop of the restriction
    rf = rank(f)
    return all(rank(f ^ b) == rf for b in bits(f))


def cyclic_flats(m):
    r = _table(m)
    return _sorted_tuples(f for f in _flat_masks(m) if _is_cyclic_mask(f, r.__getitem__))


def _components_masks(ground, rank):
    """Connected components (as masks) via the shared-circuit relation."""
    parent = {b: b for b in bits(ground)}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for c in _circuit_masks(ground, rank):
        first = c & -c
        for b in bits(c ^ first):
            ra, rb = find(first), find(b)
            if ra != rb:
                parent[rb] = ra
    groups = {}
    for b in bits(ground):
        root = find(b)
        groups[root] = groups.get(root, 0) | b
    return sorted(groups.values(), key=lambda g: g & -g)


def connected_components(m):
    r = _table(m)
    return [to_tuple(c) for c in _components_masks(full_mask(m.n), r.__getitem__)]


def is_connected(m):
    return len(connected_components(m)) <= 1


def _restriction_connected(r, f):
    return len(_components_masks(f, r.__getitem__)) <= 1


def _contraction_connected(r, f, full):
    rf = r[f]
    return len(_components_masks(full & ~f, lambda x: r[x | f] - rf)) <= 1


def _flacet_masks(m):
    r = _table(m)
    full = full_mask(m.n)
    return [
        f
        for f in _flat_masks(m)
        if f not in (0, full)
        and _restriction_connected(r, f)
        and _contraction_connected(r, f, full)
    ]


def flacets(m):
    """Proper nonempty flats F with both m|F and m/F connected."""
    if not is_connected(m):
        raise DomainError(
            "flacets are defined for connected matroids; restrict to each of "
            f"the components {connected_components(m)} first"
        )
    return _sorted_tuples(_flacet_masks(m))


def dual(m):
    m._require_bases()
    full = full_mask(m.n)
    return Matroid.from_masks(m.n, (full & ~b for b in m.masks), k=m.n - m.k, labels=m.labels)


def _compress(mask, kept):
    out = 0
    for pos, bit in enumerate(kept):
        if mask & bit:
            out |= 1 << pos
    return out


def minor(m, delete=(), contract=()):
    """Delete then contract, relabelling survivors to 1..n' in inherited order.

    The result carries ``labels`` mapping each new element back to ``m``.
    A dependent contraction set is handled by contracting its lexicographically
    least maximal independent subset and deleting the rest.
    """
    m._require_bases()
    dmask = to_mask(delete)
    cmask = to_mask(contract)
    full = full_mask(m.n)
    if (dmask | cmask) & ~full:
        raise DomainError("minor: element outside the ground set")
    if dmask & cmask:
        raise DomainError("minor: delete and contract sets must be disjoint")
    masks = m.masks
    if dmask:
        best = max((b & ~dmask).bit_count() for b in masks)
        masks = {b & ~dmask for b in masks if (b & ~dmask).bit_count() == best}
    if cmask:
        # lexicographically least maximal independent subset of the contraction set
        indep = 0
        for bit in bits(cmask):
            cand = indep | bit
            if any(b & cand == cand for b in masks):
                indep = cand
        dependent_part = cmask & ~indep
        masks = {b & ~cmask for b in masks if b & indep == indep and not b & dependent_part}
    if not masks:
        raise EmptyMatroidError("minor has no bases")
    kept = list(bits(full & ~(dmask | cmask)))
    parent_labels = m.labels or tuple(range(1, m.n + 1))
    labels = tuple(parent_labels[b.bit_length() - 1] for b in kept)
    new = {_compress(b, kept) for b in masks}
    return Matroid.from_masks(len(kept), new, labels=labels)


def restriction(m, elements):
    keep = to_mask(elements)
    return minor(m, delete=to_tuple(full_mask(m.n) & ~keep))


def deletion(m, elements):
    return minor(m, delete=elements)


def contraction(m, elements):
    return minor(m, contract=elements)


def direct_sum(m1, m2):
    """m1 on 1..n1 and m2 on n1+1..n1+n2."""
    m1._require_bases()
    m2._require_bases()
    masks = {a | (b << m1.n) for a in m1.masks for b in m2.masks}
    return Matroid.from_masks(m1.n + m2.n, masks, k=m1.k + m2.k)


def is_free(m):
    return len(m.masks) == 1


def basis_combinations(n, k):
    """All k-subsets of [n] as tuples (convenience for tests and oracles)."""
    return [tuple(c) for c in combinations(range(1, n + 1), k)]
