"""Generic-point oracle over a prime field, plus exact rational determinants.

A nonzero Plücker coordinate at a random evaluation proves that the index set
is a basis; a zero may be a coincidence.  Callers amplify over seeds.
"""

import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, permutations

from sympy import isprime

from ._bits import bits, to_mask
from .errors import CapabilityError, DomainError, RankDeficientError
from .matroid import Matroid
from .transversal import SetSystem

DEFAULT_PRIME = 2147483647


@dataclass(frozen=True)
class FieldMatrix:
    p: int
    entries: tuple  # k rows of n residues
    system: SetSystem
    seed: int

    @property
    def k(self):
        return len(self.entries)

    @property
    def n(self):
        return self.system.n

    def to_json(self):
        return {
            "p": self.p,
            "seed": self.seed,
            "system": self.system.to_json(),
            "entries": [list(r) for r in self.entries],
        }


def _check_prime(p):
    if p <= 1 << 20:
        raise DomainError(f"prime {p} too small; need p > 2^20")
    if not isprime(p):
        raise DomainError(f"{p} is not prime")


def random_evaluation(sys, seed, p=DEFAULT_PRIME):
    """Uniform nonzero residues on the support of each set, zero elsewhere."""
    _check_prime(p)
    rng = random.Random(seed)
    rows = []
    for s in sys.masks:
        rows.append(
            tuple(rng.randrange(1, p) if s >> j & 1 else 0 for j in range(sys.n))
        )
    return FieldMatrix(p, tuple(rows), sys, seed)


def det_mod(rows, p):
    """Determinant of a square matrix over GF(p)."""
    a = [list(r) for r in rows]
    size = len(a)
    det = 1
    for col in range(size):
        piv = next((r for r in range(col, size) if a[r][col] % p), None)
        if piv is None:
            return 0
        if piv != col:
            a[col], a[piv] = a[piv], a[col]
            det = -det
        det = det * a[col][col] % p
        inv = pow(a[col][col], p - 2, p)
        for r in range(col + 1, size):
            f = a[r][col] * inv % p
            if f:
                for c in range(col, size):
                    a[r][c] = (a[r][c] - f * a[col][c]) % p
    return det % p


def rank_mod(rows, p):
    a = [list(r) for r in rows]
    rank = 0
    ncols = len(a[0]) if a else 0
    for col in range(ncols):
        piv = next((r for r in range(rank, len(a)) if a[r][col] % p), None)
        if piv is None:
            continue
        a[rank], a[piv] = a[piv], a[rank]
        inv = pow(a[rank][col], p - 2, p)
        for r in range(len(a)):
            if r != rank and a[r][col] % p:
                f = a[r][col] * inv % p
                a[r] = [(x - f * y) % p for x, y in zip(a[r], a[rank])]
        rank += 1
    return rank


def det_fraction(rows):
    """Exact determinant over the rationals."""
    a = [[Fraction(x) for x in r] for r in rows]
    size = len(a)
    det = Fraction(1)
    for col in range(size):
        piv = next((r for r in range(col, size) if a[r][col] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != col:
            a[col], a[piv] = a[piv], a[col]
            det = -det
        det *= a[col][col]
        for r in range(col + 1, size):
            f = a[r][col] / a[col][col]
            if f:
                for c in range(col, size):
                    a[r][c] -= f * a[col][c]
    return det


def _columns(rows, I):
    return [[row[j - 1] for j in I] for row in rows]


def plucker(fm, I):
    I = tuple(sorted(I))
    if len(I) != fm.k:
        raise DomainError(f"Plücker index {I} must have size k = {fm.k}")
    return det_mod(_columns(fm.entries, I), fm.p)


def matroid_from_matrix(fm):
    """Matroid of the row span: all k-sets with a nonzero Plücker coordinate."""
    n, k = fm.n, fm.k
    bases = [
        c for c in combinations(range(1, n + 1), k) if plucker(fm, c)
    ]
    if not bases:
        raise RankDeficientError(
            f"matrix has rank {rank_mod(fm.entries, fm.p)} < {k}", rank_mod(fm.entries, fm.p)
        )
    return Matroid(n, bases, k=k)


def amplified_matroid(sys, seeds=(0, 1, 2), p=DEFAULT_PRIME):
    """Union of the bases seen over several random evaluations."""
    found = set()
    for s in seeds:
        try:
            found |= matroid_from_matrix(random_evaluation(sys, s, p)).masks
        except RankDeficientError:
            continue
    if not found:
        raise RankDeficientError("no evaluation reached full rank", 0)
    return Matroid.from_masks(sys.n, found, k=sys.k)


def _perm_sign(perm):
    sign = 1
    seen = [False] * len(perm)
    for i in range(len(perm)):
        if not seen[i]:
            j, length = i, 0
            while not seen[j]:
                seen[j] = True
                j = perm[j]
                length += 1
            if length % 2 == 0:
                sign = -sign
    return sign


def plucker_matching_expansion(sys, I, budget=10_000):
    """Signed terms of the determinant of columns I of the generic matrix.

    Each term is (sign, ((row, column), ...)) with 0-based rows and 1-based
    columns; the t-th row is matched to the t-th smallest element of I.
    """
    I = tuple(sorted(I))
    k = sys.k
    if len(I) != k:
        raise DomainError(f"index set {I} must have size k = {k}")
    terms = []
    for perm in permutations(range(k)):
        # row r takes column I[perm[r]]
        if all(sys.masks[r] >> (I[perm[r]] - 1) & 1 for r in range(k)):
            terms.append((_perm_sign(perm), tuple((r, I[perm[r]]) for r in range(k))))
            if len(terms) > budget:
                raise CapabilityError(f"more than {budget} matchings for {I}")
    return terms


def evaluate_expansion(terms, fm):
    total = 0
    for sign, edges in terms:
        prod = sign
        for r, c in edges:
            prod = prod * fm.entries[r][c - 1] % fm.p
        total += prod
    return total % fm.p


def interval_ranks_mod(fm):
    """Rank of each interval column block [i, j] of the evaluated matrix."""
    n = fm.n
    return {
        (i, j): rank_mod(_columns(fm.entries, range(i, j + 1)), fm.p)
        for i in range(1, n + 1)
        for j in range(i, n + 1)
    }


def saturating_matching_exists(sys, I):
    """Whether the sets can be matched onto I (a brute-force check)."""
    target = to_mask(I)
    states = {0}
    for s in sys.masks:
        states = {u | b for u in states for b in bits(s & target & ~u)}
    return target in states
