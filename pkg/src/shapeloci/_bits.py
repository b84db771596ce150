"""Bitmask helpers for subsets of the ground set [n].

Element ``i`` (1-indexed) lives in bit ``i - 1``.  Everything outside this
package sees sorted tuples of ints; masks are an internal representation.
"""

from itertools import combinations


def to_mask(elements):
    mask = 0
    for e in elements:
        mask |= 1 << (e - 1)
    return mask


def to_tuple(mask):
    out = []
    i = 1
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return tuple(out)


def full_mask(n):
    return (1 << n) - 1


def bits(mask):
    """Yield the single-bit masks making up ``mask``, lowest first."""
    while mask:
        low = mask & -mask
        yield low
        mask ^= low


def submasks(mask):
    """Yield every submask of ``mask`` (including 0 and ``mask``)."""
    sub = mask
    while True:
        yield sub
        if sub == 0:
            return
        sub = (sub - 1) & mask


def k_subsets(n, k):
    for combo in combinations(range(n), k):
        m = 0
        for i in combo:
            m |= 1 << i
        yield m


def rotate(mask, n, shift):
    """Relabel i -> i + shift (cyclically, mod n)."""
    shift %= n
    if shift == 0:
        return mask
    full = (1 << n) - 1
    return ((mask << shift) | (mask >> (n - shift))) & full


def cyclic_order(n, a):
    """Elements of [n] listed in the a-th cyclic shift of the usual order."""
    return [((a - 1 + t) % n) + 1 for t in range(n)]


def cyclic_intervals(n):
    """Masks of all nonempty cyclic intervals of [n], ordered by (start, length).

    The full set appears once per start; duplicates are dropped.
    """
    seen = set()
    out = []
    for start in range(n):
        m = 0
        for length in range(n):
            m |= 1 << ((start + length) % n)
            if m not in seen:
                seen.add(m)
                out.append(m)
    return out


def is_cyclic_interval(mask, n):
    if mask == 0:
        return False
    full = (1 << n) - 1
    if mask == full:
        return True
    # a proper nonempty subset of the cycle is an interval iff it has exactly
    # one "run start": an element whose cyclic predecessor is absent
    pred = rotate(mask, n, 1)
    return (mask & ~pred & full).bit_count() == 1
