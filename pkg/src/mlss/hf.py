"""Hereditarily finite sets in canonical form.

An :class:`HFSet` stores its elements as a sorted, duplicate-free tuple, so
structural equality coincides with extensional equality.  The order is:
fewer elements first, then lexicographic on the (canonically ordered)
elements.
"""

from __future__ import annotations

import weakref
from itertools import combinations
from typing import Iterable


class HFSet:
    """A canonical hereditarily finite set.

    Instances are hash-consed: there is at most one live object per set, so
    equality is identity.  Build values with :func:`hf_from`,
    :func:`hf_single` and friends rather than calling the class directly.
    """

    __slots__ = ("elems", "_key", "_hash", "_rank", "__weakref__")

    def __new__(cls, elems: Iterable[HFSet] = (), *, _canonical: bool = False):
        if not _canonical:
            elems = sorted(set(elems), key=_key_of)
        elems = tuple(elems)
        found = _INTERN.get(elems)
        if found is not None:
            return found
        self = object.__new__(cls)
        self.elems = elems
        self._key = (len(elems), tuple(e._key for e in elems))
        self._hash = hash((len(elems), tuple(e._hash for e in elems)))
        self._rank = 1 + max(e._rank for e in elems) if elems else 0
        _INTERN[elems] = self
        return self

    def __eq__(self, other) -> bool:
        return self is other

    def __hash__(self) -> int:
        return self._hash

    def __lt__(self, other: HFSet) -> bool:
        return self._key < other._key

    def __le__(self, other: HFSet) -> bool:
        return self is other or self._key < other._key

    def __len__(self) -> int:
        return len(self.elems)

    def __iter__(self):
        return iter(self.elems)

    def __contains__(self, x) -> bool:
        return hf_mem(x, self)

    def __reduce__(self):
        return (hf_from, (list(self.elems),))

    def __repr__(self) -> str:
        return f"HFSet({render(self)})"

    def __str__(self) -> str:
        return render(self)


def _key_of(x: HFSet) -> tuple:
    return x._key


# hash-consing table; entries vanish with their last reference
_INTERN: "weakref.WeakValueDictionary[tuple, HFSet]" = weakref.WeakValueDictionary()


EMPTY = HFSet((), _canonical=True)


def hf_empty() -> HFSet:
    return EMPTY


def hf_from(xs: Iterable[HFSet]) -> HFSet:
    return HFSet(xs)


def hf_single(x: HFSet) -> HFSet:
    return HFSet((x,), _canonical=True)


def hf_mem(x: HFSet, y: HFSet) -> bool:
    # elements of y all have rank < rank(y)
    if x._rank >= y._rank:
        return False
    return any(x is e for e in y.elems)


def hf_union(x: HFSet, y: HFSet) -> HFSet:
    if not x.elems:
        return y
    if not y.elems:
        return x
    return HFSet(x.elems + y.elems)


def hf_inter(x: HFSet, y: HFSet) -> HFSet:
    ys = set(y.elems)
    return HFSet([e for e in x.elems if e in ys], _canonical=True)


def hf_diff(x: HFSet, y: HFSet) -> HFSet:
    ys = set(y.elems)
    return HFSet([e for e in x.elems if e not in ys], _canonical=True)


def hf_card(x: HFSet) -> int:
    return len(x.elems)


def hf_rank(x: HFSet) -> int:
    return x._rank


def hf_ordinal(n: int) -> HFSet:
    """The von Neumann ordinal ``n``, i.e. ``{0, 1, ..., n-1}``."""
    if n < 0:
        raise ValueError("ordinals are natural numbers")
    out = EMPTY
    for _ in range(n):
        out = HFSet(out.elems + (out,))
    return out


MAX_UNIVERSE_RANK = 4


def hf_universe(rank_bound: int) -> list[HFSet]:
    """Every HF set of rank at most ``rank_bound``, in canonical order.

    Sizes are 1, 2, 4, 16, 65536 for bounds 0..4.
    """
    if rank_bound < 0 or rank_bound > MAX_UNIVERSE_RANK:
        raise ValueError(f"rank_bound must lie in 0..{MAX_UNIVERSE_RANK}, got {rank_bound}")
    return list(_universe(rank_bound))


_UNIVERSE_CACHE: dict[int, tuple[HFSet, ...]] = {}


def _universe(k: int) -> tuple[HFSet, ...]:
    if k in _UNIVERSE_CACHE:
        return _UNIVERSE_CACHE[k]
    if k == 0:
        out = (EMPTY,)
    else:
        base = _universe(k - 1)
        # base is canonically sorted, so each combination is already canonical
        out = tuple(
            sorted(
                (HFSet(c, _canonical=True) for r in range(len(base) + 1) for c in combinations(base, r)),
                key=lambda s: s._key,
            )
        )
    _UNIVERSE_CACHE[k] = out
    return out


def render(x: HFSet) -> str:
    """Nested-brace rendering, e.g. ``{{}, {{}}}``."""
    return "{" + ", ".join(render(e) for e in x.elems) + "}"
