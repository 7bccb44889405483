"""Exact arithmetic of partial injective transformations of N = {1, ..., n}.

Composition reads left to right throughout the package: the left factor
acts first, so ``compose(b, g)`` sends x to g(b(x)).  Elements are
immutable values; every operation returns a fresh instance.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations, permutations
from typing import Iterable, Iterator, Mapping, Optional

DEFAULT_MAX_N = 5
MAX_N_ENV = "ISN_VARIANTS_MAX_N"


class CarrierMismatch(ValueError):
    """Operands live on carriers of different sizes."""


def enumeration_bound(override: Optional[int] = None) -> int:
    """Largest n for which exhaustive enumeration is permitted."""
    if override is not None:
        return override
    return int(os.environ.get(MAX_N_ENV, DEFAULT_MAX_N))


@dataclass(frozen=True)
class PartialInjection:
    """A partial injective self-map of {1, ..., n}, 1-indexed.

    ``img[x - 1]`` holds the image of x, or None where the map is
    undefined.  Defined values are pairwise distinct.
    """

    n: int
    img: tuple

    def __post_init__(self):
        object.__setattr__(self, "img", tuple(self.img))
        if self.n < 1:
            raise ValueError(f"carrier size must be >= 1, got {self.n}")
        if len(self.img) != self.n:
            raise ValueError(f"img has length {len(self.img)}, expected {self.n}")
        seen = set()
        for v in self.img:
            if v is None:
                continue
            if not isinstance(v, int) or not 1 <= v <= self.n:
                raise ValueError(f"image value {v!r} outside 1..{self.n}")
            if v in seen:
                raise ValueError(f"not injective: value {v} repeats")
            seen.add(v)

    @classmethod
    def from_pairs(cls, n: int, pairs) -> "PartialInjection":
        """Build from a mapping or an iterable of (x, y) pairs."""
        mapping = dict(pairs.items()) if isinstance(pairs, Mapping) else dict(pairs)
        img = [None] * n
        for x, y in mapping.items():
            if not 1 <= x <= n:
                raise ValueError(f"domain point {x} outside 1..{n}")
            img[x - 1] = y
        return cls(n, tuple(img))

    def __call__(self, x: int):
        if not 1 <= x <= self.n:
            raise ValueError(f"point {x} outside 1..{self.n}")
        return self.img[x - 1]

    def items(self) -> tuple:
        """Defined (x, image-of-x) pairs, ascending in x."""
        return tuple((x, v) for x, v in enumerate(self.img, start=1) if v is not None)

    @property
    def dom(self) -> tuple:
        return tuple(x for x, v in enumerate(self.img, start=1) if v is not None)

    @property
    def im(self) -> tuple:
        return tuple(sorted(v for v in self.img if v is not None))

    @property
    def rank(self) -> int:
        return sum(1 for v in self.img if v is not None)

    @property
    def is_permutation(self) -> bool:
        return self.rank == self.n

    def __mul__(self, other: "PartialInjection") -> "PartialInjection":
        return compose(self, other)

    def __repr__(self):
        body = ", ".join(f"{x}->{v}" for x, v in self.items()) or "empty"
        return f"PInj({self.n}; {body})"


def canonical_key(b: PartialInjection):
    """Deterministic sort key: (rank, dom, img with 0 for undefined)."""
    return (b.rank, b.dom, tuple(0 if v is None else v for v in b.img))


@dataclass(frozen=True)
class ElementSet:
    """A finite set of elements sharing one carrier size."""

    n: int
    members: frozenset

    def __post_init__(self):
        object.__setattr__(self, "members", frozenset(self.members))
        for b in self.members:
            if not isinstance(b, PartialInjection):
                raise TypeError(f"not a PartialInjection: {b!r}")
            if b.n != self.n:
                raise CarrierMismatch(f"member on carrier {b.n}, set on {self.n}")

    def __contains__(self, b) -> bool:
        return b in self.members

    def __iter__(self) -> Iterator[PartialInjection]:
        return iter(sorted(self.members, key=canonical_key))

    def __len__(self) -> int:
        return len(self.members)


def identity(n: int) -> PartialInjection:
    return PartialInjection(n, tuple(range(1, n + 1)))


def empty(n: int) -> PartialInjection:
    return PartialInjection(n, (None,) * n)


def id_on(n: int, points: Iterable[int]) -> PartialInjection:
    """Identity on a subset of the carrier, undefined elsewhere."""
    pts = set(points)
    for x in pts:
        if not 1 <= x <= n:
            raise ValueError(f"point {x} outside 1..{n}")
    return PartialInjection(n, tuple(x if x in pts else None for x in range(1, n + 1)))


def compose(b: PartialInjection, g: PartialInjection) -> PartialInjection:
    """Left factor acts first: the result sends x to g(b(x))."""
    if b.n != g.n:
        raise CarrierMismatch(f"cannot compose carriers {b.n} and {g.n}")
    gi = g.img
    return PartialInjection(
        b.n, tuple(gi[y - 1] if y is not None else None for y in b.img)
    )


def power(b: PartialInjection, s: int) -> PartialInjection:
    """s-fold composite of b with itself, s >= 1."""
    if s < 1:
        raise ValueError("power requires s >= 1: partial maps have no identity power")
    result = b
    for _ in range(s - 1):
        result = compose(result, b)
    return result


def cycle(n: int, *points: int) -> PartialInjection:
    """The permutation cycling points[0] -> points[1] -> ... -> points[0].

    Identity on the rest of the carrier; always a full permutation.
    """
    _check_points(n, points)
    img = list(range(1, n + 1))
    k = len(points)
    for i, x in enumerate(points):
        img[x - 1] = points[(i + 1) % k]
    return PartialInjection(n, tuple(img))


def _check_points(n: int, points) -> None:
    if not points:
        raise ValueError("at least one point required")
    if len(set(points)) != len(points):
        raise ValueError(f"points must be pairwise distinct, got {points}")
    for x in points:
        if not 1 <= x <= n:
            raise ValueError(f"point {x} outside 1..{n}")


def is_idempotent(b: PartialInjection) -> bool:
    """True iff b composed with itself equals b (b is an identity on its domain)."""
    return compose(b, b) == b


def cardinality(n: int) -> int:
    """Number of partial injections of an n-set: sum of C(n,k)^2 k!."""
    return sum(math.comb(n, k) ** 2 * math.factorial(k) for k in range(n + 1))


def enumerate_all(n: int, max_n: Optional[int] = None) -> ElementSet:
    """Every partial injection of {1, ..., n}.

    Refuses when n exceeds the configured bound (default 5, override via
    the ``max_n`` argument or the ISN_VARIANTS_MAX_N environment variable):
    the count grows like C(n,k)^2 k! summed over k.
    """
    bound = enumeration_bound(max_n)
    if n > bound:
        raise ValueError(
            f"refusing to enumerate all {cardinality(n)} partial injections of an "
            f"{n}-set; bound is {bound} (raise with max_n= or {MAX_N_ENV})"
        )
    return _enumerate_cached(n)


@lru_cache(maxsize=None)
def _enumerate_cached(n: int) -> ElementSet:
    points = range(1, n + 1)
    members = []
    for k in range(n + 1):
        for dom in combinations(points, k):
            for image in permutations(points, k):
                img = [None] * n
                for x, y in zip(dom, image):
                    img[x - 1] = y
                members.append(PartialInjection(n, tuple(img)))
    return ElementSet(n, frozenset(members))
