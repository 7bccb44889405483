"""The sandwich semigroup on partial injections.

Fix an idempotent sandwich element alpha = id_A for a nonempty proper
subset A of the carrier.  The sandwich product is b * g = b alpha g,
read left to right, i.e. (b * g)(x) = g(alpha(b(x))).  Since alpha is
the identity on A this collapses to: follow b, keep the intermediate
value only if it lies in A, then follow g.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations
from typing import Optional

from .pinj import (
    CarrierMismatch,
    ElementSet,
    PartialInjection,
    cardinality,
    compose,
    enumerate_all,
    id_on,
)

DEFAULT_WITNESS_MAX_N = 6


@dataclass(frozen=True)
class SandwichContext:
    """Carrier size n, sandwich domain A, and the fixed spare point z.

    A must be a nonempty proper subset of {1, ..., n}; z lies outside A
    and defaults to the least such point.  The sandwich element alpha is
    the identity on A.
    """

    n: int
    a: frozenset
    z: Optional[int] = None

    def __post_init__(self):
        object.__setattr__(self, "a", frozenset(self.a))
        if self.n < 2:
            raise ValueError("need n >= 2 for a proper nonempty sandwich domain")
        for x in self.a:
            if not isinstance(x, int) or not 1 <= x <= self.n:
                raise ValueError(f"sandwich domain point {x!r} outside 1..{self.n}")
        if not 1 <= len(self.a) < self.n:
            raise ValueError(
                f"sandwich domain must be nonempty and proper, got {sorted(self.a)} in 1..{self.n}"
            )
        if self.z is None:
            object.__setattr__(self, "z", min(self.complement))
        elif self.z in self.a or not 1 <= self.z <= self.n:
            raise ValueError(f"z={self.z} must lie in the complement of A")

    @property
    def l(self) -> int:
        return len(self.a)

    @property
    def a_sorted(self) -> tuple:
        return tuple(sorted(self.a))

    @property
    def complement(self) -> tuple:
        return tuple(x for x in range(1, self.n + 1) if x not in self.a)

    @property
    def alpha(self) -> PartialInjection:
        return id_on(self.n, self.a)

    def __repr__(self):
        return f"SandwichContext(n={self.n}, A={{{', '.join(map(str, self.a_sorted))}}}, z={self.z})"


def sandwich(ctx: SandwichContext, b: PartialInjection, g: PartialInjection) -> PartialInjection:
    """The sandwich product b * g = b alpha g (left factor acts first)."""
    if b.n != ctx.n or g.n != ctx.n:
        raise CarrierMismatch(f"operands on carriers {b.n}, {g.n}; context has {ctx.n}")
    a = ctx.a
    gi = g.img
    return PartialInjection(
        ctx.n,
        tuple(gi[y - 1] if (y is not None and y in a) else None for y in b.img),
    )


def star_power(ctx: SandwichContext, b: PartialInjection, s: int) -> PartialInjection:
    """s-fold sandwich product of b with itself, s >= 1."""
    if s < 1:
        raise ValueError("star_power requires s >= 1")
    result = b
    for _ in range(s - 1):
        result = sandwich(ctx, result, b)
    return result


def chain(ctx: SandwichContext, *points: int) -> PartialInjection:
    """The rank n-1 map sending points[i] -> points[i+1], the last point
    to z, and fixing everything off {points, z}; z is never in the domain.

    All points must lie in A.
    """
    if not points:
        raise ValueError("at least one point required")
    if len(set(points)) != len(points):
        raise ValueError(f"points must be pairwise distinct, got {points}")
    for x in points:
        if x not in ctx.a:
            raise ValueError(f"chain point {x} must lie in A = {sorted(ctx.a)}")
    img = list(range(1, ctx.n + 1))
    img[ctx.z - 1] = None
    for i, x in enumerate(points[:-1]):
        img[x - 1] = points[i + 1]
    img[points[-1] - 1] = ctx.z
    return PartialInjection(ctx.n, tuple(img))


def is_variant_idempotent(ctx: SandwichContext, e: PartialInjection) -> bool:
    """True iff e * e == e under the sandwich product."""
    return sandwich(ctx, e, e) == e


def variant_idempotents(ctx: SandwichContext, max_n: Optional[int] = None) -> ElementSet:
    """Brute-force scan for all sandwich idempotents."""
    hits = [e for e in enumerate_all(ctx.n, max_n) if is_variant_idempotent(ctx, e)]
    return ElementSet(ctx.n, frozenset(hits))


def epsilon_x(ctx: SandwichContext, x: int) -> PartialInjection:
    """The co-singleton idempotent: identity on A minus {x}."""
    if x not in ctx.a:
        raise ValueError(f"{x} is not in A = {sorted(ctx.a)}")
    return id_on(ctx.n, ctx.a - {x})


def idempotent_factorization(ctx: SandwichContext, e: PartialInjection) -> list:
    """Factor a sandwich idempotent e != alpha into co-singleton idempotents.

    Returns [epsilon_x for x in A minus dom(e)] in ascending x.  Both the
    plain and the sandwich product of the factors reproduce e; both are
    checked here.
    """
    if not is_variant_idempotent(ctx, e):
        raise ValueError(f"{e!r} is not a sandwich idempotent")
    if e == ctx.alpha:
        raise ValueError("alpha has no co-singleton factorization (empty factor list)")
    missing = sorted(ctx.a - set(e.dom))
    factors = [epsilon_x(ctx, x) for x in missing]
    plain = factors[0]
    starred = factors[0]
    for f in factors[1:]:
        plain = compose(plain, f)
        starred = sandwich(ctx, starred, f)
    if plain != e or starred != e:
        raise RuntimeError(f"factorization of {e!r} failed to reproduce it")
    return factors


def eventual_star_idempotent(ctx: SandwichContext, b: PartialInjection):
    """Smallest s >= 1 with the s-th sandwich power idempotent, plus that power."""
    p = b
    s = 1
    guard = cardinality(ctx.n) + 1
    while not is_variant_idempotent(ctx, p):
        p = sandwich(ctx, p, b)
        s += 1
        if s > guard:
            raise RuntimeError("no idempotent power found; finiteness violated")
    return s, p


def variants_isomorphic(
    a1: PartialInjection,
    a2: PartialInjection,
    with_witness: bool = False,
    max_n: int = DEFAULT_WITNESS_MAX_N,
):
    """Whether the sandwich semigroups over a1 and a2 are isomorphic.

    Searches for permutations (p, t) with compose(p, a1) == compose(a2, t).
    Rank equality is a necessary condition and prunes the search; for each
    left permutation p the right one is forced on the image of a2, so only
    n! candidates are walked.  Returns the witness pair when asked.
    """
    if a1.n != a2.n:
        raise CarrierMismatch(f"carriers differ: {a1.n} vs {a2.n}")
    n = a1.n
    if n > max_n:
        raise ValueError(f"witness search refused for n={n} > bound {max_n}")
    if a1.rank != a2.rank:
        return (False, None) if with_witness else False
    points = tuple(range(1, n + 1))
    for perm in permutations(points):
        p = PartialInjection(n, perm)
        lhs = compose(p, a1)
        if lhs.dom != a2.dom:
            continue
        t_map = {}
        values = set()
        ok = True
        for x in a2.dom:
            src = a2(x)
            dst = lhs(x)
            if t_map.get(src, dst) != dst or (src not in t_map and dst in values):
                ok = False
                break
            t_map[src] = dst
            values.add(dst)
        if not ok:
            continue
        free_src = [x for x in points if x not in t_map]
        free_dst = [y for y in points if y not in values]
        t_map.update(zip(free_src, free_dst))
        t = PartialInjection.from_pairs(n, t_map)
        if compose(a2, t) == lhs:
            return (True, (p, t)) if with_witness else True
    return (False, None) if with_witness else False


def canonical_context(alpha: PartialInjection) -> SandwichContext:
    """A context isomorphic to the one over alpha, with A = {1, ..., rank}.

    Refuses permutations (their variant is the plain semigroup itself) and
    the empty map (no nonempty sandwich domain exists).
    """
    if alpha.is_permutation:
        raise ValueError(
            "sandwich by a permutation gives a semigroup isomorphic to the plain "
            "one; no proper sandwich context exists"
        )
    r = alpha.rank
    if r == 0:
        raise ValueError("empty sandwich element has no nonempty sandwich domain")
    return SandwichContext(alpha.n, frozenset(range(1, r + 1)))
