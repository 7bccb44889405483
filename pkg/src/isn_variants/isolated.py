"""Subsemigroups of the sandwich semigroup: closure, isolation, classification.

A subsemigroup T is isolated when any element with some sandwich power in
T already lies in T, and completely isolated when b * g in T forces b in
T or g in T.  The distinguished players are C_A (elements mapping A
bijectively onto A), its complement, the full semigroup, and for each x
in A the set G(x) of elements that push x out of A while keeping the rest
of A inside A minus {x}.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator, Optional

from .pinj import CarrierMismatch, ElementSet, PartialInjection, enumerate_all
from .variant import SandwichContext, sandwich


@dataclass(frozen=True)
class Subsemigroup:
    """An explicit element set over a sandwich context.

    Closure under the sandwich product is the caller's responsibility
    (construction sites here guarantee it); ``closure_violation`` checks.
    The name is presentation only and ignored by equality.
    """

    ctx: SandwichContext
    members: ElementSet
    name: Optional[str] = field(default=None, compare=False)

    def __post_init__(self):
        if not isinstance(self.members, ElementSet):
            object.__setattr__(
                self, "members", ElementSet(self.ctx.n, frozenset(self.members))
            )
        if self.members.n != self.ctx.n:
            raise CarrierMismatch(
                f"members on carrier {self.members.n}, context on {self.ctx.n}"
            )
        if len(self.members) == 0:
            raise ValueError("a subsemigroup is nonempty")

    def __contains__(self, b) -> bool:
        return b in self.members

    def __iter__(self) -> Iterator[PartialInjection]:
        return iter(self.members)

    def __len__(self) -> int:
        return len(self.members)

    def __repr__(self):
        label = self.name or "subsemigroup"
        return f"<{label}: {len(self)} elements over {self.ctx!r}>"


def closure_violation(ctx: SandwichContext, members: Iterable[PartialInjection]):
    """First (a, b, a*b) with the product escaping the set, or None."""
    pool = set(members)
    for a in pool:
        for b in pool:
            p = sandwich(ctx, a, b)
            if p not in pool:
                return (a, b, p)
    return None


def closure(ctx: SandwichContext, generators: Iterable[PartialInjection], name=None) -> Subsemigroup:
    """Least sandwich-closed superset of the generators (worklist saturation)."""
    gens = list(generators)
    if not gens:
        raise ValueError("closure requires at least one generator")
    for g in gens:
        if g.n != ctx.n:
            raise CarrierMismatch(f"generator on carrier {g.n}, context on {ctx.n}")
    members = set(gens)
    frontier = list(members)
    while frontier:
        fresh = set()
        for x in frontier:
            for y in members:
                for p in (sandwich(ctx, x, y), sandwich(ctx, y, x)):
                    if p not in members and p not in fresh:
                        fresh.add(p)
        members |= fresh
        frontier = list(fresh)
    return Subsemigroup(ctx, ElementSet(ctx.n, frozenset(members)), name)


def full_semigroup(ctx: SandwichContext) -> Subsemigroup:
    return Subsemigroup(ctx, enumerate_all(ctx.n), "full")


def build_c_a(ctx: SandwichContext) -> Subsemigroup:
    """C_A: elements defined on all of A and mapping A onto A."""
    a = ctx.a
    hits = [
        b
        for b in enumerate_all(ctx.n)
        if all(b.img[x - 1] is not None and b.img[x - 1] in a for x in a)
    ]
    return Subsemigroup(ctx, ElementSet(ctx.n, frozenset(hits)), "C_A")


def complement_of_c_a(ctx: SandwichContext) -> Subsemigroup:
    inside = build_c_a(ctx).members.members
    rest = frozenset(b for b in enumerate_all(ctx.n).members if b not in inside)
    return Subsemigroup(ctx, ElementSet(ctx.n, rest), "complement")


def build_g(ctx: SandwichContext, x: int) -> Subsemigroup:
    """G(x): elements sending x out of A (or nowhere) and A-{x} into A-{x}.

    "Out of A" includes "undefined at x"; the points of A-{x} must be in
    the domain.
    """
    if x not in ctx.a:
        raise ValueError(f"{x} is not in A = {sorted(ctx.a)}")
    a = ctx.a
    rest = a - {x}
    hits = []
    for b in enumerate_all(ctx.n):
        vx = b.img[x - 1]
        if vx is not None and vx in a:
            continue
        if all(b.img[y - 1] is not None and b.img[y - 1] in rest for y in rest):
            hits.append(b)
    return Subsemigroup(ctx, ElementSet(ctx.n, frozenset(hits)), f"G({x})")


def _img_set(sub: Subsemigroup):
    return {b.img for b in sub.members.members}


def completely_isolated_violation(ctx: SandwichContext, sub: Subsemigroup):
    """First pair (b, g) outside T with b*g inside T, scanning all candidates.

    A pair can only violate complete isolation when both factors are
    outside T, so the scan runs over the complement squared.
    """
    member_imgs = _img_set(sub)
    a = ctx.a
    outside = [b.img for b in enumerate_all(ctx.n).members if b.img not in member_imgs]
    masked = [
        tuple(y if (y is not None and y in a) else None for y in img) for img in outside
    ]
    n = ctx.n
    for bimg, bm in zip(outside, masked):
        for gimg in outside:
            prod = tuple(gimg[y - 1] if y is not None else None for y in bm)
            if prod in member_imgs:
                return (PartialInjection(n, bimg), PartialInjection(n, gimg))
    return None


def is_completely_isolated(ctx: SandwichContext, sub: Subsemigroup) -> bool:
    return completely_isolated_violation(ctx, sub) is None


def isolated_violation(ctx: SandwichContext, sub: Subsemigroup):
    """First (b, s) with b outside T but its s-th sandwich power inside, or None."""
    member_imgs = _img_set(sub)
    for b in enumerate_all(ctx.n):
        if b.img in member_imgs:
            continue
        p = b
        s = 1
        seen = set()
        while p.img not in seen:
            if p.img in member_imgs:
                return (b, s)
            seen.add(p.img)
            p = sandwich(ctx, p, b)
            s += 1
    return None


def is_isolated(ctx: SandwichContext, sub: Subsemigroup) -> bool:
    return isolated_violation(ctx, sub) is None


def root_set(ctx: SandwichContext, e: PartialInjection) -> ElementSet:
    """All elements some sandwich power of which equals the idempotent e."""
    if sandwich(ctx, e, e) != e:
        raise ValueError(f"{e!r} is not a sandwich idempotent")
    target = e.img
    hits = []
    for b in enumerate_all(ctx.n):
        p = b
        seen = set()
        while p.img not in seen:
            if p.img == target:
                hits.append(b)
                break
            seen.add(p.img)
            p = sandwich(ctx, p, b)
    return ElementSet(ctx.n, frozenset(hits))


def classify_completely_isolated(ctx: SandwichContext, verify: bool = True) -> list:
    """The three completely isolated subsemigroups: C_A, complement, full."""
    sets = [build_c_a(ctx), complement_of_c_a(ctx), full_semigroup(ctx)]
    if verify:
        for sub in sets:
            witness = completely_isolated_violation(ctx, sub)
            if witness is not None:
                raise RuntimeError(
                    f"{sub.name} failed complete isolation at {witness!r}"
                )
    return sets


def classify_isolated(ctx: SandwichContext, verify: bool = True) -> list:
    """The isolated subsemigroups: the three global ones, plus G(x) when |A| >= 2."""
    sets = [full_semigroup(ctx), build_c_a(ctx), complement_of_c_a(ctx)]
    if ctx.l >= 2:
        sets.extend(build_g(ctx, x) for x in sorted(ctx.a))
        bodies = {s.members.members for s in sets}
        if len(bodies) != len(sets):
            raise RuntimeError("classified isolated subsemigroups are not distinct")
    if verify:
        for sub in sets:
            witness = isolated_violation(ctx, sub)
            if witness is not None:
                raise RuntimeError(f"{sub.name} failed isolation at {witness!r}")
    return sets
