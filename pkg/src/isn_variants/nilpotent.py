"""Nilpotent subsemigroups of the sandwich semigroup.

Everything here lives on the doubled carrier M: an input copy of the
points outside A, the set A itself, and a disjoint output copy of the
points outside A.  An element b embeds into the partial injections of M
by sending the input lift of x to the output lift of b(x); under that
embedding a nilpotent subsemigroup S induces a strict partial order on M
(order_of), and conversely a strict order L admits the nilpotent
subsemigroup mon(L) of all elements whose lifted graph stays inside L.

Maximal nilpotent subsemigroups of degree at most k come from ordered
A-partitions of M into k blocks: the first block holds the input copy,
the last the output copy, and T(partition) collects the elements whose
lifted graph only moves strictly forward through the blocks.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from typing import Iterable, NamedTuple, Optional

from .isolated import Subsemigroup, closure_violation
from .pinj import (
    CarrierMismatch,
    ElementSet,
    PartialInjection,
    canonical_key,
    enumerate_all,
)
from .variant import SandwichContext, sandwich

IN_TAG = "in"
A_TAG = "a"
OUT_TAG = "out"
_TAG_ORDER = {IN_TAG: 0, A_TAG: 1, OUT_TAG: 2}

DEFAULT_ISO_MAX_SIZE = 40


class MPoint(NamedTuple):
    """A tagged point of the doubled carrier."""

    tag: str
    value: int

    def __repr__(self):
        # A-values and copy values never collide, so only the output copy
        # needs its prime
        return f"{self.value}'" if self.tag == OUT_TAG else f"{self.value}"


def point_sort_key(p: MPoint):
    return (_TAG_ORDER[p.tag], p.value)


def lift_in(ctx: SandwichContext, x: int) -> MPoint:
    """Where a domain point of an element lands in M."""
    return MPoint(A_TAG, x) if x in ctx.a else MPoint(IN_TAG, x)


def lift_out(ctx: SandwichContext, y: int) -> MPoint:
    """Where an image point of an element lands in M."""
    return MPoint(A_TAG, y) if y in ctx.a else MPoint(OUT_TAG, y)


@lru_cache(maxsize=None)
def carrier_of(ctx: SandwichContext) -> frozenset:
    outside = ctx.complement
    return frozenset(
        [MPoint(IN_TAG, x) for x in outside]
        + [MPoint(A_TAG, x) for x in ctx.a]
        + [MPoint(OUT_TAG, x) for x in outside]
    )


@dataclass(frozen=True)
class StrictOrder:
    """An irreflexive transitive relation on a set of MPoints.

    The full transitive relation is stored, so chain bounds and the
    membership filters below are plain set lookups; the Hasse reduction
    is computed only for export.  Construction validates irreflexivity
    and transitivity and fails loudly otherwise: a violation coming out
    of order_of signals non-nilpotent input.
    """

    carrier: frozenset
    pairs: frozenset

    def __post_init__(self):
        object.__setattr__(self, "carrier", frozenset(self.carrier))
        object.__setattr__(self, "pairs", frozenset(self.pairs))
        for u, v in self.pairs:
            if u not in self.carrier or v not in self.carrier:
                raise ValueError(f"pair ({u!r}, {v!r}) escapes the carrier")
            if u == v:
                raise ValueError(f"not irreflexive: ({u!r}, {u!r})")
        succ = {}
        for u, v in self.pairs:
            succ.setdefault(u, set()).add(v)
        for u, vs in succ.items():
            for v in vs:
                for w in succ.get(v, ()):
                    if w not in vs:
                        raise ValueError(
                            f"not transitive: ({u!r},{v!r}) and ({v!r},{w!r}) "
                            f"without ({u!r},{w!r})"
                        )

    def minimal(self) -> frozenset:
        above = {v for _, v in self.pairs}
        return frozenset(p for p in self.carrier if p not in above)

    def maximal(self) -> frozenset:
        below = {u for u, _ in self.pairs}
        return frozenset(p for p in self.carrier if p not in below)

    def chain_bound(self) -> int:
        """Number of elements in a longest chain."""
        preds = {}
        for u, v in self.pairs:
            preds.setdefault(v, []).append(u)
        height = {}

        def h(p):
            if p not in height:
                height[p] = 1 + max((h(q) for q in preds.get(p, ())), default=0)
            return height[p]

        return max((h(p) for p in self.carrier), default=0)

    def restrict(self, points: Iterable[MPoint]) -> "StrictOrder":
        pts = frozenset(points)
        return StrictOrder(pts, frozenset((u, v) for u, v in self.pairs if u in pts and v in pts))

    def is_linear(self) -> bool:
        """Every two distinct carrier points comparable."""
        for u in self.carrier:
            for v in self.carrier:
                if u != v and (u, v) not in self.pairs and (v, u) not in self.pairs:
                    return False
        return True

    def hasse_pairs(self) -> frozenset:
        """Cover relation: pairs not implied by a two-step path."""
        return frozenset(
            (u, v)
            for u, v in self.pairs
            if not any((u, w) in self.pairs and (w, v) in self.pairs for w in self.carrier)
        )

    def __len__(self):
        return len(self.pairs)


def empty_order(ctx: SandwichContext) -> StrictOrder:
    return StrictOrder(carrier_of(ctx), frozenset())


def in_ord_k(order: StrictOrder, k: int) -> bool:
    """Chains hold at most k elements, input copies are minimal, output
    copies are maximal."""
    for u, v in order.pairs:
        if v.tag == IN_TAG or u.tag == OUT_TAG:
            return False
    return order.chain_bound() <= k


def _allowed_pairs(ctx: SandwichContext):
    """Pairs a strict order on M may contain once input copies must stay
    minimal and output copies maximal."""
    carrier = sorted(carrier_of(ctx), key=point_sort_key)
    ins = [p for p in carrier if p.tag == IN_TAG]
    mids = [p for p in carrier if p.tag == A_TAG]
    outs = [p for p in carrier if p.tag == OUT_TAG]
    pairs = []
    pairs.extend((u, v) for u in ins for v in mids)
    pairs.extend((u, v) for u in ins for v in outs)
    pairs.extend((u, v) for u in mids for v in mids if u != v)
    pairs.extend((u, v) for u in mids for v in outs)
    return pairs


def _is_transitive(pairs) -> bool:
    pset = set(pairs)
    for u, v in pairs:
        for v2, w in pairs:
            if v2 == v and (u, w) not in pset:
                return False
    return True


@lru_cache(maxsize=None)
def enumerate_orders(ctx: SandwichContext) -> tuple:
    """Every strict order on M with minimal input copies and maximal
    output copies, i.e. the union of the Ord_k families over all k.

    Exponential in |A| and |N - A|; meant for desk-scale carriers.
    """
    allowed = _allowed_pairs(ctx)
    carrier = carrier_of(ctx)
    found = []
    for mask in range(1 << len(allowed)):
        pairs = [p for i, p in enumerate(allowed) if mask >> i & 1]
        if _is_transitive(pairs):
            found.append(StrictOrder(carrier, frozenset(pairs)))
    return tuple(found)


@lru_cache(maxsize=None)
def mon(ctx: SandwichContext, order: StrictOrder) -> Subsemigroup:
    """Elements whose lifted graph lies inside the order.

    Irreflexivity already rules out lifted fixed points (the pair (p, p)
    is never present), which is exactly the no-fixed-point-in-A condition.
    The result is closed under the sandwich product; that is checked, not
    assumed.
    """
    pairs = order.pairs
    hits = []
    for b in enumerate_all(ctx.n):
        if all((lift_in(ctx, x), lift_out(ctx, y)) in pairs for x, y in b.items()):
            hits.append(b)
    sub = Subsemigroup(ctx, ElementSet(ctx.n, frozenset(hits)))
    witness = closure_violation(ctx, sub.members.members)
    if witness is not None:
        raise RuntimeError(f"mon produced a non-closed set: {witness!r}")
    return sub


def nilpotency_degree(ctx: SandwichContext, sub) -> Optional[int]:
    """Least k with every k-fold sandwich product equal to the empty map,
    or None when no such k exists.

    Iterates the set products P_{j+1} = P_j * S, which enumerates exactly
    the j-fold products; the sequence is deterministic, so revisiting a
    set without reaching {empty} proves non-nilpotency.
    """
    members = [b.img for b in _members_of(sub)]
    if not members:
        raise ValueError("nilpotency degree needs a nonempty set")
    n = ctx.n
    a = ctx.a
    zero = (None,) * n
    target = frozenset((zero,))
    current = frozenset(members)
    seen = {current}
    k = 1
    while current != target:
        nxt = set()
        for p in current:
            masked = tuple(y if (y is not None and y in a) else None for y in p)
            for gimg in members:
                nxt.add(tuple(gimg[y - 1] if y is not None else None for y in masked))
        current = frozenset(nxt)
        k += 1
        if current in seen:
            return None
        seen.add(current)
    return k


def _members_of(sub) -> frozenset:
    if isinstance(sub, Subsemigroup):
        return sub.members.members
    if isinstance(sub, ElementSet):
        return sub.members
    return frozenset(sub)


def order_of(ctx: SandwichContext, sub) -> StrictOrder:
    """The strict order generated by the lifted graphs of a nilpotent
    subsemigroup: one pair (input lift of x, output lift of b(x)) per
    defined point of each member.

    Transitivity comes from closure of the input set and irreflexivity
    from nilpotency, so the constructor's validation doubles as a check
    of the precondition.
    """
    if nilpotency_degree(ctx, sub) is None:
        raise ValueError("order_of requires a nilpotent subsemigroup")
    pairs = {
        (lift_in(ctx, x), lift_out(ctx, y))
        for b in _members_of(sub)
        for x, y in b.items()
    }
    return StrictOrder(carrier_of(ctx), frozenset(pairs))


def embed(ctx: SandwichContext, b: PartialInjection) -> dict:
    """The lifted graph of b as a partial injective map on M."""
    if b.n != ctx.n:
        raise CarrierMismatch(f"element on carrier {b.n}, context on {ctx.n}")
    return {lift_in(ctx, x): lift_out(ctx, y) for x, y in b.items()}


def compose_mmaps(f: dict, g: dict) -> dict:
    """Left-acts-first composition of partial maps on M."""
    return {x: g[y] for x, y in f.items() if y in g}


def embedding_image(ctx: SandwichContext) -> set:
    """All partial injective maps on M from the input side to the output
    side, i.e. domain inside IN + A and image inside A + OUT.  Returned as
    a set of frozen item-sets for exact comparison against lifted graphs.
    """
    from itertools import combinations, permutations

    sources = sorted(
        (p for p in carrier_of(ctx) if p.tag != OUT_TAG), key=point_sort_key
    )
    targets = sorted(
        (p for p in carrier_of(ctx) if p.tag != IN_TAG), key=point_sort_key
    )
    maps = set()
    for k in range(len(sources) + 1):
        for dom in combinations(sources, k):
            for image in permutations(targets, k):
                maps.add(frozenset(zip(dom, image)))
    return maps


@dataclass(frozen=True)
class OrderedAPartition:
    """An ordered tuple of disjoint nonempty blocks of MPoints.

    Input copies sit in the first block and output copies in the last
    (with a single block playing both roles when k = 1).  Coverage of the
    full carrier is checked where a context is at hand.
    """

    blocks: tuple

    def __post_init__(self):
        object.__setattr__(self, "blocks", tuple(frozenset(b) for b in self.blocks))
        if not self.blocks:
            raise ValueError("a partition has at least one block")
        seen = set()
        for block in self.blocks:
            if not block:
                raise ValueError("blocks are nonempty")
            if block & seen:
                raise ValueError("blocks are pairwise disjoint")
            seen |= block
        last = len(self.blocks) - 1
        for i, block in enumerate(self.blocks):
            for p in block:
                if p.tag == IN_TAG and i != 0:
                    raise ValueError(f"input copy {p!r} outside the first block")
                if p.tag == OUT_TAG and i != last:
                    raise ValueError(f"output copy {p!r} outside the last block")

    @property
    def k(self) -> int:
        return len(self.blocks)

    def sizes(self) -> tuple:
        return tuple(len(b) for b in self.blocks)

    def block_index(self) -> dict:
        return {p: i for i, block in enumerate(self.blocks) for p in block}

    def __repr__(self):
        rendered = " | ".join(
            "{" + ", ".join(repr(p) for p in sorted(b, key=point_sort_key)) + "}"
            for b in self.blocks
        )
        return f"Partition[{rendered}]"


def partition_order(p: OrderedAPartition) -> StrictOrder:
    """Union of all cross-block pairs pointing forward; transitive and
    irreflexive by construction."""
    pairs = set()
    for i in range(p.k):
        for j in range(i + 1, p.k):
            pairs.update(product(p.blocks[i], p.blocks[j]))
    carrier = frozenset().union(*p.blocks)
    return StrictOrder(carrier, frozenset(pairs))


def enumerate_partitions(ctx: SandwichContext, k: int) -> list:
    """All ordered A-partitions of M into k nonempty blocks, deterministically.

    The copies pin the first and last blocks, so only the points of A get
    distributed; k exceeding |A| + 2 leaves a middle block empty and
    yields no partitions.
    """
    carrier = carrier_of(ctx)
    if not 1 <= k <= len(carrier):
        raise ValueError(f"k={k} outside 1..{len(carrier)}")
    if k == 1:
        return [OrderedAPartition((carrier,))]
    ins = frozenset(p for p in carrier if p.tag == IN_TAG)
    outs = frozenset(p for p in carrier if p.tag == OUT_TAG)
    apts = sorted((p for p in carrier if p.tag == A_TAG), key=point_sort_key)
    middles = range(1, k - 1)
    found = []
    for assignment in product(range(k), repeat=len(apts)):
        if any(i not in assignment for i in middles):
            continue
        blocks = [set() for _ in range(k)]
        blocks[0] |= ins
        blocks[k - 1] |= outs
        for p, i in zip(apts, assignment):
            blocks[i].add(p)
        found.append(OrderedAPartition(tuple(frozenset(b) for b in blocks)))
    return found


def t_of_partition(ctx: SandwichContext, p: OrderedAPartition) -> Subsemigroup:
    """Elements whose lifted graph moves strictly forward through the blocks.

    Computed both by the direct block filter and as mon of the partition
    order; the two must agree.
    """
    if frozenset().union(*p.blocks) != carrier_of(ctx):
        raise ValueError("partition does not cover the doubled carrier")
    index = p.block_index()
    hits = []
    for b in enumerate_all(ctx.n):
        if all(index[lift_in(ctx, x)] < index[lift_out(ctx, y)] for x, y in b.items()):
            hits.append(b)
    direct = frozenset(hits)
    via_mon = mon(ctx, partition_order(p)).members.members
    if direct != via_mon:
        raise RuntimeError("block filter and mon(partition order) disagree")
    return Subsemigroup(ctx, ElementSet(ctx.n, direct), f"T{p.sizes()}")


def complete_order(ctx: SandwichContext, order: StrictOrder) -> OrderedAPartition:
    """Layer an order into an ordered A-partition containing it.

    Strip minimal elements repeatedly; every layer of the resulting
    stack is nonempty, and the original order is contained in the
    partition order of the result.  Output copies are then moved into
    the final block (they are maximal, so this only adds forward pairs);
    with a single layer there is nowhere to move them.
    """
    remaining = set(order.carrier)
    pairs = order.pairs
    layers = []
    while remaining:
        blocked = {v for u, v in pairs if u in remaining and v in remaining}
        layer = remaining - blocked
        layers.append(layer)
        remaining -= layer
    if len(layers) > 1:
        outs = {p for p in order.carrier if p.tag == OUT_TAG}
        layers = [layer - outs for layer in layers[:-1]] + [layers[-1] | outs]
        layers = [layer for layer in layers if layer]
    result = OrderedAPartition(tuple(frozenset(layer) for layer in layers))
    if not order.pairs <= partition_order(result).pairs:
        raise RuntimeError("layering lost pairs of the input order")
    return result


def maximal_nilpotents(ctx: SandwichContext, k: int) -> list:
    """The maximal subsemigroups of nilpotency degree at most k: one per
    ordered A-partition into k blocks, pairwise distinct."""
    ts = [t_of_partition(ctx, p) for p in enumerate_partitions(ctx, k)]
    bodies = {t.members.members for t in ts}
    if len(bodies) != len(ts):
        raise RuntimeError("partition semigroups are not pairwise distinct")
    return ts


def type_of(ctx: SandwichContext, sub: Subsemigroup, k: Optional[int] = None) -> tuple:
    """Block sizes of the partition behind a maximal nilpotent subsemigroup.

    The partition is recovered by layering the subsemigroup's order; a set
    that does not reproduce itself through that partition is not maximal
    and is rejected.
    """
    p = complete_order(ctx, order_of(ctx, sub))
    if t_of_partition(ctx, p).members.members != _members_of(sub):
        raise ValueError("type is defined for maximal nilpotent subsemigroups only")
    if k is not None and p.k != k:
        raise ValueError(f"recovered {p.k} blocks, expected {k}")
    return p.sizes()


def type_reverse(t: tuple) -> tuple:
    return tuple(reversed(t))


# ---------------------------------------------------------------------------
# isomorphism search on multiplication tables


def _table(sub: Subsemigroup):
    elems = sorted(sub.members.members, key=canonical_key)
    index = {b: i for i, b in enumerate(elems)}
    table = [
        [index[sandwich(sub.ctx, x, y)] for y in elems]
        for x in elems
    ]
    return elems, table


def _joint_refine(t1, t2):
    """Color the elements of both tables by iterated product profiles.

    Signatures are ranked over the union of both tables each round, so
    equal colors mean equal profiles across tables.
    """
    n1, n2 = len(t1), len(t2)
    c1, c2 = [0] * n1, [0] * n2

    def signatures(table, colors):
        sigs = []
        for i in range(len(table)):
            profile = Counter(
                (colors[j], colors[table[i][j]], colors[table[j][i]])
                for j in range(len(table))
            )
            sigs.append((colors[i], tuple(sorted(profile.items()))))
        return sigs

    while True:
        s1 = signatures(t1, c1)
        s2 = signatures(t2, c2)
        ranking = {sig: r for r, sig in enumerate(sorted(set(s1) | set(s2)))}
        n1_new = [ranking[s] for s in s1]
        n2_new = [ranking[s] for s in s2]
        if n1_new == c1 and n2_new == c2:
            return c1, c2
        c1, c2 = n1_new, n2_new


def _find_table_bijection(t1, t2):
    """A product-preserving bijection between two multiplication tables,
    or None.

    Backtracking over color classes.  Each tentative assignment propagates
    its forced consequences: once x -> u and y -> v are down, x*y -> u*v is
    mandatory, so it is assigned immediately (or the branch dies on a
    clash).  By the time every element is placed, every product has been
    checked; the leaf re-verification is belt and braces.
    """
    n = len(t1)
    if len(t2) != n:
        return None
    c1, c2 = _joint_refine(t1, t2)
    if sorted(c1) != sorted(c2):
        return None
    by_color = {}
    for j, c in enumerate(c2):
        by_color.setdefault(c, []).append(j)
    order = sorted(range(n), key=lambda i: (len(by_color[c1[i]]), c1[i], i))
    assign = [None] * n
    inverse = [None] * n
    trail = []

    def undo(mark):
        while len(trail) > mark:
            i = trail.pop()
            inverse[assign[i]] = None
            assign[i] = None

    def extend(i, j):
        """Assign i -> j plus all product consequences; False restores state."""
        mark = len(trail)
        queue = [(i, j)]
        while queue:
            x, y = queue.pop()
            if assign[x] is not None:
                if assign[x] != y:
                    undo(mark)
                    return False
                continue
            if inverse[y] is not None or c1[x] != c2[y]:
                undo(mark)
                return False
            assign[x] = y
            inverse[y] = x
            trail.append(x)
            for x2 in trail:
                y2 = assign[x2]
                queue.append((t1[x][x2], t2[y][y2]))
                queue.append((t1[x2][x], t2[y2][y]))
        return True

    def dfs(pos):
        while pos < n and assign[order[pos]] is not None:
            pos += 1
        if pos == n:
            return all(
                assign[t1[x][y]] == t2[assign[x]][assign[y]]
                for x in range(n)
                for y in range(n)
            )
        i = order[pos]
        for j in by_color[c1[i]]:
            if inverse[j] is not None:
                continue
            mark = len(trail)
            if extend(i, j) and dfs(pos + 1):
                return True
            undo(mark)
        return False

    if dfs(0):
        return list(assign)
    return None


def _transpose(table):
    n = len(table)
    return [[table[j][i] for j in range(n)] for i in range(n)]


def _check_iso_sizes(s1, s2, max_size):
    if len(s1) > max_size or len(s2) > max_size:
        raise ValueError(
            f"isomorphism search refused for sizes {len(s1)}, {len(s2)} > bound {max_size}"
        )


def semigroups_isomorphic(
    s1: Subsemigroup, s2: Subsemigroup, max_size: int = DEFAULT_ISO_MAX_SIZE
) -> bool:
    """Whether a product-preserving bijection between the two exists."""
    _check_iso_sizes(s1, s2, max_size)
    if len(s1) != len(s2):
        return False
    _, t1 = _table(s1)
    _, t2 = _table(s2)
    return _find_table_bijection(t1, t2) is not None


def semigroups_anti_isomorphic(
    s1: Subsemigroup, s2: Subsemigroup, max_size: int = DEFAULT_ISO_MAX_SIZE
) -> bool:
    """Whether a product-reversing bijection between the two exists."""
    _check_iso_sizes(s1, s2, max_size)
    if len(s1) != len(s2):
        return False
    _, t1 = _table(s1)
    _, t2 = _table(s2)
    return _find_table_bijection(t1, _transpose(t2)) is not None
