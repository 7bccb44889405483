"""Shared oracles and helpers.

The dict-based oracles recompute products from the definitions using
plain dictionaries, independently of the tuple-based implementation they
check.
"""

from __future__ import annotations

import random

import pytest

from isn_variants.nilpotent import StrictOrder, _allowed_pairs, carrier_of
from isn_variants.pinj import PartialInjection
from isn_variants.variant import SandwichContext


def as_dict(b: PartialInjection) -> dict:
    return {x: y for x, y in b.items()}


def from_dict(n: int, d: dict) -> PartialInjection:
    return PartialInjection.from_pairs(n, d)


def compose_oracle(b: PartialInjection, g: PartialInjection) -> PartialInjection:
    """Left-acts-first composition straight from the definition."""
    db, dg = as_dict(b), as_dict(g)
    return from_dict(b.n, {x: dg[y] for x, y in db.items() if y in dg})


def sandwich_oracle(ctx: SandwichContext, b: PartialInjection, g: PartialInjection) -> PartialInjection:
    """Sandwich product through the identity on A, via dicts."""
    db, dg = as_dict(b), as_dict(g)
    return from_dict(
        ctx.n, {x: dg[y] for x, y in db.items() if y in ctx.a and y in dg}
    )


def closure_oracle(ctx: SandwichContext, gens) -> frozenset:
    """Saturate by full rescans until nothing new appears."""
    current = set(gens)
    while True:
        grown = current | {
            sandwich_oracle(ctx, x, y) for x in current for y in current
        }
        if grown == current:
            return frozenset(current)
        current = grown


def prefix_contexts(max_n: int, min_n: int = 2):
    """Every (n, A = {1..l}) context with min_n <= n <= max_n."""
    return [
        SandwichContext(n, frozenset(range(1, l + 1)))
        for n in range(min_n, max_n + 1)
        for l in range(1, n)
    ]


def sample_orders(ctx: SandwichContext, count: int, seed: int = 0):
    """Random members of the admissible-order family: random subsets of the
    allowed pairs, transitively closed, discarded when a cycle appears."""
    rng = random.Random(seed)
    allowed = _allowed_pairs(ctx)
    carrier = carrier_of(ctx)
    found = []
    while len(found) < count:
        picked = {p for p in allowed if rng.random() < 0.3}
        pairs = set(picked)
        changed = True
        while changed:
            changed = False
            for u, v in list(pairs):
                for v2, w in list(pairs):
                    if v2 == v and (u, w) not in pairs:
                        pairs.add((u, w))
                        changed = True
        if any(u == v for u, v in pairs):
            continue
        found.append(StrictOrder(carrier, frozenset(pairs)))
    return found


@pytest.fixture
def ctx21():
    return SandwichContext(2, frozenset({1}))


@pytest.fixture
def ctx31():
    return SandwichContext(3, frozenset({1}))


@pytest.fixture
def ctx32():
    return SandwichContext(3, frozenset({1, 2}))


@pytest.fixture
def ctx43():
    return SandwichContext(4, frozenset({1, 2, 3}))
