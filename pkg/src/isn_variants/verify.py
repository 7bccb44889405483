"""Classification checks behind the ``verify`` command.

Every check re-derives one of the package's classification statements by
brute force at desk scale and reports pass, fail (with a counterexample),
or bounded-pass (with a description of the bound).  Checks are pure and
deterministic; identical invocations produce identical reports up to wall
time.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from functools import lru_cache, reduce
from itertools import combinations, combinations_with_replacement
from typing import Callable, NamedTuple, Optional

from . import serialize
from .isolated import (
    Subsemigroup,
    build_g,
    classify_completely_isolated,
    classify_isolated,
    closure,
    closure_violation,
    complement_of_c_a,
    completely_isolated_violation,
    isolated_violation,
    root_set,
)
from .nilpotent import (
    carrier_of,
    complete_order,
    enumerate_orders,
    enumerate_partitions,
    in_ord_k,
    maximal_nilpotents,
    mon,
    nilpotency_degree,
    order_of,
    partition_order,
    semigroups_anti_isomorphic,
    semigroups_isomorphic,
    t_of_partition,
    type_of,
    type_reverse,
)
from .pinj import ElementSet, canonical_key, cardinality, compose, enumerate_all, id_on
from .variant import (
    SandwichContext,
    canonical_context,
    epsilon_x,
    idempotent_factorization,
    sandwich,
    variant_idempotents,
    variants_isomorphic,
)

STATUSES = ("pass", "fail", "bounded-pass")


@dataclass(frozen=True)
class VerificationReport:
    theorem_id: str
    n: int
    a: tuple
    status: str
    label: str
    counterexample: object = None
    bound: Optional[str] = None
    wall_ms: float = 0.0

    def __post_init__(self):
        if self.status not in STATUSES:
            raise ValueError(f"unknown status {self.status!r}")
        if self.status == "fail" and self.counterexample is None:
            raise ValueError("a fail report carries a counterexample")
        if self.status == "bounded-pass" and not self.bound:
            raise ValueError("a bounded-pass report carries its bound description")

    @property
    def ok(self) -> bool:
        return self.status in ("pass", "bounded-pass")


class CheckDef(NamedTuple):
    func: Callable
    label: str
    context_reason: Callable  # (n, a) -> None | reason string


# ---------------------------------------------------------------------------
# individual checks; each returns (status, counterexample, bound)


def _check_prop1(ctx):
    brute = set(variant_idempotents(ctx).members)
    expected = {
        id_on(ctx.n, d)
        for r in range(ctx.l + 1)
        for d in combinations(ctx.a_sorted, r)
    }
    if brute != expected:
        bad = sorted(brute ^ expected, key=canonical_key)[0]
        side = "extra" if bad in brute else "missing"
        return "fail", {"element": bad, "side": side}, None
    if len(brute) != 2 ** ctx.l:
        return "fail", {"count": len(brute), "expected": 2 ** ctx.l}, None
    return "pass", None, None


def _check_remark(ctx):
    alpha = ctx.alpha
    for e in variant_idempotents(ctx):
        if e == alpha:
            continue
        factors = idempotent_factorization(ctx, e)
        plain = reduce(compose, factors)
        star = reduce(lambda x, y: sandwich(ctx, x, y), factors)
        if plain != e or star != e:
            return "fail", {"idempotent": e, "plain": plain, "star": star}, None
    return "pass", None, None


def _check_cisol_direct(ctx):
    for sub in classify_completely_isolated(ctx, verify=False):
        witness = completely_isolated_violation(ctx, sub)
        if witness is not None:
            b, g = witness
            return "fail", {"set": sub.name, "pair": [b, g]}, None
    return "pass", None, None


def _closed_subsets(ctx):
    """All nonempty sandwich-closed subsets; exponential, n = 2 only."""
    univ = sorted(enumerate_all(ctx.n), key=canonical_key)
    closed = []
    for mask in range(1, 1 << len(univ)):
        subset = frozenset(b for i, b in enumerate(univ) if mask >> i & 1)
        if closure_violation(ctx, subset) is None:
            closed.append(subset)
    return closed


def _check_cisol_exhaustive(ctx):
    classified = {
        frozenset(s.members.members)
        for s in classify_completely_isolated(ctx, verify=False)
    }
    found = set()
    for subset in _closed_subsets(ctx):
        sub = Subsemigroup(ctx, ElementSet(ctx.n, subset))
        if completely_isolated_violation(ctx, sub) is None:
            found.add(subset)
    if found != classified:
        diff = next(iter(found ^ classified))
        return "fail", {"set": sorted(diff, key=canonical_key)}, None
    return "pass", None, None


def _check_lemma_gx(ctx):
    for x in sorted(ctx.a):
        roots = root_set(ctx, epsilon_x(ctx, x)).members
        direct = build_g(ctx, x).members.members
        if roots != direct:
            bad = sorted(roots ^ direct, key=canonical_key)[0]
            return "fail", {"x": x, "element": bad}, None
    return "pass", None, None


def _check_thm_isol(ctx):
    listed = classify_isolated(ctx, verify=False)
    for sub in listed:
        witness = isolated_violation(ctx, sub)
        if witness is not None:
            b, s = witness
            return "fail", {"set": sub.name, "element": b, "power": s}, None
    if ctx.l == 1:
        gx = build_g(ctx, min(ctx.a))
        if gx.members != complement_of_c_a(ctx).members:
            return "fail", {"set": "G(x) vs complement"}, None
    bodies = {frozenset(s.members.members) for s in listed}
    if ctx.n == 2:
        for subset in _closed_subsets(ctx):
            sub = Subsemigroup(ctx, ElementSet(ctx.n, subset))
            if isolated_violation(ctx, sub) is None and subset not in bodies:
                return "fail", {"set": sorted(subset, key=canonical_key)}, None
        return "pass", None, None
    if ctx.n == 3:
        univ = sorted(enumerate_all(ctx.n), key=canonical_key)
        seen = set()
        for g1, g2 in combinations_with_replacement(univ, 2):
            body = frozenset(closure(ctx, [g1, g2]).members.members)
            if body in seen:
                continue
            seen.add(body)
            sub = Subsemigroup(ctx, ElementSet(ctx.n, body))
            if isolated_violation(ctx, sub) is None and body not in bodies:
                return (
                    "fail",
                    {"generators": [g1, g2], "set": sorted(body, key=canonical_key)},
                    None,
                )
        return (
            "bounded-pass",
            None,
            "only-direction scanned over closures of at most 2 generators",
        )
    return (
        "bounded-pass",
        None,
        f"membership direction only at n={ctx.n}; only-direction scans stop at n=3",
    )


@lru_cache(maxsize=None)
def _closure_family(ctx):
    """Closures of all <= 2-element subsets of every mon(order), deduplicated."""
    family = {}
    for order in enumerate_orders(ctx):
        elems = sorted(mon(ctx, order).members.members, key=canonical_key)
        for g1, g2 in combinations_with_replacement(elems, 2):
            sub = closure(ctx, [g1, g2])
            family.setdefault(frozenset(sub.members.members), sub)
    return tuple(family.values())


def _check_prop_mono(ctx):
    orders = enumerate_orders(ctx)
    mon_sets = {order: frozenset(mon(ctx, order).members.members) for order in orders}
    for o1 in orders:
        for o2 in orders:
            if o1.pairs <= o2.pairs and not mon_sets[o1] <= mon_sets[o2]:
                return (
                    "fail",
                    {"case": "mon not monotone", "extra": sorted(mon_sets[o1] - mon_sets[o2], key=canonical_key)},
                    None,
                )
    family = _closure_family(ctx)
    annotated = [
        (frozenset(s.members.members), order_of(ctx, s).pairs) for s in family
    ]
    for body1, pairs1 in annotated:
        for body2, pairs2 in annotated:
            if body1 <= body2 and not pairs1 <= pairs2:
                return (
                    "fail",
                    {"case": "order map not monotone", "sizes": [len(body1), len(body2)]},
                    None,
                )
    return "pass", None, None


def _check_prop_galois(ctx):
    orders = enumerate_orders(ctx)
    for order in orders:
        m = mon(ctx, order)
        lam = order_of(ctx, m)
        if not lam.pairs <= order.pairs:
            return "fail", {"case": "order of mon escapes the order", "order": order}, None
        if mon(ctx, lam).members.members != m.members.members:
            return "fail", {"case": "mon not idempotent through the order map", "order": order}, None
    for s in _closure_family(ctx):
        lam = order_of(ctx, s)
        ms = mon(ctx, lam)
        if not s.members.members <= ms.members.members:
            return "fail", {"case": "closure escapes mon of its order", "size": len(s)}, None
        if order_of(ctx, ms).pairs != lam.pairs:
            return "fail", {"case": "order map not stable through mon", "size": len(s)}, None
    return "pass", None, None


def _check_prop_degree(ctx):
    for s in _closure_family(ctx):
        k = nilpotency_degree(ctx, s)
        if k is None:
            return "fail", {"case": "family member not nilpotent", "size": len(s)}, None
        lam = order_of(ctx, s)
        if not in_ord_k(lam, k) or in_ord_k(lam, k - 1):
            return (
                "fail",
                {"case": "degree does not match the chain bound", "degree": k, "order": lam},
                None,
            )
    return "pass", None, None


def _check_thm_maxnil(ctx):
    univ = enumerate_all(ctx.n)
    for k in range(1, len(carrier_of(ctx)) + 1):
        partitions = enumerate_partitions(ctx, k)
        ts = [t_of_partition(ctx, p) for p in partitions]
        if len({frozenset(t.members.members) for t in ts}) != len(ts):
            return "fail", {"case": "partition semigroups collide", "k": k}, None
        for p, t in zip(partitions, ts):
            degree = nilpotency_degree(ctx, t)
            if degree != k:
                return "fail", {"case": "degree off", "k": k, "degree": degree}, None
            if order_of(ctx, t).pairs != partition_order(p).pairs:
                return "fail", {"case": "order of T differs from partition order", "k": k}, None
            body = t.members.members
            for b in univ:
                if b in body:
                    continue
                grown = closure(ctx, list(body) + [b])
                d2 = nilpotency_degree(ctx, grown)
                if d2 is not None and d2 <= k:
                    return (
                        "fail",
                        {"case": "not locally maximal", "k": k, "added": b, "degree": d2},
                        None,
                    )
    for s in _closure_family(ctx):
        p = complete_order(ctx, order_of(ctx, s))
        if not s.members.members <= t_of_partition(ctx, p).members.members:
            return "fail", {"case": "closure escapes its completed partition", "size": len(s)}, None
    return "pass", None, None


def _check_corollary_bound(ctx):
    a_points = frozenset(p for p in carrier_of(ctx) if p.tag == "a")
    ins = frozenset(p for p in carrier_of(ctx) if p.tag == "in")
    outs = frozenset(p for p in carrier_of(ctx) if p.tag == "out")
    best = 0
    witnesses = []
    for k in range(1, len(carrier_of(ctx)) + 1):
        for t in maximal_nilpotents(ctx, k):
            degree = nilpotency_degree(ctx, t)
            if degree is None:
                return "fail", {"case": "maximal candidate not nilpotent", "k": k}, None
            if degree > best:
                best = degree
                witnesses = []
            if degree == best:
                witnesses.append(t)
    if best != ctx.l + 2:
        return "fail", {"case": "max degree off", "max_degree": best, "expected": ctx.l + 2}, None
    for t in witnesses:
        lam = order_of(ctx, t)
        if lam.minimal() != ins or lam.maximal() != outs:
            return "fail", {"case": "witness extremes are not the copies"}, None
        if not lam.restrict(a_points).is_linear():
            return "fail", {"case": "witness order not linear on A"}, None
    if ctx.n == 2 and ctx.a_sorted == (1,):
        top = [t for t in witnesses if nilpotency_degree(ctx, t) == 3]
        if len(top) != 1 or len(top[0]) != 5 or type_of(ctx, top[0]) != (1, 1, 1):
            return "fail", {"case": "degree-3 instance off", "count": len(top)}, None
    return "pass", None, None


def _check_prop_types(ctx):
    for k in range(2, len(carrier_of(ctx)) + 1):
        ts = maximal_nilpotents(ctx, k)
        if not ts:
            continue
        types = [type_of(ctx, t, k) for t in ts]
        for i in range(len(ts)):
            for j in range(i, len(ts)):
                same = types[i] == types[j]
                reversed_ = types[i] == type_reverse(types[j])
                iso = semigroups_isomorphic(ts[i], ts[j])
                expect_iso = (same or reversed_) if k == 2 else same
                if iso != expect_iso:
                    return (
                        "fail",
                        {"k": k, "types": [types[i], types[j]], "isomorphic": iso},
                        None,
                    )
                if k > 2:
                    anti = semigroups_anti_isomorphic(ts[i], ts[j])
                    if anti != reversed_:
                        return (
                            "fail",
                            {"k": k, "types": [types[i], types[j]], "anti": anti},
                            None,
                        )
    return "pass", None, None


def _canonical_signature(b):
    if b.is_permutation:
        return ("perm",)
    if b.rank == 0:
        return ("null",)
    return ("ctx",) + canonical_context(b).a_sorted


def _check_iso_criterion(ctx):
    univ = sorted(enumerate_all(ctx.n), key=canonical_key)
    for i in range(len(univ)):
        for j in range(i, len(univ)):
            a1, a2 = univ[i], univ[j]
            expected = a1.rank == a2.rank
            got, witness = variants_isomorphic(a1, a2, with_witness=True)
            if got != expected:
                return "fail", {"pair": [a1, a2], "got": got, "route": "witness search"}, None
            if got:
                p, t = witness
                if compose(p, a1) != compose(a2, t):
                    return "fail", {"pair": [a1, a2], "route": "witness check"}, None
            canonical_equal = _canonical_signature(a1) == _canonical_signature(a2)
            if canonical_equal != expected:
                return "fail", {"pair": [a1, a2], "route": "canonical context"}, None
    return "pass", None, None


# ---------------------------------------------------------------------------
# registry and runner


def _upto(limit):
    def rule(n, a):
        if n > limit:
            return f"needs n <= {limit}"
        return None

    return rule


def _powerset_scale(n, a):
    if cardinality(n) > 10:
        return "exhaustive subset scan is gated to carriers with at most 10 elements (n = 2)"
    return None


REGISTRY = {
    "prop1": CheckDef(
        _check_prop1,
        "sandwich idempotents are exactly the identities on subsets of A",
        _upto(5),
    ),
    "remark-id": CheckDef(
        _check_remark,
        "every sandwich idempotent except alpha is the product of its co-singleton factors",
        _upto(5),
    ),
    "thm-cisol-direct": CheckDef(
        _check_cisol_direct,
        "C_A, its complement and the full semigroup are completely isolated",
        _upto(5),
    ),
    "thm-cisol-exhaustive": CheckDef(
        _check_cisol_exhaustive,
        "scanning all subsets, the completely isolated subsemigroups are exactly the three classified ones",
        _powerset_scale,
    ),
    "lemma-Gx": CheckDef(
        _check_lemma_gx,
        "the root set of each co-singleton idempotent equals G(x)",
        _upto(5),
    ),
    "thm-isol": CheckDef(
        _check_thm_isol,
        "the isolated subsemigroups are exactly the classified family",
        _upto(5),
    ),
    "prop-mono": CheckDef(
        _check_prop_mono,
        "mon and the order map are monotone in both directions",
        _upto(3),
    ),
    "prop-galois": CheckDef(
        _check_prop_galois,
        "mon and the order map form a Galois-style pair",
        _upto(3),
    ),
    "prop-degree": CheckDef(
        _check_prop_degree,
        "the order of a degree-k nilpotent has k-chains but no longer ones",
        _upto(3),
    ),
    "thm-maxnil": CheckDef(
        _check_thm_maxnil,
        "partition semigroups are pairwise distinct, degree-k, locally maximal, and carry the partition order",
        _upto(3),
    ),
    "corollary-bound": CheckDef(
        _check_corollary_bound,
        "the top nilpotency degree is rank(alpha)+2 with linearly ordered witnesses",
        _upto(4),
    ),
    "prop-types": CheckDef(
        _check_prop_types,
        "maximal nilpotents are isomorphic (anti-isomorphic) exactly by type (reversed type)",
        _upto(3),
    ),
    "iso-criterion": CheckDef(
        _check_iso_criterion,
        "two sandwich semigroups are isomorphic exactly when the sandwich ranks agree",
        _upto(4),
    ),
}

REGISTRY_ORDER = list(REGISTRY)


def context_reason(theorem_id: str, n: int, a) -> Optional[str]:
    """Why the context is unusable for the check, or None when fine."""
    if theorem_id not in REGISTRY:
        raise KeyError(f"unknown theorem id {theorem_id!r}; known: {', '.join(REGISTRY_ORDER)}")
    return REGISTRY[theorem_id].context_reason(n, frozenset(a))


def run_verify(theorem_id: str, n: int, a, z: Optional[int] = None) -> VerificationReport:
    """Run one registered check in the (n, A) context and report."""
    reason = context_reason(theorem_id, n, a)
    if reason is not None:
        raise ValueError(f"context (n={n}, A={sorted(a)}) rejected for {theorem_id}: {reason}")
    check = REGISTRY[theorem_id]
    ctx = SandwichContext(n, frozenset(a), z)
    start = time.perf_counter()
    status, counterexample, bound = check.func(ctx)
    wall = (time.perf_counter() - start) * 1000.0
    return VerificationReport(
        theorem_id=theorem_id,
        n=n,
        a=ctx.a_sorted,
        status=status,
        label=check.label,
        counterexample=serialize.jsonable(counterexample) if counterexample is not None else None,
        bound=bound,
        wall_ms=wall,
    )


def applicable_ids(n: int, a) -> list:
    return [tid for tid in REGISTRY_ORDER if REGISTRY[tid].context_reason(n, frozenset(a)) is None]


def run_all(n: int, a, z: Optional[int] = None) -> list:
    """Every check whose context rule accepts (n, A), in registry order."""
    return [run_verify(tid, n, a, z) for tid in applicable_ids(n, a)]
