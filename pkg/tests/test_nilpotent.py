"""The doubled carrier, the embedding, strict orders, mon / order maps,
partitions, maximal nilpotents, types, and the isomorphism searcher."""

import random
from itertools import product as iproduct

import pytest

from isn_variants.isolated import Subsemigroup, closure
from isn_variants.nilpotent import (
    MPoint,
    OrderedAPartition,
    StrictOrder,
    carrier_of,
    complete_order,
    compose_mmaps,
    embed,
    embedding_image,
    empty_order,
    enumerate_orders,
    enumerate_partitions,
    in_ord_k,
    lift_in,
    lift_out,
    maximal_nilpotents,
    mon,
    nilpotency_degree,
    order_of,
    partition_order,
    point_sort_key,
    semigroups_anti_isomorphic,
    semigroups_isomorphic,
    t_of_partition,
    type_of,
    type_reverse,
)
from isn_variants.pinj import canonical_key, cycle, empty, enumerate_all
from isn_variants.variant import SandwichContext, sandwich

from conftest import from_dict, prefix_contexts, sample_orders, sandwich_oracle

IN2, A1, OUT2 = MPoint("in", 2), MPoint("a", 1), MPoint("out", 2)


def three_chain(ctx21):
    return StrictOrder(
        carrier_of(ctx21), frozenset({(IN2, A1), (A1, OUT2), (IN2, OUT2)})
    )


class TestLifts:
    def test_a_points_lift_to_themselves(self, ctx31):
        assert lift_in(ctx31, 1) == lift_out(ctx31, 1) == MPoint("a", 1)

    def test_copies_are_disjoint(self, ctx31):
        assert lift_in(ctx31, 2) == MPoint("in", 2)
        assert lift_out(ctx31, 2) == MPoint("out", 2)
        assert lift_in(ctx31, 2) != lift_out(ctx31, 2)

    def test_carrier_size(self):
        for ctx in prefix_contexts(4):
            assert len(carrier_of(ctx)) == 2 * (ctx.n - ctx.l) + ctx.l


class TestEmbed:
    def test_empty_maps_to_empty(self, ctx21):
        assert embed(ctx21, empty(2)) == {}

    def test_frozen_transposition(self, ctx21):
        got = embed(ctx21, cycle(2, 1, 2))
        assert got == {MPoint("a", 1): MPoint("out", 2), MPoint("in", 2): MPoint("a", 1)}

    def test_agrees_with_lifts_coordinatewise(self):
        for ctx in prefix_contexts(3):
            for b in enumerate_all(ctx.n):
                f = embed(ctx, b)
                assert f == {lift_in(ctx, x): lift_out(ctx, y) for x, y in b.items()}

    def test_multiplicative_exhaustive(self):
        for ctx in prefix_contexts(3):
            univ = list(enumerate_all(ctx.n))
            lifted = {b: embed(ctx, b) for b in univ}
            for b in univ:
                for g in univ:
                    assert embed(ctx, sandwich(ctx, b, g)) == compose_mmaps(
                        lifted[b], lifted[g]
                    )

    def test_injective(self):
        for ctx in prefix_contexts(3):
            images = {frozenset(embed(ctx, b).items()) for b in enumerate_all(ctx.n)}
            assert len(images) == len(enumerate_all(ctx.n))

    def test_image_characterization(self):
        for ctx in prefix_contexts(3):
            lifted = {frozenset(embed(ctx, b).items()) for b in enumerate_all(ctx.n)}
            assert lifted == embedding_image(ctx)


class TestStrictOrder:
    def test_reflexive_pair_rejected(self, ctx21):
        with pytest.raises(ValueError, match="irreflexive"):
            StrictOrder(carrier_of(ctx21), {(A1, A1)})

    def test_transitivity_gap_rejected(self, ctx21):
        with pytest.raises(ValueError, match="transitive"):
            StrictOrder(carrier_of(ctx21), {(IN2, A1), (A1, OUT2)})

    def test_pair_outside_carrier_rejected(self, ctx21):
        with pytest.raises(ValueError, match="carrier"):
            StrictOrder(frozenset({A1}), {(A1, OUT2)})

    def test_chain_bound(self, ctx21):
        assert empty_order(ctx21).chain_bound() == 1
        assert three_chain(ctx21).chain_bound() == 3

    def test_min_max(self, ctx21):
        ch = three_chain(ctx21)
        assert ch.minimal() == frozenset({IN2})
        assert ch.maximal() == frozenset({OUT2})

    def test_hasse_reduction(self, ctx21):
        assert three_chain(ctx21).hasse_pairs() == frozenset({(IN2, A1), (A1, OUT2)})

    def test_linearity(self, ctx21):
        assert three_chain(ctx21).is_linear()
        assert not empty_order(ctx21).is_linear()


class TestInOrdK:
    def test_empty_relation_is_flat(self, ctx21):
        assert in_ord_k(empty_order(ctx21), 1)
        assert not in_ord_k(empty_order(ctx21), 0)

    def test_three_chain(self, ctx21):
        ch = three_chain(ctx21)
        assert in_ord_k(ch, 3) and not in_ord_k(ch, 2)

    def test_outgoing_output_copy_is_rejected(self, ctx21):
        bad = StrictOrder(carrier_of(ctx21), {(OUT2, A1)})
        assert not in_ord_k(bad, 5)

    def test_incoming_input_copy_is_rejected(self, ctx21):
        bad = StrictOrder(carrier_of(ctx21), {(A1, IN2)})
        assert not in_ord_k(bad, 5)


def _orders_oracle(ctx):
    """Brute force over every subset of M x M."""
    points = sorted(carrier_of(ctx), key=point_sort_key)
    all_pairs = [(u, v) for u in points for v in points]
    found = set()
    for mask in range(1 << len(all_pairs)):
        pairs = frozenset(p for i, p in enumerate(all_pairs) if mask >> i & 1)
        if any(u == v for u, v in pairs):
            continue
        if any(
            (u, w) not in pairs
            for u, v in pairs
            for v2, w in pairs
            if v2 == v
        ):
            continue
        if any(v.tag == "in" or u.tag == "out" for u, v in pairs):
            continue
        found.add(pairs)
    return found


class TestEnumerateOrders:
    def test_against_powerset_oracle(self, ctx21):
        got = {o.pairs for o in enumerate_orders(ctx21)}
        assert got == _orders_oracle(ctx21)
        assert len(got) == 7

    def test_all_satisfy_the_extremal_conditions(self, ctx31):
        for o in enumerate_orders(ctx31):
            assert in_ord_k(o, len(carrier_of(ctx31)))


class TestMon:
    def test_empty_order_gives_only_zero(self, ctx21):
        assert set(mon(ctx21, empty_order(ctx21))) == {empty(2)}

    def test_frozen_five_elements(self, ctx21):
        got = mon(ctx21, three_chain(ctx21)).members.members
        assert got == frozenset(
            {
                empty(2),
                from_dict(2, {2: 1}),
                from_dict(2, {2: 2}),
                from_dict(2, {1: 2}),
                from_dict(2, {1: 2, 2: 1}),
            }
        )

    def test_no_lifted_fixed_points(self, ctx32):
        for o in enumerate_orders(ctx32):
            for b in mon(ctx32, o):
                for x, y in b.items():
                    assert lift_in(ctx32, x) != lift_out(ctx32, y)

    def test_monotone_exhaustive(self, ctx21):
        orders = enumerate_orders(ctx21)
        bodies = {o: mon(ctx21, o).members.members for o in orders}
        for o1 in orders:
            for o2 in orders:
                if o1.pairs <= o2.pairs:
                    assert bodies[o1] <= bodies[o2]


class TestOrderOf:
    def test_zero_semigroup_has_empty_order(self, ctx21):
        sub = Subsemigroup(ctx21, [empty(2)])
        assert order_of(ctx21, sub).pairs == frozenset()

    def test_transposition_closure_gives_the_chain(self, ctx21):
        sub = closure(ctx21, [cycle(2, 1, 2)])
        assert order_of(ctx21, sub).pairs == three_chain(ctx21).pairs

    def test_non_nilpotent_rejected(self, ctx21):
        sub = Subsemigroup(ctx21, [ctx21.alpha])
        with pytest.raises(ValueError, match="nilpotent"):
            order_of(ctx21, sub)


def _degree_oracle(ctx, members, kmax=6):
    """All k-tuple products, directly."""
    ms = list(members)
    zero = empty(ctx.n)
    for k in range(1, kmax + 1):
        prods = set()
        for seq in iproduct(ms, repeat=k):
            cur = seq[0]
            for b in seq[1:]:
                cur = sandwich_oracle(ctx, cur, b)
            prods.add(cur)
        if prods == {zero}:
            return k
    return None


class TestNilpotencyDegree:
    def test_zero_alone(self, ctx21):
        assert nilpotency_degree(ctx21, [empty(2)]) == 1

    def test_five_element_mon_has_degree_three(self, ctx21):
        sub = mon(ctx21, three_chain(ctx21))
        assert nilpotency_degree(ctx21, sub) == 3
        assert _degree_oracle(ctx21, sub.members.members) == 3

    def test_idempotent_is_not_nilpotent(self, ctx21):
        assert nilpotency_degree(ctx21, [ctx21.alpha]) is None

    def test_against_tuple_oracle(self, ctx21):
        univ = sorted(enumerate_all(2), key=canonical_key)
        seen = set()
        for g1 in univ:
            for g2 in univ:
                body = closure(ctx21, [g1, g2]).members.members
                if body in seen or len(body) > 5:
                    continue
                seen.add(body)
                assert nilpotency_degree(ctx21, body) == _degree_oracle(ctx21, body)


class TestPartitions:
    def test_block_constraints_enforced(self, ctx21):
        with pytest.raises(ValueError, match="first"):
            OrderedAPartition((frozenset({A1}), frozenset({IN2, OUT2})))
        with pytest.raises(ValueError, match="last"):
            OrderedAPartition((frozenset({IN2, OUT2}), frozenset({A1})))
        with pytest.raises(ValueError, match="disjoint"):
            OrderedAPartition((frozenset({IN2, A1}), frozenset({A1, OUT2})))
        with pytest.raises(ValueError, match="nonempty"):
            OrderedAPartition((frozenset({IN2}), frozenset(), frozenset({OUT2})))

    def test_single_block_holds_everything(self, ctx21):
        parts = enumerate_partitions(ctx21, 1)
        assert parts == [OrderedAPartition((carrier_of(ctx21),))]

    def test_counts_at_n2(self, ctx21):
        assert len(enumerate_partitions(ctx21, 3)) == 1
        assert len(enumerate_partitions(ctx21, 2)) == 2

    def test_k_above_a_plus_two_is_empty(self, ctx21):
        assert enumerate_partitions(ctx21, 3) != []
        assert len(carrier_of(ctx21)) == 3  # k=3 is also the carrier bound here

    def test_k_out_of_range_rejected(self, ctx21):
        with pytest.raises(ValueError):
            enumerate_partitions(ctx21, 0)
        with pytest.raises(ValueError):
            enumerate_partitions(ctx21, 4)

    def test_deterministic(self, ctx32):
        assert enumerate_partitions(ctx32, 3) == enumerate_partitions(ctx32, 3)

    def test_infeasible_middle_blocks(self, ctx31):
        # one A-point cannot fill two middle blocks
        assert enumerate_partitions(ctx31, 4) == []


class TestPartitionOrder:
    def test_single_block_is_empty_relation(self, ctx21):
        assert partition_order(enumerate_partitions(ctx21, 1)[0]).pairs == frozenset()

    def test_three_singletons_give_the_chain(self, ctx21):
        p = enumerate_partitions(ctx21, 3)[0]
        assert partition_order(p).pairs == three_chain(ctx21).pairs

    def test_maximality_in_ord_k(self, ctx21):
        # adding any missing pair breaks strictness or the chain bound
        points = sorted(carrier_of(ctx21), key=point_sort_key)
        for k in (2, 3):
            for p in enumerate_partitions(ctx21, k):
                base = partition_order(p)
                for u in points:
                    for v in points:
                        if u == v or (u, v) in base.pairs:
                            continue
                        pairs = set(base.pairs) | {(u, v)}
                        changed = True
                        while changed:
                            changed = False
                            for x, y in list(pairs):
                                for y2, w in list(pairs):
                                    if y2 == y and (x, w) not in pairs:
                                        pairs.add((x, w))
                                        changed = True
                        still_strict = all(x != y for x, y in pairs)
                        if not still_strict:
                            continue
                        grown = StrictOrder(base.carrier, frozenset(pairs))
                        assert not in_ord_k(grown, k)


class TestTOfPartition:
    def test_three_singleton_blocks(self, ctx21):
        t = t_of_partition(ctx21, enumerate_partitions(ctx21, 3)[0])
        assert t.members.members == mon(ctx21, three_chain(ctx21)).members.members
        assert t.name == "T(1, 1, 1)"

    def test_two_blocks_frozen(self, ctx21):
        p = OrderedAPartition((frozenset({IN2, A1}), frozenset({OUT2})))
        t = t_of_partition(ctx21, p)
        assert t.members.members == frozenset(
            {empty(2), from_dict(2, {1: 2}), from_dict(2, {2: 2})}
        )

    def test_partition_must_cover(self, ctx31):
        p = OrderedAPartition((frozenset({IN2, A1}), frozenset({OUT2})))
        with pytest.raises(ValueError, match="cover"):
            t_of_partition(ctx31, p)


class TestCompleteOrder:
    def test_empty_order_collapses_to_one_block(self, ctx21):
        p = complete_order(ctx21, empty_order(ctx21))
        assert p.blocks == (carrier_of(ctx21),)

    def test_chain_recovers_the_partition(self, ctx21):
        p = complete_order(ctx21, three_chain(ctx21))
        assert p == enumerate_partitions(ctx21, 3)[0]

    def test_round_trip_through_partition_orders(self):
        for ctx in prefix_contexts(3):
            for k in range(1, len(carrier_of(ctx)) + 1):
                for p in enumerate_partitions(ctx, k):
                    assert complete_order(ctx, partition_order(p)) == p

    def test_contains_the_input_exhaustively(self):
        for ctx in prefix_contexts(3):
            for o in enumerate_orders(ctx):
                grown = partition_order(complete_order(ctx, o))
                assert o.pairs <= grown.pairs

    def test_contains_the_input_sampled_n4(self):
        ctx = SandwichContext(4, {1, 2})
        for o in sample_orders(ctx, 1000, seed=0):
            grown = partition_order(complete_order(ctx, o))
            assert o.pairs <= grown.pairs


class TestMaximalNilpotents:
    def test_worked_example(self, ctx21):
        ts = maximal_nilpotents(ctx21, 3)
        assert len(ts) == 1
        assert len(ts[0]) == 5
        assert nilpotency_degree(ctx21, ts[0]) == 3

    def test_distinct_per_k(self):
        for ctx in prefix_contexts(3):
            for k in range(1, len(carrier_of(ctx)) + 1):
                ts = maximal_nilpotents(ctx, k)
                assert len({t.members.members for t in ts}) == len(ts)

    def test_locally_maximal_exhaustive_n2(self, ctx21):
        univ = list(enumerate_all(2))
        for k in (1, 2, 3):
            for t in maximal_nilpotents(ctx21, k):
                body = t.members.members
                for b in univ:
                    if b in body:
                        continue
                    grown = closure(ctx21, list(body) + [b])
                    d = nilpotency_degree(ctx21, grown)
                    assert d is None or d > k

    def test_top_degree_is_l_plus_two(self, ctx21):
        degrees = [
            nilpotency_degree(ctx21, t)
            for k in (1, 2, 3)
            for t in maximal_nilpotents(ctx21, k)
        ]
        assert max(degrees) == 3 == ctx21.l + 2


class TestTypes:
    def test_worked_type(self, ctx21):
        t = maximal_nilpotents(ctx21, 3)[0]
        assert type_of(ctx21, t) == (1, 1, 1)
        assert type_of(ctx21, t, 3) == (1, 1, 1)

    def test_reverse(self):
        assert type_reverse((2, 1, 3)) == (3, 1, 2)

    def test_types_match_partition_sizes(self):
        for ctx in prefix_contexts(3):
            copies = ctx.n - ctx.l
            for k in range(1, len(carrier_of(ctx)) + 1):
                for p in enumerate_partitions(ctx, k):
                    tv = type_of(ctx, t_of_partition(ctx, p), k)
                    assert tv == p.sizes()
                    assert sum(tv) == len(carrier_of(ctx))
                    assert tv[0] >= copies and tv[-1] >= copies

    def test_non_maximal_rejected(self, ctx21):
        sub = closure(ctx21, [from_dict(2, {1: 2})])
        assert nilpotency_degree(ctx21, sub) is not None
        with pytest.raises(ValueError, match="maximal"):
            type_of(ctx21, sub)


class TestGaloisSampledN4:
    def test_correspondence_on_sampled_orders(self):
        ctx = SandwichContext(4, {1, 2})
        rng = random.Random(7)
        for order in sample_orders(ctx, 100, seed=3):
            m = mon(ctx, order)
            lam = order_of(ctx, m)
            assert lam.pairs <= order.pairs
            assert mon(ctx, lam).members.members == m.members.members
            elems = sorted(m.members.members, key=canonical_key)
            for _ in range(5):
                gens = [rng.choice(elems), rng.choice(elems)]
                s = closure(ctx, gens)
                lam_s = order_of(ctx, s)
                ms = mon(ctx, lam_s)
                assert s.members.members <= ms.members.members
                assert order_of(ctx, ms).pairs == lam_s.pairs
                k = nilpotency_degree(ctx, s)
                assert k is not None
                assert in_ord_k(lam_s, k) and not in_ord_k(lam_s, k - 1)


class TestIsomorphismSearch:
    def test_self_isomorphic(self, ctx21):
        t = maximal_nilpotents(ctx21, 3)[0]
        assert semigroups_isomorphic(t, t)

    def test_reversed_types_at_k2(self, ctx31):
        t1, t2 = maximal_nilpotents(ctx31, 2)
        types = {type_of(ctx31, t, 2) for t in (t1, t2)}
        assert types == {(3, 2), (2, 3)}
        assert semigroups_isomorphic(t1, t2)

    def test_distinct_types_at_k3_not_isomorphic(self, ctx32):
        ts = maximal_nilpotents(ctx32, 3)
        by_type = {type_of(ctx32, t, 3): t for t in ts}
        assert semigroups_isomorphic(by_type[(2, 1, 1)], by_type[(1, 2, 1)]) is False
        assert semigroups_anti_isomorphic(by_type[(2, 1, 1)], by_type[(1, 1, 2)])

    def test_palindromic_type_is_anti_isomorphic_to_itself(self, ctx31):
        t = maximal_nilpotents(ctx31, 3)[0]
        assert type_of(ctx31, t) == (2, 1, 2)
        assert semigroups_anti_isomorphic(t, t)

    def test_size_mismatch(self, ctx21):
        t3 = maximal_nilpotents(ctx21, 3)[0]
        t1 = maximal_nilpotents(ctx21, 1)[0]
        assert not semigroups_isomorphic(t3, t1)

    def test_refusal_above_size_bound(self, ctx21):
        t = maximal_nilpotents(ctx21, 3)[0]
        with pytest.raises(ValueError, match="refused"):
            semigroups_isomorphic(t, t, max_size=3)
