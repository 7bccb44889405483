"""Exact computation in sandwich variants of the finite symmetric inverse
semigroup: sandwich products, isolated and completely isolated
subsemigroups, and maximal nilpotent subsemigroups with their types."""

from .pinj import (
    CarrierMismatch,
    ElementSet,
    PartialInjection,
    canonical_key,
    cardinality,
    compose,
    cycle,
    empty,
    enumerate_all,
    id_on,
    identity,
    is_idempotent,
    power,
)
from .variant import (
    SandwichContext,
    canonical_context,
    chain,
    epsilon_x,
    eventual_star_idempotent,
    idempotent_factorization,
    is_variant_idempotent,
    sandwich,
    star_power,
    variant_idempotents,
    variants_isomorphic,
)
from .isolated import (
    Subsemigroup,
    build_c_a,
    build_g,
    classify_completely_isolated,
    classify_isolated,
    closure,
    complement_of_c_a,
    full_semigroup,
    is_completely_isolated,
    is_isolated,
    root_set,
)
from .nilpotent import (
    MPoint,
    OrderedAPartition,
    StrictOrder,
    carrier_of,
    complete_order,
    embed,
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
    semigroups_anti_isomorphic,
    semigroups_isomorphic,
    t_of_partition,
    type_of,
    type_reverse,
)
from .verify import VerificationReport, run_all, run_verify

__version__ = "0.1.0"
