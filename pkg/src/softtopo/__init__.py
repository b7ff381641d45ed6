"""Finite soft sets, soft topologies, and an embedding lemma checker."""

from .core import (
    Context,
    SoftPoint,
    SoftSet,
    absolute_soft_set,
    all_soft_sets,
    enumerate_soft_points,
    make_soft_set,
    null_soft_set,
    point_in,
    soft_complement,
    soft_difference,
    soft_disjoint,
    soft_equal,
    soft_intersection,
    soft_point,
    soft_points_of,
    soft_subset,
    soft_union,
)
from .errors import (
    BudgetExceededError,
    ContextMismatchError,
    EmptyFamilyError,
    NotATopologyError,
    NotOpenError,
    SoftTopologyError,
    UnknownNameError,
)
from .mapping import (
    SoftMapping,
    compose,
    identity_mapping,
    image,
    image_of_point,
    is_continuous,
    is_continuous_pointwise,
    is_embedding,
    is_homeomorphism,
    is_open_map,
    preimage,
    soft_mapping,
)
from .product import (
    ProductContext,
    diagonal_mapping,
    initial_topology,
    product_context,
    product_topology,
    projection,
)
from .separation import (
    Budget,
    SeparationReport,
    check_embedding_lemma,
    random_instance,
    separates_points,
    separates_points_from_closed,
)
from .topology import (
    Comparison,
    SoftTopology,
    closed_sets,
    closure,
    compare,
    discrete,
    generate_from_subbase,
    indiscrete,
    is_base,
    is_closed,
    is_neighbourhood,
    is_subbase,
    is_topology,
    make_topology,
    subspace_topology,
)
from .verdict import Verdict

__version__ = "0.1.0"
