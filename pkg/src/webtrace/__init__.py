"""Exact traces of tensor representations of typed diagrams.

Webs (diagrams with boundary), their formal linear combinations, dense
exact tensors, the trace p_R and extended trace p̂_R, executable checks of
trace properties, a gallery of example relation packs, and text formats.
"""

from .certify import (
    annihilation_witness_search,
    character_identity_check,
    check_delta_annihilation,
    check_multiplicativity,
    connection_matrix,
    enumerate_webs,
    rank_growth_check,
)
from .diagram import (
    CanonicalCapError,
    Port,
    ProfileError,
    Root,
    SignatureError,
    Sink,
    TypeSignature,
    Web,
    canonical_form,
    canonical_key,
    compose,
    cycle_diagram,
    disjoint_union,
    glue,
    loop_diagram,
    path_web,
    permutation_web,
    strand,
    validate,
    vertex_web,
)
from .formats import ParseError, parse, serialize
from .linalg import exact_rank
from .planner import BudgetExceeded, plan_contraction
from .quantum import QuantumWeb, delta, linear_combine, qw_product
from .tensors import (
    Representation,
    Tensor,
    extended_trace,
    gl_action,
    naive_trace,
    pairing,
    planned_trace,
    quantum_trace,
    random_invertible,
    random_representation,
)

__version__ = "0.1.0"
