"""Workbench for tau-tilting theory over finite-dimensional basic algebras."""

from .linalg import Field, QQ
from .algebra import (
    BasicAlgebra,
    Quiver,
    Relation,
    compile_bound_quiver,
    is_isomorphic_algebra,
)
from .modules import (
    Representation,
    ModuleMap,
    TauPair,
    ar_translate,
    check_pair,
    describe_pair,
    pair_from_summands,
    projective,
    simple,
    zero_rep,
)
from .tauops import (
    free_pair,
    left_bongartz,
    mutate_pair,
    dagger_pair,
    pair_leq,
    right_bongartz,
    shifted_pair,
)
from .explorer import (
    ExchangeGraph,
    ReductionData,
    build_exchange_graph,
    connect_fixed_summand,
    graph_dot,
    maximal_green_sequences,
    reduce_pair,
    reduction_bijection_check,
    reduction_functor,
    tau_reduction,
    transport_mgs,
)
from .workspace import Workspace, load_workspace, parse_workspace

__all__ = [
    "Field",
    "QQ",
    "Quiver",
    "Relation",
    "BasicAlgebra",
    "compile_bound_quiver",
    "is_isomorphic_algebra",
    "Representation",
    "ModuleMap",
    "TauPair",
    "ar_translate",
    "check_pair",
    "describe_pair",
    "pair_from_summands",
    "projective",
    "simple",
    "zero_rep",
    "free_pair",
    "left_bongartz",
    "mutate_pair",
    "dagger_pair",
    "pair_leq",
    "right_bongartz",
    "shifted_pair",
    "ExchangeGraph",
    "ReductionData",
    "build_exchange_graph",
    "connect_fixed_summand",
    "graph_dot",
    "maximal_green_sequences",
    "reduce_pair",
    "reduction_bijection_check",
    "reduction_functor",
    "tau_reduction",
    "transport_mgs",
    "Workspace",
    "load_workspace",
    "parse_workspace",
]
