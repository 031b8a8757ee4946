"""Divisor theory on finite multigraphs: chip-firing, Baker-Norine rank,
homothetic refinements, Brill-Noether bounds and harmonic morphisms."""

from .brill_noether import (
    RR_SHORTCUT,
    BNParams,
    BoundReport,
    GonalityResult,
    SearchLimits,
    SearchResult,
    bn_bound,
    bound_chain_check,
    bound_report,
    find_gdr,
    gonality_search,
    legacy_bound,
    rho,
)
from .divisors import (
    Divisor,
    ReducedDivisor,
    canonical,
    enumerate_classes,
    fire_set,
    has_effective_rep,
    is_equivalent,
    is_reduced,
    principal_divisor,
    rank,
    rank_at_least,
    reduce,
    riemann_roch_residual,
    superstable_configs,
    transport,
    vertex_divisor,
)
from .errors import (
    ClassMismatchError,
    DisconnectedError,
    DivGraphError,
    EmptyOrFullSetError,
    EmptyVertexSetError,
    EndpointMismatchError,
    IndexMismatchError,
    InvalidInputError,
    LoopEdgeError,
    NegativeRhoError,
    NonIntegralBoundError,
    NotHarmonicError,
    PreconditionViolatedError,
    UnknownVertexError,
)
from .graphs import (
    Multigraph,
    RefinementMap,
    build_graph,
    genus,
    kirchhoff_minor_determinant,
    laplacian,
    refine,
    spanning_tree_count,
)
from .harmonic import (
    Contraction,
    GraphMorphism,
    HarmonicReport,
    RHReport,
    build_morphism,
    check_harmonic,
    contract,
    identity_morphism,
    pullback,
    pushforward_contraction,
    riemann_hurwitz_check,
)

__version__ = "0.1.0"
