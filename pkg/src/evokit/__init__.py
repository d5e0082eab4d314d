"""Exact-arithmetic toolkit for finite-dimensional evolution algebras.

Computes products, power sequences, the upper annihilating series,
nilpotency verdicts, type signatures and attached graphs; builds the
nilpotent families used by the verification suite; and decides isomorphism
between small algebras over prime fields by exhaustive
filtration-constrained search.
"""

from .algebra import (
    AlgebraGraph,
    AnnihilatorChain,
    EvolutionMatrix,
    NilpotencyResult,
    PowerChain,
    StructureTensor,
    Subspace,
    ann_chain,
    annihilator_step,
    change_basis,
    evolution_to_tensor,
    graph_of,
    is_nilpotent,
    multiply,
    permute_basis,
    power_chain,
    subspace_product,
    triangular_witness,
    type_signature,
)
from .constructions import (
    ChainParams,
    ElrParams,
    TypeOnesParams,
    build_bnk,
    build_chain,
    build_elr,
    build_eub,
    build_ma1,
    build_ma12,
    build_ma2,
    build_type_ones,
    chain_diagonals_nonzero,
    chain_squares_surjective,
    enumerate_elr,
    enumerate_type_ones,
)
from .field import FieldSpec, PrimeField, Rationals, make_field, scalar_arith
from .io import dump_algebra, load_algebra, loads_algebra
from .iso import (
    Fingerprint,
    LinearMap,
    SearchPattern,
    SearchResult,
    chain_adapt,
    family_noniso_report,
    filtration_pattern,
    fingerprint,
    is_homomorphism,
    iso_search,
    prepare_search_pair,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
