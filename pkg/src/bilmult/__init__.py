"""bilmult: bilinear multiplication algorithms in finite-field extensions.

Construct verified multiplication algorithms (evaluation-interpolation and
tower composition), search tensor rank by brute force on tiny instances, and
evaluate every published upper/lower bound on the bilinear complexity of
extension-field multiplication with full provenance.
"""

from .bounds import (
    AsymptoticBound,
    AsymptoticReport,
    Bound,
    BoundEngine,
    cq_constant,
)
from .construct import (
    TruncatedProductAlgorithm,
    compose_decompositions,
    karatsuba_truncated,
    rebase_decomposition,
    toom_construct,
    tower_to_flat_isomorphism,
)
from .decomp import (
    BilinearDecomposition,
    RankSearchReport,
    brute_force_rank,
    decomposition_apply,
    decomposition_from_json,
    decomposition_to_json,
    exhaustive_product_check,
    verify_decomposition,
    verify_decomposition_detail,
)
from .exactmath import epsilon
from .gf import Field, prime_field
from .towers import (
    KASH_TABLE,
    KashRecord,
    TowerFamily,
    TowerStep,
    check_lemma_inequalities,
    gs_genus,
    gs_step_bounds,
    kummer_genus,
    kummer_places_lower,
    select_step,
)

__version__ = "0.1.0"

__all__ = [
    "AsymptoticBound",
    "AsymptoticReport",
    "BilinearDecomposition",
    "Bound",
    "BoundEngine",
    "Field",
    "KASH_TABLE",
    "KashRecord",
    "RankSearchReport",
    "TowerFamily",
    "TowerStep",
    "TruncatedProductAlgorithm",
    "brute_force_rank",
    "check_lemma_inequalities",
    "compose_decompositions",
    "cq_constant",
    "decomposition_apply",
    "decomposition_from_json",
    "decomposition_to_json",
    "epsilon",
    "exhaustive_product_check",
    "gs_genus",
    "gs_step_bounds",
    "karatsuba_truncated",
    "kummer_genus",
    "kummer_places_lower",
    "prime_field",
    "rebase_decomposition",
    "select_step",
    "toom_construct",
    "tower_to_flat_isomorphism",
    "verify_decomposition",
    "verify_decomposition_detail",
]
