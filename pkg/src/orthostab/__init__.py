"""Numerical laboratory for orthogonality spaces and the stability of the
orthogonal Pexider quadratic equation."""

from .estimators import HyersEstimator
from .hyers import (
    DivergenceError,
    HyersLimit,
    HyersTrace,
    SampledMap,
    additive_hyers_limit,
    decompose_T_Q,
    jensen_residual,
    orthogonal_additivity_residual,
    quadratic_hyers_limit,
)
from .linalg import NormSpec, dot, golden_section, norm_eval, orthonormal_complement_in_plane
from .models import (
    FiniteModel,
    MapModel,
    NoiseSpec,
    PexiderTriple,
    deterministic_noise,
    make_pexider_instance,
    polarize,
)
from .orthogonality import (
    AxiomReport,
    OrthoRelation,
    PairSampler,
    SearchFailed,
    axiom_suite,
    bj_minimize,
    is_orthogonal,
    sample_orthogonal_pair,
    sample_orthogonal_pairs,
    symmetry_probe,
    thales_solve,
)
from .verifier import (
    StabilityReport,
    TheoremCheckConfig,
    even_case_explore,
    premise_sup,
    degenerate_tie_check,
    uniqueness_probe,
    verify_theorem,
    z2_remark_check,
)

