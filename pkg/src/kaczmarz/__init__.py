"""Classical, dual and augmented dual Kaczmarz iterations with frame diagnostics."""

from .classic import (
    IterationTrace,
    TriangularSection,
    almost_effective_bound,
    auxiliary_h,
    periodic_effectiveness_oracle,
    run_classic,
    triangular_M_U,
)
from .constructors import (
    biorthogonal_pair,
    lift_half_power,
    pair_from_effective,
    recover_T,
    run_augmented,
    synthesis_dual_from_almost_effective,
    transform_pair,
)
from .dual import (
    auxiliary_pair,
    effective_pair_oracle,
    equivalence_report,
    partial_isometry_test,
    partial_sum_identity_check,
    run_dual,
    triangular_N_V,
)
from .frames import (
    analysis_coeffs,
    canonical_dual,
    duality_check,
    frame_bounds,
    frame_operator_partial,
    grammian_positive,
    mixed_grammian,
    synthesis_apply,
)
from .linalg import inner_product, is_psd, positive_sqrt, pseudo_inverse, spectral_radius
from .sequences import SequencePair, VectorSequence, term_at, validate

__version__ = "0.1.0"
