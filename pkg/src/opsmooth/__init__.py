"""Norm geometry of lp spaces and smoothness of operators between them."""

from .diagonal import (
    ACCUMULATING_SYMBOL,
    GAPPED_SYMBOL,
    ConstantBasisSequence,
    DiagonalOperator,
    SpikeDecaySequence,
    TailBasisSequence,
    canonical_norming_sequences,
    diag_MT,
    diag_norm,
    diag_smoothness,
    norming_sequence_concentration,
    span_closure_test,
)
from .operators import (
    MatrixOperator,
    NormAttainmentSet,
    NormingSequence,
    OperatorSmoothnessReport,
    frechet_uniformity_probe,
    gateaux_derivative,
    hilbert_h0_test,
    m_t_delta,
    mt_delta_localization,
    norm_attainment_set,
    norming_sequence_from_vectors,
    norming_sequence_gen,
    op_norm,
    orthogonality_transfer_test,
    smoothness_decide,
    subsequential_sip_test,
)
from .orthogonality import (
    DirectionalClass,
    OrthogonalityVerdict,
    approx_bj,
    bj_orthogonal,
    directional_class,
    right_additivity_probe,
)
from .reporting import Report, RunConfig, Tolerances
from .spaces import (
    NormingFunctional,
    NormSpec,
    SmoothnessVerdict,
    Vector,
    duality_map,
    is_smooth_point,
    norm,
    sip,
)

__version__ = "0.1.0"
