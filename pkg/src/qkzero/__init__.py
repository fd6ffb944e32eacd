"""Exact genus-zero quantum K-theory: descendent Euler characteristics,
potentials, quantized metrics, quantum products, and the fundamental
solution of the quantum differential equation, all over the rationals."""

from .correlators import (
    ConsistencyReport,
    CorrelatorTable,
    beta_zero_correlator,
    effective_degrees,
    load_correlators,
    point_descendent_table,
    ring_from_target,
    table_consistency_check,
)
from .descendents import (
    DescendentEngine,
    DescendentIndex,
    descendent_euler,
    one_descendent_profile,
    oracle_n4,
)
from .errors import (
    DuplicateEntry,
    IncompatibleSeries,
    IncompleteTable,
    IneffectiveDegree,
    InvalidPresentation,
    ModuliNonexistent,
    NotInvertible,
    NotReducible,
    QKError,
    RingMismatch,
    SchemaError,
    SingularMetric,
    TruncationMismatch,
    UnknownVariable,
)
from .frobenius import (
    FlatnessReport,
    FrobeniusData,
    Potential,
    ResidualSummary,
    assemble_potential,
    build_frobenius_data,
    classical_limit_residual,
    flatness_residuals,
    product_tensor,
    quantized_metric,
    unit_residual,
    wdvv_residual,
)
from .kring import (
    KClass,
    KRingPresentation,
    euler_char_line_bundle,
    point_kring,
    projective_space_kring,
)
from .qde import (
    QDESolution,
    assemble_fundamental_solution,
    gwdvv_residuals,
    is_complete,
    qde_residual,
)
from .series import (
    SeriesMatrix,
    SeriesSpec,
    TruncatedSeries,
    format_rational,
    matrix_inverse_direct,
    matrix_inverse_geometric,
    parse_rational,
    try_rational_inverse,
)

__version__ = "0.1.0"
