"""Exact max-plus matrix algebra, a semidirect-product key exchange and an
attack on it through the tropical discrete logarithm."""

__version__ = "0.1.0"

from .attack import AttackBranch, AttackResult, easy_case_key, recover_key
from .csr import (
    BMatrix,
    CsrTriple,
    b_matrix,
    build_csr_from_cycle,
    csr_expansion_residual,
    csr_term,
    wielandt_threshold,
)
from .disclog import DisclogBranch, DisclogInstance, DisclogResult, disclog_well_defined, solve_disclog
from .errors import (
    AttackFailure,
    DimensionError,
    InputError,
    NotFoundError,
    ParseError,
    PeriodicAmbiguityError,
    ProtocolInvariantError,
    SpectrumError,
    TropError,
)
from .expgen import (
    ExperimentRecord,
    GenKind,
    GenSpec,
    gen_special_matrix,
    gen_uniform_matrix,
    run_disclog_trials,
    run_trials,
)
from .io import matrix_io_roundtrip, read_matrix, write_matrix
from .matrix import Order, TropMatrix, diag, mat_add, mat_mul, mat_partial_order, mat_pow, scalar_mul
from .protocol import (
    ProtocolInstance,
    Transcript,
    derive_shared_key_from_exponent,
    order_implications_check,
    run_protocol,
)
from .scalar import NEG_INF, as_scalar, oplus, otimes
from .semidirect import MatrixPair, PowerMode, adjoint_power, adjoint_product, semidirect_power, semidirect_product
from .spectral import (
    CriticalCycle,
    critical_arcs,
    critical_components,
    find_critical_cycle,
    is_critical_cycle,
    kleene_star,
    max_cycle_mean,
    metric_matrix,
)
