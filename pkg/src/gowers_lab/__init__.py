"""Quantitative tools for uniformity norms, almost-periodic structure,
and progression counting on prime cyclic groups."""

from .config import RunConfig, derive_rng, thread_cap, DEFAULT_TOL, VERSION
from .cyclic import (
    GroupFunction,
    PhaseSum,
    dilate,
    embed_interval,
    expectation,
    inner_product,
    is_prime,
    l2_norm,
    linf_norm,
    next_prime_in,
    phase_values,
    poly_degree,
    poly_eval_mod,
    poly_reduce,
    poly_shift_difference,
    poly_values_mod,
    quasiperiodic,
    shift,
)
from .gowers import (
    GowersNorm,
    VonNeumannReport,
    dual_function,
    fourier_coefficients,
    gowers_norm,
    gowers_norm_batch,
    gowers_norm_direct,
    gowers_u2_fourier,
    multilinear_average,
    von_neumann_check,
)
from .partitions import (
    Partition,
    PythagorasReport,
    conditional_expectation,
    energy,
    join,
    pythagoras_check,
    refines,
    shift_partition,
)
from .uap import (
    CertifiedFunction,
    CorrelationWitness,
    DualityReport,
    UapCertificate,
    VerificationReport,
    cert_add,
    cert_conj,
    cert_multiply,
    cert_promote,
    cert_scale,
    cert_shift,
    cert_sum,
    cert_zero,
    certify_constant,
    certify_dual,
    certify_phase_sum,
    certify_quasiperiodic,
    duality_audit,
    lower_bound_correlation,
    raise_bound,
    verify_certificate,
)
from .levelset import (
    ApproximationResult,
    CompactAlgebra,
    LevelSetGenerator,
    approximate_measurable,
    join_compact,
    level_set_algebra,
    oscillation,
    select_alpha,
    trivial_algebra,
)
from .structure import (
    Decomposition,
    DecompositionReport,
    EnergyIncrement,
    TraceEntry,
    decompose,
    default_threshold,
    structure_dichotomy,
    verify_decomposition,
)
from .recurrence import (
    EmpiricalC,
    EpsilonNet,
    FiniteRankAudit,
    FiniteRankSample,
    GatingReport,
    RecurrenceReport,
    count_ap_instances,
    empirical_c,
    find_k_ap_in_set,
    finite_rank_audit,
    finite_rank_sample,
    gating_sets,
    greedy_net,
    recurrence_average,
)
from .vdw import (
    BoundReport,
    Colouring,
    Fan,
    FanSubproofs,
    FocusOutcome,
    VdwSearch,
    audit_minimality,
    bound_recursion,
    fan_focus_step,
    find_mono_ap,
    find_polychromatic_fan,
    vdw_number,
)
from .serialize import (
    canonical_dumps,
    certificate_from_json,
    certificate_to_json,
    colouring_from_json,
    colouring_to_json,
    empirical_c_to_csv,
    function_from_json,
    function_to_json,
    partition_from_json,
    partition_to_json,
    phase_sum_from_json,
    phase_sum_to_json,
    trace_to_csv,
)
from . import errors

__version__ = VERSION
