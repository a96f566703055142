"""Quadratic character L-polynomials over F_q[x] and certified critical-circle bounds."""

from .argfunc import (
    SnEvaluator,
    antiderivative_constant,
    argument_sum,
    count_zeros,
    jump_limits,
    log_modulus,
    mean_value,
    zero_multiplicities,
)
from .bernoulli import (
    BernoulliTable,
    bernoulli_envelope_constants,
    bernoulli_extrema,
    periodic_bernoulli,
    zeta,
    zeta_envelope_constants,
)
from .bounds import (
    BoundReport,
    EmpiricalExtrema,
    ScanConfig,
    ScanResult,
    choose_degree,
    degree_choice,
    empirical_extrema,
    empirical_max,
    ensemble_scan,
    envelope,
    rigorous_bound,
    s0_bound_interval_method,
    sample_moduli,
)
from .charsum import Character, lambda_sum, residue_symbol
from .errors import (
    CertificationError,
    ConsistencyError,
    FieldMismatchError,
    ResourceLimitError,
    RootIsolationError,
    SolverError,
    SoundnessError,
    UnsupportedDegreeError,
)
from .fqpoly import (
    FieldSpec,
    Poly,
    PrimeTable,
    build_prime_table,
    enumerate_Hd,
    format_poly,
    get_prime_table,
    is_squarefree,
    necklace_count,
    parse_poly,
    poly_divmod,
    poly_mul,
)
from .lfunc import (
    CosineSeries,
    LPolynomial,
    ZeroAngles,
    compute_lpolynomial,
    find_zero_angles,
    power_sum,
    unitarize,
)
from .onesided import (
    CoefficientReport,
    OneSidedResult,
    TrigPoly,
    construct_one_sided,
    interval_polys,
    oracle_mean,
    verify_coefficient_bounds,
)

__all__ = [
    "BernoulliTable",
    "BoundReport",
    "CertificationError",
    "Character",
    "CoefficientReport",
    "ConsistencyError",
    "CosineSeries",
    "EmpiricalExtrema",
    "FieldMismatchError",
    "FieldSpec",
    "LPolynomial",
    "OneSidedResult",
    "Poly",
    "PrimeTable",
    "ResourceLimitError",
    "RootIsolationError",
    "ScanConfig",
    "ScanResult",
    "SnEvaluator",
    "SolverError",
    "SoundnessError",
    "TrigPoly",
    "UnsupportedDegreeError",
    "ZeroAngles",
    "antiderivative_constant",
    "argument_sum",
    "bernoulli_envelope_constants",
    "bernoulli_extrema",
    "build_prime_table",
    "choose_degree",
    "compute_lpolynomial",
    "construct_one_sided",
    "count_zeros",
    "degree_choice",
    "empirical_extrema",
    "empirical_max",
    "ensemble_scan",
    "enumerate_Hd",
    "envelope",
    "find_zero_angles",
    "format_poly",
    "get_prime_table",
    "interval_polys",
    "is_squarefree",
    "jump_limits",
    "lambda_sum",
    "log_modulus",
    "mean_value",
    "necklace_count",
    "oracle_mean",
    "parse_poly",
    "periodic_bernoulli",
    "poly_divmod",
    "poly_mul",
    "power_sum",
    "residue_symbol",
    "rigorous_bound",
    "s0_bound_interval_method",
    "sample_moduli",
    "unitarize",
    "verify_coefficient_bounds",
    "zero_multiplicities",
    "zeta",
    "zeta_envelope_constants",
]
