"""Secrecy performance of large-scale underlay spectrum-sharing networks.

Closed-form average secrecy rate, secrecy outage probability, and
permissive-power region for secondary transmitters using beamforming plus
artificial noise, cross-validated by an independent stochastic-geometry
Monte Carlo simulator.
"""

from .errors import (
    BranchError,
    CancellationError,
    ComputationCancelled,
    ConfigError,
    ConvergenceError,
    DegenerateFieldError,
    DomainError,
    InfeasibleError,
    ResourceLimitError,
    SecshareError,
)
from .metrics import MetricRoute, SecrecyResult, asr_asymptotic, average_secrecy_rate, secrecy_outage, sop_asymptotic
from .model import (
    DerivedConstants,
    NetworkConfig,
    db_to_linear,
    dbm_to_watts,
    derive_constants,
    lambda_l,
    laplace_su_interference,
    theta,
    upsilon1,
    watts_to_dbm,
    xi,
)
from .montecarlo import (
    FieldSnapshot,
    McEstimate,
    estimate,
    eve_sir_snapshot,
    field_snapshot,
    null_space_basis,
    pu_sir_snapshot,
    sample_hppp,
    sir_samples,
    su_sir_snapshot,
)
from .numerics import (
    CharacteristicFunction,
    QuadratureSpec,
    exp_composite_derivatives,
    gamma_fn,
    gil_pelaez_cdf,
    phi_fn,
    quad_semi_infinite,
)
from .optimize import AntennaGap, SweepRow, SweepSpec, antenna_gap, optimal_mu, sweep
from .partitions import Partition, faa_di_bruno_exp, partitions_with_multiplicity
from .power import PowerRegion, max_permissive_power, max_permissive_power_asymptotic, pu_outage, resolve_power
from .sirdist import (
    SirCdf,
    SirCdfKind,
    cdf_sir_eve,
    cdf_sir_eve_asym,
    cdf_sir_su,
    cdf_sir_su_asym,
    cdf_sir_su_asym_alpha4,
    large_array_interference_cf,
    make_sir_cdf,
)

__version__ = "0.1.0"
