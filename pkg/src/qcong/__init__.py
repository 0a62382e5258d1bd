"""Truncated q-series engine and congruence checks for generalized cubic partitions."""

from .partitions import PartitionFamily, a_c_oracle, a_c_series, b_series, partition_series
from .products import (
    EtaQuotient,
    ThetaSum,
    chu_f10,
    chu_f10_rhs,
    eta_quotient,
    euler_f,
    f2_6_lattice,
    jacobi_cube,
    parse_eta_quotient,
    theta_sum,
)
from .series import EXACT, CoefficientRing, Modular, PowerSeries, make_series
from .verify import (
    CongruenceClaim,
    Status,
    VerificationReport,
    check_ahlgren_instance,
    check_binomial_lemma,
    check_support_vanishing,
    cited_congruence_suite,
    qr_forced_zero,
    replay_proof,
    scan_congruences,
    verify_claim,
)

__version__ = "0.1.0"
