"""Entrywise positivity preservers in fixed dimension."""

from .linalg import DEFAULT_TOL, ToleranceProfile, is_pd, is_psd, loewner_geq, numeric_rank
from .preserver import (
    DominationError,
    EquivalenceReport,
    MatrixFamily,
    PreserverSpec,
    apply_entrywise,
    dominating_vector,
    equivalence_report,
    hadamard_power,
    jacobi_trudi_det,
    loewner_necessity_check,
    sharp_lmi_check,
    sharpness_search,
    threshold_C,
)
from .rayleigh import c_R, c_R_rank_one, continuity_probe, equality_gap, minimality_certify, rayleigh_quotient
from .strata import (
    Partition,
    block_lmi_constant,
    closure_membership,
    compress,
    compress_weighted,
    inflate,
    inflate_weighted,
    partition_of,
    rank_on_stratum,
    refines,
)
from .symfunc import (
    hook_content_binomial,
    monotonicity_certify,
    schur_bialternant,
    schur_principal_specialization,
    schur_ratio,
    schur_tableaux,
    vandermonde,
)

__version__ = "0.1.0"
