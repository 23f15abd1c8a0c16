from .commutator import (
    check_bw_inequality,
    commutator_ratio,
    sample_bw_ratios,
    search_bw_saturation,
)
from .datamodel import ProofCheckReport, ProofStepReport
from .steps import (
    check_chain_bound,
    check_conjugate_modes,
    check_rate_identity,
    check_trace_identity,
    run_proofcheck,
)
