from .checks import (
    bound_constant,
    check_corollary,
    check_main_theorem,
    check_qubit_relations,
    tightness_ratio,
)
from .datamodel import (
    ConstraintCheck,
    ConstraintReport,
    CorollaryReport,
    QubitReport,
    RateSet,
    Violation,
    WitnessVerdict,
)
from .projection import nearest_consistent_rates
from .registry import constraints_for_dimension, get_registered_constraint
from .witness import witness_measured_rates, witness_measured_times
