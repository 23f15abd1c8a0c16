from .assemble import (
    adjoint_apply,
    apply_generator,
    check_adjoint_unital,
    check_hermiticity_preservation,
    generator_trace,
    to_basis_matrix,
    to_superoperator,
)
from .datamodel import (
    GKLSGenerator,
    LindbladDecomposition,
    LindbladOperator,
    LindbladTerm,
    Superoperator,
)
from .lindblad import decompose_lindblad, kossakowski_from_lindblad
