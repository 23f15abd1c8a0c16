from .basis import (
    build_gellmann_basis,
    expand,
    gram_matrix,
    hs_inner,
    hs_norm,
    reconstruct,
    traceless_elements,
    validate_basis,
)
from .datamodel import ComplexMatrix, OperatorBasis
