from .analyze import (
    compute_spectrum,
    relaxation_profile,
    stationary_state,
    verify_spectral_structure,
)
from .datamodel import GeneratorSpectrum, RelaxationProfile, StructureReport
