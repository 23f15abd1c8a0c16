"""Generator -> superoperator -> spectrum -> relaxation profile -> constraint report."""

from typing import Any, Dict, Optional

from pydantic import BaseModel, ConfigDict

from relaxcheck.constraints import ConstraintReport, RateSet, check_main_theorem
from relaxcheck.generator import GKLSGenerator, Superoperator, to_superoperator
from relaxcheck.logger import logger
from relaxcheck.spectrum import (
    GeneratorSpectrum,
    RelaxationProfile,
    StructureReport,
    compute_spectrum,
    relaxation_profile,
    verify_spectral_structure,
)
from relaxcheck.tolerances import DEFAULT_TOLERANCES, Tolerances


class GeneratorAnalysis(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    generator: GKLSGenerator
    superoperator: Superoperator
    spectrum: GeneratorSpectrum
    profile: RelaxationProfile
    structure: StructureReport
    constraints: ConstraintReport

    @property
    def rates(self) -> RateSet:
        return RateSet.from_profile(self.profile)

    @property
    def trace_identity_residual(self) -> float:
        """|sum(Gamma) - d Tr C| relative to max(1, d Tr C)."""
        expected = self.generator.d * self.generator.trace_kossakowski
        return abs(self.profile.rate_sum - expected) / max(1.0, abs(expected))

    def to_dict(self) -> Dict[str, Any]:
        return {
            "d": self.generator.d,
            "trace_C": self.generator.trace_kossakowski,
            **self.spectrum.to_dict(),
            **self.profile.to_dict(),
            "structure": self.structure.model_dump(),
            "constraints": self.constraints.model_dump(),
        }


def analyze_generator(
    g: GKLSGenerator,
    tolerances: Tolerances = DEFAULT_TOLERANCES,
    witness_tolerance: Optional[float] = None,
) -> GeneratorAnalysis:
    superop = to_superoperator(g)
    spectrum = compute_spectrum(superop, tolerances)
    profile = relaxation_profile(spectrum)
    structure = verify_spectral_structure(spectrum)
    constraints = check_main_theorem(
        RateSet.from_profile(profile),
        tolerances.witness if witness_tolerance is None else witness_tolerance,
    )
    if not constraints.passed:
        logger.error(
            f"Main bound violated on a GKLS generator (d={g.d}, "
            f"min margin {constraints.min_margin:.3e}); this indicates a numerical defect"
        )
    return GeneratorAnalysis(
        generator=g,
        superoperator=superop,
        spectrum=spectrum,
        profile=profile,
        structure=structure,
        constraints=constraints,
    )
