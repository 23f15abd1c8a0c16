from typing import Any, Dict, List, Optional

from pydantic import BaseModel

from relaxcheck.operators.datamodel import ComplexMatrix


class ProofStepReport(BaseModel):
    """One inequality or identity of the rate-bound argument.

    For inequalities lhs <= rhs, slack = rhs - lhs. For identities the step
    passes when |slack| is within tolerance.
    """

    step: str
    lhs: float
    rhs: float
    slack: float
    passed: bool
    mode_index: Optional[int] = None

    def to_dict(self) -> Dict[str, Any]:
        out = {
            "step": self.step,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "slack": self.slack,
            "pass": self.passed,
        }
        if self.mode_index is not None:
            out["mode_index"] = self.mode_index
        return out


class CommutatorSampleReport(BaseModel):
    d: int
    n_pairs: int
    seed: int
    max_ratio: float
    mean_ratio: float
    passed: bool


class CommutatorSearchReport(BaseModel):
    d: int
    iterations: int
    seed: int
    best_ratio: float
    A: ComplexMatrix
    B: ComplexMatrix


class ProofCheckReport(BaseModel):
    d: int
    steps: List[ProofStepReport]

    @property
    def passed(self) -> bool:
        return all(step.passed for step in self.steps)

    @property
    def failures(self) -> List[ProofStepReport]:
        return [step for step in self.steps if not step.passed]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "d": self.d,
            "passed": self.passed,
            "steps": [step.to_dict() for step in self.steps],
        }
