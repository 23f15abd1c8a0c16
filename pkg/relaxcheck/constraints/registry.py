from typing import Callable, Dict, List

from relaxcheck.constraints import datamodel

ConstraintFunction = Callable[["datamodel.RateSet", float], datamodel.ConstraintCheck]

CONSTRAINT_REGISTRY: Dict[str, ConstraintFunction] = {}
CONSTRAINT_APPLIES_TO: Dict[str, Callable[[int], bool]] = {}


def register_constraint(name: str, applies_to: Callable[[int], bool] = lambda d: True):
    def wrapper(func: ConstraintFunction):
        CONSTRAINT_REGISTRY[name] = func
        CONSTRAINT_APPLIES_TO[name] = applies_to
        return func

    return wrapper


def get_registered_constraint(name: str) -> ConstraintFunction:
    return CONSTRAINT_REGISTRY[name]


def constraints_for_dimension(d: int) -> List[str]:
    return [name for name, applies in CONSTRAINT_APPLIES_TO.items() if applies(d)]
